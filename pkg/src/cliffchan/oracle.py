"""Dense complex-matrix oracle.

Everything here is exponential on purpose and guarded by hard size limits.
Basis states are indexed with qubit 0 as the most significant bit, so
``|q0 q1 ... q_{n-1}>`` has index ``q0 * 2**(n-1) + ... + q_{n-1}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from . import gf2
from .circuit import (
    Circuit,
    ClassicalAnd,
    ClassicalCnot,
    ClassicalNot,
    Dephase,
    Discard,
    Gate,
    Measure,
    PauliCtrl,
    PrepChaotic,
    PrepZero,
    RandBit,
    StinespringForm,
)
from .clifford import CliffordUnitary, clifford_from_gate
from .pauli import PauliOperator
from .stabstate import StabilizerError, StabilizerGroupState, apply_clifford_state, from_generators, zero_state

ATOL = 1e-9
SNAP = 1e-6

MAX_STATE_QUBITS = 12
MAX_UNITARY_QUBITS = 10
MAX_MEMBERSHIP_QUBITS = 5
MAX_ENUM_QUBITS = 4
MAX_OBSERVABLE_QUBITS = 3
MAX_PRESERVING_INPUTS = 3


class SizeGuardError(ValueError):
    """A dense computation was requested beyond its hard size limit."""


class DensityMatrixError(ValueError):
    pass


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise SizeGuardError(f"{what} limited to {limit} qubits, got {n}")


def _num_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise DensityMatrixError(f"dimension {dim} is not a power of two")
    return n


def _index_mask(v: int, n: int) -> int:
    """Bit ``j`` (qubit ``j``) moved to basis-index position ``n - 1 - j``."""
    return sum(1 << (n - 1 - j) for j in range(n) if (v >> j) & 1)


# -- Paulis and states -------------------------------------------------------


def _pauli_action(p: PauliOperator) -> tuple[np.ndarray, np.ndarray]:
    """``(perm, coeff)`` with ``P|b> = coeff[b] |perm[b]>``."""
    idx = np.arange(1 << p.n)
    xm, zm = _index_mask(p.x, p.n), _index_mask(p.z, p.n)
    signs = 1 - 2 * (np.bitwise_count(idx & zm).astype(np.int64) & 1)
    return idx ^ xm, (1j**p.phase) * signs


def dense_pauli(p: PauliOperator) -> np.ndarray:
    _guard(p.n, MAX_STATE_QUBITS, "dense Pauli")
    perm, coeff = _pauli_action(p)
    m = np.zeros((1 << p.n, 1 << p.n), dtype=complex)
    m[perm, np.arange(1 << p.n)] = coeff
    return m


def apply_pauli_vector(p: PauliOperator, v: np.ndarray) -> np.ndarray:
    perm, coeff = _pauli_action(p)
    out = np.empty_like(v, dtype=complex)
    out[perm] = coeff * v
    return out


def _pauli_left(p: PauliOperator, rho: np.ndarray) -> np.ndarray:
    perm, coeff = _pauli_action(p)
    out = np.empty_like(rho, dtype=complex)
    out[perm] = coeff[:, None] * rho
    return out


def dense_state(s: StabilizerGroupState) -> np.ndarray:
    """``2**-n * prod_i (I + P_i)``."""
    _guard(s.n, MAX_STATE_QUBITS, "dense state")
    rho = np.eye(1 << s.n, dtype=complex) / (1 << s.n)
    for g in s.generators:
        rho = rho + _pauli_left(g, rho)
    return rho


def ket(bits: str) -> np.ndarray:
    """Computational basis vector from a string like ``"010"`` (qubit 0 first)."""
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2) if bits else 0] = 1
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


# -- Clifford unitaries -------------------------------------------------------

GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}


def dense_clifford(u: CliffordUnitary) -> np.ndarray:
    """A unitary matrix with the tableau's conjugation action (global phase arbitrary).

    Built directly from the images: the first column is the joint +1
    eigenvector of the Z-images, the others follow by applying X-images.
    """
    n = u.n
    _guard(n, MAX_UNITARY_QUBITS, "dense Clifford")
    dim = 1 << n
    psi = None
    for b in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[b] = 1
        for g in u.z_images:
            v = (v + apply_pauli_vector(g, v)) / 2
        if np.linalg.norm(v) > 1e-6:
            psi = v / np.linalg.norm(v)
            break
    assert psi is not None
    cols = np.empty((dim, dim), dtype=complex)
    for idx in range(dim):
        v = psi
        for j in range(n):
            if (idx >> (n - 1 - j)) & 1:
                v = apply_pauli_vector(u.x_images[j], v)
        cols[:, idx] = v
    return cols


def embed_operator(op: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Full ``2**n`` matrix of ``op`` acting on ``targets`` (first target is the most significant)."""
    k = len(targets)
    rest = [q for q in range(n) if q not in targets]
    full = np.kron(op, np.eye(1 << (n - k)))
    order = list(targets) + rest
    # full acts on qubits in ``order``; permute back to 0..n-1
    inv = np.argsort(order)
    t = full.reshape([2] * (2 * n))
    t = t.transpose(list(inv) + [n + i for i in inv])
    return t.reshape(1 << n, 1 << n)


def dense_gate_word(gates: Iterable[tuple[str, Sequence[int]]], n: int) -> np.ndarray:
    u = np.eye(1 << n, dtype=complex)
    for name, qs in gates:
        u = embed_operator(GATE_MATRICES[name.upper()], qs, n) @ u
    return u


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = ATOL) -> bool:
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < tol:
        return bool(np.allclose(a, b, atol=tol))
    ph = a[k] / b[k]
    return bool(abs(abs(ph) - 1) < tol and np.allclose(a, ph * b, atol=tol))


# -- channels -----------------------------------------------------------------


@dataclass(frozen=True)
class DenseChannel:
    """Superoperator stored as its Choi matrix ``(Id (x) Phi)(|Omega><Omega|)``.

    The Choi matrix has the input-reference qubits first and the outputs
    after them, with ``|Omega> = 2**(-n_in/2) sum_a |a>|a>``.
    """

    n_in: int
    n_out: int
    choi: np.ndarray

    @property
    def d_in(self) -> int:
        return 1 << self.n_in

    @property
    def d_out(self) -> int:
        return 1 << self.n_out

    def _tensor(self) -> np.ndarray:
        return self.choi.reshape(self.d_in, self.d_out, self.d_in, self.d_out)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.d_in, self.d_in):
            raise ValueError(f"input must be {self.d_in}x{self.d_in}, got {rho.shape}")
        return self.d_in * np.einsum("ac,abcd->bd", rho, self._tensor())

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self.apply(rho)

    @classmethod
    def from_linear_map(cls, n_in: int, n_out: int, fn: Callable[[np.ndarray], np.ndarray]) -> DenseChannel:
        """Choi matrix of a linear map evaluated on matrix units ``|a><a'|``."""
        din, dout = 1 << n_in, 1 << n_out
        sigma = np.zeros((din, dout, din, dout), dtype=complex)
        for a in range(din):
            for a2 in range(din):
                unit = np.zeros((din, din), dtype=complex)
                unit[a, a2] = 1
                sigma[a, :, a2, :] = fn(unit) / din
        return cls(n_in, n_out, sigma.reshape(din * dout, din * dout))

    @classmethod
    def from_kraus(cls, n_in: int, n_out: int, kraus: Iterable[np.ndarray]) -> DenseChannel:
        din, dout = 1 << n_in, 1 << n_out
        choi = np.zeros((din * dout, din * dout), dtype=complex)
        for k in kraus:
            v = np.asarray(k, dtype=complex).T.reshape(-1) / np.sqrt(din)
            choi += np.outer(v, v.conj())
        return cls(n_in, n_out, choi)

    @classmethod
    def from_unitary(cls, u: np.ndarray) -> DenseChannel:
        n = _num_qubits(u.shape[0])
        return cls.from_kraus(n, n, [u])

    @classmethod
    def identity(cls, n: int) -> DenseChannel:
        return cls.from_unitary(np.eye(1 << n))

    def then(self, other: DenseChannel) -> DenseChannel:
        """``other`` applied after ``self``."""
        if self.n_out != other.n_in:
            raise ValueError(f"cannot feed {self.n_out} outputs into {other.n_in} inputs")
        return DenseChannel.from_linear_map(self.n_in, other.n_out, lambda x: other.apply(self.apply(x)))

    def tensor(self, other: DenseChannel) -> DenseChannel:
        s, t = self._tensor(), other._tensor()
        big = np.einsum("abcd,efgh->aebfcgdh", s, t)
        dim = self.d_in * other.d_in * self.d_out * other.d_out
        return DenseChannel(self.n_in + other.n_in, self.n_out + other.n_out, big.reshape(dim, dim))

    def distance(self, other: DenseChannel) -> float:
        """Frobenius distance between Choi matrices."""
        if (self.n_in, self.n_out) != (other.n_in, other.n_out):
            raise ValueError("channel shapes differ")
        return float(np.linalg.norm(self.choi - other.choi))

    def is_cptp(self, tol: float = ATOL) -> bool:
        if not np.allclose(self.choi, self.choi.conj().T, atol=tol):
            return False
        if np.linalg.eigvalsh(self.choi).min() < -tol:
            return False
        marginal = np.einsum("abcb->ac", self._tensor())
        return bool(np.allclose(marginal, np.eye(self.d_in) / self.d_in, atol=tol))


def dense_of_channel(ch: StinespringForm) -> DenseChannel:
    """Dense channel ``rho -> Tr_E U (rho (x) |0><0|) U^dag``."""
    _guard(ch.n_total, MAX_UNITARY_QUBITS, "dense channel dilation")
    u = dense_clifford(ch.unitary)
    n_anc = ch.n_ancilla
    v = u[:, [a << n_anc for a in range(1 << ch.n_in)]]
    v = v.reshape(1 << ch.n_out, 1 << ch.n_env, 1 << ch.n_in)
    return DenseChannel.from_kraus(ch.n_in, ch.n_out, [v[:, e, :] for e in range(1 << ch.n_env)])


def dephasing_channel() -> DenseChannel:
    """The analytic map ``rho -> (rho + Z rho Z) / 2``."""
    z = GATE_MATRICES["Z"]
    return DenseChannel.from_linear_map(1, 1, lambda r: (r + z @ r @ z) / 2)


# -- direct simulation of (possibly adaptive) circuits ------------------------


def _apply_local(rho: np.ndarray, op: np.ndarray, targets: Sequence[int], m: int) -> np.ndarray:
    full = embed_operator(op, targets, m)
    return full @ rho @ full.conj().T


def _trace_out(rho: np.ndarray, q: int, m: int) -> np.ndarray:
    t = rho.reshape([2] * (2 * m))
    t = np.trace(t, axis1=q, axis2=m + q)
    return t.reshape(1 << (m - 1), 1 << (m - 1))


def _project(rho: np.ndarray, q: int, m: int, bit: int) -> np.ndarray:
    proj = np.diag([1.0, 0.0] if bit == 0 else [0.0, 1.0]).astype(complex)
    return _apply_local(rho, proj, [q], m)


def simulate_circuit_dense(c: Circuit, rho: np.ndarray) -> np.ndarray:
    """Run a circuit directly on a dense input, tracking classical branches.

    Measured bits and ``randbit`` bits are reported as diagonal output
    qubits in wire-index order, together with the surviving quantum wires.
    The map is linear in ``rho`` so it also accepts matrix units.
    """
    _guard(c.n_in, MAX_UNITARY_QUBITS, "dense circuit simulation")
    # branch key: tuple of (bit name, value) pairs in definition order
    branches: dict[tuple, np.ndarray] = {(): np.asarray(rho, dtype=complex)}
    live: list[int] = list(range(c.n_in))  # wire index for each dense qubit position
    bit_wire: dict[str, int] = {}
    next_wire = c.n_in

    def remap(fn):
        nonlocal branches
        out: dict[tuple, np.ndarray] = {}
        for key, r in branches.items():
            for k2, r2 in fn(key, r):
                out[k2] = out.get(k2, 0) + r2
        branches = out

    for ins in c.instructions:
        m = len(live)
        if isinstance(ins, (PrepZero, PrepChaotic)):
            fresh = np.diag([1, 0]).astype(complex) if isinstance(ins, PrepZero) else np.eye(2, dtype=complex) / 2
            branches = {k: np.kron(r, fresh) for k, r in branches.items()}
            live.append(next_wire)
            next_wire += 1
            _guard(len(live), MAX_UNITARY_QUBITS, "dense circuit simulation")
        elif isinstance(ins, Gate):
            pos = [live.index(q) for q in ins.qubits]
            op = GATE_MATRICES[ins.name]
            branches = {k: _apply_local(r, op, pos, m) for k, r in branches.items()}
        elif isinstance(ins, Dephase):
            q = live.index(ins.qubit)
            branches = {k: _project(r, q, m, 0) + _project(r, q, m, 1) for k, r in branches.items()}
        elif isinstance(ins, Discard):
            q = live.index(ins.qubit)
            branches = {k: _trace_out(r, q, m) for k, r in branches.items()}
            live.pop(q)
        elif isinstance(ins, Measure):
            q = live.index(ins.qubit)
            bit_wire[ins.bit] = ins.qubit
            live.pop(q)
            remap(lambda k, r: [(k + ((ins.bit, b),), _trace_out(_project(r, q, m, b), q, m)) for b in (0, 1)])
        elif isinstance(ins, RandBit):
            bit_wire[ins.bit] = next_wire
            next_wire += 1
            remap(lambda k, r: [(k + ((ins.bit, b),), r / 2) for b in (0, 1)])
        elif isinstance(ins, (ClassicalNot, ClassicalCnot, ClassicalAnd)):

            def update(k, r, ins=ins):
                vals = dict(k)
                if isinstance(ins, ClassicalNot):
                    vals[ins.bit] ^= 1
                elif isinstance(ins, ClassicalCnot):
                    vals[ins.dst] ^= vals[ins.src]
                else:
                    vals[ins.dst] ^= vals[ins.a] & vals[ins.b]
                return [(tuple((name, vals[name]) for name, _ in k), r)]

            remap(update)
        elif isinstance(ins, PauliCtrl):
            q = live.index(ins.qubit)
            op = GATE_MATRICES[ins.pauli]
            branches = {k: (_apply_local(r, op, [q], m) if dict(k)[ins.bit] else r) for k, r in branches.items()}
        else:  # pragma: no cover
            raise TypeError(f"unknown instruction {ins!r}")

    # assemble outputs: quantum wires plus one diagonal qubit per bit, in wire order
    bit_names = sorted(bit_wire, key=bit_wire.get)
    wires = live + [bit_wire[b] for b in bit_names]
    order = np.argsort(wires)
    n_out = len(wires)
    total = np.zeros((1 << n_out, 1 << n_out), dtype=complex)
    for key, r in branches.items():
        vals = dict(key)
        block = r
        for b in bit_names:
            block = np.kron(block, projector(ket(str(vals[b]))))
        t = block.reshape([2] * (2 * n_out)).transpose(list(order) + [n_out + i for i in order])
        total += t.reshape(1 << n_out, 1 << n_out)
    return total


def dense_of_circuit(c: Circuit) -> DenseChannel:
    """Dense channel of any circuit, adaptive or not, by direct simulation."""
    return DenseChannel.from_linear_map(c.n_in, c.n_out, lambda r: simulate_circuit_dense(c, r))


# -- membership: is a dense state a mixed stabilizer state? -----------------------


def all_paulis(n: int) -> list[PauliOperator]:
    """All ``4**n`` unsigned Paulis, lexicographic in ``I < X < Y < Z`` with qubit 0 first."""
    order = [(0, 0), (1, 0), (1, 1), (0, 1)]
    out = []
    for combo in product(order, repeat=n):
        x = sum(bx << j for j, (bx, _) in enumerate(combo))
        z = sum(bz << j for j, (_, bz) in enumerate(combo))
        out.append(PauliOperator.hermitian(n, x, z))
    return out


def check_density_matrix(rho: np.ndarray, tol: float = ATOL) -> int:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DensityMatrixError("density matrix must be square")
    n = _num_qubits(rho.shape[0])
    if not np.allclose(rho, rho.conj().T, atol=tol):
        raise DensityMatrixError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise DensityMatrixError(f"trace {np.trace(rho).real:.6g} != 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise DensityMatrixError("density matrix is not positive semidefinite")
    return n


def pauli_expectation(rho: np.ndarray, p: PauliOperator) -> float:
    """``Tr(rho P)`` for a Hermitian Pauli (real part)."""
    perm, coeff = _pauli_action(p)
    # Tr(rho P) = sum_b <b|rho P|b> = sum_b coeff[b] rho[b, perm[b]]
    idx = np.arange(len(perm))
    return float(np.real(np.sum(coeff * rho[idx, perm])))


def _snap(v: float) -> int | None:
    for target in (-1, 0, 1):
        if abs(v - target) <= SNAP:
            return target
    return None


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of the dense stabilizer-state test.

    ``witness``/``value`` name the first Pauli whose expectation is off the
    lattice ``{-1, 0, 1}``; ``state`` is the reconstructed stabilizer group
    when the test passes.
    """

    ok: bool
    witness: PauliOperator | None = None
    value: float | None = None
    state: StabilizerGroupState | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_mixed_stabilizer_dense(rho: np.ndarray) -> MembershipResult:
    n = check_density_matrix(rho)
    _guard(n, MAX_MEMBERSHIP_QUBITS, "stabilizer membership test")
    rho = np.asarray(rho, dtype=complex)
    fixed: list[PauliOperator] = []
    for p in all_paulis(n):
        v = pauli_expectation(rho, p)
        snapped = _snap(v)
        if snapped is None:
            return MembershipResult(False, p, v, reason="expectation off the lattice {-1, 0, 1}")
        if snapped and not p.is_identity():
            fixed.append(p if snapped > 0 else -p)
    # keep an independent subset; the reconstruction check catches any inconsistency
    basis: list[PauliOperator] = []
    rows: list[int] = []
    for p in fixed:
        key = p.x | (p.z << n)
        if gf2.rank(rows + [key], 2 * n) > len(rows):
            rows.append(key)
            basis.append(p)
    try:
        state = from_generators(basis, n)
    except StabilizerError as exc:
        return MembershipResult(False, reason=f"+-1 Paulis do not form a stabilizer group: {exc}")
    if not np.allclose(dense_state(state), rho, atol=SNAP):
        return MembershipResult(False, state=state, reason="stabilizer group does not reproduce the state")
    return MembershipResult(True, state=state)


# -- enumeration of pure stabilizer states -------------------------------------


def _isotropic_subspaces(n: int, dim: int) -> list[tuple[int, ...]]:
    """All ``dim``-dimensional isotropic subspaces of GF(2)^{2n}, as sorted RREF row tuples (packed ``x | z << n``)."""
    low = (1 << n) - 1

    def form(u: int, v: int) -> int:
        return gf2.dot(u & low, v >> n) ^ gf2.dot(u >> n, v & low)

    def key(rows: list[int]) -> tuple[int, ...]:
        red, _ = gf2.rref(rows, range(2 * n))
        return tuple(sorted(red))

    level = {()}
    for _ in range(dim):
        nxt = set()
        for rows in level:
            for v in range(1, 1 << (2 * n)):
                if any(form(v, r) for r in rows):
                    continue
                if gf2.rank(list(rows) + [v], 2 * n) == len(rows):
                    continue
                nxt.add(key(list(rows) + [v]))
        level = nxt
    return sorted(level)


def _state_sort_key(s: StabilizerGroupState) -> tuple:
    rows = s._canonical
    return (
        sum(p.x.bit_count() for p in rows),
        tuple((p.x, p.z) for p in rows),
        tuple(0 if p.sign > 0 else 1 for p in rows),
    )


def enumerate_stabilizer_states(n: int, rank: int) -> list[StabilizerGroupState]:
    """Every stabilizer state on ``n`` qubits with a rank-``rank`` group, in a fixed order."""
    _guard(n, MAX_ENUM_QUBITS, "stabilizer enumeration")
    if not 0 <= rank <= n:
        raise ValueError(f"rank {rank} outside 0..{n}")
    low = (1 << n) - 1
    states = set()
    for rows in _isotropic_subspaces(n, rank):
        for signs in range(1 << rank):
            gens = [
                PauliOperator.hermitian(n, r & low, r >> n, -1 if (signs >> i) & 1 else 1) for i, r in enumerate(rows)
            ]
            states.add(from_generators(gens, n))
    return sorted(states, key=_state_sort_key)


def enumerate_pure_stabilizer_states(n: int) -> list[StabilizerGroupState]:
    """Every pure stabilizer state on ``n`` qubits, deterministic order, ``|0..0>`` first."""
    return enumerate_stabilizer_states(n, n)


def enumerate_stabilizer_orbit(n: int) -> list[StabilizerGroupState]:
    """Clifford orbit of ``|0..0>`` under H, S and CNOT, by breadth-first search."""
    _guard(n, MAX_ENUM_QUBITS, "stabilizer enumeration")
    gens = [clifford_from_gate(g, (q,), n) for g in ("H", "S") for q in range(n)]
    gens += [clifford_from_gate("CNOT", (a, b), n) for a in range(n) for b in range(n) if a != b]
    start = zero_state(n)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for g in gens:
            t = apply_clifford_state(g, s)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return sorted(seen, key=_state_sort_key)


# -- observables with lattice expectations ----------------------------


@dataclass(frozen=True)
class ObservableClass:
    """``kind`` is one of Zero, PlusIdentity, MinusIdentity, Pauli, Other."""

    kind: str
    pauli: PauliOperator | None = None
    witness: StabilizerGroupState | None = None
    value: float | None = None


def classify_observable_dense(q: np.ndarray) -> ObservableClass:
    q = np.asarray(q, dtype=complex)
    n = _num_qubits(q.shape[0])
    _guard(n, MAX_OBSERVABLE_QUBITS, "observable classification")
    if not np.allclose(q, q.conj().T, atol=ATOL):
        raise DensityMatrixError("observable is not Hermitian")
    ev = np.linalg.eigvalsh(q)
    if ev.min() < -1 - ATOL or ev.max() > 1 + ATOL:
        raise DensityMatrixError("observable spectrum leaves [-1, 1]")
    for s in enumerate_pure_stabilizer_states(n):
        v = float(np.real(np.trace(q @ dense_state(s))))
        if _snap(v) is None:
            return ObservableClass("Other", witness=s, value=v)
    dim = 1 << n
    if np.allclose(q, 0, atol=SNAP):
        return ObservableClass("Zero")
    if np.allclose(q, np.eye(dim), atol=SNAP):
        return ObservableClass("PlusIdentity")
    if np.allclose(q, -np.eye(dim), atol=SNAP):
        return ObservableClass("MinusIdentity")
    for p in all_paulis(n):
        c = pauli_expectation(q / dim, p)
        if abs(abs(c) - 1) <= SNAP:
            signed = p if c > 0 else -p
            if np.allclose(q, dense_pauli(signed), atol=SNAP):
                return ObservableClass("Pauli", pauli=signed)
    return ObservableClass("Other")


# -- stabilizer preservation vs. Choi test --------------------------


@dataclass(frozen=True)
class PreservingReport:
    preserving: bool
    witness: StabilizerGroupState | None
    witness_result: MembershipResult | None
    choi_ok: bool
    choi_result: MembershipResult

    @property
    def agree(self) -> bool:
        return self.preserving == self.choi_ok


def check_stabilizer_preserving_dense(ch: DenseChannel) -> PreservingReport:
    """Apply ``ch`` to every pure stabilizer input and run the membership test on each output.

    The Choi matrix is tested as well, so the two verdicts can be compared.
    """
    _guard(ch.n_in, MAX_PRESERVING_INPUTS, "stabilizer-preserving check")
    _guard(ch.n_in + ch.n_out, MAX_MEMBERSHIP_QUBITS, "Choi membership test")
    witness = witness_result = None
    for s in enumerate_pure_stabilizer_states(ch.n_in):
        res = is_mixed_stabilizer_dense(ch.apply(dense_state(s)))
        if not res:
            witness, witness_result = s, res
            break
    choi_res = is_mixed_stabilizer_dense(ch.choi)
    return PreservingReport(witness is None, witness, witness_result, choi_res.ok, choi_res)
