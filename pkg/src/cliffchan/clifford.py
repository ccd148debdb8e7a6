"""Clifford unitaries as signed symplectic tableaux.

A :class:`CliffordUnitary` records the images ``U X_j U^dag`` and
``U Z_j U^dag``. Global phase is never tracked, so equality of unitaries
means equality of tableaux.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import gf2
from .pauli import PauliError, PauliOperator, pauli_multiply, symplectic

GATE_ARITY = {"H": 1, "S": 1, "X": 1, "Y": 1, "Z": 1, "CZ": 2, "CNOT": 2}

Gate = tuple[str, tuple[int, ...]]


class CliffordError(ValueError):
    pass


def _check_gate(name: str, qubits: Sequence[int], n: int) -> tuple[str, tuple[int, ...]]:
    key = name.upper()
    if key == "CX":
        key = "CNOT"
    if key not in GATE_ARITY:
        raise CliffordError(f"unknown gate {name!r}")
    qs = tuple(int(q) for q in qubits)
    if len(qs) != GATE_ARITY[key]:
        raise CliffordError(f"{key} acts on {GATE_ARITY[key]} qubit(s), got {len(qs)}")
    for q in qs:
        if not 0 <= q < n:
            raise CliffordError(f"qubit index {q} out of range for n={n}")
    if len(set(qs)) != len(qs):
        raise CliffordError(f"repeated qubit index in {key}{qs}")
    return key, qs


def apply_gate(p: PauliOperator, name: str, qubits: Sequence[int]) -> PauliOperator:
    """Conjugate ``p`` by a single named gate, i.e. ``G p G^dag``.

    Works directly on the packed bits; ``name``/``qubits`` must already be
    validated (see :func:`clifford_from_gate`).
    """
    x, z, ph = p.x, p.z, p.phase
    if name == "CNOT":
        c, t = qubits
        if (x >> c) & 1:
            x ^= 1 << t
        if (z >> t) & 1:
            z ^= 1 << c
        return PauliOperator(p.n, x, z, ph)
    if name == "CZ":
        a, b = qubits
        xa, xb = (x >> a) & 1, (x >> b) & 1
        if xa:
            z ^= 1 << b
        if xb:
            z ^= 1 << a
        return PauliOperator(p.n, x, z, ph + 2 * (xa & xb))
    (q,) = qubits
    bx, bz = (x >> q) & 1, (z >> q) & 1
    m = 1 << q
    if name == "H":
        x = (x & ~m) | (bz << q)
        z = (z & ~m) | (bx << q)
        ph += 2 * (bx & bz)
    elif name == "S":
        if bx:
            z ^= m
        ph += bx
    elif name == "X":
        ph += 2 * bz
    elif name == "Z":
        ph += 2 * bx
    elif name == "Y":
        ph += 2 * (bx ^ bz)
    else:
        raise CliffordError(f"unknown gate {name!r}")
    return PauliOperator(p.n, x, z, ph)


@dataclass(frozen=True, slots=True)
class CliffordUnitary:
    """Tableau of an n-qubit Clifford unitary (up to global phase)."""

    n: int
    x_images: tuple[PauliOperator, ...]
    z_images: tuple[PauliOperator, ...]

    @classmethod
    def identity(cls, n: int) -> CliffordUnitary:
        return cls(
            n,
            tuple(PauliOperator(n, 1 << j, 0) for j in range(n)),
            tuple(PauliOperator(n, 0, 1 << j) for j in range(n)),
        )

    @classmethod
    def from_images(cls, x_images: Sequence[PauliOperator], z_images: Sequence[PauliOperator]) -> CliffordUnitary:
        """Build and validate a tableau from explicit images."""
        n = len(x_images)
        if len(z_images) != n:
            raise CliffordError("need as many Z images as X images")
        u = cls(n, tuple(x_images), tuple(z_images))
        u.validate()
        return u

    @classmethod
    def from_strings(cls, x_images: Sequence[str], z_images: Sequence[str]) -> CliffordUnitary:
        return cls.from_images([PauliOperator.parse(s) for s in x_images], [PauliOperator.parse(s) for s in z_images])

    def validate(self) -> None:
        """Raise unless every image is a signed observable and the symplectic relations hold."""
        imgs = self.x_images + self.z_images
        for p in imgs:
            if p.n != self.n:
                raise CliffordError("image size mismatch")
            if not p.is_hermitian():
                raise CliffordError(f"image {p} is not Hermitian")
        n = self.n
        for i in range(n):
            for j in range(n):
                want_xz = 1 if i == j else 0
                if symplectic(self.x_images[i], self.z_images[j]) != want_xz:
                    raise CliffordError(f"X{i}/Z{j} images break the symplectic condition")
                if j > i and (
                    symplectic(self.x_images[i], self.x_images[j]) or symplectic(self.z_images[i], self.z_images[j])
                ):
                    raise CliffordError(f"images of qubits {i},{j} anticommute")

    def is_identity(self) -> bool:
        return self == CliffordUnitary.identity(self.n)

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        return conjugate_pauli(self, p)

    def then(self, name: str, qubits: Sequence[int]) -> CliffordUnitary:
        """``G o self`` for a named gate ``G``."""
        key, qs = _check_gate(name, qubits, self.n)
        return CliffordUnitary(
            self.n,
            tuple(apply_gate(p, key, qs) for p in self.x_images),
            tuple(apply_gate(p, key, qs) for p in self.z_images),
        )

    def embed(self, qubits: Sequence[int], n: int) -> CliffordUnitary:
        """This unitary acting on ``qubits`` of an ``n``-qubit register."""
        if len(qubits) != self.n or len(set(qubits)) != self.n:
            raise CliffordError("embedding needs one distinct target per qubit")
        xs = [PauliOperator(n, 1 << j, 0) for j in range(n)]
        zs = [PauliOperator(n, 0, 1 << j) for j in range(n)]
        for i, q in enumerate(qubits):
            xs[q] = self.x_images[i].embed(qubits, n)
            zs[q] = self.z_images[i].embed(qubits, n)
        return CliffordUnitary(n, tuple(xs), tuple(zs))

    def __matmul__(self, other: CliffordUnitary) -> CliffordUnitary:
        return tensor_clifford(self, other)


def clifford_from_gate(gate: str, qubits: Sequence[int], n: int) -> CliffordUnitary:
    """Tableau of a named gate from ``{H, S, X, Y, Z, CZ, CNOT}`` on an n-qubit register."""
    return CliffordUnitary.identity(n).then(gate, qubits)


def conjugate_pauli(u: CliffordUnitary, p: PauliOperator) -> PauliOperator:
    """``U p U^dag`` with exact phase."""
    if u.n != p.n:
        raise CliffordError(f"size mismatch: Clifford on {u.n}, Pauli on {p.n}")
    out = PauliOperator(p.n, 0, 0, p.phase)
    x, z = p.x, p.z
    for j in range(p.n):
        if (x >> j) & 1:
            out = pauli_multiply(out, u.x_images[j])
    for j in range(p.n):
        if (z >> j) & 1:
            out = pauli_multiply(out, u.z_images[j])
    return out


def conjugate_on(u: CliffordUnitary, p: PauliOperator, qubits: Sequence[int]) -> PauliOperator:
    """Conjugate ``p`` by ``u`` acting on the sub-register ``qubits``."""
    mask = 0
    for q in qubits:
        mask |= 1 << q
    local = PauliOperator(p.n, p.x & mask, p.z & mask).restrict(qubits)
    rest = PauliOperator(p.n, p.x & ~mask, p.z & ~mask, p.phase)
    return pauli_multiply(conjugate_pauli(u, local).embed(qubits, p.n), rest)


def compose_clifford(u: CliffordUnitary, v: CliffordUnitary) -> CliffordUnitary:
    """``U o V``: apply ``V`` first, then ``U``."""
    if u.n != v.n:
        raise CliffordError(f"size mismatch: {u.n} vs {v.n}")
    return CliffordUnitary(
        u.n,
        tuple(conjugate_pauli(u, p) for p in v.x_images),
        tuple(conjugate_pauli(u, p) for p in v.z_images),
    )


def inverse_clifford(u: CliffordUnitary) -> CliffordUnitary:
    n = u.n

    def preimage(target: PauliOperator) -> PauliOperator:
        # the X_k exponent of the preimage is <target, U Z_k U^dag>, the Z_k one is <target, U X_k U^dag>
        x = z = 0
        for k in range(n):
            x |= symplectic(target, u.z_images[k]) << k
            z |= symplectic(target, u.x_images[k]) << k
        cand = PauliOperator.hermitian(n, x, z)
        return cand if conjugate_pauli(u, cand) == target else -cand

    return CliffordUnitary(
        n,
        tuple(preimage(PauliOperator(n, 1 << j, 0)) for j in range(n)),
        tuple(preimage(PauliOperator(n, 0, 1 << j)) for j in range(n)),
    )


def complex_conjugate_clifford(u: CliffordUnitary) -> CliffordUnitary:
    """Tableau of the entrywise complex conjugate of ``U``.

    Conjugation maps ``i**p X^x Z^z`` to ``i**-p X^x Z^z`` since X and Z
    are real.
    """

    def conj(p: PauliOperator) -> PauliOperator:
        return PauliOperator(p.n, p.x, p.z, -p.phase)

    return CliffordUnitary(u.n, tuple(map(conj, u.x_images)), tuple(map(conj, u.z_images)))


def transpose_clifford(u: CliffordUnitary) -> CliffordUnitary:
    """Tableau of ``U^T`` computed as the complex conjugate of ``U^-1``."""
    return complex_conjugate_clifford(inverse_clifford(u))


def tensor_clifford(u: CliffordUnitary, v: CliffordUnitary) -> CliffordUnitary:
    n = u.n + v.n
    first, second = list(range(u.n)), list(range(u.n, n))
    xs = [p.embed(first, n) for p in u.x_images] + [p.embed(second, n) for p in v.x_images]
    zs = [p.embed(first, n) for p in u.z_images] + [p.embed(second, n) for p in v.z_images]
    return CliffordUnitary(n, tuple(xs), tuple(zs))


def permutation_clifford(order: Sequence[int]) -> CliffordUnitary:
    """Wire permutation moving old qubit ``order[i]`` to position ``i``."""
    n = len(order)
    if sorted(order) != list(range(n)):
        raise CliffordError(f"{list(order)} is not a permutation")
    xs: list[PauliOperator] = [None] * n  # type: ignore[list-item]
    zs: list[PauliOperator] = [None] * n  # type: ignore[list-item]
    for new, old in enumerate(order):
        xs[old] = PauliOperator(n, 1 << new, 0)
        zs[old] = PauliOperator(n, 0, 1 << new)
    return CliffordUnitary(n, tuple(xs), tuple(zs))


def compose_gates(gates: Iterable[Gate], n: int) -> CliffordUnitary:
    """Tableau of a gate sequence applied left to right."""
    u = CliffordUnitary.identity(n)
    for name, qubits in gates:
        u = u.then(name, qubits)
    return u


def synthesize_gates(u: CliffordUnitary) -> list[Gate]:
    """Gate sequence over ``{H, S, CNOT, CZ, X, Z}`` realising ``u``.

    Column-by-column sweep: gates ``G_1..G_m`` are chosen so that
    ``G_m ... G_1 U^-1`` is the identity, hence ``U = G_m ... G_1`` and the
    gates are returned in application order. Uses O(n^2) gates.
    """
    n = u.n
    work = inverse_clifford(u)
    gates: list[Gate] = []

    def emit(name: str, *qubits: int):
        nonlocal work
        work = work.then(name, qubits)
        gates.append((name, tuple(qubits)))

    for i in range(n):
        above = ~((1 << i) - 1)
        p = work.x_images[i]
        if not (p.x & above):
            j = next(j for j in range(i, n) if (p.z >> j) & 1)
            emit("H", j)
            p = work.x_images[i]
        if not (p.x >> i) & 1:
            j = next(j for j in range(i + 1, n) if (p.x >> j) & 1)
            emit("CNOT", j, i)
            p = work.x_images[i]
        for j in range(i + 1, n):
            if (p.x >> j) & 1:
                emit("CNOT", i, j)
        p = work.x_images[i]
        if (p.z >> i) & 1:
            emit("S", i)
        p = work.x_images[i]
        for j in range(i + 1, n):
            if (p.z >> j) & 1:
                emit("CZ", i, j)

        for j in range(i + 1, n):
            q = work.z_images[i]
            bx, bz = (q.x >> j) & 1, (q.z >> j) & 1
            if bx and bz:
                emit("S", j)
            if bx:
                emit("H", j)
            if (work.z_images[i].z >> j) & 1:
                emit("CNOT", j, i)
        if (work.z_images[i].x >> i) & 1:
            emit("H", i)
            emit("S", i)
            emit("H", i)

    for i in range(n):
        if work.x_images[i].sign < 0:
            emit("Z", i)
        if work.z_images[i].sign < 0:
            emit("X", i)
    if not work.is_identity():  # pragma: no cover - guards the sweep's invariants
        raise CliffordError("synthesis failed to reach the identity tableau")
    return gates


def complete_clifford(
    n: int,
    x_targets: Mapping[int, PauliOperator] | None = None,
    z_targets: Mapping[int, PauliOperator] | None = None,
) -> CliffordUnitary:
    """Extend a partial tableau to a full Clifford unitary.

    ``x_targets[q]`` / ``z_targets[q]`` prescribe the images of ``X_q`` /
    ``Z_q``. The prescribed images must already satisfy the symplectic
    relations among themselves; missing images are filled in with +signed
    observables.
    """
    x_targets = dict(x_targets or {})
    z_targets = dict(z_targets or {})
    for q, p in list(x_targets.items()) + list(z_targets.items()):
        if not 0 <= q < n or p.n != n:
            raise CliffordError("target outside the register")
    xs: list[PauliOperator | None] = [x_targets.get(q) for q in range(n)]
    zs: list[PauliOperator | None] = [z_targets.get(q) for q in range(n)]

    def vec(p: PauliOperator) -> int:
        # row r with gf2.dot(r, b) == <p, b> when b is packed as x | z << n
        return p.z | (p.x << n)

    given = [(q, "x", p) for q, p in enumerate(xs) if p is not None]
    given += [(q, "z", p) for q, p in enumerate(zs) if p is not None]
    constraints = [vec(p) for _, _, p in given]
    singles = [(q, kind, p) for q, kind, p in given if (xs[q] is None) != (zs[q] is None)]

    partners: list[int] = []
    for q, kind, p in singles:
        rhs = [1 if (gq == q and gk == kind) else 0 for gq, gk, _ in given]
        b = gf2.solve(constraints, rhs, 2 * n)
        if b is None:
            raise CliffordError("prescribed images are not independent")
        partners.append(b)
    # make partners mutually commuting; each single only anticommutes with its own partner
    single_vecs = [p.x | (p.z << n) for _, _, p in singles]
    for i in range(len(partners)):
        for j in range(i):
            bi, bj = partners[i], partners[j]
            form = gf2.dot(bi & ((1 << n) - 1), bj >> n) ^ gf2.dot(bi >> n, bj & ((1 << n) - 1))
            if form:
                partners[i] ^= single_vecs[j]
    for (q, kind, _), b in zip(singles, partners):
        img = PauliOperator.hermitian(n, b & ((1 << n) - 1), b >> n)
        if kind == "x":
            zs[q] = img
        else:
            xs[q] = img

    pairs = [(xs[q], zs[q]) for q in range(n) if xs[q] is not None]
    pool = [PauliOperator(n, 1 << j, 0) for j in range(n)] + [PauliOperator(n, 0, 1 << j) for j in range(n)]

    def orthogonalize(c: PauliOperator, a: PauliOperator, b: PauliOperator) -> PauliOperator:
        if symplectic(c, b):
            c = pauli_multiply(c, a)
        if symplectic(c, a):
            c = pauli_multiply(c, b)
        return c

    for a, b in pairs:
        pool = [orthogonalize(c, a, b) for c in pool]
    free = [q for q in range(n) if xs[q] is None]
    for q in free:
        while pool and pool[0].is_identity():
            pool.pop(0)
        if not pool:
            raise CliffordError("prescribed images are not independent")
        a = pool.pop(0)
        k = next((k for k, c in enumerate(pool) if symplectic(a, c)), None)
        if k is None:  # pragma: no cover - a nonzero vector always has a partner here
            raise CliffordError("symplectic completion failed")
        b = pool.pop(k)
        pool = [orthogonalize(c, a, b) for c in pool]
        xs[q], zs[q] = a.unsigned(), b.unsigned()

    try:
        return CliffordUnitary.from_images(xs, zs)  # type: ignore[arg-type]
    except (CliffordError, PauliError) as exc:
        raise CliffordError(f"prescribed images are inconsistent: {exc}") from exc


def random_clifford(n: int, rng) -> CliffordUnitary:
    """Random Clifford from a random gate word (not Haar/uniform); ``rng`` is a numpy Generator."""
    u = CliffordUnitary.identity(n)
    if n == 0:
        return u
    names = ["H", "S", "X", "Z", "CNOT", "CZ"] if n > 1 else ["H", "S", "X", "Z"]
    for _ in range(4 * n * n + 8):
        name = names[rng.integers(len(names))]
        qs = tuple(int(q) for q in rng.choice(n, size=GATE_ARITY[name], replace=False))
        u = u.then(name, qs)
    return u


def format_gate(gate: Gate) -> str:
    name, qubits = gate
    return " ".join([name.lower(), *map(str, qubits)])
