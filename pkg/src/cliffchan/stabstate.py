"""Mixed stabilizer states represented by their stabilizer groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from . import gf2
from .clifford import CliffordUnitary, complete_clifford, conjugate_pauli, random_clifford
from .pauli import PauliError, PauliOperator, pauli_multiply, pauli_tensor, symplectic


class StabilizerError(ValueError):
    pass


def _key(p: PauliOperator) -> int:
    return p.x | (p.z << p.n)


def _has_column(p: PauliOperator, col: int) -> bool:
    return bool((_key(p) >> col) & 1)


def _eliminate(gens: Sequence[PauliOperator], columns: Iterable[int]) -> tuple[list[PauliOperator], list[int], list[PauliOperator]]:
    """Signed Gauss-Jordan elimination over the packed (x | z << n) columns.

    Row operations multiply Paulis, so signs follow the group exactly.
    Returns ``(pivot_rows, pivot_columns, leftover_rows)`` where leftovers
    are zero on every pivot column.
    """
    work = list(gens)
    rows: list[PauliOperator] = []
    pivots: list[int] = []
    for col in columns:
        hit = next((i for i, r in enumerate(work) if _has_column(r, col)), None)
        if hit is None:
            continue
        piv = work.pop(hit)
        work = [pauli_multiply(r, piv) if _has_column(r, col) else r for r in work]
        rows = [pauli_multiply(r, piv) if _has_column(r, col) else r for r in rows]
        rows.append(piv)
        pivots.append(col)
    return rows, pivots, work


@dataclass(frozen=True, eq=False)
class StabilizerGroupState:
    """Mixed stabilizer state ``2**-n * sum_{P in S} P`` given by generators of ``S``.

    Equality and hashing compare the signed groups, not generator lists.
    Use :func:`from_generators` to build a validated instance.
    """

    n: int
    generators: tuple[PauliOperator, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def is_pure(self) -> bool:
        return self.rank == self.n

    @cached_property
    def _canonical(self) -> tuple[PauliOperator, ...]:
        rows, pivots, _ = _eliminate(self.generators, range(2 * self.n))
        return tuple(r for _, r in sorted(zip(pivots, rows), key=lambda t: t[0]))

    def canonical_key(self) -> tuple:
        return (self.n, tuple((p.x, p.z, p.phase) for p in self._canonical))

    def __eq__(self, other):
        if not isinstance(other, StabilizerGroupState):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        return f"StabilizerGroupState(n={self.n}, [{', '.join(map(str, self.generators))}])"

    def to_strings(self) -> list[str]:
        return [str(p) for p in self.generators]

    def to_text(self) -> str:
        return "".join(s + "\n" for s in self.to_strings())

    # thin method aliases for the module functions
    def canonicalize(self) -> StabilizerGroupState:
        return canonicalize(self)

    def expectation(self, p: PauliOperator) -> int:
        return expectation_pauli(self, p)

    def partial_trace(self, keep: Sequence[int]) -> StabilizerGroupState:
        return partial_trace(self, keep)

    def __matmul__(self, other: StabilizerGroupState) -> StabilizerGroupState:
        return tensor_states(self, other)


def from_generators(gens: Iterable[PauliOperator | str], n: int | None = None) -> StabilizerGroupState:
    """Validate generators and drop redundant ones.

    Raises
    ------
    StabilizerError
        On non-Hermitian or anticommuting generators, or when the generated
        group contains ``-I``.
    """
    paulis = [PauliOperator.parse(g) if isinstance(g, str) else g for g in gens]
    if n is None:
        if not paulis:
            raise StabilizerError("cannot infer qubit count from an empty generator list")
        n = paulis[0].n
    for p in paulis:
        if p.n != n:
            raise StabilizerError(f"generator {p} is not on {n} qubits")
        if not p.is_hermitian():
            raise StabilizerError(f"generator {p} is not Hermitian")
    for p, q in combinations(paulis, 2):
        if symplectic(p, q):
            raise StabilizerError(f"generators {p} and {q} anticommute")
    kept: list[PauliOperator] = []
    echelon: list[tuple[int, PauliOperator]] = []
    for p in paulis:
        acc = p
        for col, row in echelon:
            if _has_column(acc, col):
                acc = pauli_multiply(acc, row)
        if acc.is_identity():
            if acc.phase != 0:
                raise StabilizerError(f"generators produce -I (dependent generator {p})")
            continue
        col = (_key(acc) & -_key(acc)).bit_length() - 1
        echelon = [(c, pauli_multiply(r, acc) if _has_column(r, col) else r) for c, r in echelon]
        echelon.append((col, acc))
        kept.append(p)
    return StabilizerGroupState(n, tuple(kept))


def canonicalize(s: StabilizerGroupState) -> StabilizerGroupState:
    """Reduced row echelon tableau; X columns (qubit order) precede Z columns."""
    return StabilizerGroupState(s.n, s._canonical)


def expectation_pauli(s: StabilizerGroupState, p: PauliOperator) -> int:
    """``Tr(rho P)`` for a Pauli observable: +1, -1 or 0."""
    if p.n != s.n:
        raise StabilizerError(f"size mismatch: state on {s.n}, Pauli on {p.n}")
    if not p.is_hermitian():
        raise StabilizerError(f"{p} is not Hermitian")
    if p.is_identity():
        return p.sign
    rows = s._canonical
    acc = p
    for row in rows:
        col = (_key(row) & -_key(row)).bit_length() - 1
        if _has_column(acc, col):
            acc = pauli_multiply(acc, row)
    if not acc.is_identity():
        return 0
    return 1 if acc.phase == 0 else -1


def tensor_states(s: StabilizerGroupState, t: StabilizerGroupState) -> StabilizerGroupState:
    ident_s, ident_t = PauliOperator(s.n), PauliOperator(t.n)
    gens = [pauli_tensor(g, ident_t) for g in s.generators] + [pauli_tensor(ident_s, g) for g in t.generators]
    return StabilizerGroupState(s.n + t.n, tuple(gens))


def partial_trace(s: StabilizerGroupState, keep: Sequence[int]) -> StabilizerGroupState:
    """Reduced state on ``keep`` (output qubits follow the order of ``keep``)."""
    keep = list(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= q < s.n for q in keep):
        raise StabilizerError(f"invalid qubit subset {keep} for n={s.n}")
    traced = [q for q in range(s.n) if q not in set(keep)]
    cols = traced + [q + s.n for q in traced]
    _, _, local = _eliminate(s.generators, cols)
    gens = [g.restrict(keep) for g in local if not g.is_identity()]
    return StabilizerGroupState(len(keep), tuple(gens))


def clifford_preparing(s: StabilizerGroupState) -> CliffordUnitary:
    """A Clifford ``U`` with ``s = U (|0><0|^k (x) chi^(n-k)) U^dag``."""
    return complete_clifford(s.n, z_targets=dict(enumerate(s.generators)))


def purify(s: StabilizerGroupState) -> StabilizerGroupState:
    """Pure state on ``2n - k`` qubits whose first ``n`` qubits carry ``s``.

    Every unconstrained logical pair of ``s`` is Bell-paired with one
    appended environment qubit.
    """
    n, k = s.n, s.rank
    m = n - k
    if m == 0:
        return s
    u = clifford_preparing(s)
    total = n + m
    env_id = PauliOperator(m)
    gens = [pauli_tensor(g, env_id) for g in s.generators]
    for t in range(m):
        q = k + t
        gens.append(pauli_tensor(u.x_images[q], PauliOperator(m, 1 << t, 0)))
        gens.append(pauli_tensor(u.z_images[q], PauliOperator(m, 0, 1 << t)))
    return StabilizerGroupState(total, tuple(gens))


def apply_clifford_state(u: CliffordUnitary, s: StabilizerGroupState) -> StabilizerGroupState:
    if u.n != s.n:
        raise StabilizerError(f"size mismatch: Clifford on {u.n}, state on {s.n}")
    return StabilizerGroupState(s.n, tuple(conjugate_pauli(u, g) for g in s.generators))


@dataclass(frozen=True)
class AffineSupport:
    """``{offset + span(basis)}`` inside GF(2)^n; bit ``j`` of a point is qubit ``j``."""

    n: int
    offset: int
    basis: tuple[int, ...]

    def points(self) -> list[int]:
        pts = {self.offset}
        for b in self.basis:
            pts |= {p ^ b for p in pts}
        return sorted(pts)

    def bitstrings(self) -> list[str]:
        return sorted("".join(str((p >> j) & 1) for j in range(self.n)) for p in self.points())


def classical_affine_support(s: StabilizerGroupState) -> AffineSupport | None:
    """Support of a diagonal stabilizer state, or ``None`` if any generator has an X part."""
    if any(g.x for g in s.generators):
        return None
    rows = [g.z for g in s.generators]
    rhs = [0 if g.sign > 0 else 1 for g in s.generators]
    offset = gf2.solve(rows, rhs, s.n)
    if offset is None:  # pragma: no cover - excluded by the -I check
        raise StabilizerError("inconsistent diagonal constraints")
    return AffineSupport(s.n, offset, tuple(gf2.nullspace(rows, s.n)))


def is_similar(s: StabilizerGroupState, t: StabilizerGroupState) -> PauliOperator | None:
    """Pauli ``W`` with ``t = W s W^dag`` when the states differ only in signs."""
    if s.n != t.n:
        raise StabilizerError(f"size mismatch: {s.n} vs {t.n}")
    a, b = s._canonical, t._canonical
    if [(p.x, p.z) for p in a] != [(p.x, p.z) for p in b]:
        return None
    n = s.n
    rows = [p.z | (p.x << n) for p in a]
    rhs = [0 if p.sign == q.sign else 1 for p, q in zip(a, b)]
    w = gf2.solve(rows, rhs, 2 * n)
    assert w is not None  # canonical rows are independent
    return PauliOperator.hermitian(n, w & ((1 << n) - 1), w >> n)


def zero_state(n: int) -> StabilizerGroupState:
    return StabilizerGroupState(n, tuple(PauliOperator(n, 0, 1 << j) for j in range(n)))


def chaotic_state(n: int) -> StabilizerGroupState:
    return StabilizerGroupState(n, ())


def make_named(name: str, n: int | None = None) -> StabilizerGroupState:
    """Named states: zero(n), chaotic(n), one, plus, minus, bell, ghz(n), sigma."""
    key = name.lower()
    if key in ("zero", "chaotic", "ghz"):
        if n is None or n < (2 if key == "ghz" else 1):
            raise StabilizerError(f"{key} needs a qubit count n >= {2 if key == 'ghz' else 1}")
        if key == "zero":
            return zero_state(n)
        if key == "chaotic":
            return chaotic_state(n)
        gens = [PauliOperator(n, 0, 3 << j) for j in range(n - 1)]
        gens.append(PauliOperator(n, (1 << n) - 1, 0))
        return StabilizerGroupState(n, tuple(gens))
    table = {
        "one": ["-Z"],
        "plus": ["+X"],
        "minus": ["-X"],
        "bell": ["+ZZ", "+XX"],
        "sigma": ["+ZZ"],
    }
    if key not in table:
        raise StabilizerError(f"unknown named state {name!r}")
    gens = tuple(PauliOperator.parse(g) for g in table[key])
    return StabilizerGroupState(gens[0].n, gens)


def random_state(n: int, k: int, rng) -> StabilizerGroupState:
    """Rank-``k`` state ``U (|0>^k chi^(n-k)) U^dag`` with a random-word Clifford ``U``."""
    base = StabilizerGroupState(n, tuple(PauliOperator(n, 0, 1 << j) for j in range(k)))
    return apply_clifford_state(random_clifford(n, rng), base)


def parse_tableau(text: str, n: int | None = None) -> StabilizerGroupState:
    """Read one signed Pauli string per line; ``#`` starts a comment."""
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            gens.append(PauliOperator.parse(line))
        except PauliError as exc:
            raise StabilizerError(f"line {lineno}: {exc}") from exc
    if n is None and not gens:
        raise StabilizerError("empty tableau needs an explicit qubit count")
    return from_generators(gens, n)
