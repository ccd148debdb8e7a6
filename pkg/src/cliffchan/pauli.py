"""Phased Pauli operators on n qubits.

An operator is stored as ``i**phase * prod_j X_j**x_j Z_j**z_j`` with the X
factor to the left of the Z factor on every qubit. ``x`` and ``z`` are
bit-packed ints (bit ``j`` is qubit ``j``). The letter form used for
printing writes ``Y = i X Z``, so the printed coefficient of an operator is
``i**(phase - #Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}
_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PARSE = {"": 0, "+": 0, "+i": 1, "-": 2, "-i": 3, "i": 1}


class PauliError(ValueError):
    """Malformed Pauli string or mismatched qubit counts."""


@dataclass(frozen=True, slots=True)
class PauliOperator:
    """Element of the n-qubit Pauli group.

    Parameters
    ----------
    n : int
        Number of qubits.
    x, z : int
        Bit-packed X- and Z-parts.
    phase : int
        Exponent of ``i``, reduced mod 4.
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise PauliError(f"negative qubit count {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise PauliError(f"bit vectors do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, sign: int = 1) -> PauliOperator:
        """``letter`` on ``qubit``, identity elsewhere, Hermitian with the given sign."""
        if not 0 <= qubit < n:
            raise PauliError(f"qubit {qubit} out of range for n={n}")
        bx, bz = _BITS[letter.upper()]
        return cls.hermitian(n, bx << qubit, bz << qubit, sign)

    @classmethod
    def hermitian(cls, n: int, x: int, z: int, sign: int = 1) -> PauliOperator:
        """The Pauli observable ``sign * letters(x, z)``."""
        phase = (x & z).bit_count() + (0 if sign > 0 else 2)
        return cls(n, x, z, phase)

    @classmethod
    def parse(cls, text: str) -> PauliOperator:
        return pauli_parse(text)

    # -- predicates and views -----------------------------------------------

    @property
    def num_y(self) -> int:
        return (self.x & self.z).bit_count()

    @property
    def coefficient(self) -> int:
        """Exponent ``e`` with ``self == i**e * letters``."""
        return (self.phase - self.num_y) % 4

    def is_hermitian(self) -> bool:
        return self.coefficient % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for a Pauli observable."""
        c = self.coefficient
        if c % 2:
            raise PauliError(f"{self} is not Hermitian")
        return 1 if c == 0 else -1

    def is_identity(self) -> bool:
        """True for the phased identities (x = z = 0)."""
        return self.x == 0 and self.z == 0

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> int:
        return self.x | self.z

    def letter(self, qubit: int) -> str:
        return _LETTERS[(self.x >> qubit) & 1, (self.z >> qubit) & 1]

    def letters(self) -> str:
        return "".join(self.letter(j) for j in range(self.n))

    def unsigned(self) -> PauliOperator:
        """The Hermitian representative with a + sign."""
        return PauliOperator.hermitian(self.n, self.x, self.z)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, self.phase + 2)

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return pauli_multiply(self, other)

    def __matmul__(self, other: PauliOperator) -> PauliOperator:
        return pauli_tensor(self, other)

    def __str__(self) -> str:
        return pauli_format(self)

    def commutes(self, other: PauliOperator) -> bool:
        return pauli_commutes(self, other)

    # -- qubit bookkeeping --------------------------------------------------

    def restrict(self, qubits: Sequence[int]) -> PauliOperator:
        """Factor on ``qubits`` (in the given order) keeping the full phase.

        Only meaningful when the operator is trivial outside ``qubits``.
        """
        x = z = 0
        for new, old in enumerate(qubits):
            x |= ((self.x >> old) & 1) << new
            z |= ((self.z >> old) & 1) << new
        return PauliOperator(len(qubits), x, z, self.phase)

    def embed(self, qubits: Sequence[int], n: int) -> PauliOperator:
        """Place this operator on ``qubits`` of an ``n``-qubit register."""
        if len(qubits) != self.n:
            raise PauliError(f"need {self.n} target qubits, got {len(qubits)}")
        x = z = 0
        for old, new in enumerate(qubits):
            x |= ((self.x >> old) & 1) << new
            z |= ((self.z >> old) & 1) << new
        return PauliOperator(n, x, z, self.phase)

    def split(self, first: Iterable[int]) -> tuple[int, int, int, int]:
        """Bit parts ``(x_in, z_in, x_out, z_out)`` relative to the mask of ``first``."""
        mask = 0
        for q in first:
            mask |= 1 << q
        return self.x & mask, self.z & mask, self.x & ~mask, self.z & ~mask


def _check_sizes(p: PauliOperator, q: PauliOperator):
    if p.n != q.n:
        raise PauliError(f"size mismatch: {p.n} vs {q.n} qubits")


def pauli_multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p * q`` including phase."""
    _check_sizes(p, q)
    # Z^{z_p} X^{x_q} = (-1)^{z_p . x_q} X^{x_q} Z^{z_p}
    phase = p.phase + q.phase + 2 * ((p.z & q.x).bit_count() & 1)
    return PauliOperator(p.n, p.x ^ q.x, p.z ^ q.z, phase)


def pauli_commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check_sizes(p, q)
    return symplectic(p, q) == 0


def symplectic(p: PauliOperator, q: PauliOperator) -> int:
    """Symplectic form <p, q> over GF(2); 1 means anticommuting."""
    return ((p.x & q.z) ^ (p.z & q.x)).bit_count() & 1


def pauli_tensor(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    return PauliOperator(p.n + q.n, p.x | (q.x << p.n), p.z | (q.z << p.n), p.phase + q.phase)


def pauli_format(p: PauliOperator) -> str:
    return _PREFIX[p.coefficient] + p.letters()


def pauli_parse(text: str) -> PauliOperator:
    """Parse ``[+|-|+i|-i]`` followed by letters from ``IXYZ``.

    >>> str(pauli_parse("-iXZ"))
    '-iXZ'
    """
    s = text.strip()
    if not s:
        raise PauliError("empty Pauli string")
    body_start = 0
    while body_start < len(s) and s[body_start] in "+-i":
        body_start += 1
    prefix, body = s[:body_start], s[body_start:]
    if prefix not in _PREFIX_PARSE:
        raise PauliError(f"invalid sign prefix {prefix!r} in {text!r}")
    x = z = 0
    for j, ch in enumerate(body):
        if ch not in "IXYZ":
            raise PauliError(f"invalid character {ch!r} in {text!r}")
        bx, bz = _BITS[ch]
        x |= bx << j
        z |= bz << j
    n = len(body)
    return PauliOperator(n, x, z, _PREFIX_PARSE[prefix] + (x & z).bit_count())
