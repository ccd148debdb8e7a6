"""Clifford channels: Choi tableaux, composition, normal form and capacities.

Conventions
-----------
* A channel is a :class:`StinespringForm` (see :mod:`cliffchan.circuit`).
* The Choi state puts the ``n_in`` reference qubits ``A'`` first and the
  ``n_out`` outputs ``B`` after them; reference qubit ``i`` is Bell-paired
  with input ``i`` as ``(|00> + |11>)/sqrt(2)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .circuit import Circuit, Dephase, Discard, Gate, PrepChaotic, PrepZero, StinespringForm, compile_circuit
from .clifford import (
    CliffordUnitary,
    compose_clifford,
    complete_clifford,
    format_gate,
    inverse_clifford,
    permutation_clifford,
    synthesize_gates,
    tensor_clifford,
    transpose_clifford,
)
from . import gf2
from .pauli import PauliOperator, pauli_multiply, symplectic
from .stabstate import (
    StabilizerGroupState,
    _eliminate,
    apply_clifford_state,
    partial_trace,
    purify,
    tensor_states,
    zero_state,
)

__all__ = [
    "StinespringForm",
    "ChannelError",
    "ChoiTableau",
    "choi_of_channel",
    "channel_from_choi",
    "apply_channel",
    "unitary_channel",
    "compose_channels",
    "tensor_channels",
    "BipartiteDecomposition",
    "decompose_bipartite",
    "NormalForm",
    "normal_form",
    "Capacities",
    "capacities",
    "ChannelClass",
    "classify_channel",
    "channels_equivalent",
    "channel_report",
]


class ChannelError(ValueError):
    pass


# -- small helpers --------------------------------------------------------------


def _columns(qubits: Sequence[int], n: int) -> list[int]:
    """Packed ``x | z << n`` columns belonging to ``qubits``."""
    return list(qubits) + [q + n for q in qubits]


def _local_subgroup(s: StabilizerGroupState, qubits: Sequence[int]) -> list[PauliOperator]:
    """Generators of the elements of ``s`` supported inside ``qubits`` (full-register Paulis)."""
    others = [q for q in range(s.n) if q not in set(qubits)]
    _, _, local = _eliminate(s.generators, _columns(others, s.n))
    return [g for g in local if not g.is_identity()]


def _relabel(u: CliffordUnitary, order: Sequence[int]) -> CliffordUnitary:
    """Follow ``u`` by the wire permutation sending position ``order[i]`` to ``i``."""
    return compose_clifford(permutation_clifford(order), u)


def _split_pauli(g: PauliOperator, n_a: int) -> tuple[PauliOperator, PauliOperator]:
    """``g = a (x) b`` with ``a`` on the first ``n_a`` qubits.

    ``a`` is the +signed observable unless ``b`` is trivial, in which case
    ``a`` keeps the full phase; ``b`` absorbs whatever sign is left.
    """
    n_b = g.n - n_a
    a_part = g.restrict(range(n_a))
    b_part = g.restrict(range(n_a, g.n))
    if b_part.is_identity():
        return a_part, PauliOperator(n_b)
    a = a_part.unsigned()
    b = PauliOperator(n_b, b_part.x, b_part.z, g.phase - a.phase)
    return a, b


# -- Choi tableaux ---------------------------------------------------------------


@dataclass(frozen=True)
class ChoiTableau:
    """Stabilizer Choi state on ``n_in + n_out`` qubits, reference block first.

    Construction checks trace preservation: the reference marginal must be
    maximally mixed.
    """

    state: StabilizerGroupState
    n_in: int

    def __post_init__(self):
        if not 0 <= self.n_in <= self.state.n:
            raise ChannelError(f"split {self.n_in} outside a {self.state.n}-qubit state")
        if partial_trace(self.state, range(self.n_in)).rank:
            raise ChannelError("not trace-preserving: reference marginal is not maximally mixed")

    @property
    def n_out(self) -> int:
        return self.state.n - self.n_in

    @property
    def rank(self) -> int:
        return self.state.rank

    def canonical_strings(self) -> list[str]:
        return [str(p) for p in self.state.canonicalize().generators]


def choi_of_channel(ch: StinespringForm) -> ChoiTableau:
    n_in, total = ch.n_in, ch.n_total
    size = n_in + total
    gens = []
    for i in range(n_in):
        pair = (1 << i) | (1 << (n_in + i))
        gens += [PauliOperator(size, pair, 0), PauliOperator(size, 0, pair)]
    gens += [PauliOperator(size, 0, 1 << (n_in + j)) for j in range(n_in, total)]
    start = StabilizerGroupState(size, tuple(gens))
    evolved = apply_clifford_state(tensor_clifford(CliffordUnitary.identity(n_in), ch.unitary), start)
    keep = list(range(n_in + ch.n_out))
    return ChoiTableau(partial_trace(evolved, keep), n_in)


def channel_from_choi(sigma: ChoiTableau | StabilizerGroupState, n_in: int | None = None) -> StinespringForm:
    """Minimal Stinespring form with the given Choi state.

    The environment has ``n_in + n_out - rank`` qubits. Inputs are mapped so
    that ``X_A'(i) (x) U X_i U^dag`` and ``Z_A'(i) (x) U Z_i U^dag`` lie in the
    stabilizer group of a purification, and ancilla Z's go to its elements
    trivial on ``A'``.
    """
    if isinstance(sigma, StabilizerGroupState):
        if n_in is None:
            raise ChannelError("n_in is required when passing a bare state")
        sigma = ChoiTableau(sigma, n_in)
    n_in, n_out = sigma.n_in, sigma.n_out
    pure = purify(sigma.state)
    big = pure.n
    n_env = big - n_in - n_out
    rest = list(range(n_in, big))
    rows, pivots, leftover = _eliminate(pure.generators, _columns(range(n_in), big))
    if len(pivots) != 2 * n_in:  # pragma: no cover - excluded by the marginal check
        raise ChannelError("not trace-preserving")
    x_t: dict[int, PauliOperator] = {}
    z_t: dict[int, PauliOperator] = {}
    for r, col in zip(rows, pivots):
        img = r.restrict(rest)
        if col < big:
            x_t[col] = img
        else:
            z_t[col - big] = img
    anc = [g.restrict(rest) for g in leftover if not g.is_identity()]
    for j, g in enumerate(anc):
        z_t[n_in + j] = g
    u = complete_clifford(big - n_in, x_t, z_t)
    return StinespringForm(n_in, n_out, n_env, u)


def apply_channel(ch: StinespringForm, s: StabilizerGroupState) -> StabilizerGroupState:
    if s.n != ch.n_in:
        raise ChannelError(f"channel takes {ch.n_in} qubits, state has {s.n}")
    full = apply_clifford_state(ch.unitary, tensor_states(s, zero_state(ch.n_ancilla)))
    return partial_trace(full, range(ch.n_out))


def unitary_channel(u: CliffordUnitary) -> StinespringForm:
    return StinespringForm(u.n, u.n, 0, u)


def compose_channels(f: StinespringForm, g: StinespringForm) -> StinespringForm:
    """The channel ``g o f`` (``f`` acts first)."""
    if f.n_out != g.n_in:
        raise ChannelError(f"cannot feed {f.n_out} outputs into a {g.n_in}-input channel")
    size = f.n_total + g.n_ancilla
    f_reg = list(range(f.n_total))
    g_reg = list(range(f.n_out)) + list(range(f.n_total, size))
    u = compose_clifford(g.unitary.embed(g_reg, size), f.unitary.embed(f_reg, size))
    order = g_reg[: g.n_out] + f_reg[f.n_out :] + g_reg[g.n_out :]
    return StinespringForm(f.n_in, g.n_out, f.n_env + g.n_env, _relabel(u, order))


def tensor_channels(f: StinespringForm, g: StinespringForm) -> StinespringForm:
    """``f (x) g``; outputs are ``f``'s then ``g``'s."""
    fi, gi = f.n_in, g.n_in
    size = f.n_total + g.n_total
    f_reg = list(range(fi)) + list(range(fi + gi, fi + gi + f.n_ancilla))
    g_reg = list(range(fi, fi + gi)) + list(range(fi + gi + f.n_ancilla, size))
    u = compose_clifford(g.unitary.embed(g_reg, size), f.unitary.embed(f_reg, size))
    order = f_reg[: f.n_out] + g_reg[: g.n_out] + f_reg[f.n_out :] + g_reg[g.n_out :]
    return StinespringForm(fi + gi, f.n_out + g.n_out, f.n_env + g.n_env, _relabel(u, order))


def channels_equivalent(f: StinespringForm, g: StinespringForm) -> bool:
    if (f.n_in, f.n_out) != (g.n_in, g.n_out):
        raise ChannelError(f"shape mismatch: {f.n_in}->{f.n_out} vs {g.n_in}->{g.n_out}")
    return choi_of_channel(f).state == choi_of_channel(g).state


# -- bipartite decomposition -------------------------------------------------------

FACTOR_KINDS = ("zeroA", "zeroB", "chiA", "chiB", "omega", "sigma")


@dataclass(frozen=True)
class BipartiteDecomposition:
    """Local Cliffords taking a bipartite state to a product of elementary factors.

    Wire order on side A is ``[zeroA, chiA, omega, sigma]`` and on side B
    ``[zeroB, chiB, omega, sigma]``; the ``j``-th omega (sigma) wire on A is
    paired with the ``j``-th omega (sigma) wire on B.
    """

    n_a: int
    n_b: int
    u_a: CliffordUnitary
    u_b: CliffordUnitary
    counts: dict[str, int] = field(hash=False)

    @property
    def factors(self) -> list[tuple[str, int]]:
        return [(k, self.counts[k]) for k in FACTOR_KINDS if self.counts[k]]

    def product_state(self) -> StabilizerGroupState:
        return _factor_state(self.n_a, self.n_b, self.counts)


def _factor_state(n_a: int, n_b: int, counts: dict[str, int]) -> StabilizerGroupState:
    n = n_a + n_b
    c = counts
    gens = [PauliOperator(n, 0, 1 << q) for q in range(c["zeroA"])]
    gens += [PauliOperator(n, 0, 1 << (n_a + q)) for q in range(c["zeroB"])]
    a0, b0 = c["zeroA"] + c["chiA"], n_a + c["zeroB"] + c["chiB"]
    for j in range(c["omega"]):
        pair = (1 << (a0 + j)) | (1 << (b0 + j))
        gens += [PauliOperator(n, pair, 0), PauliOperator(n, 0, pair)]
    a1, b1 = a0 + c["omega"], b0 + c["omega"]
    for j in range(c["sigma"]):
        gens.append(PauliOperator(n, 0, (1 << (a1 + j)) | (1 << (b1 + j))))
    return StabilizerGroupState(n, tuple(gens))


def decompose_bipartite(s: StabilizerGroupState, n_a: int) -> BipartiteDecomposition:
    """Local Clifford equivalence to ``|0>^.. chi^.. Omega^d Sigma^e`` across the cut after ``n_a`` qubits."""
    n = s.n
    n_b = n - n_a
    if not 0 <= n_a <= n:
        raise ChannelError(f"cut {n_a} outside a {n}-qubit state")
    side_a, side_b = list(range(n_a)), list(range(n_a, n))
    loc_a = _local_subgroup(s, side_a)
    loc_b = _local_subgroup(s, side_b)

    # complement of the local subgroups inside the group
    def key(p: PauliOperator) -> int:
        return p.x | (p.z << n)

    span_rows = [key(p) for p in loc_a + loc_b]
    cross: list[PauliOperator] = []
    for g in s.generators:
        if gf2.rank(span_rows + [key(g)], 2 * n) > len(span_rows):
            span_rows.append(key(g))
            cross.append(g)

    def a_form(p: PauliOperator, q: PauliOperator) -> int:
        return symplectic(p.restrict(side_a), q.restrict(side_a))

    # symplectic Gram-Schmidt on the A-parts of the cross-cut generators
    pairs: list[tuple[PauliOperator, PauliOperator]] = []
    radicals: list[PauliOperator] = []
    pool = list(cross)
    while pool:
        p = pool.pop(0)
        k = next((k for k, q in enumerate(pool) if a_form(p, q)), None)
        if k is None:
            radicals.append(p)
            continue
        q = pool.pop(k)
        fixed = []
        for c in pool:
            if a_form(c, q):
                c = pauli_multiply(c, p)
            if a_form(c, p):
                c = pauli_multiply(c, q)
            fixed.append(c)
        pool = fixed
        pairs.append((p, q))

    d, e = len(pairs), len(radicals)
    counts = {
        "zeroA": len(loc_a),
        "zeroB": len(loc_b),
        "chiA": n_a - len(loc_a) - d - e,
        "chiB": n_b - len(loc_b) - d - e,
        "omega": d,
        "sigma": e,
    }
    # images of the standard factor generators under W_A and W_B
    xa: dict[int, PauliOperator] = {}
    za: dict[int, PauliOperator] = {}
    xb: dict[int, PauliOperator] = {}
    zb: dict[int, PauliOperator] = {}
    for i, g in enumerate(loc_a):
        za[i] = g.restrict(side_a)
    for i, g in enumerate(loc_b):
        zb[i] = g.restrict(side_b)
    oa = counts["zeroA"] + counts["chiA"]
    ob = counts["zeroB"] + counts["chiB"]
    for j, (p, q) in enumerate(pairs):
        xa[oa + j], xb[ob + j] = _split_pauli(p, n_a)
        za[oa + j], zb[ob + j] = _split_pauli(q, n_a)
    for j, r in enumerate(radicals):
        za[oa + d + j], zb[ob + d + j] = _split_pauli(r, n_a)
    w_a = complete_clifford(n_a, xa, za)
    w_b = complete_clifford(n_b, xb, zb)
    return BipartiteDecomposition(n_a, n_b, inverse_clifford(w_a), inverse_clifford(w_b), counts)


# -- normal form ---------------------------------------------------------------------


@dataclass(frozen=True)
class Capacities:
    C: int
    C_ea: int
    Q: int

    def as_dict(self) -> dict[str, int]:
        return {"C": self.C, "C_ea": self.C_ea, "Q": self.Q}


@dataclass(frozen=True)
class NormalForm:
    """``Phi(rho) = U_B Phi0(U_A rho U_A^dag) U_B^dag`` with ``Phi0`` a product of elementary channels.

    ``Phi0`` takes inputs ordered ``[c erased, d identity, e dephased]`` and
    produces outputs ordered ``[a |0>, b chi, d identity, e dephased]``.
    """

    a: int
    b: int
    c: int
    d: int
    e: int
    encoder: CliffordUnitary
    decoder: CliffordUnitary

    @property
    def n_in(self) -> int:
        return self.c + self.d + self.e

    @property
    def n_out(self) -> int:
        return self.a + self.b + self.d + self.e

    @property
    def counts(self) -> dict[str, int]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "e": self.e}

    def input_roles(self) -> list[str]:
        return ["erase"] * self.c + ["identity"] * self.d + ["dephase"] * self.e

    def output_roles(self) -> list[str]:
        return ["zero"] * self.a + ["chaotic"] * self.b + ["identity"] * self.d + ["dephase"] * self.e

    def encoder_gates(self) -> list[tuple[str, tuple[int, ...]]]:
        return synthesize_gates(self.encoder)

    def decoder_gates(self) -> list[tuple[str, tuple[int, ...]]]:
        return synthesize_gates(self.decoder)

    def to_circuit(self) -> Circuit:
        """Stabilizer circuit ``encoder -> elementary wires -> decoder``.

        The circuit's own outputs come in wire order ``[d, e, a, b]``, so the
        decoder is preceded by the permutation back to ``[a, b, d, e]``.
        """
        a, b, c, d, e = self.a, self.b, self.c, self.d, self.e
        ins: list = [Gate(name, qs) for name, qs in synthesize_gates(self.encoder)]
        ins += [Discard(q) for q in range(c)]
        ins += [Dephase(q) for q in range(c + d, c + d + e)]
        ins += [PrepZero()] * a + [PrepChaotic()] * b
        wires = list(range(c, c + d + e)) + list(range(self.n_in, self.n_in + a + b))  # circuit output wires in order
        # role-order position of each circuit output: [d, e] come after [a, b]
        role_of_output = [a + b + j for j in range(d + e)] + list(range(a + b))
        to_roles = permutation_clifford([role_of_output.index(r) for r in range(self.n_out)])
        dec = compose_clifford(self.decoder, to_roles)
        ins += [Gate(name, tuple(wires[q] for q in qs)) for name, qs in synthesize_gates(dec)]
        return Circuit(self.n_in, tuple(ins))

    def to_channel(self) -> StinespringForm:
        return compile_circuit(self.to_circuit())

    def capacities(self) -> Capacities:
        return capacities(self)


def normal_form(ch: StinespringForm | ChoiTableau) -> NormalForm:
    sigma = ch if isinstance(ch, ChoiTableau) else choi_of_channel(ch)
    dec = decompose_bipartite(sigma.state, sigma.n_in)
    cnt = dec.counts
    assert cnt["zeroA"] == 0, "trace-preserving Choi state has no local reference stabilizers"
    w_ref = inverse_clifford(dec.u_a)
    w_out = inverse_clifford(dec.u_b)
    return NormalForm(
        a=cnt["zeroB"],
        b=cnt["chiB"],
        c=cnt["chiA"],
        d=cnt["omega"],
        e=cnt["sigma"],
        encoder=transpose_clifford(w_ref),
        decoder=w_out,
    )


def capacities(nf: NormalForm) -> Capacities:
    return Capacities(C=nf.d + nf.e, C_ea=2 * nf.d + nf.e, Q=nf.d)


# -- classification ------------------------------------------------------------------


class ChannelClass(str, enum.Enum):
    UNITARY = "UnitaryClifford"
    ISOMETRY = "CliffordIsometry"
    STATE_RESET = "StateReset"
    GENERAL = "GeneralClifford"


def classify_channel(ch: StinespringForm | ChoiTableau) -> ChannelClass:
    sigma = ch if isinstance(ch, ChoiTableau) else choi_of_channel(ch)
    n_in, n_out = sigma.n_in, sigma.n_out
    k = sigma.rank
    pure = k == n_in + n_out
    out_marginal = partial_trace(sigma.state, range(n_in, n_in + n_out))
    if pure and n_in == n_out and out_marginal.rank == 0:
        return ChannelClass.UNITARY
    if pure:
        return ChannelClass.ISOMETRY
    if k == n_out and out_marginal.rank == n_out:
        return ChannelClass.STATE_RESET
    return ChannelClass.GENERAL


# -- reports -------------------------------------------------------------------------


def channel_report(ch: StinespringForm, output_roles: Sequence[str] | None = None) -> dict:
    """JSON-ready summary: sizes, normal-form counts, capacities, class, gates, Choi tableau."""
    sigma = choi_of_channel(ch)
    nf = normal_form(sigma)
    report = {
        "n_in": ch.n_in,
        "n_out": ch.n_out,
        "counts": nf.counts,
        "capacities": capacities(nf).as_dict(),
        "class": classify_channel(sigma).value,
        "encoder_gates": [format_gate(g) for g in nf.encoder_gates()],
        "decoder_gates": [format_gate(g) for g in nf.decoder_gates()],
        "choi_tableau": sigma.canonical_strings(),
    }
    if output_roles is not None:
        report["output_roles"] = list(output_roles)
    return report
