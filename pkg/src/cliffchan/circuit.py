"""Stabilizer circuit IR, text format, compilation and deferred-measurement rewriting.

Text grammar, one instruction per line (``#`` starts a comment)::

    qubits <n>
    prep0 | prepx
    h|s|x|y|z <q>
    cz <a> <b> | cnot <c> <t>
    dephase <q> | discard <q>
    measure <q> -> <bit>
    notbit <bit> | cnotbit <src> <dst> | randbit <bit> | pctrl <bit> x|y|z <q>
    andbit <a> <b> <dst>          # dst ^= a AND b; parsed but non-affine

Every wire gets an index in allocation order: inputs ``0..n-1``, then one
per ``prep0``/``prepx``/``randbit``. Indices stay stable across discards.
Outputs are the surviving wires in index order; a measured wire stays an
output and is reported as classical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .clifford import GATE_ARITY, CliffordUnitary


class CircuitError(ValueError):
    """Syntax or wire-bookkeeping error; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class AdaptiveInstructionError(CircuitError):
    pass


class OutsideRestrictedClassError(CircuitError):
    pass


@dataclass(frozen=True)
class PrepZero:
    pass


@dataclass(frozen=True)
class PrepChaotic:
    pass


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class Dephase:
    qubit: int


@dataclass(frozen=True)
class Discard:
    qubit: int


@dataclass(frozen=True)
class Measure:
    qubit: int
    bit: str


@dataclass(frozen=True)
class ClassicalNot:
    bit: str


@dataclass(frozen=True)
class ClassicalCnot:
    src: str
    dst: str


@dataclass(frozen=True)
class RandBit:
    bit: str


@dataclass(frozen=True)
class PauliCtrl:
    bit: str
    pauli: str
    qubit: int


@dataclass(frozen=True)
class ClassicalAnd:
    a: str
    b: str
    dst: str


Instruction = Union[
    PrepZero, PrepChaotic, Gate, Dephase, Discard, Measure, ClassicalNot, ClassicalCnot, RandBit, PauliCtrl, ClassicalAnd
]

ADAPTIVE = (Measure, ClassicalNot, ClassicalCnot, RandBit, PauliCtrl, ClassicalAnd)
_GATES_1Q = {"h": "H", "s": "S", "x": "X", "y": "Y", "z": "Z"}
_GATES_2Q = {"cz": "CZ", "cnot": "CNOT"}


@dataclass
class WireLayout:
    """Result of wire bookkeeping over a circuit."""

    n_wires: int = 0
    live: set[int] = field(default_factory=set)  # quantum wires still usable
    bits: dict[str, int] = field(default_factory=dict)  # bit name -> wire index
    dead: set[int] = field(default_factory=set)

    @property
    def outputs(self) -> list[int]:
        return sorted(self.live | set(self.bits.values()))

    @property
    def classical(self) -> set[int]:
        return set(self.bits.values())

    def roles(self) -> list[str]:
        cl = self.classical
        return ["classical" if w in cl else "quantum" for w in self.outputs]


@dataclass(frozen=True)
class Circuit:
    n_in: int
    instructions: tuple[Instruction, ...] = ()
    # wires that carry classical data after a rewrite (measurement turned into dephasing)
    classical_wires: frozenset[int] = frozenset()
    lines: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        self.layout()

    def layout(self) -> WireLayout:
        """Run wire bookkeeping; raises :class:`CircuitError` on misuse."""
        if self.n_in < 0:
            raise CircuitError("negative input count")
        lay = WireLayout(n_wires=self.n_in, live=set(range(self.n_in)))
        for pos, ins in enumerate(self.instructions):
            line = self.lines[pos] if self.lines else None
            _track(lay, ins, line)
        return lay

    @property
    def is_adaptive(self) -> bool:
        return any(isinstance(i, ADAPTIVE) for i in self.instructions)

    @property
    def n_out(self) -> int:
        return len(self.layout().outputs)

    def output_roles(self) -> list[str]:
        lay = self.layout()
        cl = lay.classical | set(self.classical_wires)
        return ["classical" if w in cl else "quantum" for w in lay.outputs]

    def __str__(self) -> str:
        return serialize_circuit(self)


def _track(lay: WireLayout, ins: Instruction, line: int | None) -> None:
    def need_live(q: int):
        if q in lay.live:
            return
        if q in lay.dead or q in lay.bits.values():
            raise CircuitError(f"qubit {q} is not live (discarded or measured)", line)
        raise CircuitError(f"qubit {q} does not exist", line)

    def need_bit(b: str):
        if b not in lay.bits:
            raise CircuitError(f"bit {b!r} used before definition", line)

    def new_bit(b: str):
        if b in lay.bits:
            raise CircuitError(f"duplicate bit name {b!r}", line)

    if isinstance(ins, (PrepZero, PrepChaotic)):
        lay.live.add(lay.n_wires)
        lay.n_wires += 1
    elif isinstance(ins, Gate):
        if GATE_ARITY.get(ins.name) != len(ins.qubits):
            raise CircuitError(f"bad gate {ins.name}{ins.qubits}", line)
        if len(set(ins.qubits)) != len(ins.qubits):
            raise CircuitError(f"repeated qubit in {ins.name}", line)
        for q in ins.qubits:
            need_live(q)
    elif isinstance(ins, (Dephase, Discard)):
        need_live(ins.qubit)
        if isinstance(ins, Discard):
            lay.live.discard(ins.qubit)
            lay.dead.add(ins.qubit)
    elif isinstance(ins, Measure):
        need_live(ins.qubit)
        new_bit(ins.bit)
        lay.live.discard(ins.qubit)
        lay.bits[ins.bit] = ins.qubit
    elif isinstance(ins, ClassicalNot):
        need_bit(ins.bit)
    elif isinstance(ins, ClassicalCnot):
        need_bit(ins.src)
        need_bit(ins.dst)
        if ins.src == ins.dst:
            raise CircuitError("cnotbit needs two different bits", line)
    elif isinstance(ins, RandBit):
        new_bit(ins.bit)
        lay.bits[ins.bit] = lay.n_wires
        lay.n_wires += 1
    elif isinstance(ins, PauliCtrl):
        need_bit(ins.bit)
        need_live(ins.qubit)
        if ins.pauli not in ("X", "Y", "Z"):
            raise CircuitError(f"pctrl needs x, y or z, got {ins.pauli!r}", line)
    elif isinstance(ins, ClassicalAnd):
        for b in (ins.a, ins.b, ins.dst):
            need_bit(b)
        if ins.dst in (ins.a, ins.b):
            raise CircuitError("andbit target must differ from its inputs", line)
    else:  # pragma: no cover
        raise CircuitError(f"unknown instruction {ins!r}", line)


# -- text format -------------------------------------------------------------


def _int(tok: str, line: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise CircuitError(f"expected a qubit index, got {tok!r}", line) from None
    if v < 0:
        raise CircuitError(f"negative qubit index {v}", line)
    return v


def parse_circuit(text: str) -> Circuit:
    n_in: int | None = None
    instructions: list[Instruction] = []
    lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        op, args = toks[0].lower(), toks[1:]

        def arity(k: int):
            if len(args) != k:
                raise CircuitError(f"{op} takes {k} argument(s), got {len(args)}", lineno)

        if op == "qubits":
            if n_in is not None:
                raise CircuitError("duplicate 'qubits' header", lineno)
            arity(1)
            n_in = _int(args[0], lineno)
            continue
        if n_in is None:
            raise CircuitError("circuit must start with 'qubits <n>'", lineno)
        if op == "prep0":
            arity(0)
            ins: Instruction = PrepZero()
        elif op == "prepx":
            arity(0)
            ins = PrepChaotic()
        elif op in _GATES_1Q:
            arity(1)
            ins = Gate(_GATES_1Q[op], (_int(args[0], lineno),))
        elif op in _GATES_2Q:
            arity(2)
            ins = Gate(_GATES_2Q[op], (_int(args[0], lineno), _int(args[1], lineno)))
        elif op == "dephase":
            arity(1)
            ins = Dephase(_int(args[0], lineno))
        elif op == "discard":
            arity(1)
            ins = Discard(_int(args[0], lineno))
        elif op == "measure":
            if len(args) != 3 or args[1] != "->":
                raise CircuitError("expected 'measure <q> -> <bit>'", lineno)
            ins = Measure(_int(args[0], lineno), args[2])
        elif op == "notbit":
            arity(1)
            ins = ClassicalNot(args[0])
        elif op == "cnotbit":
            arity(2)
            ins = ClassicalCnot(args[0], args[1])
        elif op == "randbit":
            arity(1)
            ins = RandBit(args[0])
        elif op == "pctrl":
            arity(3)
            if args[1].lower() not in ("x", "y", "z"):
                raise CircuitError(f"pctrl needs x, y or z, got {args[1]!r}", lineno)
            ins = PauliCtrl(args[0], args[1].upper(), _int(args[2], lineno))
        elif op == "andbit":
            arity(3)
            ins = ClassicalAnd(args[0], args[1], args[2])
        else:
            raise CircuitError(f"unknown instruction {op!r}", lineno)
        instructions.append(ins)
        lines.append(lineno)
    if n_in is None:
        raise CircuitError("missing 'qubits <n>' header")
    return Circuit(n_in, tuple(instructions), lines=tuple(lines))


def format_instruction(ins: Instruction) -> str:
    if isinstance(ins, PrepZero):
        return "prep0"
    if isinstance(ins, PrepChaotic):
        return "prepx"
    if isinstance(ins, Gate):
        return " ".join([ins.name.lower(), *map(str, ins.qubits)])
    if isinstance(ins, Dephase):
        return f"dephase {ins.qubit}"
    if isinstance(ins, Discard):
        return f"discard {ins.qubit}"
    if isinstance(ins, Measure):
        return f"measure {ins.qubit} -> {ins.bit}"
    if isinstance(ins, ClassicalNot):
        return f"notbit {ins.bit}"
    if isinstance(ins, ClassicalCnot):
        return f"cnotbit {ins.src} {ins.dst}"
    if isinstance(ins, RandBit):
        return f"randbit {ins.bit}"
    if isinstance(ins, PauliCtrl):
        return f"pctrl {ins.bit} {ins.pauli.lower()} {ins.qubit}"
    if isinstance(ins, ClassicalAnd):
        return f"andbit {ins.a} {ins.b} {ins.dst}"
    raise CircuitError(f"unknown instruction {ins!r}")  # pragma: no cover


def serialize_circuit(c: Circuit) -> str:
    return "".join(line + "\n" for line in [f"qubits {c.n_in}", *map(format_instruction, c.instructions)])


# -- compilation --------------------------------------------------------------


@dataclass(frozen=True)
class StinespringForm:
    """Clifford channel ``rho -> Tr_E U (rho (x) |0..0><0..0|) U^dag``.

    ``unitary`` acts on ``n_out + n_env`` qubits: inputs occupy the first
    ``n_in`` positions and the rest start in |0>. After ``unitary`` the first
    ``n_out`` qubits are the output and the last ``n_env`` are traced out.
    """

    n_in: int
    n_out: int
    n_env: int
    unitary: CliffordUnitary

    def __post_init__(self):
        if min(self.n_in, self.n_out, self.n_env) < 0:
            raise ValueError("negative wire count")
        if self.n_out + self.n_env < self.n_in:
            raise ValueError("dilation smaller than the input")
        if self.unitary.n != self.n_out + self.n_env:
            raise ValueError(f"unitary acts on {self.unitary.n} qubits, expected {self.n_out + self.n_env}")

    @property
    def n_total(self) -> int:
        return self.n_out + self.n_env

    @property
    def n_ancilla(self) -> int:
        return self.n_total - self.n_in


def compile_circuit(c: Circuit) -> StinespringForm:
    """Compile a non-adaptive circuit (terminal measurements allowed) to Stinespring form."""
    for pos, ins in enumerate(c.instructions):
        if isinstance(ins, ADAPTIVE) and not isinstance(ins, Measure):
            line = c.lines[pos] if c.lines else None
            raise AdaptiveInstructionError(
                f"adaptive instruction {format_instruction(ins)!r}; run rewrite_adaptive first", line
            )
    reg: dict[int, int] = {q: q for q in range(c.n_in)}
    size = c.n_in
    next_wire = c.n_in
    env: list[int] = []
    gates: list[tuple[str, tuple[int, ...]]] = []

    def fresh() -> int:
        nonlocal size
        size += 1
        return size - 1

    for ins in c.instructions:
        if isinstance(ins, PrepZero):
            reg[next_wire] = fresh()
            next_wire += 1
        elif isinstance(ins, PrepChaotic):
            p, e = fresh(), fresh()
            gates += [("H", (p,)), ("CNOT", (p, e))]
            env.append(e)
            reg[next_wire] = p
            next_wire += 1
        elif isinstance(ins, Gate):
            gates.append((ins.name, tuple(reg[q] for q in ins.qubits)))
        elif isinstance(ins, (Dephase, Measure)):
            e = fresh()
            gates.append(("CNOT", (reg[ins.qubit], e)))
            env.append(e)
        elif isinstance(ins, Discard):
            env.append(reg[ins.qubit])

    outputs = [reg[w] for w in c.layout().outputs]
    order = outputs + env
    u = CliffordUnitary.identity(size)
    for name, qs in gates:
        u = u.then(name, qs)
    # relabel register positions so outputs come first, then the environment
    u = CliffordUnitary(size, tuple(p.restrict(order) for p in u.x_images), tuple(p.restrict(order) for p in u.z_images))
    return StinespringForm(c.n_in, len(outputs), len(env), u)


# -- deferred measurement -----------------------------------------------------


def rewrite_adaptive(c: Circuit) -> Circuit:
    """Rewrite a restricted adaptive circuit into an equivalent non-adaptive one.

    Measurements become dephasing, bit wires become dephased qubit wires,
    ``notbit``/``cnotbit`` become X/CNOT, ``randbit`` becomes ``prepx`` and a
    classically controlled Pauli becomes the quantum controlled Pauli.
    """
    bit_wire: dict[str, int] = {}
    next_wire = c.n_in
    out: list[Instruction] = []
    lines: list[int] = []
    for pos, ins in enumerate(c.instructions):
        line = c.lines[pos] if c.lines else None
        emitted: list[Instruction]
        if isinstance(ins, (PrepZero, PrepChaotic)):
            next_wire += 1
            emitted = [ins]
        elif isinstance(ins, Measure):
            bit_wire[ins.bit] = ins.qubit
            emitted = [Dephase(ins.qubit)]
        elif isinstance(ins, ClassicalNot):
            emitted = [Gate("X", (bit_wire[ins.bit],))]
        elif isinstance(ins, ClassicalCnot):
            emitted = [Gate("CNOT", (bit_wire[ins.src], bit_wire[ins.dst]))]
        elif isinstance(ins, RandBit):
            bit_wire[ins.bit] = next_wire
            next_wire += 1
            emitted = [PrepChaotic()]
        elif isinstance(ins, PauliCtrl):
            ctl, tgt = bit_wire[ins.bit], ins.qubit
            if ins.pauli == "X":
                emitted = [Gate("CNOT", (ctl, tgt))]
            elif ins.pauli == "Z":
                emitted = [Gate("CZ", (ctl, tgt))]
            else:
                # CY = S_t CNOT S_t^dag, with S^dag = S Z
                emitted = [Gate("Z", (tgt,)), Gate("S", (tgt,)), Gate("CNOT", (ctl, tgt)), Gate("S", (tgt,))]
        elif isinstance(ins, ClassicalAnd):
            raise OutsideRestrictedClassError(
                "AND of classical bits is not affine; circuit is outside the restricted adaptive class", line
            )
        else:
            emitted = [ins]
        out += emitted
        lines += [line or 0] * len(emitted)
    classical = frozenset(bit_wire.values()) | c.classical_wires
    return Circuit(c.n_in, tuple(out), classical_wires=classical, lines=tuple(lines) if c.lines else None)
