"""Analysis of non-adaptive Clifford channels.

Symbolic Pauli/Clifford/stabilizer-state algebra over GF(2), a stabilizer
circuit format, Choi and Stinespring representations of Clifford channels,
their normal form and capacities, and a dense-matrix oracle for checking it
all on small sizes.
"""

from .channel import (
    BipartiteDecomposition,
    Capacities,
    ChannelClass,
    ChannelError,
    ChoiTableau,
    NormalForm,
    apply_channel,
    capacities,
    channel_from_choi,
    channel_report,
    channels_equivalent,
    choi_of_channel,
    classify_channel,
    compose_channels,
    decompose_bipartite,
    normal_form,
    tensor_channels,
    unitary_channel,
)
from .circuit import Circuit, CircuitError, StinespringForm, compile_circuit, parse_circuit, rewrite_adaptive
from .clifford import (
    CliffordUnitary,
    compose_clifford,
    inverse_clifford,
    synthesize_gates,
    transpose_clifford,
)
from .pauli import PauliOperator, pauli_parse
from .stabstate import StabilizerGroupState, from_generators, make_named, parse_tableau

__all__ = [
    "BipartiteDecomposition",
    "Capacities",
    "ChannelClass",
    "ChannelError",
    "ChoiTableau",
    "Circuit",
    "CircuitError",
    "CliffordUnitary",
    "NormalForm",
    "PauliOperator",
    "StabilizerGroupState",
    "StinespringForm",
    "apply_channel",
    "capacities",
    "channel_from_choi",
    "channel_report",
    "channels_equivalent",
    "choi_of_channel",
    "classify_channel",
    "compile_circuit",
    "compose_channels",
    "compose_clifford",
    "decompose_bipartite",
    "from_generators",
    "inverse_clifford",
    "make_named",
    "normal_form",
    "parse_circuit",
    "parse_tableau",
    "pauli_parse",
    "rewrite_adaptive",
    "synthesize_gates",
    "tensor_channels",
    "transpose_clifford",
    "unitary_channel",
]
