import numpy as np
import pytest
from helpers import random_circuit

from cliffchan.channel import (
    ChannelClass,
    ChannelError,
    ChoiTableau,
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
from cliffchan.circuit import compile_circuit, parse_circuit
from cliffchan.clifford import clifford_from_gate, random_clifford, tensor_clifford
from cliffchan.oracle import (
    dense_clifford,
    dense_of_channel,
    dense_state,
    dephasing_channel,
    enumerate_stabilizer_states,
)
from cliffchan.stabstate import apply_clifford_state, chaotic_state, from_generators, make_named, random_state, zero_state


def chan(text):
    return compile_circuit(parse_circuit(text))


IDENTITY = chan("qubits 1\n")
DEPHASE = chan("qubits 1\ndephase 0\n")
ERASE = chan("qubits 1\ndiscard 0\n")
PREP0 = chan("qubits 0\nprep0\n")
PREPX = chan("qubits 0\nprepx\n")
HADAMARD = chan("qubits 1\nh 0\n")


@pytest.mark.parametrize(
    "ch, tableau",
    [(IDENTITY, ["+XX", "+ZZ"]), (DEPHASE, ["+ZZ"]), (ERASE, []), (PREP0, ["+Z"]), (PREPX, [])],
)
def test_choi_of_elementary_channels(ch, tableau):
    sigma = choi_of_channel(ch)
    assert sigma.canonical_strings() == tableau


def test_choi_requires_trace_preservation():
    with pytest.raises(ChannelError, match="not trace-preserving"):
        ChoiTableau(from_generators(["ZI"]), 1)


def test_channel_from_choi_examples():
    omega = channel_from_choi(make_named("bell"), n_in=1)
    assert omega.n_env == 0 and channels_equivalent(omega, IDENTITY)
    sigma = channel_from_choi(make_named("sigma"), n_in=1)
    assert sigma.n_env == 1 and channels_equivalent(sigma, DEPHASE)
    reset = channel_from_choi(from_generators(["IZ"]), n_in=1)
    assert channels_equivalent(reset, chan("qubits 1\ndiscard 0\nprep0\n"))


@pytest.mark.parametrize("total", [1, 2, 3])
def test_choi_round_trip_exhaustive(total):
    # every stabilizer state on <= 3 qubits whose reference marginal is maximally mixed
    for n_in in range(total + 1):
        for rank in range(total + 1):
            for s in enumerate_stabilizer_states(total, rank):
                try:
                    sigma = ChoiTableau(s, n_in)
                except ChannelError:
                    continue
                back = channel_from_choi(sigma)
                assert choi_of_channel(back).state == s
                assert back.n_env == total - rank


@pytest.mark.parametrize("n_in, n_out", [(1, 3), (2, 2), (3, 1), (0, 4), (4, 0)])
def test_choi_round_trip_random_four_qubits(n_in, n_out, rng):
    for _ in range(15):
        sigma = choi_of_channel(compile_circuit(random_circuit(n_in, n_out, rng)))
        back = channel_from_choi(sigma)
        assert choi_of_channel(back).state == sigma.state
        assert back.n_env == n_in + n_out - sigma.rank


def test_apply_channel_examples():
    assert apply_channel(DEPHASE, make_named("plus")) == chaotic_state(1)
    assert apply_channel(tensor_channels(IDENTITY, DEPHASE), make_named("bell")) == make_named("sigma")
    out = apply_channel(ERASE, make_named("minus"))
    assert out.n == 0
    with pytest.raises(ChannelError):
        apply_channel(IDENTITY, zero_state(2))


@pytest.mark.parametrize("seed", range(15))
def test_apply_channel_matches_dense(seed):
    rng = np.random.default_rng(seed)
    n_in = int(rng.integers(1, 4))
    ch = compile_circuit(random_circuit(n_in, int(rng.integers(0, 4)), rng, extra_preps=1))
    s = random_state(n_in, int(rng.integers(0, n_in + 1)), rng)
    got = dense_state(apply_channel(ch, s))
    want = dense_of_channel(ch).apply(dense_state(s))
    assert np.linalg.norm(got - want) <= 1e-9


def test_composition_examples():
    assert channels_equivalent(compose_channels(DEPHASE, DEPHASE), DEPHASE)
    assert dense_of_channel(compose_channels(DEPHASE, DEPHASE)).distance(dephasing_channel()) <= 1e-9
    hdh = compose_channels(compose_channels(HADAMARD, DEPHASE), HADAMARD)
    assert not channels_equivalent(hdh, DEPHASE)
    assert choi_of_channel(hdh).canonical_strings() == ["+XX"]
    assert channels_equivalent(tensor_channels(IDENTITY, IDENTITY), chan("qubits 2\n"))
    with pytest.raises(ChannelError):
        compose_channels(PREP0, chan("qubits 2\n"))


@pytest.mark.parametrize("seed", range(15))
def test_compose_and_tensor_match_dense(seed):
    rng = np.random.default_rng(100 + seed)
    a, b, c = (int(v) for v in rng.integers(0, 3, size=3))
    f = compile_circuit(random_circuit(a, b, rng, extra_preps=0, gates=5))
    g = compile_circuit(random_circuit(b, c, rng, extra_preps=0, gates=5))
    df, dg = dense_of_channel(f), dense_of_channel(g)
    assert dense_of_channel(compose_channels(f, g)).distance(df.then(dg)) <= 1e-9
    assert dense_of_channel(tensor_channels(f, g)).distance(df.tensor(dg)) <= 1e-9


def test_bipartite_examples():
    dec = decompose_bipartite(make_named("sigma"), 1)
    assert dec.factors == [("sigma", 1)]
    assert dec.u_a.is_identity() and dec.u_b.is_identity()
    assert decompose_bipartite(make_named("bell"), 1).factors == [("omega", 1)]
    ghz = decompose_bipartite(make_named("ghz", 3), 1)
    assert ghz.factors == [("zeroB", 1), ("omega", 1)]


@pytest.mark.parametrize("seed", range(20))
def test_bipartite_decomposition_random(seed):
    rng = np.random.default_rng(200 + seed)
    na, nb = int(rng.integers(0, 4)), int(rng.integers(0, 4))
    s = random_state(na + nb, int(rng.integers(0, na + nb + 1)), rng)
    dec = decompose_bipartite(s, na)
    u = tensor_clifford(dec.u_a, dec.u_b)
    assert apply_clifford_state(u, s) == dec.product_state()
    m = dense_clifford(u)
    assert np.linalg.norm(m @ dense_state(s) @ m.conj().T - dense_state(dec.product_state())) <= 1e-9
    # factor counts are invariant under local Cliffords
    v = tensor_clifford(random_clifford(na, rng), random_clifford(nb, rng))
    assert decompose_bipartite(apply_clifford_state(v, s), na).counts == dec.counts


@pytest.mark.parametrize(
    "ch, counts",
    [
        (IDENTITY, (0, 0, 0, 1, 0)),
        (DEPHASE, (0, 0, 0, 0, 1)),
        (chan("qubits 1\ndiscard 0\nprep0\n"), (1, 0, 1, 0, 0)),
        (PREPX, (0, 1, 0, 0, 0)),
    ],
)
def test_normal_form_examples(ch, counts):
    nf = normal_form(ch)
    assert (nf.a, nf.b, nf.c, nf.d, nf.e) == counts
    assert channels_equivalent(nf.to_channel(), ch)


@pytest.mark.parametrize("seed", range(20))
def test_normal_form_reconstruction(seed):
    rng = np.random.default_rng(300 + seed)
    c = random_circuit(int(rng.integers(0, 4)), int(rng.integers(0, 4)), rng)
    ch = compile_circuit(c)
    nf = normal_form(ch)
    assert nf.a + nf.b + nf.d + nf.e == ch.n_out and nf.c + nf.d + nf.e == ch.n_in
    assert choi_of_channel(nf.to_channel()).state == choi_of_channel(ch).state


@pytest.mark.parametrize("seed", range(10))
def test_normal_form_counts_stable_under_unitary_dressing(seed):
    # the counts only depend on the channel: dressing with Cliffords or re-deriving the dilation keeps them
    rng = np.random.default_rng(400 + seed)
    n_in, n_out = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    ch = compile_circuit(random_circuit(n_in, n_out, rng))
    dressed = compose_channels(
        compose_channels(unitary_channel(random_clifford(n_in, rng)), ch), unitary_channel(random_clifford(n_out, rng))
    )
    assert normal_form(dressed).counts == normal_form(ch).counts
    assert normal_form(channel_from_choi(choi_of_channel(ch))).counts == normal_form(ch).counts


def test_capacities_examples_and_bounds(rng):
    assert capacities(normal_form(IDENTITY)).as_dict() == {"C": 1, "C_ea": 2, "Q": 1}
    assert capacities(normal_form(DEPHASE)).as_dict() == {"C": 1, "C_ea": 1, "Q": 0}
    assert capacities(normal_form(ERASE)).as_dict() == {"C": 0, "C_ea": 0, "Q": 0}
    for _ in range(30):
        cap = capacities(normal_form(compile_circuit(random_circuit(2, 2, rng))))
        assert cap.Q <= cap.C <= cap.C_ea <= 2 * cap.C


def test_additivity_under_tensor(rng):
    for _ in range(10):
        f = compile_circuit(random_circuit(int(rng.integers(0, 3)), int(rng.integers(0, 3)), rng))
        g = compile_circuit(random_circuit(int(rng.integers(0, 3)), int(rng.integers(0, 3)), rng))
        nt, nf, ng = normal_form(tensor_channels(f, g)), normal_form(f), normal_form(g)
        assert nt.counts == {k: nf.counts[k] + ng.counts[k] for k in "abcde"}


def test_classification():
    assert classify_channel(HADAMARD) is ChannelClass.UNITARY
    assert classify_channel(chan("qubits 1\nprep0\n")) is ChannelClass.ISOMETRY
    assert classify_channel(chan("qubits 1\ndiscard 0\nprep0\nh 1\n")) is ChannelClass.STATE_RESET
    assert classify_channel(DEPHASE) is ChannelClass.GENERAL
    assert classify_channel(unitary_channel(clifford_from_gate("CZ", (0, 1), 2))) is ChannelClass.UNITARY


def test_equivalence_examples():
    assert channels_equivalent(DEPHASE, chan("qubits 1\nprep0\ncnot 0 1\ndiscard 1\n"))
    assert channels_equivalent(chan("qubits 1\nh 0\nh 0\n"), IDENTITY)
    assert not channels_equivalent(DEPHASE, IDENTITY)
    with pytest.raises(ChannelError):
        channels_equivalent(IDENTITY, PREP0)


def test_report_schema():
    rep = channel_report(DEPHASE, ["quantum"])
    assert list(rep) == [
        "n_in",
        "n_out",
        "counts",
        "capacities",
        "class",
        "encoder_gates",
        "decoder_gates",
        "choi_tableau",
        "output_roles",
    ]
    assert rep["counts"] == {"a": 0, "b": 0, "c": 0, "d": 0, "e": 1}
