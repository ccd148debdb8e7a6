import numpy as np
import pytest
from helpers import random_circuit

from cliffchan.circuit import compile_circuit, parse_circuit
from cliffchan.oracle import (
    GATE_MATRICES,
    DenseChannel,
    DensityMatrixError,
    SizeGuardError,
    all_paulis,
    check_stabilizer_preserving_dense,
    classify_observable_dense,
    dense_of_channel,
    dense_of_circuit,
    dense_pauli,
    dense_state,
    dephasing_channel,
    enumerate_pure_stabilizer_states,
    enumerate_stabilizer_orbit,
    enumerate_stabilizer_states,
    is_mixed_stabilizer_dense,
    ket,
    projector,
)
from cliffchan.pauli import PauliOperator, pauli_parse
from cliffchan.stabstate import chaotic_state, from_generators, make_named, zero_state

PLUS = (ket("0") + ket("1")) / np.sqrt(2)
T = GATE_MATRICES["T"]


def test_dense_state_examples():
    assert np.allclose(dense_state(zero_state(1)), np.diag([1, 0]))
    assert np.allclose(dense_state(chaotic_state(1)), np.eye(2) / 2)
    assert np.allclose(dense_state(make_named("sigma")), np.diag([0.5, 0, 0, 0.5]))


def test_size_guards_are_errors():
    with pytest.raises(SizeGuardError):
        dense_state(zero_state(13))
    with pytest.raises(SizeGuardError):
        enumerate_pure_stabilizer_states(5)
    with pytest.raises(SizeGuardError):
        is_mixed_stabilizer_dense(np.eye(64) / 64)
    with pytest.raises(SizeGuardError):
        dense_of_channel(compile_circuit(parse_circuit("qubits 6\n" + "prepx\n" * 3)))


def test_dense_channel_examples():
    ident = dense_of_channel(compile_circuit(parse_circuit("qubits 1\n")))
    rho = projector(np.array([0.6, 0.8j]))
    assert np.allclose(ident.apply(rho), rho)
    deph = dense_of_channel(compile_circuit(parse_circuit("qubits 1\ndephase 0\n")))
    assert np.allclose(deph.apply(projector(PLUS)), np.eye(2) / 2)
    circuit = dense_of_channel(compile_circuit(parse_circuit("qubits 1\nprep0\ncnot 0 1\ndiscard 1\n")))
    assert circuit.distance(dephasing_channel()) <= 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_compiled_channels_are_cptp(seed):
    rng = np.random.default_rng(seed)
    ch = dense_of_channel(compile_circuit(random_circuit(int(rng.integers(0, 3)), int(rng.integers(0, 3)), rng)))
    assert ch.is_cptp()


def test_kraus_and_linear_map_agree(rng):
    z = GATE_MATRICES["Z"]
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    assert DenseChannel.from_kraus(1, 1, [p0, p1]).distance(dephasing_channel()) <= 1e-12
    assert DenseChannel.from_kraus(1, 1, [np.eye(2) / np.sqrt(2), z / np.sqrt(2)]).distance(dephasing_channel()) <= 1e-12


def test_dense_tensor_and_then(rng):
    deph = dephasing_channel()
    h = DenseChannel.from_unitary(GATE_MATRICES["H"])
    both = deph.tensor(h)
    rho = projector(ket("01"))
    assert np.allclose(both.apply(rho), np.kron(deph.apply(projector(ket("0"))), h.apply(projector(ket("1")))))
    hdh = h.then(deph).then(h)
    assert np.allclose(hdh.apply(projector(PLUS)), projector(PLUS))


def test_enumeration_counts_and_order():
    one = enumerate_pure_stabilizer_states(1)
    assert [str(s.generators[0]) for s in one] == ["+Z", "-Z", "+X", "-X", "+Y", "-Y"]
    assert len(enumerate_pure_stabilizer_states(2)) == 60
    assert enumerate_pure_stabilizer_states(2)[0] == zero_state(2)
    for n in (1, 2, 3):
        a = enumerate_pure_stabilizer_states(n)
        assert len(set(a)) == len(a)
        assert set(a) == set(enumerate_stabilizer_orbit(n))


def test_mixed_enumeration_counts():
    assert [len(enumerate_stabilizer_states(2, k)) for k in range(3)] == [1, 30, 60]


def test_membership_passes_on_every_state_up_to_two_qubits():
    for n in (1, 2):
        for k in range(n + 1):
            for s in enumerate_stabilizer_states(n, k):
                res = is_mixed_stabilizer_dense(dense_state(s))
                assert res and res.state == s


def test_membership_witnesses():
    res = is_mixed_stabilizer_dense(projector(T @ PLUS))
    assert not res
    assert str(res.witness) == "+X" and res.value == pytest.approx(1 / np.sqrt(2))
    res = is_mixed_stabilizer_dense(0.5 * projector(ket("0")) + 0.5 * projector(PLUS))
    assert not res
    assert str(res.witness) == "+X" and res.value == pytest.approx(0.5)
    assert is_mixed_stabilizer_dense(np.eye(2) / 2)


def test_membership_rejects_invalid_density_matrices():
    with pytest.raises(DensityMatrixError):
        is_mixed_stabilizer_dense(np.diag([1.5, -0.5]))
    with pytest.raises(DensityMatrixError):
        is_mixed_stabilizer_dense(np.eye(2))


def test_observable_examples():
    zz = dense_pauli(pauli_parse("ZZ"))
    assert classify_observable_dense(zz).pauli == pauli_parse("ZZ")
    assert classify_observable_dense(np.zeros((2, 2))).kind == "Zero"
    assert classify_observable_dense(np.eye(4)).kind == "PlusIdentity"
    assert classify_observable_dense(-np.eye(2)).kind == "MinusIdentity"
    other = classify_observable_dense((GATE_MATRICES["X"] + GATE_MATRICES["Z"]) / np.sqrt(2))
    assert other.kind == "Other" and other.witness == zero_state(1)
    assert other.value == pytest.approx(1 / np.sqrt(2))
    with pytest.raises(DensityMatrixError):
        classify_observable_dense(2 * zz)


def test_observable_exhaustive_one_qubit():
    for p in all_paulis(1):
        for sign in (1, -1):
            q = p if sign > 0 else -p
            got = classify_observable_dense(dense_pauli(q))
            if p.is_identity():
                assert got.kind == ("PlusIdentity" if sign > 0 else "MinusIdentity")
            else:
                assert got.kind == "Pauli" and got.pauli == q


def test_observable_perturbations_are_other(rng):
    for _ in range(20):
        p = all_paulis(1)[int(rng.integers(1, 4))]
        h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        h = h + h.conj().T
        h /= np.abs(np.linalg.eigvalsh(h)).max()
        t = rng.uniform(0.1, 0.5)
        assert classify_observable_dense((1 - t) * dense_pauli(p) + t * h).kind == "Other"


def test_preserving_examples():
    rep = check_stabilizer_preserving_dense(dense_of_channel(compile_circuit(parse_circuit("qubits 1\nh 0\ndephase 0\n"))))
    assert rep.preserving and rep.choi_ok and rep.agree
    t_chan = DenseChannel.from_unitary(T)
    rep = check_stabilizer_preserving_dense(t_chan)
    assert not rep.preserving and not rep.choi_ok
    assert rep.witness == make_named("plus")
    assert rep.witness_result.value == pytest.approx(1 / np.sqrt(2))


def test_adaptive_example_fails_choi_membership():
    # measure in Z, then Hadamard controlled by the outcome
    h = GATE_MATRICES["H"]
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    ch = DenseChannel.from_linear_map(1, 1, lambda r: p0 @ r @ p0 + h @ p1 @ r @ p1 @ h)
    assert ch.is_cptp()
    rep = check_stabilizer_preserving_dense(ch)
    assert not rep.choi_ok
    assert rep.agree
    assert rep.witness == make_named("plus")


def test_direct_simulation_handles_classical_bits():
    c = parse_circuit("qubits 1\nh 0\nmeasure 0 -> b\nrandbit r\ncnotbit b r\n")
    ch = dense_of_circuit(c)
    out = ch.apply(projector(ket("0")))
    assert np.allclose(out, np.eye(4) / 4)
    c = parse_circuit("qubits 2\nmeasure 0 -> a\nmeasure 1 -> b\nprep0\nmeasure 2 -> c\nnotbit c\nandbit a b c\n")
    out = dense_of_circuit(c).apply(projector(ket("11")))
    assert np.allclose(out, projector(ket("110")))


def test_pauli_expectation_ordering():
    ps = all_paulis(2)
    assert [p.letters() for p in ps[:5]] == ["II", "IX", "IY", "IZ", "XI"]
    assert ps[0] == PauliOperator(2)
    assert from_generators(["XX"]).n == 2
