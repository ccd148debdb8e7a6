import numpy as np
import pytest

from cliffchan.clifford import random_clifford
from cliffchan.oracle import dense_clifford, dense_pauli, dense_state, ket, projector
from cliffchan.pauli import PauliOperator, pauli_parse
from cliffchan.stabstate import (
    StabilizerError,
    StabilizerGroupState,
    apply_clifford_state,
    chaotic_state,
    classical_affine_support,
    clifford_preparing,
    expectation_pauli,
    from_generators,
    is_similar,
    make_named,
    parse_tableau,
    partial_trace,
    purify,
    random_state,
    zero_state,
)


def dense_partial_trace(rho, keep, n):
    """Trace out every qubit not in ``keep``; survivors stay in ascending order."""
    t = rho.reshape([2] * (2 * n))
    for q in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=q, axis2=t.ndim // 2 + q)
    return t.reshape(1 << len(keep), 1 << len(keep))


def test_named_states_dense():
    assert np.allclose(dense_state(zero_state(1)), np.diag([1, 0]))
    assert np.allclose(dense_state(chaotic_state(1)), np.eye(2) / 2)
    assert np.allclose(dense_state(make_named("sigma")), np.diag([0.5, 0, 0, 0.5]))
    bell = (ket("00") + ket("11")) / np.sqrt(2)
    assert np.allclose(dense_state(make_named("bell")), projector(bell))
    ghz = (ket("000") + ket("111")) / np.sqrt(2)
    assert np.allclose(dense_state(make_named("ghz", 3)), projector(ghz))
    assert np.allclose(dense_state(make_named("minus")), projector((ket("0") - ket("1")) / np.sqrt(2)))


def test_from_generators_validation():
    with pytest.raises(StabilizerError):
        from_generators(["XI", "ZI"])
    with pytest.raises(StabilizerError):
        from_generators(["iX"])
    with pytest.raises(StabilizerError):
        from_generators(["XX", "ZZ", "YY"])  # XX * ZZ = -YY
    s = from_generators(["XX", "ZZ", "-YY", "II"])
    assert s.rank == 2 and s.is_pure
    with pytest.raises(StabilizerError):
        from_generators([])


def test_group_equality_ignores_generator_choice():
    a = from_generators(["XX", "ZZ"])
    b = from_generators(["-YY", "ZZ"])
    assert a == b and hash(a) == hash(b)
    assert a != from_generators(["XX", "-ZZ"])
    assert a.canonicalize().generators == b.canonicalize().generators


@pytest.mark.parametrize("n", [1, 2, 3])
def test_expectation_matches_dense(n, rng):
    for _ in range(5):
        s = random_state(n, int(rng.integers(0, n + 1)), rng)
        rho = dense_state(s)
        assert np.isclose(np.trace(rho), 1)
        assert np.linalg.matrix_rank(rho, tol=1e-9) == 2 ** (n - s.rank)
        for x in range(1 << n):
            for z in range(1 << n):
                p = PauliOperator.hermitian(n, x, z)
                assert np.isclose(expectation_pauli(s, p), np.trace(rho @ dense_pauli(p)).real)


@pytest.mark.parametrize("keep", [[0], [1, 2], [2, 0], [0, 1, 2]])
def test_partial_trace_matches_dense(keep, rng):
    for _ in range(5):
        s = random_state(3, int(rng.integers(0, 4)), rng)
        got = dense_state(partial_trace(s, sorted(keep)))
        assert np.allclose(got, dense_partial_trace(dense_state(s), keep, 3))
    # order follows ``keep``
    s = from_generators(["ZI"])
    assert partial_trace(s, [1, 0]) == from_generators(["IZ"])


def test_purify_is_pure_with_right_marginal(rng):
    for _ in range(10):
        s = random_state(3, int(rng.integers(0, 4)), rng)
        p = purify(s)
        assert p.is_pure and p.n == 6 - s.rank
        assert partial_trace(p, [0, 1, 2]) == s


def test_clifford_preparing(rng):
    s = random_state(3, 2, rng)
    u = clifford_preparing(s)
    base = from_generators(["ZII", "IZI"])
    assert apply_clifford_state(u, base) == s


def test_apply_clifford_state_matches_dense(rng):
    s = random_state(2, 1, rng)
    u = random_clifford(2, rng)
    m = dense_clifford(u)
    assert np.allclose(dense_state(apply_clifford_state(u, s)), m @ dense_state(s) @ m.conj().T)


def test_classical_affine_support():
    s = from_generators(["ZZI", "-IZZ"])
    supp = classical_affine_support(s)
    assert supp.bitstrings() == ["001", "110"]
    assert classical_affine_support(make_named("plus")) is None


def test_is_similar_finds_pauli_witness():
    s, t = from_generators(["XX", "ZZ"]), from_generators(["-XX", "ZZ"])
    w = is_similar(s, t)
    assert w is not None
    assert apply_clifford_state(_pauli_clifford(w), s) == t
    assert is_similar(s, from_generators(["XX", "-YY"])) == PauliOperator(2)
    assert is_similar(make_named("plus"), zero_state(1)) is None


def _pauli_clifford(w):
    from cliffchan.clifford import CliffordUnitary, conjugate_pauli

    n = w.n
    base = CliffordUnitary.identity(n)
    flip = lambda p: p if p.commutes(w) else -p  # noqa: E731
    return CliffordUnitary(n, tuple(map(flip, base.x_images)), tuple(map(flip, base.z_images)))


def test_parse_tableau():
    s = parse_tableau("# bell\n+XX\n\n+ZZ  # second\n")
    assert s == make_named("bell")
    assert parse_tableau("", n=2) == chaotic_state(2)
    with pytest.raises(StabilizerError):
        parse_tableau("")
    with pytest.raises(StabilizerError, match="line 2"):
        parse_tableau("+XX\n+QQ\n")


def test_to_text_and_tensor():
    s = make_named("plus") @ zero_state(1)
    assert s.to_text() == "+XI\n+IZ\n"
    assert isinstance(s, StabilizerGroupState)
