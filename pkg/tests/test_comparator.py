"""Tests for comparison strategies, bounds, uniqueness and witnesses."""

import numpy as np
import pytest

from chancomp.comparator import (
    Strategy,
    average_success,
    average_success_mc,
    identity_phase_gap,
    make_strategy,
    max_psd_scale,
    overall_success,
    random_unambiguous_ppovm,
    run_pair,
    sequential_witness,
    success_bound,
    twirl_choi,
    uniqueness_probe,
    verify_no_error,
)
from chancomp.haar import haar_sample
from chancomp.linalg import DimensionMismatchError, is_psd, max_abs, tensor, trace_product
from chancomp.qobj import Ppovm, QState, UnitaryOp, choi_of_unitary, choi_of_unitary_pair
from chancomp.symmetry import (
    build_split,
    random_antisymmetric_state,
    random_symmetric_state,
    uniform_antisymmetric_state,
    uniform_symmetric_state,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SINGLET_VEC = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
SINGLET = np.outer(SINGLET_VEC, SINGLET_VEC.conj())


def physical_p_diff(strategy, u, v):
    """State-evolution oracle for the detection probability."""
    uv = np.kron(u.mat, v.mat)
    out = uv @ strategy.xi.mat @ uv.conj().T
    return np.trace(out @ strategy.effects["diff"]).real


def test_twirl_choi_structure():
    for d in (2, 3):
        split = build_split(d)
        omega = twirl_choi(d)
        assert abs(np.trace(omega.mat).real - d * d) <= 1e-10
        expected = (
            tensor(split.p_plus, split.p_plus) / split.dim_plus
            + tensor(split.p_minus, split.p_minus) / split.dim_minus
        )
        assert max_abs(omega.mat - expected) <= 1e-12
        # support projector and rank d+^2 + d-^2
        rank = int(np.sum(np.linalg.eigvalsh(omega.mat) > 1e-10))
        assert rank == split.dim_plus ** 2 + split.dim_minus ** 2
    with pytest.raises(ValueError):
        twirl_choi(1)


def test_twirl_choi_support_projector_from_spectrum():
    d = 2
    split = build_split(d)
    omega = twirl_choi(d)
    vals, vecs = np.linalg.eigh(omega.mat)
    support = (vecs[:, vals > 1e-10]) @ (vecs[:, vals > 1e-10]).conj().T
    direct = tensor(split.p_plus, split.p_plus) + tensor(split.p_minus, split.p_minus)
    assert max_abs(support - direct) <= 1e-10


def test_twirl_choi_is_mean_of_identical_pairs():
    rng = np.random.default_rng(40)
    d, n = 2, 5000
    acc = np.zeros((16, 16), dtype=complex)
    for _ in range(n):
        u = haar_sample(d, rng)
        acc += choi_of_unitary_pair(u, u).mat
    assert max_abs(acc / n - twirl_choi(d).mat) <= 0.05


def test_identical_pair_choi_supported_inside_twirl_choi():
    rng = np.random.default_rng(41)
    for d in (2, 3):
        split = build_split(d)
        support = tensor(split.p_plus, split.p_plus) + tensor(split.p_minus, split.p_minus)
        comp = np.eye(support.shape[0]) - support
        for _ in range(5):
            u = haar_sample(d, rng)
            omega = choi_of_unitary_pair(u, u).mat
            assert max_abs(comp @ omega @ comp) <= 1e-10


def test_make_strategy_qubit_optimal():
    strategy = make_strategy("antisym_optimal", QState(SINGLET, [2, 2]))
    split = build_split(2)
    assert max_abs(strategy.m_diff - tensor(SINGLET.T, split.p_plus)) <= 1e-12
    assert max_abs(strategy.m_inconclusive - tensor(SINGLET.T, split.p_minus)) <= 1e-12
    assert set(strategy.ppovm.elements) == {"diff", "inconclusive"}  # no 'same' element


def test_make_strategy_symmetric_product_state():
    ket00 = np.zeros((4, 4), dtype=complex)
    ket00[0, 0] = 1.0
    strategy = make_strategy("symmetric", QState(ket00, [2, 2]))
    assert abs(average_success(strategy) - 0.25) <= 1e-12


def test_make_strategy_rejects_support_mismatch():
    ket00 = np.zeros((4, 4), dtype=complex)
    ket00[0, 0] = 1.0
    with pytest.raises(ValueError):
        make_strategy("antisym_optimal", QState(ket00, [2, 2]))
    with pytest.raises(ValueError):
        make_strategy("symmetric", QState(SINGLET, [2, 2]))
    with pytest.raises(ValueError):
        make_strategy("bogus", QState(SINGLET, [2, 2]))


def test_run_pair_no_error_on_identical_channels():
    # Both named strategies are unambiguous: identical channels never
    # trigger the conclusive outcome.
    rng = np.random.default_rng(42)
    for d in (2, 3):
        strategies = [
            make_strategy("antisym_optimal", random_antisymmetric_state(d, "mixed", rng)),
            make_strategy("symmetric", random_symmetric_state(d, "mixed", rng)),
        ]
        for strategy in strategies:
            for _ in range(50):
                u = haar_sample(d, rng)
                assert run_pair(strategy, u, u).p_diff <= 1e-10


def test_inconclusive_element_is_psd():
    # The complement rho^T (x) I - M_diff of the optimal strategy stays PSD.
    rng = np.random.default_rng(41)
    for d in (2, 3):
        strategy = make_strategy("antisym_optimal", random_antisymmetric_state(d, "mixed", rng))
        complement = tensor(strategy.xi.mat.T, np.eye(d * d)) - strategy.m_diff
        assert is_psd(complement, 1e-9)
        assert max_abs(complement - strategy.m_inconclusive) <= 1e-12


def test_run_pair_qubit_values():
    strategy = make_strategy("antisym_optimal", QState(SINGLET, [2, 2]))
    eye = UnitaryOp(np.eye(2))
    report = run_pair(strategy, eye, UnitaryOp(SX), seed=5)
    assert abs(report.p_diff - 1.0) <= 1e-12
    assert report.verdict == "different"
    assert report.seed == 5

    rng = np.random.default_rng(43)
    for _ in range(25):
        v = haar_sample(2, rng)
        report = run_pair(strategy, eye, v)
        closed_form = 1.0 - abs(np.trace(v.mat)) ** 2 / 4
        assert abs(report.p_diff - closed_form) <= 1e-10
        assert abs(report.p_diff + report.p_inconclusive - 1.0) <= 1e-9


def test_run_pair_closed_form_general_pairs():
    strategy = make_strategy("antisym_optimal", QState(SINGLET, [2, 2]))
    rng = np.random.default_rng(44)
    for _ in range(25):
        u, v = haar_sample(2, rng), haar_sample(2, rng)
        report = run_pair(strategy, u, v)
        closed_form = 1.0 - abs(np.trace(u.mat.conj().T @ v.mat)) ** 2 / 4
        assert abs(report.p_diff - closed_form) <= 1e-10
        assert abs(report.p_diff - physical_p_diff(strategy, u, v)) <= 1e-10


def test_run_pair_matches_explicit_choi_trace():
    rng = np.random.default_rng(45)
    for d in (2, 3):
        strategy = make_strategy("antisym_optimal", random_antisymmetric_state(d, "pure", rng))
        u, v = haar_sample(d, rng), haar_sample(d, rng)
        omega = choi_of_unitary_pair(u, v)
        direct = trace_product(omega.mat, strategy.m_diff).real
        assert abs(run_pair(strategy, u, v).p_diff - direct) <= 1e-10


def test_run_pair_dimension_mismatch():
    strategy = make_strategy("antisym_optimal", QState(SINGLET, [2, 2]))
    rng = np.random.default_rng(46)
    with pytest.raises(DimensionMismatchError):
        run_pair(strategy, haar_sample(3, rng), haar_sample(3, rng))


def test_run_pair_verdict_sampling_is_seeded():
    strategy = make_strategy("antisym_optimal", QState(SINGLET, [2, 2]))
    rng = np.random.default_rng(47)
    u, v = haar_sample(2, rng), haar_sample(2, rng)
    a = run_pair(strategy, u, v, seed=11)
    b = run_pair(strategy, u, v, seed=11)
    assert a == b


def test_average_success_values():
    assert abs(average_success(make_strategy("antisym_optimal", uniform_antisymmetric_state(2))) - 0.75) <= 1e-12
    assert abs(average_success(make_strategy("antisym_optimal", uniform_antisymmetric_state(3))) - 2 / 3) <= 1e-12
    assert abs(average_success(make_strategy("symmetric", uniform_symmetric_state(2))) - 0.25) <= 1e-12


def test_average_success_saturation_independent_of_test_state():
    rng = np.random.default_rng(48)
    for d in (2, 3, 4):
        for purity in ("pure", "mixed"):
            strategy = make_strategy("antisym_optimal", random_antisymmetric_state(d, purity, rng))
            assert abs(average_success(strategy) - success_bound(d)) <= 1e-12


def test_average_success_mc_agrees_with_analytic():
    rng = np.random.default_rng(49)
    strategy = make_strategy("antisym_optimal", uniform_antisymmetric_state(2))
    est = average_success_mc(strategy, 3000, rng)
    assert abs(est.mean - 0.75) <= 5 * est.std_error

    # Choi-path fallback used by custom strategies must agree as well.
    custom = Strategy(kind="custom", xi=strategy.xi, ppovm=strategy.ppovm, effects=None)
    est = average_success_mc(custom, 1500, rng)
    assert abs(est.mean - 0.75) <= 5 * est.std_error


def test_overall_success():
    optimal = make_strategy("antisym_optimal", uniform_antisymmetric_state(2))
    symmetric = make_strategy("symmetric", uniform_symmetric_state(2))
    assert abs(overall_success(optimal, 0.5) - 0.375) <= 1e-12
    assert abs(overall_success(symmetric, 0.5) - 0.125) <= 1e-12
    assert overall_success(optimal, 1 - 1e-12) <= 1e-9  # vanishes as the prior peaks
    for eta in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            overall_success(optimal, eta)


def test_verify_no_error_on_sound_strategies():
    rng = np.random.default_rng(50)
    for d in (2, 3):
        strategy = make_strategy("antisym_optimal", random_antisymmetric_state(d, "mixed", rng))
        report = verify_no_error(strategy.ppovm, 25, rng)
        assert report.max_residual <= 1e-10
        assert report.same_residual is None


def test_verify_no_error_flags_wrong_pairing():
    # Conclusive effect on P- with an antisymmetric test state is not
    # unambiguous: identical channels trigger it with certainty.
    rng = np.random.default_rng(51)
    xi = random_antisymmetric_state(3, "pure", rng)
    split = build_split(3)
    elements = {
        "diff": tensor(xi.mat.T, split.p_minus),
        "inconclusive": tensor(xi.mat.T, split.p_plus),
    }
    report = verify_no_error(Ppovm(elements, xi), 10, rng)
    assert report.twirl_residual > 0.5
    assert report.haar_max_residual > 0.5


def test_verify_no_error_flags_same_element():
    rng = np.random.default_rng(52)
    xi = QState(SINGLET, [2, 2])
    split = build_split(2)
    elements = {
        "diff": tensor(xi.mat.T, split.p_plus),
        "same": 0.5 * tensor(xi.mat.T, split.p_minus),
        "inconclusive": 0.5 * tensor(xi.mat.T, split.p_minus),
    }
    report = verify_no_error(Ppovm(elements, xi), 5, rng)
    assert report.same_residual is not None and report.same_residual > 0.01
    assert report.max_residual >= report.same_residual


def test_random_unambiguous_ppovm_properties():
    rng = np.random.default_rng(53)
    for d in (2, 3):
        bound = success_bound(d)
        for _ in range(100):
            ppovm = random_unambiguous_ppovm(d, rng)
            success = np.trace(ppovm.elements["diff"]).real / (d * d)
            assert success <= bound + 1e-9
        report = verify_no_error(ppovm, 10, rng)
        assert report.max_residual <= 1e-9


def test_random_unambiguous_ppovm_degenerate_rho():
    # A test state orthogonal to the conclusive operator's support forces
    # the scale to zero: the strategy is vacuous but still valid.
    rng = np.random.default_rng(54)
    ppovm = random_unambiguous_ppovm(2, rng, rho=QState(SINGLET, [2, 2]))
    assert max_abs(ppovm.elements["diff"]) <= 1e-9
    assert np.trace(ppovm.elements["diff"]).real / 4 <= 1e-9


def test_max_psd_scale_monotone_case():
    # base = I, k = diag(1, 1/2): the exact maximum is 1.
    base = np.eye(2, dtype=complex)
    k = np.diag([1.0, 0.5]).astype(complex)
    lam = max_psd_scale(base, k)
    assert abs(lam - 1.0) <= 1e-9


def test_uniqueness_probe_accepts_optimal():
    rng = np.random.default_rng(55)
    for d in (2, 3):
        for purity in ("pure", "mixed"):
            strategy = make_strategy("antisym_optimal", random_antisymmetric_state(d, purity, rng))
            probe = uniqueness_probe(strategy.ppovm)
            assert probe.optimal_form
            assert probe.deviation <= 1e-9


def test_uniqueness_probe_rejects_symmetric_and_random():
    rng = np.random.default_rng(56)
    symmetric = make_strategy("symmetric", random_symmetric_state(3, "mixed", rng))
    probe = uniqueness_probe(symmetric.ppovm)
    assert not probe.optimal_form
    assert probe.deviation > 1e-3

    for d in (2, 3):
        for _ in range(20):
            ppovm = random_unambiguous_ppovm(d, rng)
            probe = uniqueness_probe(ppovm)
            assert not probe.optimal_form
            # deviating PPOVMs sit measurably below the bound
            success = np.trace(ppovm.elements["diff"]).real / (d * d)
            assert success < success_bound(d) - 0.01
            assert probe.deviation > 1e-3


def test_sequential_witness_identity_case():
    w = UnitaryOp(np.eye(2))
    r = UnitaryOp(SX)
    u, v = sequential_witness(w, r)
    assert max_abs(u.mat - SX) <= 1e-12
    assert max_abs(v.mat - SX) <= 1e-12
    assert max_abs(u.mat @ v.mat - np.eye(2)) <= 1e-12


def test_sequential_witness_random_pairs():
    rng = np.random.default_rng(57)
    for d in (2, 3):
        for _ in range(10):
            w, r = haar_sample(d, rng), haar_sample(d, rng)
            u, v = sequential_witness(w, r)
            assert max_abs(u.mat @ v.mat - w.mat @ w.mat) <= 1e-10
            # both factors genuinely differ from w (up to global phase)
            assert identity_phase_gap(UnitaryOp(w.mat.conj().T @ u.mat)) > 1e-6
            assert identity_phase_gap(UnitaryOp(w.mat.conj().T @ v.mat)) > 1e-6
            # and the composed channels are indistinguishable
            uv = UnitaryOp(u.mat @ v.mat)
            ww = UnitaryOp(w.mat @ w.mat)
            assert max_abs(choi_of_unitary(uv).mat - choi_of_unitary(ww).mat) <= 1e-10


def test_sequential_witness_rejects_identity_r():
    rng = np.random.default_rng(58)
    w = haar_sample(3, rng)
    with pytest.raises(ValueError):
        sequential_witness(w, UnitaryOp(np.eye(3)))
    with pytest.raises(ValueError):
        sequential_witness(w, UnitaryOp(np.exp(0.7j) * np.eye(3)))
    with pytest.raises(DimensionMismatchError):
        sequential_witness(w, UnitaryOp(np.eye(2)))
