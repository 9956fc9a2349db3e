import numpy as np
import pytest

from aaalawson import aaa, barycentric, lawson
from aaalawson.aaa import SampleSet
from aaalawson.barycentric import ALPHA_BETA, BarycentricRational
from aaalawson.errors import ConsistencyError, InputError
from aaalawson.lawson import LawsonConfig
from aaalawson.logger import HistoryLogger
from conftest import circle_samples


def _random_problem(rng, M=30, n=3):
    z = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    f = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    samples = SampleSet(z, f)
    idx = rng.choice(M, n + 1, replace=False)
    w = rng.uniform(0, 1, M)
    gamma = rng.standard_normal(2 * n + 2) + 1j * rng.standard_normal(2 * n + 2)
    return samples, z[idx], idx, w, gamma / np.linalg.norm(gamma)


def test_config_validation():
    with pytest.raises(InputError):
        LawsonConfig(nsteps=-1)
    with pytest.raises(InputError):
        LawsonConfig(update_exponent=0)
    with pytest.raises(InputError):
        LawsonConfig(initial_weights=[0, 0])
    with pytest.raises(InputError):
        LawsonConfig(initial_weights=[1, -1])
    assert LawsonConfig().nsteps == 20
    assert LawsonConfig().keep_best


def test_matrix_hand_computed():
    samples = SampleSet([0, 1], [5, 7])
    A = lawson.lawson_matrix(samples, [0], [0], [1, 1])
    np.testing.assert_array_equal(A, [[1, -5], [1, -7]])


def test_matrix_shape():
    samples = circle_samples(np.exp, npts=1000)
    A = lawson.lawson_matrix(samples, samples.points[:13], range(13), np.ones(1000))
    assert A.shape == (1000, 26)


def test_matrix_termwise(rng):
    samples, t, idx, w, gamma = _random_problem(rng)
    A = lawson.lawson_matrix(samples, t, idx, w)
    alpha, beta = gamma[:4], gamma[4:]
    total = 0.0
    for j, (z, f) in enumerate(zip(samples.points, samples.values)):
        if j in idx:
            k = list(idx).index(j)
            total += w[j] * abs(alpha[k] - f * beta[k]) ** 2
        else:
            total += w[j] * abs(np.sum(alpha / (z - t)) - f * np.sum(beta / (z - t))) ** 2
    assert np.linalg.norm(A @ gamma) ** 2 == pytest.approx(total, rel=1e-12)


def test_special_row_identity(rng):
    samples, t, idx, w, gamma = _random_problem(rng)
    A = lawson.lawson_matrix(samples, t, idx, w)
    for k, j in enumerate(idx):
        lhs = abs(A[j] @ gamma) ** 2
        rhs = w[j] * abs(samples.values[j] * gamma[4 + k] - gamma[k]) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-14)


def test_support_not_a_sample():
    samples = SampleSet([0, 1, 2], [1, 2, 3])
    with pytest.raises(ConsistencyError):
        lawson.lawson_matrix(samples, [0.5], [0], [1, 1, 1])
    with pytest.raises(ConsistencyError):
        lawson.support_indices_of(samples, [0.5])


def test_nonlinear_errors_exact_data():
    P = np.polynomial.polynomial
    z = np.exp(2j * np.pi * np.arange(12) / 12)
    r = barycentric.from_quotient([1, 2], [3, 0, 1], z[:3])
    samples = SampleSet(z, P.polyval(z, [1, 2]) / P.polyval(z, [3, 0, 1]))
    errors = lawson.nonlinear_errors(samples, z[:3], [0, 1, 2], r.gamma)
    assert np.abs(errors).max() < 1e-13


def test_nonlinear_errors_match_evaluate(rng):
    samples, t, idx, _, gamma = _random_problem(rng)
    errors = lawson.nonlinear_errors(samples, t, idx, gamma)
    r = BarycentricRational(t, gamma[:4], gamma[4:])
    expected = [f - barycentric.evaluate(r, z) for z, f in zip(samples.points, samples.values)]
    np.testing.assert_allclose(errors, expected, rtol=1e-14)


def test_update_rule():
    config = LawsonConfig()
    np.testing.assert_array_equal(lawson._update(np.ones(2), np.array([2.0, 1.0]), config),
            [1, 0.5])
    w = np.array([0.2, 1.0, 0.5])
    np.testing.assert_allclose(lawson._update(w, np.full(3, 0.3), config), w / w.max())
    assert lawson._update(w, np.zeros(3), config) is None
    squared = lawson._update(np.ones(2), np.array([2.0, 1.0]), LawsonConfig(update_exponent=2))
    np.testing.assert_array_equal(squared, [1, 0.25])


def test_step_invariants():
    samples = circle_samples(np.exp)
    r0, _ = aaa.aaa_fit(samples, 5)
    idx = lawson.support_indices_of(samples, r0.support_points)
    config = LawsonConfig()
    state = lawson.initial_state(r0, samples, config)
    rng = np.random.default_rng(3)
    zero_before = None
    for _ in range(10):
        A = lawson.lawson_matrix(samples, r0.support_points, idx, state.weights)
        state = lawson.lawson_step(state, samples, r0.support_points, idx, config)
        assert state.weights.max() == 1.0
        assert abs(np.linalg.norm(state.gamma) - 1) < 1e-14
        assert len(state.history) == state.step
        # linearized optimality against random unit vectors
        U = rng.standard_normal((12, 100)) + 1j * rng.standard_normal((12, 100))
        U /= np.linalg.norm(U, axis=0)
        fro = np.linalg.norm(A)
        assert np.all(np.linalg.norm(A @ U, axis=0) >= np.linalg.norm(A @ state.gamma)
                - 1e-12 * fro)
        if zero_before is not None:
            assert np.all(state.weights[zero_before] == 0)
        zero_before = state.weights == 0


def test_nsteps_zero():
    samples = circle_samples(np.exp)
    r0, _ = aaa.aaa_fit(samples, 5)
    r, state, reverted = lawson.lawson_run(samples, r0, LawsonConfig(nsteps=0))
    assert r is r0 and not reverted
    assert state.history == []


def test_expz_degree5():
    samples = circle_samples(np.exp)
    r0, trace = aaa.aaa_fit(samples, 5)
    r, state, reverted = lawson.lawson_run(samples, r0)
    assert not reverted and r.mode == ALPHA_BETA
    mx, _, _ = barycentric.max_error(r, samples)
    assert 9.944144081e-11 <= mx <= 1.01e-10
    assert state.history[-1] == pytest.approx(9.944364e-11, rel=0.01)
    assert state.history[-1] < state.history[0]
    # no longer interpolates at the support points
    idx = lawson.support_indices_of(samples, r.support_points)
    assert np.any(r(r.support_points) != samples.values[idx])


def test_expz_degree3():
    samples = circle_samples(np.exp)
    r0, _ = aaa.aaa_fit(samples, 3)
    r, _, _ = lawson.lawson_run(samples, r0)
    mx, _, _ = barycentric.max_error(r, samples)
    assert mx == pytest.approx(9.9318e-6, rel=1e-3)


@pytest.mark.parametrize('keep_best', [True, False])
def test_keep_best_dominance(keep_best):
    samples = circle_samples(lambda z: np.tan(2 * np.pi * z), npts=1000)
    r0, trace = aaa.aaa_fit(samples, 12)
    r, state, reverted = lawson.lawson_run(samples, r0, LawsonConfig(keep_best=keep_best))
    mx, _, _ = barycentric.max_error(r, samples)
    if reverted:
        assert mx == pytest.approx(trace.errors[-1], rel=1e-12)
    else:
        assert mx < trace.errors[-1]
        if keep_best:
            steps = enumerate(state.history, start=1)
            assert mx == min(h for s, h in steps if s not in state.divergent_steps)
        else:
            assert mx == state.max_error


def test_history_logger(tmp_path):
    samples = circle_samples(np.exp)
    r0, _ = aaa.aaa_fit(samples, 3)
    hist = HistoryLogger('expz')
    path = tmp_path / 'history.csv'
    hist.init(str(path), buffer_max_elem=7)
    _, state, _ = lawson.lawson_run(samples, r0, LawsonConfig(nsteps=15), history_logger=hist)
    hist.shutdown()
    lines = path.read_text().splitlines()
    assert lines[0] == 'step,max_error'
    assert len(lines) == 16
    rows = [line.split(',') for line in lines[1:]]
    assert [int(s) for s, _ in rows] == list(range(1, 16))
    assert [float(e) for _, e in rows] == state.history


def test_weighted_run_reduces_weighted_error():
    samples = circle_samples(np.exp)
    u = 1 + samples.points.real ** 2
    r0, _ = aaa.aaa_fit(samples, 4)
    config = LawsonConfig(initial_weights=u)
    r, state, reverted = lawson.lawson_run(samples, r0, config)
    _, _, e0 = barycentric.max_error(r0, samples)
    _, _, e = barycentric.max_error(r, samples)
    scaled = u / u.max()
    assert not reverted
    assert np.max(scaled * np.abs(e)) < np.max(scaled * np.abs(e0))
    assert state.history[-1] == pytest.approx(np.max(scaled * np.abs(state.errors)))


def test_divergent_step_keeps_previous_gamma(monkeypatch):
    samples = circle_samples(np.exp)
    r0, _ = aaa.aaa_fit(samples, 3)
    real_errors = lawson.nonlinear_errors
    calls = []

    def flaky(samples, support_points, support_indices, gamma):
        calls.append(1)
        e = real_errors(samples, support_points, support_indices, gamma)
        if len(calls) == 3:
            e = e.copy()
            e[0] = np.inf
        return e

    monkeypatch.setattr(lawson, 'nonlinear_errors', flaky)
    config = LawsonConfig(nsteps=5)
    idx = lawson.support_indices_of(samples, r0.support_points)
    state = lawson.initial_state(r0, samples, config)
    for _ in range(2):
        state = lawson.lawson_step(state, samples, r0.support_points, idx, config)
    before = state
    state = lawson.lawson_step(state, samples, r0.support_points, idx, config)
    assert state.divergent_steps == [3]
    assert np.array_equal(state.gamma, before.gamma)
    assert state.max_error == before.max_error
    assert state.history[-1] == np.inf
    assert state.weights.max() == 1.0
