"""Tests for reservoir construction, state evolution, and prediction."""

import numpy as np
import pytest

import esnboost.esn as esn_module
from esnboost.errors import ParameterError
from esnboost.esn import (EsnParams, Readout, Reservoir, build_features,
                          esn_predict, init_reservoir, run_reservoir)


def make_reservoir(w_in, w_r):
    """Reservoir with hand-picked matrices and wide enough declared ranges."""
    w_in = np.atleast_2d(np.asarray(w_in, dtype=float))
    w_r = np.atleast_2d(np.asarray(w_r, dtype=float))
    params = EsnParams(n_inputs=w_in.shape[1], n_reservoir=w_in.shape[0],
                       input_range=(-10, 10), reservoir_range=(-10, 10),
                       reservoir_density=1.0)
    return Reservoir(w_in=w_in, w_r=w_r, params=params)


class TestEsnParams:
    def test_default_ranges(self):
        p = EsnParams(n_inputs=1, n_reservoir=10)
        assert p.input_range == (-0.2, 0.2)
        assert p.reservoir_range == (-0.8, 0.8)
        assert p.reservoir_density == 0.1

    def test_validation(self):
        with pytest.raises(ParameterError):
            EsnParams(n_inputs=0, n_reservoir=5)
        with pytest.raises(ParameterError):
            EsnParams(n_inputs=1, n_reservoir=5, input_range=(1.0, -1.0))
        with pytest.raises(ParameterError):
            EsnParams(n_inputs=1, n_reservoir=5, reservoir_density=0.0)


class TestInitReservoir:
    def test_deterministic_in_seed(self):
        p = EsnParams(n_inputs=2, n_reservoir=30, seed=77)
        a, b = init_reservoir(p), init_reservoir(p)
        np.testing.assert_array_equal(a.w_in, b.w_in)
        np.testing.assert_array_equal(a.w_r, b.w_r)

    def test_ranges_respected(self):
        res = init_reservoir(EsnParams(n_inputs=3, n_reservoir=40, seed=1))
        assert np.all(np.abs(res.w_in) <= 0.2)
        assert np.all(np.abs(res.w_r) <= 0.8)

    def test_input_matrix_dense(self):
        res = init_reservoir(EsnParams(n_inputs=4, n_reservoir=50, seed=2))
        assert np.count_nonzero(res.w_in) == res.w_in.size

    def test_recurrent_sparsity(self):
        res = init_reservoir(EsnParams(n_inputs=1, n_reservoir=100, seed=3))
        nz = np.count_nonzero(res.w_r)
        # 3-sigma binomial band around 1000 of 10000
        assert 910 <= nz <= 1090

    def test_no_rescaling(self):
        # the raw draws go in as-is: densities aside, the recurrent matrix
        # of a wide range must keep entries near the range edges
        res = init_reservoir(EsnParams(n_inputs=1, n_reservoir=80, seed=4,
                                       reservoir_range=(-5.0, 5.0),
                                       reservoir_density=1.0))
        assert np.max(np.abs(res.w_r)) > 4.0


class TestRunReservoir:
    def test_zero_weights_zero_states(self):
        res = make_reservoir(np.zeros((3, 1)), np.zeros((3, 3)))
        states = run_reservoir(res, np.ones((10, 1)))
        np.testing.assert_array_equal(states, np.zeros((10, 3)))

    def test_scalar_recurrence_hand_values(self):
        res = make_reservoir([[0.1]], [[0.5]])
        states = run_reservoir(res, np.ones((2, 1)))
        assert abs(states[0, 0] - 0.099668) < 1e-5
        assert abs(states[1, 0] - 0.148724) < 1e-5

    def test_states_strictly_inside_unit_interval(self):
        res = init_reservoir(EsnParams(n_inputs=1, n_reservoir=60, seed=9,
                                       reservoir_range=(-3, 3)))
        states = run_reservoir(res, np.random.default_rng(0).normal(size=(300, 1)))
        assert np.max(np.abs(states)) < 1.0

    def test_initial_state_used(self):
        res = make_reservoir([[0.0]], [[0.5]])
        states = run_reservoir(res, np.zeros((1, 1)), s0=np.array([0.8]))
        assert abs(states[0, 0] - np.tanh(0.4)) < 1e-12

    def test_dimension_validation(self):
        res = make_reservoir(np.zeros((3, 1)), np.zeros((3, 3)))
        with pytest.raises(ParameterError):
            run_reservoir(res, np.ones((5, 2)))
        with pytest.raises(ParameterError):
            run_reservoir(res, np.ones((5, 1)), s0=np.zeros(2))

    def test_contractive_reservoir_forgets_initial_state(self):
        # small recurrent weights give a contraction; two different starts
        # converge, which is what washout relies on when dynamics are stable
        rng = np.random.default_rng(12)
        w_r = rng.uniform(-0.05, 0.05, size=(20, 20))
        w_in = rng.uniform(-0.2, 0.2, size=(20, 1))
        res = make_reservoir(w_in, w_r)
        x = rng.uniform(0, 1, size=(200, 1))
        a = run_reservoir(res, x, s0=np.zeros(20))
        b = run_reservoir(res, x, s0=np.full(20, 0.9))
        assert np.max(np.abs(a[-1] - b[-1])) < 1e-8

    def test_observer_hook_sees_states(self):
        seen = []
        old = esn_module.state_observer
        esn_module.state_observer = seen.append
        try:
            res = make_reservoir([[0.1]], [[0.2]])
            states = run_reservoir(res, np.ones((4, 1)))
        finally:
            esn_module.state_observer = old
        assert len(seen) == 1
        np.testing.assert_array_equal(seen[0], states)


class TestBuildFeatures:
    def test_concatenation(self):
        f = build_features(np.array([[1.0]]), np.array([[0.2, 0.3]]))
        np.testing.assert_allclose(f, [[1.0, 0.2, 0.3]])

    def test_empty_rows_keep_width(self):
        f = build_features(np.empty((0, 3)), np.empty((0, 50)))
        assert f.shape == (0, 53)

    def test_row_mismatch(self):
        with pytest.raises(ParameterError):
            build_features(np.ones((2, 1)), np.ones((3, 4)))


class TestEsnPredict:
    def test_zero_weights_constant_intercept(self):
        res = make_reservoir(np.zeros((3, 1)), np.zeros((3, 3)))
        readout = Readout(weights=np.zeros((1, 4)), intercept=np.array([2.5]))
        pred = esn_predict(res, readout, np.ones((6, 1)))
        np.testing.assert_allclose(pred, np.full((6, 1), 2.5))

    def test_equals_manual_pipeline(self):
        rng = np.random.default_rng(3)
        res = init_reservoir(EsnParams(n_inputs=2, n_reservoir=15, seed=5))
        readout = Readout(weights=rng.normal(size=(1, 17)),
                          intercept=rng.normal(size=1))
        x = rng.uniform(0, 1, size=(30, 2))
        manual = readout.predict(build_features(x, run_reservoir(res, x)))
        assert np.max(np.abs(esn_predict(res, readout, x) - manual)) < 1e-12

    def test_single_step_unrolled(self):
        res = make_reservoir([[0.3]], [[0.6]])
        readout = Readout(weights=np.array([[2.0, 1.0]]),
                          intercept=np.array([0.5]))
        s0 = np.array([0.4])
        x = np.array([[0.7]])
        state = np.tanh(0.3 * 0.7 + 0.6 * 0.4)
        want = 2.0 * 0.7 + 1.0 * state + 0.5
        got = esn_predict(res, readout, x, s0=s0)
        assert abs(got[0, 0] - want) < 1e-12

    def test_readout_width_checked(self):
        res = make_reservoir(np.zeros((3, 1)), np.zeros((3, 3)))
        readout = Readout(weights=np.zeros((1, 9)), intercept=np.zeros(1))
        with pytest.raises(ParameterError):
            esn_predict(res, readout, np.ones((2, 1)))

    def test_end_to_end_seed_determinism(self):
        p = EsnParams(n_inputs=1, n_reservoir=25, seed=123)
        x = np.random.default_rng(0).uniform(0, 1, size=(50, 1))
        readout = Readout(weights=np.ones((1, 26)), intercept=np.zeros(1))
        a = esn_predict(init_reservoir(p), readout, x)
        b = esn_predict(init_reservoir(p), readout, x)
        np.testing.assert_array_equal(a, b)
