"""Package-level acceptance checks.

Each test prints exactly one ACCEPTANCE line (PASS or FAIL) so a log scan
shows the whole gate at a glance.  The tests run in definition order; the
state-boundedness check audits every reservoir run performed by the
criteria before it via the esn.state_observer hook.
"""

import io
import time

import numpy as np
import pytest

from esnboost import esn
from esnboost.boosting import (EnsembleModel, baseline_fit, baseline_predict,
                               l2boost_fit, train_single_esn)
from esnboost.datasets import NARMA_COEFFS, gen_freedman, gen_henon, gen_narma
from esnboost.esn import EsnParams, esn_predict, init_reservoir, run_reservoir
from esnboost.harness import (BENCHMARK_DEFAULTS, BENCHMARKS, N_INPUT_UNITS,
                              ExperimentConfig, load_benchmark,
                              run_experiment, sweep, write_records_csv)
from esnboost.metrics import evaluate
from esnboost.numerics import Rng, ridge_fit

_AUDIT = {"runs": 0, "max_abs": 0.0}


@pytest.fixture(scope="module", autouse=True)
def _state_audit():
    """Record the largest |state| seen across every reservoir run."""

    def observer(states):
        _AUDIT["runs"] += 1
        if states.size:
            _AUDIT["max_abs"] = max(_AUDIT["max_abs"],
                                    float(np.max(np.abs(states))))

    previous = esn.state_observer
    esn.state_observer = observer
    yield
    esn.state_observer = previous


def _emit(capsys, number, ok, detail):
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"ACCEPTANCE {number} {status} - {detail}")


def _brute_force_ridge(x, y, gamma):
    """Independent ridge solve: plain LU on the augmented normal equations."""
    rows, d = x.shape
    a = np.hstack([x, np.ones((rows, 1))])
    g = a.T @ a
    g[np.arange(d), np.arange(d)] += gamma
    coef = np.linalg.solve(g, a.T @ y)
    return coef[:-1].T, coef[-1]


def _training_data(benchmark, seed, laser_file):
    overrides = {"seed": seed}
    if benchmark == "laser":
        overrides["data_path"] = str(laser_file)
    cfg = ExperimentConfig.for_benchmark(benchmark, **overrides)
    train, _ = load_benchmark(cfg)
    return train


def test_criterion_1_ridge_oracle(capsys):
    """The Cholesky ridge solver agrees with a brute-force LU solve."""
    start = time.perf_counter()
    ok = False
    worst = 0.0
    try:
        rng = np.random.default_rng(0)
        gammas = [0.0, 1e-5, 1e-3, 1.0]
        for i in range(100):
            d = int(rng.integers(1, 11))
            rows = int(rng.integers(d + 2, 51))
            x = rng.normal(size=(rows, d))
            y = rng.normal(size=(rows, 1))
            gamma = gammas[i % len(gammas)]
            readout = ridge_fit(x, y, gamma)
            w, b = _brute_force_ridge(x, y, gamma)
            worst = max(worst,
                        float(np.max(np.abs(readout.weights - w))),
                        float(np.max(np.abs(readout.intercept - b))))
        assert worst < 1e-8, worst
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"took {elapsed:.1f}s"
        ok = True
    finally:
        _emit(capsys, 1, ok,
              f"ridge matches brute-force oracle, worst diff {worst:.2e}")


def test_criterion_2_training_error_monotone(capsys, laser_file):
    """Ten boosting stages never increase post-washout training SSE."""
    start = time.perf_counter()
    ok = False
    worst_rise = -np.inf
    try:
        for benchmark in BENCHMARKS:
            gamma = BENCHMARK_DEFAULTS[benchmark]["gamma"]
            n_inputs = N_INPUT_UNITS[benchmark]
            for seed in range(10):
                train = _training_data(benchmark, seed, laser_file)
                for n_reservoir in range(6, 13):
                    params = EsnParams(n_inputs=n_inputs,
                                       n_reservoir=n_reservoir, seed=seed)
                    for mode in ("fresh", "shared"):
                        model = l2boost_fit(train, 10, params, gamma,
                                            mode=mode)
                        rise = float(np.max(np.diff(model.train_sse)))
                        worst_rise = max(worst_rise, rise)
                        assert rise <= 1e-9, (benchmark, seed, n_reservoir,
                                              mode, rise)
        elapsed = time.perf_counter() - start
        assert elapsed < 120.0, f"took {elapsed:.1f}s"
        ok = True
    finally:
        _emit(capsys, 2, ok,
              f"training SSE non-increasing over 700 runs, worst rise "
              f"{worst_rise:.2e}")


def test_criterion_3_henon_error_plateau(capsys):
    """On the noisy Henon task the fit improves into stage 4 and then
    plateaus: stages 4 and 5 agree to 5% for at least 9 of 10 seeds at
    every reservoir size."""
    start = time.perf_counter()
    ok = False
    tally = {}
    try:
        datasets = {}
        for seed in range(10):
            cfg = ExperimentConfig.for_benchmark(
                "henon", seed=seed, noise_sigma=float(np.sqrt(0.05)))
            datasets[seed], _ = load_benchmark(cfg)
        for n_reservoir in range(6, 13):
            good = 0
            for seed in range(10):
                params = EsnParams(n_inputs=3, n_reservoir=n_reservoir,
                                   seed=seed)
                model = l2boost_fit(datasets[seed], 5, params, 1e-3,
                                    mode="shared")
                sse3, sse4, sse5 = model.train_sse[3:6]
                improves = sse4 <= sse3 * (1.0 + 1e-12)
                plateaus = abs(sse4 - sse5) <= 0.05 * sse4
                good += int(improves and plateaus)
            tally[n_reservoir] = good
            assert good >= 9, (n_reservoir, good)
        elapsed = time.perf_counter() - start
        assert elapsed < 180.0, f"took {elapsed:.1f}s"
        ok = True
    finally:
        counts = ", ".join(f"{ns}:{n}/10" for ns, n in sorted(tally.items()))
        _emit(capsys, 3, ok, f"Henon stage-4 plateau per size [{counts}]")


def test_criterion_4_generator_exactness(capsys):
    """Opening values of each synthetic generator match hand arithmetic."""
    start = time.perf_counter()
    ok = False
    try:
        tent = gen_freedman(5, y0=0.23719).values
        assert tent[1] == 0.47438
        assert tent[2] == 0.94876
        assert abs(tent[3] - 0.10248) < 1e-15

        henon = gen_henon(4, Rng(0), noise_sigma=0.0,
                          y_init=(0.5, 0.5)).values
        assert abs(henon[2] - 0.8) < 1e-12
        assert abs(henon[3] - 0.254) < 1e-12

        narma = gen_narma(10, NARMA_COEFFS[10], 12, Rng(0),
                          driver=np.zeros(12)).values
        assert abs(narma[1] - 0.1) < 1e-12
        assert abs(narma[2] - 0.1305) < 1e-12

        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.1f}s"
        ok = True
    finally:
        _emit(capsys, 4, ok,
              "tent 0.47438/0.94876/0.10248, Henon 0.8/0.254, "
              "NARMA 0.1/0.1305")


def test_criterion_5_metric_identities(capsys):
    """NMSE of a perfect fit is 0, of the mean predictor 1; NRMSE^2=NMSE."""
    start = time.perf_counter()
    ok = False
    try:
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(10, 201))
            targets = rng.normal(size=(n, 1))
            perfect = evaluate(targets, targets)
            assert perfect.nmse == 0.0

            mean_pred = np.full_like(targets, targets.mean())
            assert abs(evaluate(mean_pred, targets).nmse - 1.0) <= 1e-12

            noisy = evaluate(rng.normal(size=(n, 1)), targets)
            assert abs(noisy.nrmse ** 2 - noisy.nmse) <= 1e-12
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.1f}s"
        ok = True
    finally:
        _emit(capsys, 5, ok, "metric identities on 50 random vectors")


def test_criterion_6_narma10_sanity_bound(capsys):
    """Boosted weak reservoirs reach a sane NARMA-10 test error."""
    start = time.perf_counter()
    ok = False
    best = np.inf
    try:
        for seed in range(10):
            cfg = ExperimentConfig.for_benchmark(
                "narma10", method="boost", n_stages=6, n_reservoir=100,
                seed=seed)
            record = run_experiment(cfg)
            best = min(best, record.test_nmse)
        assert best <= 0.5, best
        elapsed = time.perf_counter() - start
        assert elapsed < 120.0, f"took {elapsed:.1f}s"
        ok = True
    finally:
        _emit(capsys, 6, ok,
              f"best-of-10 NARMA-10 test NMSE {best:.4f} <= 0.5")


def test_criterion_7_baseline_identities(capsys):
    """A 1-member ensemble is a single network; clones average to a clone."""
    ok = False
    try:
        cfg = ExperimentConfig.for_benchmark("freedman")
        train, _ = load_benchmark(cfg)
        params = EsnParams(n_inputs=1, n_reservoir=20, seed=3)

        reservoir, readout = train_single_esn(train, params, cfg.gamma)
        single = esn_predict(reservoir, readout, train.inputs)
        one = baseline_fit(train, 1, params, cfg.gamma)
        np.testing.assert_array_equal(baseline_predict(one, train.inputs),
                                      single)

        clones = EnsembleModel(members=[(reservoir, readout)] * 7)
        diff = np.max(np.abs(baseline_predict(clones, train.inputs) - single))
        assert diff < 1e-12, diff
        ok = True
    finally:
        _emit(capsys, 7, ok,
              "1-member ensemble bit-equal, 7 clones average to member")


def test_criterion_8_states_bounded(capsys):
    """Every reservoir state observed so far lies strictly inside (-1, 1)."""
    ok = False
    try:
        assert _AUDIT["runs"] > 0
        assert _AUDIT["max_abs"] < 1.0, _AUDIT["max_abs"]

        reservoir = init_reservoir(EsnParams(n_inputs=1, n_reservoir=30,
                                             seed=11))
        states = run_reservoir(reservoir,
                               np.random.default_rng(2).normal(size=(500, 1)))
        assert float(np.max(np.abs(states))) < 1.0
        ok = True
    finally:
        _emit(capsys, 8, ok,
              f"max |state| {_AUDIT['max_abs']:.6f} over "
              f"{_AUDIT['runs']} audited runs")


def test_criterion_9_sweep_determinism(capsys):
    """Rerunning a full sweep reproduces the CSV byte for byte, apart
    from the wall-clock column."""
    start = time.perf_counter()
    ok = False
    try:
        base = ExperimentConfig.for_benchmark("freedman", method="boost",
                                              repetitions=3)
        sizes = list(range(6, 13))
        stages = [0, 3, 6]

        def run_once():
            records = sweep(base, sizes, stages)
            buf = io.StringIO()
            write_records_csv(records, buf)
            lines = buf.getvalue().splitlines()
            return [line.rsplit(",", 1)[0] for line in lines]

        first = run_once()
        second = run_once()
        assert len(first) == 1 + len(sizes) * len(stages) * 3
        assert first == second
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"took {elapsed:.1f}s"
        ok = True
    finally:
        _emit(capsys, 9, ok,
              f"63-cell sweep rerun byte-identical minus wall_ms")
