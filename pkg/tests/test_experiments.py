import json
import math

import pytest

from hypcount.experiments import (
    CountingFunction,
    ExperimentReport,
    error_envelope,
    error_series,
    mean_value_report,
    mean_value_statistic,
    omega_experiment,
    omega_step,
    truncate_for_budget,
)
from hypcount.numerics import to_mpf
from hypcount.spectral import Spectrum, main_term


@pytest.fixture(scope="module")
def empty(bolza):
    return Spectrum((), float(bolza.len_l))


def test_report_serialization():
    rep = ExperimentReport("error_series", {"b": 1, "a": [1.0, 2.0]}, ["x", "y"],
                           [[1.0, 0.1234567890123456789], [2.0, float("nan")]], {"c": 1 / 3}, "pass", "crit")
    assert rep.column("x") == [1.0, 2.0]
    assert rep.to_csv().splitlines()[0] == "x,y"
    doc = json.loads(rep.to_json({"seed": 7}))
    assert list(doc) == sorted(doc) and doc["verdict"] == "pass" and doc["config"] == {"seed": 7}
    assert rep.to_json({"seed": 7}) == rep.to_json({"seed": 7})


def test_counting_function_matches_table(bolza_table_400):
    N = CountingFunction(bolza_table_400)
    for X in (1, 9.99, 10, 57.3, 400):
        assert N(X) == bolza_table_400.count(X)


def test_error_series_rows(bolza, empty, bolza_table_400):
    rep = error_series(bolza, empty, [50, 10, 25], table=bolza_table_400)
    xs = rep.column("X")
    assert xs == sorted(xs)
    for row in rep.rows:
        X, n, M, E = row[:4]
        assert E == pytest.approx(n - M) and n == bolza_table_400.count(X)
    assert rep.verdict in ("pass", "fail")


def test_envelope_dominates_dense_sampling(bolza, empty, bolza_table_400):
    env = error_envelope(bolza, empty, 400, bolza_table_400, lowest=25)
    assert [hi for _, hi, _ in env] == [50, 100, 200, 400]
    N = CountingFunction(bolza_table_400)
    vol, L = to_mpf(bolza.covolume), to_mpf(bolza.len_l)
    for lo, hi, sup in env:
        sampled = max(abs(N(x) - float(main_term(empty, vol, L, x)))
                      for x in (lo + (hi - lo) * i / 4000 for i in range(4001)))
        # exact sup is at least the sampled one, and sampling gets close
        assert sampled <= sup + 1e-9
        assert sup - sampled <= 2 * float(main_term(empty, vol, L, 1)) * (hi - lo) / 4000 + 1e-9


def test_mean_value_constant_error():
    mv = mean_value_statistic(None, None, 50, samples=64, error_fn=lambda x: 3.0)
    assert mv.estimate == pytest.approx(9.0)
    assert mv.ratio == pytest.approx(9 / (50 * math.log(50) ** 2))
    with pytest.raises(ValueError):
        mean_value_statistic(None, None, 50, samples=8, error_fn=lambda x: 0)


def test_mean_value_linear_error_midpoint_rule():
    # (1/X) int_X^2X x^2 dx = 7 X^2 / 3; the midpoint rule is off by X^2 / (12 n^2)
    X, n = 10.0, 64
    mv = mean_value_statistic(None, None, X, samples=n, error_fn=lambda x: x)
    assert mv.estimate == pytest.approx(7 * X * X / 3 - X * X / (12 * n * n), rel=1e-12)


def test_mean_value_report(bolza, empty, bolza_table_400):
    rep = mean_value_report(bolza, empty, [100, 50], samples=64, table=bolza_table_400, ratio_bound=10)
    assert rep.column("X") == [50, 100] and rep.verdict == "pass"
    assert mean_value_report(bolza, empty, [50], samples=64, table=bolza_table_400).verdict == "inconclusive"


def test_truncate_for_budget():
    assert truncate_for_budget([1.0] * 20, 10, budget=10 ** 8) == 8
    assert truncate_for_budget([1.0] * 3, 10, budget=10 ** 8) == 3
    assert truncate_for_budget([1.0] * 5, 1.5) == 5


def test_omega_empty_spectrum_is_inconclusive(empty):
    rep = omega_experiment(empty, [0.2, 0.1])
    assert rep.verdict == "inconclusive"


def test_omega_step_is_seeded(synthetic):
    a = omega_step(synthetic, 0.2, seed=3, n_random=6)
    b = omega_step(synthetic, 0.2, seed=3, n_random=6)
    assert a == b
    assert a.defect < 4 * math.pi / a.T
    assert a.M <= a.R <= a.M * a.T ** a.n_used * (1 + 1e-12)
    # the aligned lower bound never exceeds the value it bounds
    assert a.aligned_floor <= a.e_resonant + 1e-9


def test_omega_report_layout(synthetic):
    rep = omega_experiment(synthetic, [0.1, 0.2], n_random=4)
    assert rep.column("eps") == [0.2, 0.1]
    assert "log_R^(1/4)" in rep.columns
    assert {"tau", "exponent_vs_sqrt_tau_over_eps"} <= set(rep.fitted_constants)
