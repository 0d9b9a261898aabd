import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcount.errors import BudgetExceeded, DegenerateError
from hypcount.resonance import (
    Method,
    ResonanceRequest,
    chord,
    chord_bound,
    exact_defect,
    resonance_brute,
    resonance_find,
)


def check(req, res):
    assert req.M <= res.R <= req.M * req.T ** req.n * (1 + 1e-12)
    assert res.max_defect < req.bound
    # independent recomputation in plain floats with a generous margin
    worst = max(abs(complex(math.cos(r * res.R), math.sin(r * res.R)) - 1) for r in req.rs)
    assert worst < req.bound + 1e-6


def test_exact_period():
    res = resonance_find(ResonanceRequest((2 * math.pi,), 10, 4))
    assert res.R == pytest.approx(10) and res.k == 1


def test_two_frequencies():
    req = ResonanceRequest((1.0, math.sqrt(2)), 1, 4)
    res = resonance_find(req)
    assert res.R == 1 and res.method is Method.PIGEONHOLE
    check(req, res)


def test_brute_finds_smallest():
    req = ResonanceRequest((math.pi / 5,), 1, 8)
    res = resonance_brute(req)
    assert res.k == 1 and res.method is Method.BRUTE
    check(req, res)


def test_three_roots():
    req = ResonanceRequest((1.0, math.sqrt(2), math.sqrt(3)), 10, 8)
    a, b = resonance_find(req), resonance_brute(req)
    check(req, a)
    check(req, b)
    # brute returns the least admissible multiple, so never more than pigeonhole
    assert b.k <= a.k


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.5, 200), min_size=1, max_size=4, unique=True),
       st.floats(0.5, 50), st.floats(1.5, 10))
def test_property_random_requests(rs, M, T):
    if any(abs(a - b) < 1e-6 for a in rs for b in rs if a is not b):
        return
    req = ResonanceRequest(tuple(rs), M, T)
    if math.ceil(T ** len(rs)) > 10 ** 6:
        return
    a, b = resonance_find(req), resonance_brute(req)
    check(req, a)
    check(req, b)
    assert b.k <= a.k


def test_desk_grid_both_methods():
    rng = random.Random(4)
    for n in range(1, 7):
        for T in (2, 3.5, 6, 10):
            if T ** n > 10 ** 6:
                continue
            rs = tuple(rng.uniform(1, 100) for _ in range(n))
            req = ResonanceRequest(rs, rng.uniform(1, 20), T)
            check(req, resonance_find(req))
            check(req, resonance_brute(req))


@pytest.mark.parametrize("kw", [{"rs": ()}, {"M": 0}, {"T": 1}])
def test_request_validation(kw):
    args = {"rs": (1.0,), "M": 1.0, "T": 3.0}
    args.update(kw)
    with pytest.raises(ValueError):
        ResonanceRequest(**args)


def test_duplicates_rejected():
    with pytest.raises(DegenerateError):
        ResonanceRequest((1.0, 1.0), 1, 3)


def test_budgets():
    rs = tuple(1 + 0.1 * j for j in range(9))
    with pytest.raises(BudgetExceeded):
        resonance_find(ResonanceRequest(rs, 1, 10))
    with pytest.raises(BudgetExceeded):
        resonance_brute(ResonanceRequest(rs[:7], 1, 10))


@settings(max_examples=200, deadline=None)
@given(st.floats(-50, 50))
def test_chord_below_bound(x):
    assert chord(x) <= chord_bound(x) + 1e-15


def test_exact_defect():
    with mpmath.workprec(160):
        assert exact_defect((2 * mpmath.pi,), 3) < 1e-30
    assert exact_defect((1.0,), mpmath.pi) == pytest.approx(2)
