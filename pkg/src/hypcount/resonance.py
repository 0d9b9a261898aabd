"""Simultaneous phase alignment by Dirichlet's box principle.

Given distinct reals r_1..r_n, M > 0 and T > 1 we look for R in [M, M T^n]
with |e^{i r_j R} - 1| < 4 pi / T for every j.  The pigeonhole search places
the points x(k) = (<r_j k M / 2 pi>)_j for k = 0..q^n, q = floor(T), into q^n
boxes; two k in one box give R = |k1 - k2| M.

Fractional parts are carried as 64-bit fixed-point integers, so k x_j mod 1
is exact up to the initial rounding of x_j (relative error k 2^-64).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import mpmath
import numpy as np

from .errors import BudgetExceeded, DegenerateError, ExhaustedError
from .numerics import DEFAULT_CONTEXT, PrecisionContext

PIGEONHOLE_BUDGET = 10 ** 8
BRUTE_BUDGET = 10 ** 6
_TWO64 = 2 ** 64


class Method(str, Enum):
    PIGEONHOLE = "pigeonhole"
    BRUTE = "brute"


@dataclass(frozen=True)
class ResonanceRequest:
    rs: Tuple[float, ...]
    M: float
    T: float
    ctx: PrecisionContext = DEFAULT_CONTEXT

    def __post_init__(self):
        object.__setattr__(self, "rs", tuple(self.rs))
        if not self.rs:
            raise ValueError("need at least one frequency")
        if not self.M > 0:
            raise ValueError("M must be positive")
        if not self.T > 1:
            raise ValueError("T must exceed 1")
        srt = sorted(mpmath.mpmathify(r) for r in self.rs)
        for a, b in zip(srt, srt[1:]):
            if abs(b - a) <= self.ctx.tol_eq:
                raise DegenerateError(f"duplicate frequency {mpmath.nstr(a, 12)}")

    @property
    def n(self) -> int:
        return len(self.rs)

    @property
    def bound(self) -> float:
        return 4 * math.pi / self.T


@dataclass(frozen=True)
class ResonanceResult:
    R: float
    k: int
    max_defect: float
    method: Method


def chord(x):
    """|e^{2 pi i x} - 1|."""
    return abs(mpmath.expjpi(2 * mpmath.mpmathify(x)) - 1)


def chord_bound(x):
    """2 pi <x>, <x> the distance to the nearest integer; always >= chord(x)."""
    x = mpmath.mpmathify(x)
    return 2 * mpmath.pi * abs(x - mpmath.nint(x))


def _fixed_point_steps(req: ResonanceRequest) -> np.ndarray:
    """floor(2^64 <r_j M / 2 pi>) as uint64."""
    out = []
    with mpmath.workprec(req.ctx.bits + 64):
        for r in req.rs:
            x = mpmath.mpmathify(r) * mpmath.mpmathify(req.M) / (2 * mpmath.pi)
            frac = x - mpmath.floor(x)
            out.append(int(mpmath.floor(frac * _TWO64)) % _TWO64)
    return np.array(out, dtype=np.uint64)


def _fractions(steps: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """<k x_j> in [0, 1) for each k (rows) and j (columns)."""
    with np.errstate(over="ignore"):
        prod = ks[:, None].astype(np.uint64) * steps[None, :]
    # the top 53 bits convert to float exactly
    return (prod >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def exact_defect(rs: Sequence, R, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """max_j |e^{i r_j R} - 1| = max_j 2 |sin(r_j R / 2)|."""
    with mpmath.workprec(ctx.bits + 32):
        R = mpmath.mpmathify(R)
        return max(2 * abs(mpmath.sin(mpmath.mpmathify(r) * R / 2)) for r in rs)


def _finish(req: ResonanceRequest, k: int, method: Method) -> ResonanceResult:
    with mpmath.workprec(req.ctx.bits):
        R = k * mpmath.mpmathify(req.M)
        defect = exact_defect(req.rs, R, req.ctx)
        res = ResonanceResult(float(R), k, float(defect), method)
    assert req.M <= res.R <= req.M * req.T ** req.n * (1 + 1e-12), "R outside [M, M T^n]"
    assert res.max_defect < req.bound, "defect above 4 pi / T"
    return res


def resonance_find(req: ResonanceRequest, chunk: int = 4096) -> ResonanceResult:
    q = int(math.floor(req.T))
    if q ** req.n > PIGEONHOLE_BUDGET:
        raise BudgetExceeded(f"floor(T)^n = {q}^{req.n} exceeds {PIGEONHOLE_BUDGET}")
    steps = _fixed_point_steps(req)
    weights = np.array([q ** j for j in range(req.n)], dtype=np.int64)
    seen_codes = np.empty(0, dtype=np.int64)
    seen_k = np.empty(0, dtype=np.int64)
    k0, last = 0, q ** req.n
    while k0 <= last:
        ks = np.arange(k0, min(k0 + chunk, last + 1), dtype=np.int64)
        boxes = np.minimum((_fractions(steps, ks) * q).astype(np.int64), q - 1)
        codes = boxes @ weights
        # repeats inside the chunk
        uniq, first, inv = np.unique(codes, return_index=True, return_inverse=True)
        hit = np.flatnonzero(first[inv] < np.arange(len(codes)))
        best = (hit[0], ks[first[inv[hit[0]]]]) if len(hit) else None
        # repeats of earlier chunks
        if len(seen_codes):
            pos = np.searchsorted(seen_codes, codes)
            pos = np.minimum(pos, len(seen_codes) - 1)
            old = np.flatnonzero(seen_codes[pos] == codes)
            if len(old) and (best is None or old[0] < best[0]):
                best = (old[0], seen_k[pos[old[0]]])
        if best is not None:
            i, k1 = best
            return _finish(req, int(ks[i] - k1), Method.PIGEONHOLE)
        keep = np.isin(codes, uniq) & (first[inv] == np.arange(len(codes)))
        merged_codes = np.concatenate([seen_codes, codes[keep]])
        merged_k = np.concatenate([seen_k, ks[keep]])
        order = np.argsort(merged_codes, kind="stable")
        seen_codes, seen_k = merged_codes[order], merged_k[order]
        k0 += len(ks)
        chunk *= 2
    raise ExhaustedError("no collision among floor(T)^n + 1 points")


def resonance_brute(req: ResonanceRequest, chunk: int = 4096) -> ResonanceResult:
    limit = math.ceil(req.T ** req.n)
    if limit > BRUTE_BUDGET:
        raise BudgetExceeded(f"T^n = {req.T ** req.n:.3g} exceeds {BRUTE_BUDGET}")
    steps = _fixed_point_steps(req)
    bound = req.bound
    k0 = 1
    while k0 <= limit:
        ks = np.arange(k0, min(k0 + chunk, limit + 1), dtype=np.int64)
        f = _fractions(steps, ks)
        d = 2 * np.sin(np.pi * np.minimum(f, 1 - f))
        # a small guard keeps float rounding from admitting a borderline k;
        # the exact check below has the final word
        for i in np.flatnonzero(d.max(axis=1) < bound * (1 - 1e-9)):
            k = int(ks[i])
            if exact_defect(req.rs, k * mpmath.mpmathify(req.M), req.ctx) < bound:
                return _finish(req, k, Method.BRUTE)
        k0 += len(ks)
    raise ExhaustedError(f"no k <= {limit} aligns all phases")


__all__ = [
    "Method", "ResonanceRequest", "ResonanceResult", "resonance_find", "resonance_brute",
    "chord", "chord_bound", "exact_defect", "PIGEONHOLE_BUDGET", "BRUTE_BUDGET",
]
