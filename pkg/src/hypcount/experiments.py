"""Desk-scale experiments: the error-term series, the mean square of E, and
the resonance (Omega) experiment on a spectral list."""

from __future__ import annotations

import bisect
import csv
import io
import json
import math
import random
import statistics
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .numerics import to_mpf
from .resonance import PIGEONHOLE_BUDGET, ResonanceRequest, resonance_find
from .spectral import ResonantSum, Spectrum, default_t_cut, main_term
from .specfun import a_half
from .transforms import MollifierConfig, tau_half


@dataclass
class ExperimentReport:
    kind: str
    inputs: Dict[str, object]
    columns: List[str]
    rows: List[List[float]]
    fitted_constants: Dict[str, float] = field(default_factory=dict)
    verdict: str = "inconclusive"
    criterion: str = ""
    notes: List[str] = field(default_factory=list)

    def column(self, name: str) -> List[float]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_num(x) for x in r])
        return buf.getvalue()

    def to_json(self, config: Optional[dict] = None) -> str:
        doc = {
            "tool": "hypcount",
            "version": __version__,
            "kind": self.kind,
            "config": config or {},
            "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
            "fitted_constants": {k: _num(v) for k, v in self.fitted_constants.items()},
            "verdict": self.verdict,
            "criterion": self.criterion,
            "notes": self.notes,
            "columns": self.columns,
            "rows": [[_num(x) for x in r] for r in self.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _num(x):
    if isinstance(x, (int, str)) or x is None:
        return x
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.15g}")


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return _num(v)


def _slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) < 2:
        return float("nan")
    return float(np.polyfit(np.asarray(xs, float), np.asarray(ys, float), 1)[0])


# -- the error term -------------------------------------------------------------

class CountingFunction:
    """N(x) from one certified coset table, by bisection on the sorted |B| list."""

    def __init__(self, table):
        self.table = table
        self._b = [float(abs(cs.b_value)) for cs in table.cosets]
        self._tol = float(table.ctx.tol_eq)

    def __call__(self, x) -> int:
        return bisect.bisect_right(self._b, float(x) + self._tol)


def _error_fn(G, sp: Spectrum, table) -> Callable:
    N = CountingFunction(table)
    vol, L = to_mpf(G.covolume), to_mpf(G.len_l)

    def E(x):
        return N(x) - main_term(sp, vol, L, x, G.ctx)

    return E


def error_series(G, sp: Spectrum, X_grid: Sequence[float], table=None,
                 slope_limit: float = 0.75) -> ExperimentReport:
    from .fuchsian import count_cosets

    grid = sorted(float(x) for x in X_grid)
    if table is None:
        table = count_cosets(G, grid[-1])
    N = CountingFunction(table)
    vol, L = to_mpf(G.covolume), to_mpf(G.len_l)
    w = sp.bottom_mass
    rows = []
    for X in grid:
        n = N(X)
        M = main_term(sp, vol, L, X, G.ctx)
        E = n - M
        Et = E - a_half(X, w, G.ctx) if w > 0 else E
        rows.append([X, n, float(M), float(E), float(Et),
                     float(E) / X ** (2 / 3), float(Et) / X ** 0.5])
    nz = [(math.log(r[0]), math.log(abs(r[3]))) for r in rows if r[3] != 0]
    pointwise = _slope([a for a, _ in nz], [b for _, b in nz])
    env = error_envelope(G, sp, grid[-1], table, lowest=grid[0])
    slope = _slope([math.log(hi) for _, hi, _ in env], [math.log(s) for _, _, s in env if s > 0]) \
        if all(s > 0 for _, _, s in env) else float("nan")
    fitted = {
        "sup_abs_E_over_X^(2/3)": max(abs(r[5]) for r in rows),
        "sup_abs_Etilde_over_X^(1/2)": max(abs(r[6]) for r in rows),
        "slope_log_abs_E_vs_log_X": slope,
        "slope_pointwise_grid": pointwise,
    }
    for lo, hi, s in env:
        fitted[f"sup_abs_E_on_[{lo:g},{hi:g}]"] = s
    verdict = "inconclusive" if math.isnan(slope) else ("pass" if slope <= slope_limit else "fail")
    return ExperimentReport(
        "error_series", {"group": G.label, "X_grid": grid, "bottom_mass": w},
        ["X", "N", "M", "E", "E_tilde", "E/X^(2/3)", "E_tilde/X^(1/2)"], rows, fitted,
        verdict, f"slope of log sup|E| over dyadic blocks against log X <= {slope_limit}")


def error_envelope(G, sp: Spectrum, X_max: float, table=None, lowest: float = 10.0):
    """sup |E| on the dyadic blocks [X_max/2^(k+1), X_max/2^k] above ``lowest``.

    N is a step function and M is increasing, so on each block the supremum is
    attained at a jump (from either side) or at an endpoint; it is exact here,
    not sampled.  Returns [(lo, hi, sup)] with increasing hi.
    """
    from .fuchsian import count_cosets

    if table is None:
        table = count_cosets(G, X_max)
    vol, L = to_mpf(G.covolume), to_mpf(G.len_l)
    bs = sorted(float(abs(cs.b_value)) for cs in table.upto(X_max))

    def M(x):
        return float(main_term(sp, vol, L, x, G.ctx))

    out = []
    hi = float(X_max)
    while hi / 2 >= lowest:
        lo = hi / 2
        i, j = bisect.bisect_left(bs, lo), bisect.bisect_right(bs, hi)
        cand = [abs(bisect.bisect_right(bs, lo) - M(lo)), abs(j - M(hi))]
        for k in range(i, j):
            m = M(bs[k])
            # just below and at the jump; repeated B values jump together
            cand.append(abs(bisect.bisect_left(bs, bs[k]) - m))
            cand.append(abs(bisect.bisect_right(bs, bs[k]) - m))
        out.append((lo, hi, max(cand)))
        hi = lo
    return out[::-1]


@dataclass(frozen=True)
class MeanValue:
    X: float
    samples: int
    estimate: float
    ratio: float


def mean_value_statistic(G, sp: Spectrum, X: float, samples: int = 512, table=None,
                         error_fn: Optional[Callable] = None) -> MeanValue:
    """Midpoint rule for (1/X) int_X^{2X} E(x)^2 dx, and its ratio to X log^2 X."""
    if samples < 16:
        raise ValueError("samples must be >= 16")
    if error_fn is None:
        if table is None:
            from .fuchsian import count_cosets
            table = count_cosets(G, 2 * X)
        error_fn = _error_fn(G, sp, table)
    h = X / samples
    acc = math.fsum(float(error_fn(X + (i + 0.5) * h)) ** 2 for i in range(samples))
    est = acc * h / X
    return MeanValue(X, samples, est, est / (X * math.log(X) ** 2))


def mean_value_report(G, sp: Spectrum, Xs: Sequence[float], samples: int = 512,
                      table=None, ratio_bound: Optional[float] = None) -> ExperimentReport:
    from .fuchsian import count_cosets

    Xs = sorted(float(x) for x in Xs)
    if table is None:
        table = count_cosets(G, 2 * Xs[-1])
    E = _error_fn(G, sp, table)
    stats = [mean_value_statistic(G, sp, X, samples, error_fn=E) for X in Xs]
    rows = [[m.X, m.samples, m.estimate, m.ratio] for m in stats]
    c = max(m.ratio for m in stats)
    verdict = "inconclusive" if ratio_bound is None else ("pass" if c <= ratio_bound else "fail")
    return ExperimentReport(
        "mean_value", {"group": G.label, "X": Xs, "samples": samples},
        ["X", "samples", "mean_square_E", "ratio_to_X_log2_X"], rows,
        {"sup_ratio": c}, verdict,
        "ratio to X log^2 X below one constant" + (f" ({ratio_bound})" if ratio_bound else ""))


# -- the Omega experiment -------------------------------------------------------

@dataclass
class OmegaStep:
    eps: float
    M: float
    T: float
    n_freq: int
    n_used: int
    R: float
    defect: float
    e_resonant: float
    median_random: float
    aligned_floor: float
    floor: float
    x: float

    @property
    def log_R(self) -> float:
        return math.log(self.R)


def truncate_for_budget(freqs: Sequence[float], T: float, budget: int = PIGEONHOLE_BUDGET) -> int:
    q = int(math.floor(T))
    n = len(freqs)
    if q <= 1:
        return n
    while n > 0 and q ** n > budget:
        n -= 1
    return n


def omega_step(sp: Spectrum, eps: float, k: int = 2, seed: int = 0, n_random: int = 32,
               budget: int = PIGEONHOLE_BUDGET, ctx=None) -> OmegaStep:
    cfg = MollifierConfig(eps, fourier_k=k) if ctx is None else MollifierConfig(eps, fourier_k=k, ctx=ctx)
    M = float(default_t_cut(cfg, k))
    T = math.sqrt(M)
    tau = float(tau_half(cfg.ctx))
    x = math.sqrt(tau / eps)
    floor = sp.len_l / math.pi ** 1.5 * x
    freqs = [d.t for d in sp.principal if d.t <= M]
    n = truncate_for_budget(freqs, T, budget)
    if n == 0:
        return OmegaStep(eps, M, T, len(freqs), 0, M, 0.0, 0.0, 0.0, 0.0, floor, x)
    res = resonance_find(ResonanceRequest(freqs[:n], M, T))
    S = ResonantSum.build(sp, cfg, M)
    e_res = abs(float(S(res.R)))
    rng = random.Random(seed)
    hi = M * T ** n
    baseline = [abs(float(S(rng.uniform(M, hi)))) for _ in range(n_random)]
    # the bound only covers the aligned terms; the rest are taken at face value
    aligned = ResonantSum(S.ts[:n], S.amps[:n])
    rest = ResonantSum(S.ts[n:], S.amps[n:])
    floor_aligned = float(aligned.aligned_floor(res.max_defect) + rest(res.R))
    return OmegaStep(eps, M, T, len(freqs), n, res.R, res.max_defect, e_res,
                     statistics.median(baseline), floor_aligned, floor, x)


def omega_experiment(sp: Spectrum, eps_schedule: Sequence[float], k: int = 2, seed: int = 0,
                     n_random: int = 32, exponent_window=(0.8, 1.2),
                     budget: int = PIGEONHOLE_BUDGET, workers: int = 1, ctx=None) -> ExperimentReport:
    """For each eps: M = eps^(k/(1/2-k)), T = M^(1/2), resonate {t_j <= M} and
    compare |e_eps(R)| with the median over random R' in [M, M T^n]."""
    sched = sorted((float(e) for e in eps_schedule), reverse=True)
    args = [(sp, e, k, seed + i, n_random, budget, ctx) for i, e in enumerate(sched)]
    if workers > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as ex:
            steps = list(ex.map(_omega_star, args))
    else:
        steps = [omega_step(*a) for a in args]
    cols = ["eps", "tau_over_eps_sqrt", "M", "T", "n_freq", "n_used", "R", "log_R",
            "log_R^(1/4)", "max_defect", "abs_e_resonant", "median_abs_e_random",
            "aligned_floor", "floor_c_sqrt_tau_over_eps"]
    rows = [[s.eps, s.x, s.M, s.T, s.n_freq, s.n_used, s.R, s.log_R, s.log_R ** 0.25,
             s.defect, s.e_resonant, s.median_random, s.aligned_floor, s.floor] for s in steps]
    rows.sort(key=lambda r: r[1])
    notes = [f"eps={s.eps}: resonated {s.n_used} of {s.n_freq} frequencies"
             for s in steps if s.n_used < s.n_freq]
    fitted: Dict[str, float] = {"tau": float(tau_half())}
    if not sp.principal or all(s.e_resonant == 0 for s in steps):
        verdict = "inconclusive"
    else:
        dominance = all(s.e_resonant > s.median_random for s in steps)
        pos = [s for s in steps if s.e_resonant > 0]
        expo = _slope([math.log(s.x) for s in pos], [math.log(s.e_resonant) for s in pos])
        fitted["exponent_vs_sqrt_tau_over_eps"] = expo
        fitted["growth_exponent_vs_log_R"] = _slope([math.log(s.log_R) for s in pos],
                                                    [math.log(s.e_resonant) for s in pos])
        lo, hi = exponent_window
        ok_expo = len(pos) < 2 or lo <= expo <= hi
        verdict = "pass" if dominance and ok_expo else "fail"
        if not dominance:
            notes.append("resonant value below the random median at some step")
        if not ok_expo:
            notes.append(f"fitted exponent {expo:.3f} outside [{lo}, {hi}]")
    return ExperimentReport(
        "omega", {"schedule": sched, "k": k, "seed": seed, "n_random": n_random,
                  "spectrum_source": sp.source, "spectrum_seed": sp.seed,
                  "spectrum_size": len(sp.data)},
        cols, rows, fitted, verdict,
        "resonant |e_eps(R)| above the random median at every step and exponent against "
        f"(tau/eps)^(1/2) in [{exponent_window[0]}, {exponent_window[1]}]", notes)


def _omega_star(a):
    return omega_step(*a)


__all__ = [
    "ExperimentReport", "CountingFunction", "error_series", "MeanValue", "mean_value_statistic",
    "mean_value_report", "OmegaStep", "omega_step", "omega_experiment", "truncate_for_budget",
    "error_envelope",
]
