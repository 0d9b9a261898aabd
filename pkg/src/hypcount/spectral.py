"""Spectral data: (t_j, |u_j|^2) pairs, period-sum laws, M(X), E(X) and e_eps(R).

Spectra are plain text, one record per line::

    # hypcount spectrum v1
    len_l 3.0571...
    principal 12.5 0.8731
    exceptional 0.75 1.0
    bottom 0.5 0.25

The second column is t for principal entries and s otherwise.
"""

from __future__ import annotations

import bisect
import itertools
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath import mpf

from .errors import SchemaError
from .numerics import DEFAULT_CONTEXT, PrecisionContext, to_mpf
from .specfun import Kind, SpectralParameter, a_half, d_coeff

HEADER = "# hypcount spectrum v1"
BUNDLED_SPECTRUM = Path(__file__).parent / "data" / "synthetic_seed7.txt"


@dataclass(frozen=True)
class SpectralDatum:
    param: SpectralParameter
    period_sq: float

    def __post_init__(self):
        if not self.period_sq >= 0:
            raise SchemaError(f"negative period {self.period_sq}")

    @property
    def t(self) -> float:
        return self.param.t


@dataclass(frozen=True)
class Spectrum:
    """Immutable spectral list.  ``sigma`` is the worst partial-sum deviation
    for X >= ``X0``; it is measured, and only enforced for synthetic data."""

    data: Tuple[SpectralDatum, ...]
    len_l: float
    source: str = "file"
    seed: Optional[int] = None
    sigma: float = 0.0
    X0: float = 10.0

    @property
    def principal(self) -> List[SpectralDatum]:
        return [d for d in self.data if d.param.kind is Kind.PRINCIPAL]

    @property
    def exceptional(self) -> List[SpectralDatum]:
        return [d for d in self.data if d.param.kind is Kind.EXCEPTIONAL]

    @property
    def bottom_mass(self) -> float:
        return math.fsum(d.period_sq for d in self.data if d.param.kind is Kind.BOTTOM)

    @property
    def t_max(self) -> float:
        pr = self.principal
        return pr[-1].t if pr else 0.0

    def scaled(self, factor: float) -> "Spectrum":
        data = tuple(SpectralDatum(d.param, d.period_sq * factor) for d in self.data)
        return Spectrum(data, self.len_l, self.source, self.seed, self.sigma, self.X0)


def _sort_key(d: SpectralDatum):
    order = {Kind.EXCEPTIONAL: 0, Kind.BOTTOM: 1, Kind.PRINCIPAL: 2}
    return (order[d.param.kind], d.param.sigma if d.param.kind is Kind.EXCEPTIONAL else d.param.t)


def partial_sum_deviation(data: Sequence[SpectralDatum], len_l: float, X0: float,
                          X_max: Optional[float] = None) -> float:
    """sup over X in [X0, X_max] of |S(X) / ((len_l/pi) X) - 1|, S the principal partial sum.

    S is a step function, so the sup is attained just before or at a jump.
    """
    pr = sorted((d for d in data if d.param.kind is Kind.PRINCIPAL), key=lambda d: d.t)
    if not pr or len_l <= 0:
        return 0.0
    X_max = pr[-1].t if X_max is None else X_max
    if X_max < X0:
        return 0.0
    rate = len_l / math.pi
    ts = [d.t for d in pr]
    cum = list(itertools.accumulate(d.period_sq for d in pr))
    i0 = bisect.bisect_right(ts, X0)
    # S is constant between jumps and the ratio decreases there, so only
    # X0, the left and right limits at each jump and X_max matter
    probes = [(X0, cum[i0 - 1] if i0 else 0.0)]
    for i in range(i0, len(ts)):
        if ts[i] > X_max:
            break
        probes.append((ts[i], cum[i - 1] if i else 0.0))
        probes.append((ts[i], cum[i]))
    i1 = bisect.bisect_right(ts, X_max)
    probes.append((X_max, cum[i1 - 1] if i1 else 0.0))
    worst = max(abs(s / (rate * x) - 1) for x, s in probes)
    return worst


def _validated(data: List[SpectralDatum], len_l: float, source: str, seed, X0: float) -> Spectrum:
    data.sort(key=_sort_key)
    sigma = partial_sum_deviation(data, len_l, X0)
    return Spectrum(tuple(data), len_l, source, seed, sigma, X0)


def _parse_param(kind: str, value: str, lineno: int) -> SpectralParameter:
    try:
        x = float(value)
        if kind == "principal":
            return SpectralParameter.principal(x)
        if kind == "exceptional":
            return SpectralParameter.exceptional(x)
        if kind == "bottom":
            if x != 0.5:
                raise ValueError("bottom entries carry s = 0.5")
            return SpectralParameter.bottom()
    except ValueError as exc:
        raise SchemaError(f"line {lineno}: {exc}") from None
    raise SchemaError(f"line {lineno}: unknown kind {kind!r}")


def load_spectrum(path, X0: float = 10.0) -> Spectrum:
    path = Path(path)
    text = path.read_text()
    len_l = None
    data: List[SpectralDatum] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "len_l":
            if len(parts) != 2 or len_l is not None:
                raise SchemaError(f"line {lineno}: bad len_l header")
            try:
                len_l = float(parts[1])
            except ValueError:
                raise SchemaError(f"line {lineno}: len_l is not a number") from None
            continue
        if len(parts) != 3:
            raise SchemaError(f"line {lineno}: expected 'kind t_or_s period_sq'")
        param = _parse_param(parts[0], parts[1], lineno)
        try:
            w = float(parts[2])
        except ValueError:
            raise SchemaError(f"line {lineno}: period is not a number") from None
        if w < 0:
            raise SchemaError(f"line {lineno}: negative period {parts[2]}")
        data.append(SpectralDatum(param, w))
    if len_l is None:
        raise SchemaError("missing len_l header")
    if not len_l > 0:
        raise SchemaError("len_l must be positive")
    return _validated(data, len_l, "file", None, X0)


def _fmt(x: float) -> str:
    # repr of a float is the shortest string that round-trips exactly
    return repr(float(x))


def format_spectrum(sp: Spectrum) -> str:
    lines = [HEADER]
    if sp.source == "synthetic":
        lines.append(f"# synthetic seed={sp.seed} sigma={_fmt(sp.sigma)} X0={_fmt(sp.X0)}")
    lines.append(f"len_l {_fmt(sp.len_l)}")
    for d in sp.data:
        kind = d.param.kind
        value = d.param.t if kind is Kind.PRINCIPAL else (0.5 if kind is Kind.BOTTOM else d.param.sigma)
        lines.append(f"{kind.value} {_fmt(value)} {_fmt(d.period_sq)}")
    return "\n".join(lines) + "\n"


def save_spectrum(sp: Spectrum, path) -> None:
    Path(path).write_text(format_spectrum(sp))


def synth_spectrum(len_l: float, t_max: float, density_c: float, seed: int,
                   jitter: float = 0.05, X0: float = 10.0) -> Spectrum:
    """A seeded principal spectrum with N(t) ~ density_c t^2 and period law
    sum_{t_j <= X} |u_j|^2 ~ (len_l/pi) X.

    t_j = sqrt((j - U_j)/c) with U_j uniform in [0, 1) keeps the points
    distinct and generic.  Each point receives the mass (len_l/pi) times the
    length of its Voronoi cell, times a factor in [1 - jitter, 1 + jitter].
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    if density_c <= 0:
        raise ValueError("density_c must be positive")
    if not 0 <= jitter <= 0.1:
        raise ValueError("jitter must lie in [0, 0.1]")
    rng = random.Random(seed)
    ts: List[float] = []
    j = 1
    while True:
        t = math.sqrt((j - rng.random()) / density_c)
        if t > t_max:
            break
        ts.append(t)
        j += 1
    # the last cell needs the next point, which lies beyond t_max
    t_next = t
    rate = len_l / math.pi
    data = []
    for i, t in enumerate(ts):
        lo = 0.0 if i == 0 else (ts[i - 1] + t) / 2
        hi = (t + (ts[i + 1] if i + 1 < len(ts) else t_next)) / 2
        w = rate * (hi - lo) * (1 + jitter * (2 * rng.random() - 1))
        data.append(SpectralDatum(SpectralParameter.principal(t), w))
    return _validated(data, len_l, "synthetic", seed, X0)


def weighted_period_sum(sp: Spectrum, a: float, T: float, tail: bool = False) -> float:
    """sum of t_j^a |u_j|^2 over t_j <= T, or over t_j > T when ``tail``."""
    if a == -1:
        raise ValueError("a = -1 is excluded")
    if tail and not a < -1:
        raise ValueError("the tail sum needs a < -1")
    if tail:
        terms = [d.t ** a * d.period_sq for d in sp.principal if d.t > T]
    else:
        terms = [d.t ** a * d.period_sq for d in sp.principal if d.t <= T]
    return math.fsum(terms)


def leading_coefficient(covolume, len_l, ctx: PrecisionContext = DEFAULT_CONTEXT):
    with mpmath.workprec(ctx.bits):
        L = mpmath.mpmathify(len_l)
        return 2 * L * L / (mpmath.pi * mpmath.mpmathify(covolume))


def main_term(sp: Spectrum, covolume, len_l, X, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """M(X) = 2 len^2 X / (pi Vol) + sum over exceptional s_j of D(s_j) |u_j|^2 X^{s_j}."""
    if X < 1:
        raise ValueError("X must be >= 1")
    with mpmath.workprec(ctx.bits):
        X = mpmath.mpmathify(X)
        val = leading_coefficient(covolume, len_l, ctx) * X
        for d in sp.exceptional:
            s = mpf(d.param.sigma)
            val += d_coeff(s, ctx) * mpf(d.period_sq) * X ** s
        return val


def error_terms(G, sp: Spectrum, X, table=None, ctx: Optional[PrecisionContext] = None):
    """(E, E_tilde) at X.  Pass a precomputed coset ``table`` to skip enumeration."""
    from .fuchsian import count_n

    ctx = ctx or G.ctx
    if table is None:
        N, _ = count_n(G, X)
    else:
        N = table.count(X)
    with mpmath.workprec(ctx.bits):
        M = main_term(sp, to_mpf(G.covolume), to_mpf(G.len_l), X, ctx)
        E = N - M
        w = sp.bottom_mass
        E_tilde = E - a_half(X, w, ctx) if w > 0 else E
        return E, E_tilde


def default_t_cut(cfg, k: Optional[int] = None):
    k = cfg.fourier_k if k is None else k
    e = mpmath.mpmathify(cfg.epsilon)
    return e ** (mpf(k) / (mpf(0.5) - k))


@dataclass
class SpectralSum:
    value: mpf
    tail_bound: mpf
    terms: int
    t_cut: float


def spectral_e_eps(sp: Spectrum, R, cfg, t_cut=None, tail_constant: float = 1.0,
                   report: bool = False):
    """2 sum_{0 < t_j <= t_cut} d_t(f) |u_j|^2 with the large-t approximation of d_t.

    Entries with t_j < 1 fall back to the exact transform.  With ``report``
    a :class:`SpectralSum` also carries the Fourier-decay tail estimate
    c sum_{t_j > t_cut} (eps t_j)^(-k) t_j^(-1/2) |u_j|^2.
    """
    from .transforms import TestFunction, huber_dt, huber_dt_approx, _qprec

    if t_cut is None:
        t_cut = default_t_cut(cfg)
    with mpmath.workprec(_qprec(cfg.ctx)):
        total = mpf(0)
        n = 0
        exact = None
        for d in sp.principal:
            if d.t > t_cut:
                break
            if d.t >= 1:
                dt = huber_dt_approx(R, cfg, d.t)
            else:
                exact = exact or TestFunction.smoothed_count(float(R), cfg)
                dt = huber_dt(exact, d.t)
            total += dt * d.period_sq
            n += 1
        value = 2 * total
        if not report:
            return value
        k = cfg.fourier_k
        eps = mpmath.mpmathify(cfg.epsilon)
        tail = mpmath.fsum((eps * d.t) ** (-k) * mpmath.power(d.t, -0.5) * d.period_sq
                           for d in sp.principal if d.t > t_cut)
        return SpectralSum(value, tail_constant * tail, n, float(t_cut))


@dataclass
class ResonantSum:
    """Precomputed amplitudes 2 (2/pi) G(s_j) psi_eps_hat(t_j) |u_j|^2, so that
    e_eps(R) = Re sum_j amp_j e^{-i R t_j} costs one phase per term."""

    ts: List[mpf] = field(default_factory=list)
    amps: List = field(default_factory=list)

    @classmethod
    def build(cls, sp: Spectrum, cfg, t_cut) -> "ResonantSum":
        from .specfun import big_g
        from .transforms import _qprec

        out = cls()
        with mpmath.workprec(_qprec(cfg.ctx)):
            for d in sp.principal:
                if d.t > t_cut:
                    break
                if d.t < 1:
                    raise ValueError("resonant sums need t_j >= 1")
                t = mpf(d.t)
                G = big_g(mpmath.mpc(0.5, t), cfg.ctx)
                out.ts.append(t)
                out.amps.append(4 / mpmath.pi * G * cfg.psi_hat(t) * d.period_sq)
        return out

    def __call__(self, R):
        with mpmath.workprec(80):
            R = mpmath.mpmathify(R)
            return mpmath.fsum(mpmath.re(a * mpmath.expj(-R * t)) for a, t in zip(self.amps, self.ts))

    def aligned_floor(self, defect) -> mpf:
        """Lower bound sum (Re amp_j - |amp_j| defect) valid when every
        |e^{-i R t_j} - 1| <= defect."""
        with mpmath.workprec(80):
            return mpmath.fsum(mpmath.re(a) - abs(a) * defect for a in self.amps)


__all__ = [
    "BUNDLED_SPECTRUM", "SpectralDatum", "Spectrum", "load_spectrum", "save_spectrum", "format_spectrum",
    "synth_spectrum", "partial_sum_deviation", "weighted_period_sum", "leading_coefficient",
    "main_term", "error_terms", "default_t_cut", "spectral_e_eps", "SpectralSum", "ResonantSum",
]
