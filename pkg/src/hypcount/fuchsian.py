"""Fuchsian groups given by generators: ball enumeration, double cosets, N(X, l).

The designated primitive hyperbolic element is conjugated to
``diag(m, 1/m)``; its powers act on a matrix by

    a -> m^(k+l) a,  b -> m^(k-l) b,  c -> m^(l-k) c,  d -> m^(-k-l) d

for ``gamma1^k * g * gamma1^l``.  Writing ``u = k + l`` and ``v = k - l``
(any integers with ``u = v mod 2``) gives the orbit used by
:func:`canonical_rep`.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpfr

from .errors import DegenerateError, NonStabilizedError, PrecisionOverflow, SchemaError
from .numerics import (
    DEFAULT_CONTEXT,
    Mat2,
    PrecisionContext,
    _sign_normalize,
    b_invariant,
    conjugate,
    diagonalize_primitive_hyperbolic,
    raw_mul,
)

log = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
BUNDLED_GROUP = DATA_DIR / "bolza.json"
TRIVIAL_GROUP = DATA_DIR / "cyclic.json"


@dataclass(frozen=True)
class GroupPresentation:
    """Generators of a cocompact Fuchsian group, already conjugated so that
    gamma1 = diag(m, 1/m)."""

    generators: Tuple[Mat2, ...]
    m: mpfr
    covolume: mpfr
    label: str = ""
    names: Tuple[str, ...] = ()
    ctx: PrecisionContext = DEFAULT_CONTEXT

    def __post_init__(self):
        with self.ctx.work():
            if not self.m > 1 + self.ctx.tol_eq:
                raise ValueError("m must exceed 1")
            if not self.covolume > 0:
                raise ValueError("covolume must be positive")
            for g in self.generators:
                if abs(g.det() - 1) > self.ctx.tol_eq:
                    raise DegenerateError("generator is not unimodular")

    @property
    def len_l(self) -> mpfr:
        with self.ctx.work():
            return 2 * gmpy2.log(self.m)

    @property
    def gamma1(self) -> Mat2:
        return Mat2.diag(self.m, self.ctx)


@dataclass(frozen=True)
class GroupElement:
    mat: Mat2
    word: Tuple[int, ...] = ()


@dataclass(frozen=True)
class DoubleCosetRep:
    rep: Mat2
    b_value: mpfr
    word: Tuple[int, ...]
    zero_flag: bool


def _close_under_inverses(gens: Sequence[Mat2], names: Sequence[str], ctx):
    out, out_names = list(gens), list(names)
    with ctx.work():
        keys = {_key(g.entries, ctx.tol_eq) for g in gens}
        for g, name in zip(gens, names):
            inv = g.inverse(ctx)
            k = _key(inv.entries, ctx.tol_eq)
            if k not in keys:
                keys.add(k)
                out.append(inv)
                out_names.append(name.swapcase() if name.lower() != name.upper() else name + "^-1")
    return out, out_names


def load_group(path, ctx: PrecisionContext = DEFAULT_CONTEXT) -> GroupPresentation:
    """Read a group file.

    The file is JSON with ``label``, ``covolume`` (decimal string), a list of
    ``generators`` (each four decimal strings ``a b c d``), optional
    ``names``, and either ``hyperbolic_generator`` (index of gamma1, which is
    then diagonalized) or ``m`` (generators already conjugated).
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    for key in ("covolume", "generators"):
        if key not in raw:
            raise SchemaError(f"{path}: missing field {key!r}")
    if ("m" in raw) == ("hyperbolic_generator" in raw):
        raise SchemaError(f"{path}: give exactly one of 'm' or 'hyperbolic_generator'")
    gens = []
    for i, entries in enumerate(raw["generators"]):
        if len(entries) != 4:
            raise SchemaError(f"{path}: generator {i} must have 4 entries")
        gens.append(Mat2.of(*(str(x) for x in entries), ctx=ctx))
    names = list(raw.get("names") or [f"g{i}" for i in range(len(gens))])
    if len(names) != len(gens):
        raise SchemaError(f"{path}: names and generators differ in length")
    if "hyperbolic_generator" in raw:
        idx = int(raw["hyperbolic_generator"])
        P, m = diagonalize_primitive_hyperbolic(gens[idx], ctx)
        gens = [conjugate(P, g, ctx) for g in gens]
    else:
        m = ctx.real(str(raw["m"]))
    gens, names = _close_under_inverses(gens, names, ctx)
    return GroupPresentation(tuple(gens), m, ctx.real(str(raw["covolume"])),
                             str(raw.get("label", path.stem)), tuple(names), ctx)


# -- ball enumeration ---------------------------------------------------------

def _key(entries, tol):
    inv = 1 / mpfr(tol)
    return tuple(int(gmpy2.rint(x * inv)) for x in entries)


def _norm_sq(e):
    return e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + e[3] * e[3]


def enumerate_ball(G: GroupPresentation, norm_bound, max_word_len: int = 256,
                   safety_factor: float = 4.0) -> List[GroupElement]:
    """All distinct elements with squared Frobenius norm <= ``norm_bound``.

    Breadth-first search over words in the generators.  Partial words whose
    norm exceeds ``norm_bound * safety_factor`` are discarded.  Raises
    :class:`NonStabilizedError` when ``max_word_len`` layers are exhausted
    while the last two layers still found new elements inside the ball.
    """
    ctx = G.ctx
    if norm_bound < 2:
        raise ValueError("norm_bound must be >= 2")
    with ctx.work():
        tol = ctx.tol_eq
        inv_tol = 1 / mpfr(tol)
        bound = ctx.real(norm_bound)
        prune = bound * mpfr(safety_factor)
        limit = ctx.overflow_limit
        gens = [g.entries for g in G.generators]
        ident = (mpfr(1), mpfr(0), mpfr(0), mpfr(1))

        def key(e):
            return (int(gmpy2.rint(e[0] * inv_tol)), int(gmpy2.rint(e[1] * inv_tol)),
                    int(gmpy2.rint(e[2] * inv_tol)), int(gmpy2.rint(e[3] * inv_tol)))

        seen = {key(ident)}
        inside: List[Tuple[tuple, Tuple[int, ...]]] = [(ident, ())]
        frontier = [(ident, ())]
        new_inside_per_layer = []
        for _ in range(max_word_len):
            nxt = []
            found = 0
            for e, word in frontier:
                for gi, g in enumerate(gens):
                    p = raw_mul(e, g)
                    ns = _norm_sq(p)
                    if ns > prune:
                        continue
                    p = _sign_normalize(p, tol)
                    k = key(p)
                    if k in seen:
                        continue
                    seen.add(k)
                    w = word + (gi,)
                    nxt.append((p, w))
                    if ns <= bound:
                        inside.append((p, w))
                        found += 1
            new_inside_per_layer.append(found)
            frontier = nxt
            if not frontier:
                break
        else:
            if len(new_inside_per_layer) >= 2 and new_inside_per_layer[-1] + new_inside_per_layer[-2] > 0:
                raise NonStabilizedError(
                    f"ball enumeration not stabilized after {max_word_len} layers",
                    partial=len(inside))
        if any(abs(x) > limit for e, _ in inside for x in e):
            raise PrecisionOverflow("enumerated entries exceed 2^(bits/2)")
        log.debug("ball(norm<=%s): %d elements, %d seen", norm_bound, len(inside), len(seen))
        return [GroupElement(Mat2(*e), w) for e, w in inside]


# -- double cosets ------------------------------------------------------------

def _floor_log(x, logm, guard):
    """floor(log_m x) with a small upward guard so that x = m^k maps to k."""
    return int(gmpy2.floor(gmpy2.log(x) / logm + guard))


def _balance(p, q, m, logm, parity, tol):
    """Exponent v = parity mod 2 minimizing |p| m^v + |q| m^-v.

    Ties go to the candidate with the larger |p m^v|, which depends only on the
    orbit and not on the starting point.  When one of p, q vanishes the other
    is brought into [1/m, m).
    """
    ap, aq = abs(p), abs(q)
    if ap <= tol and aq <= tol:
        return parity % 2
    if aq <= tol or ap <= tol:
        if aq <= tol:
            v = -_floor_log(ap, logm, tol)  # |p| m^v in [1, m)
        else:
            v = _floor_log(aq, logm, tol)  # |q| m^-v in [1, m)
        if (v - parity) % 2:
            v = v - 1 if aq <= tol else v + 1
        return v
    v = int(gmpy2.floor(gmpy2.log(aq / ap) / (2 * logm)))
    if (v - parity) % 2:
        v -= 1
    best, best_val, best_p = None, None, None
    for cand in (v - 2, v, v + 2):
        mv = m ** cand
        pv = ap * mv
        val = pv + aq / mv
        # tol is a float: 1 +/- tol would round to 1, so scale separately
        slack = best_val * tol if best is not None else None
        if best is None or val < best_val - slack:
            best, best_val, best_p = cand, val, pv
        elif val <= best_val + slack and pv > best_p:
            best, best_val, best_p = cand, val, pv
    return best


def canonical_rep(g: Mat2, m, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Mat2:
    """Canonical representative of the double coset <gamma1> g <gamma1>.

    If ``a`` is not negligible, ``u`` is fixed by ``|a| m^u in [1, m)`` and
    ``v`` (same parity) balances ``|b| m^v + |c| m^-v``.  If ``a`` vanishes,
    the roles are swapped: ``v`` puts ``|b|`` in ``[1, m)`` and ``u`` balances
    ``|a| m^u + |d| m^-u``.  The result is sign-normalized and idempotent.
    """
    with ctx.work():
        m = mpfr(m)
        if not m > 1:
            raise ValueError("m must exceed 1")
        tol = ctx.tol_eq
        logm = gmpy2.log(m)
        a, b, c, d = g.entries
        if abs(a) <= tol and abs(b) <= tol:
            raise DegenerateError("both a and b vanish")
        if abs(a) > tol:
            u = -_floor_log(abs(a), logm, tol)
            v = _balance(b, c, m, logm, u, tol)
        else:
            v = -_floor_log(abs(b), logm, tol)
            u = _balance(a, d, m, logm, v, tol)
        mu, mv = m ** u, m ** v
        out = (a * mu, b * mv, c / mv, d / mu)
        return Mat2(*_sign_normalize(out, tol))


def same_double_coset(g1: Mat2, g2: Mat2, m, ctx: PrecisionContext = DEFAULT_CONTEXT) -> bool:
    r1, r2 = canonical_rep(g1, m, ctx), canonical_rep(g2, m, ctx)
    with ctx.work():
        return all(abs(x - y) <= ctx.tol_eq for x, y in zip(r1.entries, r2.entries))


def ball_bound_for(G: GroupPresentation, X, margin: float = 2.0, axis_slack: Optional[float] = None):
    """Squared-norm bound capturing every double coset with |B| <= X.

    A representative whose perpendicular feet lie within half a period of i
    moves i by at most arccosh(X) + len(l); ``axis_slack`` defaults to len(l).
    """
    with G.ctx.work():
        slack = G.len_l if axis_slack is None else mpfr(axis_slack)
        rho = gmpy2.acosh(G.ctx.real(max(X, 1))) + slack + mpfr(margin)
        return 2 * gmpy2.cosh(rho)


@dataclass
class CosetTable:
    """Canonical double cosets found in one ball, sorted by |B|."""

    cosets: List[DoubleCosetRep]
    norm_bound: mpfr
    margin: float
    ctx: PrecisionContext = field(default=DEFAULT_CONTEXT, repr=False)

    def count(self, X) -> int:
        with self.ctx.work():
            lim = self.ctx.real(X) + self.ctx.tol_eq
            return sum(1 for cs in self.cosets if abs(cs.b_value) <= lim)

    def upto(self, X) -> List[DoubleCosetRep]:
        with self.ctx.work():
            lim = self.ctx.real(X) + self.ctx.tol_eq
            return [cs for cs in self.cosets if abs(cs.b_value) <= lim]


def coset_table(G: GroupPresentation, elements: Sequence[GroupElement], X_max,
                norm_bound=None, margin: float = 2.0) -> CosetTable:
    ctx = G.ctx
    found: Dict[tuple, DoubleCosetRep] = {}
    with ctx.work():
        lim = ctx.real(X_max) + ctx.tol_eq
        tol = ctx.tol_eq
        for el in elements:
            if norm_bound is not None and el.mat.norm_sq() > norm_bound:
                continue
            B = b_invariant(el.mat)
            if abs(B) > lim:
                continue
            rep = canonical_rep(el.mat, G.m, ctx)
            k = _key(rep.entries, tol)
            prev = found.get(k)
            if prev is None or len(el.word) < len(prev.word):
                zero = abs(rep.a) <= tol or abs(rep.b) <= tol
                found[k] = DoubleCosetRep(rep, b_invariant(rep), el.word, zero)
    cosets = sorted(found.values(), key=lambda cs: (abs(cs.b_value), tuple(cs.rep.entries)))
    return CosetTable(cosets, norm_bound, margin, ctx)


def count_cosets(G: GroupPresentation, X_max, margin: float = 2.0, certify: bool = True,
                 axis_slack: Optional[float] = None, safety_factor: float = 4.0,
                 max_word_len: int = 256) -> CosetTable:
    """Enumerate once and build the coset table good for every X <= X_max.

    With ``certify`` the ball is enumerated at ``margin + 1`` and the table
    restricted to ``margin`` must produce the same counts.
    """
    if X_max < 1:
        raise ValueError("X must be >= 1")
    outer_margin = margin + 1 if certify else margin
    outer = ball_bound_for(G, X_max, outer_margin, axis_slack)
    elems = enumerate_ball(G, outer, max_word_len=max_word_len, safety_factor=safety_factor)
    full = coset_table(G, elems, X_max, None, outer_margin)
    if certify:
        inner = ball_bound_for(G, X_max, margin, axis_slack)
        small = coset_table(G, elems, X_max, inner, margin)
        if len(small.cosets) != len(full.cosets):
            raise NonStabilizedError(
                f"count changed from {len(small.cosets)} to {len(full.cosets)} "
                f"when margin grew from {margin} to {outer_margin}", partial=full)
    return full


def count_n(G: GroupPresentation, X, margin: float = 2.0, certify: bool = True,
            **kwargs) -> Tuple[int, List[DoubleCosetRep]]:
    """N(X, l): the number of double cosets with |B| <= X."""
    if X < 1:
        raise ValueError("X must be >= 1")
    table = count_cosets(G, X, margin=margin, certify=certify, **kwargs)
    cosets = table.upto(X)
    return len(cosets), cosets


@dataclass(frozen=True)
class ZeroDiagonalVerdict:
    """Outcome of a bounded search; ``found=False`` is not a proof."""

    found: bool
    witness: Optional[GroupElement]
    search_bound: float
    exhaustive: bool = False

    def __bool__(self):
        return self.found


def detect_zero_diagonal(G: GroupPresentation, search_bound) -> ZeroDiagonalVerdict:
    elems = enumerate_ball(G, search_bound)
    tol = G.ctx.tol_eq
    for el in elems:
        if abs(el.mat.a) <= tol and abs(el.mat.d) <= tol:
            return ZeroDiagonalVerdict(True, el, float(search_bound))
    return ZeroDiagonalVerdict(False, None, float(search_bound))


def word_string(G: GroupPresentation, word: Sequence[int]) -> str:
    names = G.names or tuple(f"g{i}" for i in range(len(G.generators)))
    return ".".join(names[i] for i in word) if word else "id"

