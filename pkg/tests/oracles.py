"""Reference implementations that share no code path with the library."""

import gmpy2

from hypcount.fuchsian import ball_bound_for, enumerate_ball
from hypcount.numerics import b_invariant


def _exponent(x, y, logm):
    # integer e with |y| = m^e |x|, or None when that fails to be an integer
    e = gmpy2.log(abs(y) / abs(x)) / logm
    k = int(gmpy2.rint(e))
    return k if abs(e - k) < 1e-12 else None


def related(g, h, m, tol):
    """Is h = +-gamma1^k g gamma1^l for integers k, l?  Solved from entry ratios."""
    logm = gmpy2.log(m)
    ga, gb, gc, gd = g.entries
    ha, hb, hc, hd = h.entries
    for x, y in ((ga, ha), (gb, hb), (gc, hc), (gd, hd)):
        if (abs(x) <= tol) != (abs(y) <= tol):
            return False
    # u = k + l scales a by m^u and d by m^-u; v = k - l scales b by m^v and c by m^-v
    u = _exponent(ga, ha, logm) if abs(ga) > tol else (
        -_exponent(gd, hd, logm) if abs(gd) > tol and _exponent(gd, hd, logm) is not None else None)
    v = _exponent(gb, hb, logm) if abs(gb) > tol else (
        -_exponent(gc, hc, logm) if abs(gc) > tol and _exponent(gc, hc, logm) is not None else None)
    us = [u] if u is not None else ([v] if v is not None else [0])
    vs = [v] if v is not None else us
    if (abs(ga) > tol or abs(gd) > tol) and u is None:
        return False
    if (abs(gb) > tol or abs(gc) > tol) and v is None:
        return False
    for uu in us:
        for vv in vs:
            if (uu - vv) % 2:
                # a free exponent can always take the matching parity
                if abs(ga) <= tol and abs(gd) <= tol:
                    uu = vv
                elif abs(gb) <= tol and abs(gc) <= tol:
                    vv = uu
                else:
                    continue
            img = (ga * m ** uu, gb * m ** vv, gc / m ** vv, gd / m ** uu)
            for sign in (1, -1):
                if all(abs(sign * x - y) <= tol * max(1, abs(y)) * 1e3 for x, y in zip(img, (ha, hb, hc, hd))):
                    return True
    return False


def brute_count(G, X, margin=2.0):
    """Enumerate at margin + 2 and reduce pairwise inside each B-level."""
    ctx = G.ctx
    with ctx.work():
        bound = ball_bound_for(G, X, margin + 2)
        elems = enumerate_ball(G, bound)
        lim = ctx.real(X) + ctx.tol_eq
        classes = {}
        for e in elems:
            B = b_invariant(e.mat)
            if abs(B) > lim:
                continue
            level = classes.setdefault(round(float(B), 9), [])
            if not any(related(r, e.mat, G.m, ctx.tol_eq) for r in level):
                level.append(e.mat)
        return sum(len(v) for v in classes.values())
