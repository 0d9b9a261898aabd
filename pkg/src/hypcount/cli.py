"""``hypcount`` command line.

Exit codes: 0 ok, 1 usage, 2 I/O or schema, 3 numerical failure,
4 non-stabilized enumeration.  Errors go to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .errors import HypcountError

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC, EXIT_UNSTABLE = 0, 1, 2, 3, 4
DEFAULT_SCHEDULE = "0.2,0.1,0.05,0.025"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    bits: int
    threads: int
    out: str
    seed: int
    options: Dict[str, object] = field(default_factory=dict)

    def echo(self) -> dict:
        d = asdict(self)
        d["version"] = __version__
        # thread count never changes results, so it stays out of the echo
        d.pop("threads")
        return d


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypcount", description="Double-coset counting on Fuchsian groups and the "
                "spectral experiments around its error term.")
    p.add_argument("--version", action="version", version=f"hypcount {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bits", type=_positive_int, default=128, help="working precision (default 128)")
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1,
                        help="worker processes for independent steps (default: all cores)")
    common.add_argument("--out", default=".", help="directory for CSV/JSON output")
    common.add_argument("--seed", type=int, default=7, help="random seed (default 7)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    group_opts = argparse.ArgumentParser(add_help=False)
    group_opts.add_argument("--group", help="group file (default: the bundled genus-2 group)")
    group_opts.add_argument("--margin", type=float, default=2.0, help="enumeration margin (default 2)")

    spec_opts = argparse.ArgumentParser(add_help=False)
    spec_opts.add_argument("--spectrum", help="spectrum file; default is an empty spectrum "
                           "(no exceptional or s = 1/2 terms)")

    c = sub.add_parser("count", parents=[common, group_opts], help="N(X, l) and the coset table")
    c.add_argument("--X", type=float, required=True)

    e = sub.add_parser("error-series", parents=[common, group_opts, spec_opts],
                       help="E(X) and E~(X) on a grid")
    e.add_argument("--grid", type=_floats, default=_floats("10,25,50,100,200"))

    m = sub.add_parser("meanvalue", parents=[common, group_opts, spec_opts],
                       help="(1/X) int_X^2X E^2 against X log^2 X")
    m.add_argument("--X", type=_floats, default=_floats("50,100,200"))
    m.add_argument("--samples", type=int, default=512)

    o = sub.add_parser("omega", parents=[common], help="resonance experiment on a spectrum")
    o.add_argument("--spectrum", help="spectrum file (default: bundled synthetic spectrum, seed 7)")
    o.add_argument("--schedule", type=_floats, default=_floats(DEFAULT_SCHEDULE))
    o.add_argument("--k", type=int, default=2, help="Fourier decay order (default 2)")
    o.add_argument("--random", type=int, default=32, help="non-resonant samples per step")

    r = sub.add_parser("resonate", parents=[common], help="align e^{i r_j R} near 1")
    r.add_argument("--rs", type=_floats, required=True)
    r.add_argument("--M", type=float, required=True)
    r.add_argument("--T", type=float, required=True)
    r.add_argument("--method", choices=["pigeonhole", "brute", "both"], default="pigeonhole")

    sub.add_parser("specfun-check", parents=[common],
                   help="run the special-function invariants and print pinned constants")

    s = sub.add_parser("synth-spectrum", parents=[common], help="write a seeded synthetic spectrum")
    s.add_argument("--len-l", type=float, required=True)
    s.add_argument("--t-max", type=float, required=True)
    s.add_argument("--density", type=float, default=0.05)
    s.add_argument("--output", required=True)
    return p


# -- helpers ----------------------------------------------------------------------

def _ctx(cfg: RunConfig):
    from .numerics import PrecisionContext
    return PrecisionContext(cfg.bits)


def _group(args, cfg):
    from .fuchsian import BUNDLED_GROUP, load_group
    return load_group(args.group or BUNDLED_GROUP, _ctx(cfg))


def _spectrum_for(args, G):
    from .spectral import Spectrum, load_spectrum
    if args.spectrum:
        return load_spectrum(args.spectrum)
    return Spectrum((), float(G.len_l))


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def _emit(cfg: RunConfig, report) -> None:
    _write(cfg, f"{report.kind}.csv", report.to_csv())
    _write(cfg, f"{report.kind}.json", report.to_json(cfg.echo()))


# -- subcommands ------------------------------------------------------------------

def cmd_count(args, cfg: RunConfig) -> int:
    import csv
    import io

    from .fuchsian import count_n, word_string

    G = _group(args, cfg)
    n, cosets = count_n(G, args.X, margin=args.margin)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["B", "a", "b", "c", "d", "word"])
    digits = max(17, int(cfg.bits * 0.30103) - 4)
    for cs in cosets:
        w.writerow([_dec(cs.b_value, digits),
                    *cs.rep.as_strings(digits), word_string(G, cs.word)])
    _write(cfg, "count.csv", buf.getvalue())
    _write(cfg, "count.json", json.dumps({"tool": "hypcount", "version": __version__,
                                          "config": cfg.echo(), "X": args.X, "N": n},
                                         indent=2, sort_keys=True) + "\n")
    print(n)
    return EXIT_OK


def _dec(x, digits):
    import gmpy2
    return gmpy2.mpfr(x).__format__(f".{digits}g")


def cmd_error_series(args, cfg: RunConfig) -> int:
    from .experiments import error_series
    G = _group(args, cfg)
    rep = error_series(G, _spectrum_for(args, G), args.grid)
    _emit(cfg, rep)
    print(rep.to_csv(), end="")
    return EXIT_OK


def cmd_meanvalue(args, cfg: RunConfig) -> int:
    from .constants import MEAN_VALUE_C
    from .experiments import mean_value_report
    G = _group(args, cfg)
    rep = mean_value_report(G, _spectrum_for(args, G), args.X, args.samples, ratio_bound=MEAN_VALUE_C)
    _emit(cfg, rep)
    print(rep.to_csv(), end="")
    return EXIT_OK


def cmd_omega(args, cfg: RunConfig) -> int:
    from .experiments import omega_experiment
    from .spectral import BUNDLED_SPECTRUM, load_spectrum
    sp = load_spectrum(args.spectrum or BUNDLED_SPECTRUM)
    rep = omega_experiment(sp, args.schedule, k=args.k, seed=cfg.seed, n_random=args.random,
                           workers=min(cfg.threads, len(args.schedule)), ctx=_ctx(cfg))
    _emit(cfg, rep)
    print(rep.to_csv(), end="")
    print(f"verdict: {rep.verdict}")
    return EXIT_OK


def cmd_resonate(args, cfg: RunConfig) -> int:
    from .resonance import ResonanceRequest, resonance_brute, resonance_find
    req = ResonanceRequest(args.rs, args.M, args.T, _ctx(cfg))
    methods = {"pigeonhole": [resonance_find], "brute": [resonance_brute],
               "both": [resonance_find, resonance_brute]}[args.method]
    results = []
    for fn in methods:
        res = fn(req)
        results.append({"method": res.method.value, "R": res.R, "k": res.k,
                        "max_defect": res.max_defect, "bound": req.bound})
        print(f"{res.method.value}: R={res.R!r} defect={res.max_defect:.12g} bound={req.bound:.12g}")
    _write(cfg, "resonate.json", json.dumps({"tool": "hypcount", "version": __version__,
                                             "config": cfg.echo(), "results": results},
                                            indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def specfun_checks(ctx) -> List[dict]:
    import mpmath

    from . import constants
    from .specfun import a_half, big_g, log_gamma, sin2_identity
    from .transforms import psi_hat, tau_half

    checks = []

    def add(name, ok, value):
        checks.append({"check": name, "ok": bool(ok), "value": value})

    with mpmath.workprec(ctx.bits):
        worst = mpmath.mpf(0)
        for i in range(10):
            for j in range(10):
                z = mpmath.mpc(-4.55 + i, -4.5 + j)
                v = mpmath.exp(log_gamma(z, ctx) + log_gamma(1 - z, ctx)) * mpmath.sin(mpmath.pi * z) / mpmath.pi
                worst = max(worst, abs(v - 1))
        add("reflection Gamma(z)Gamma(1-z)sin(pi z)/pi = 1", worst <= 1e-20, float(worst))
        worst = mpmath.mpf(0)
        for k in range(1, 61):
            lhs, rhs = sin2_identity(mpmath.mpf(k) / 2, ctx)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        add("2 sin^2(pi(1-s)/2) = 1 - i sinh(pi t), t <= 30", worst <= 1e-20, float(worst))
        c1, c2 = constants.G_WINDOW
        vals = [float(mpmath.sqrt(t) * abs(big_g(mpmath.mpc(0.5, t), ctx)))
                for t in mpmath.linspace(5, 500, 100)]
        add(f"sqrt(t)|G| in [{c1}, {c2}] on [5, 500]", c1 <= min(vals) and max(vals) <= c2,
            [min(vals), max(vals)])
        signs = [mpmath.re(big_g(mpmath.mpc(0.5, t), ctx)) > 0
                 for t in mpmath.linspace(constants.RE_G_ZERO + 0.01, 1000, 200)]
        add(f"Re G > 0 on (t0, 1000], t0 = {constants.RE_G_ZERO}", all(signs), "positive" if all(signs) else "mixed")
        tau = tau_half(ctx)
        add(f"psi_hat(tau) = 1/2, tau = {constants.TAU}",
            abs(tau - constants.TAU) < 1e-12 and abs(psi_hat(tau, ctx) - 0.5) < ctx.tol_eq, float(tau))
        r1, r2 = constants.A_HALF_WINDOW
        rho = [float(a_half(X, 1, ctx) / (mpmath.sqrt(X) * mpmath.log(X))) for X in (1e2, 1e4, 1e6)]
        add(f"a_half(X)/(sqrt(X) log X) in [{r1}, {r2}]", all(r1 <= v <= r2 for v in rho), rho)
    return checks


def cmd_specfun_check(args, cfg: RunConfig) -> int:
    from . import constants
    checks = specfun_checks(_ctx(cfg))
    for c in checks:
        print(f"{'PASS' if c['ok'] else 'FAIL'}  {c['check']}  ({c['value']})")
    pinned = {"c1": constants.G_WINDOW[0], "c2": constants.G_WINDOW[1],
              "C_sign_change": constants.RE_G_ZERO, "tau": constants.TAU,
              "rho1": constants.A_HALF_WINDOW[0], "rho2": constants.A_HALF_WINDOW[1]}
    print("pinned: " + " ".join(f"{k}={v}" for k, v in pinned.items()))
    _write(cfg, "specfun_check.json", json.dumps({"tool": "hypcount", "version": __version__,
                                                  "config": cfg.echo(), "checks": checks,
                                                  "pinned": pinned}, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if all(c["ok"] for c in checks) else EXIT_NUMERIC


def cmd_synth_spectrum(args, cfg: RunConfig) -> int:
    from .spectral import save_spectrum, synth_spectrum
    sp = synth_spectrum(args.len_l, args.t_max, args.density, cfg.seed)
    save_spectrum(sp, args.output)
    print(f"{len(sp.data)} entries, sigma={sp.sigma:.4g} -> {args.output}")
    return EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "error-series": cmd_error_series,
    "meanvalue": cmd_meanvalue,
    "omega": cmd_omega,
    "resonate": cmd_resonate,
    "specfun-check": cmd_specfun_check,
    "synth-spectrum": cmd_synth_spectrum,
}


def _fail(code: str, message: str, status: int) -> int:
    print(json.dumps({"error": code, "message": message, "exit_status": status}), file=sys.stderr)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("USAGE", str(exc), EXIT_USAGE)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    skip = {"command", "bits", "threads", "out", "seed"}
    opts = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg = RunConfig(args.command, args.bits, args.threads, args.out, args.seed, opts)
    try:
        return COMMANDS[args.command](args, cfg)
    except FileNotFoundError as exc:
        return _fail("FILE_NOT_FOUND", str(exc), EXIT_IO)
    except OSError as exc:
        return _fail("IO", str(exc), EXIT_IO)
    except HypcountError as exc:
        return _fail(exc.code, str(exc), exc.exit_status)
    except ValueError as exc:
        # precondition violations such as X < 1
        return _fail("INVALID_ARGUMENT", str(exc), EXIT_USAGE)
    except ArithmeticError as exc:
        return _fail("NUMERICAL", str(exc), EXIT_NUMERIC)


if __name__ == "__main__":
    sys.exit(main())
