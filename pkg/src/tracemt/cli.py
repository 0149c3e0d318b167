"""Command-line front end: ``tracemt constants | sweep | verify``."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .config import Tolerances, load_kv
from .constants import THEOREM_IDS, DomainError, Params, parse_q, sharp_constants

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_SWEEP_PARAMS = "1/16,1/24,1/32,1/48,1/64"

# (flag name, type, default) per subcommand; config files may set any of them
OPTIONS = {
    "constants": [("n", int, None), ("k", int, None), ("alpha", float, None), ("q", str, "2"), ("d", float, None)],
    "sweep": [
        ("theorem", str, "T1"), ("measure", str, "lebesgue"), ("multiple", float, 1.0),
        ("params", str, DEFAULT_SWEEP_PARAMS), ("h", str, "1/256"), ("n", int, 2), ("k", int, 1),
        ("alpha", float, 1.0), ("q", str, "2"), ("rho0", float, 0.5), ("csv", str, None),
    ],
    "verify": [("suite", str, "all"), ("tolerances", str, None)],
}


class UsageError(Exception):
    pass


def _frac(text: str) -> float:
    return float(Fraction(text.strip()))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tracemt", description="Sharp trace Moser-Trudinger-Adams toolkit.")
    ap.add_argument("--version", action="version", version=f"tracemt {__version__}")
    ap.add_argument("--threads", type=int, default=None, help="cap on compiled-kernel worker threads")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="closed-form constants and the six thresholds")
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--alpha", type=float)
    c.add_argument("--q")
    c.add_argument("--d", type=float)

    s = sub.add_parser("sweep", help="sharpness sweep of an extremal family")
    s.add_argument("--theorem", choices=["T1", "T1_0", "T1_1"])
    s.add_argument("--measure", help="lebesgue | hyperplane[:offset] | radial_power:d | atoms:path")
    s.add_argument("--multiple", type=float, help="multiple of the sharp threshold")
    s.add_argument("--params", help="comma-separated family parameters, fractions allowed")
    s.add_argument("--h", help="grid spacing, fractions allowed")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--alpha", type=float)
    s.add_argument("--q")
    s.add_argument("--rho0", type=float)
    s.add_argument("--csv", help="also write the CSV report to this path")

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("--suite", choices=["hardy", "rearrange", "potentials", "oneil", "hbw", "all"])
    v.add_argument("--tolerances", help="key = value tolerance file")

    for p in (c, s, v):
        p.add_argument("--config", help="key = value file with defaults for this command")
        p.add_argument("--seed", type=int, default=0)
    return ap


def resolve(args: argparse.Namespace) -> dict:
    """Flags override the config file, which overrides built-in defaults."""
    conf = load_kv(args.config) if args.config else {}
    out = {}
    for name, typ, default in OPTIONS[args.command]:
        val = getattr(args, name)
        if val is None and name in conf:
            val = typ(conf[name])
        out[name] = default if val is None else val
    unknown = set(conf) - {o[0] for o in OPTIONS[args.command]}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    out["seed"] = args.seed
    return out


def header(command: str, cfg: dict) -> list[str]:
    items = ";".join(f"{k}={cfg[k]}" for k in sorted(cfg) if k != "seed")
    return [f"# tracemt {__version__} {command}", f"# config: {items}", f"# seed={cfg['seed']}"]


def _fmt(x) -> str:
    return "none" if x is None else f"{float(x):.15g}"


def cmd_constants(cfg: dict) -> int:
    if cfg["n"] is None:
        raise UsageError("--n is required")
    p = Params(n=cfg["n"], k=cfg["k"], alpha=cfg["alpha"], q=parse_q(cfg["q"]), d=cfg["d"])
    sc = sharp_constants(p)
    lines = header("constants", cfg)
    lines += [
        f"omega_n={_fmt(sc.omega_n)}",
        f"gamma_alpha={_fmt(sc.gamma_alpha)}",
        f"gamma_tilde={_fmt(sc.gamma_tilde)}",
        f"ell_k_n={'none' if sc.ell_k_n is None else sc.ell_k_n}",
        f"beta_nkq={_fmt(sc.beta_nkq)}",
        f"qprime={_fmt(p.qprime)}",
        "theorem,linear,exponent",
    ]
    for tid in THEOREM_IDS:
        th = sc.thresholds.get(tid)
        if th is not None:
            lines.append(f"{tid},{th.linear:.15g},{th.exponent:.15g}")
    print("\n".join(lines))
    return EXIT_OK


def make_measure(spec: str, theorem: str, n: int, h: float):
    from .grid import Ball
    from .measures import load_atoms, make_hyperplane, make_lebesgue, make_radial_power

    dom = Ball((0.0,) * n, 1.0 if theorem == "T1" else 2.0)
    kind, _, arg = spec.partition(":")
    if kind == "lebesgue":
        return make_lebesgue(dom, h)
    if kind == "hyperplane":
        # offset h/2 keeps the atoms on cell centres of the family grid
        return make_hyperplane(dom, h, plane=(None, float(arg) if arg else h / 2))
    if kind == "radial_power":
        return make_radial_power(dom, h, float(arg))
    if kind == "atoms":
        return load_atoms(arg)
    raise UsageError(f"unknown measure {spec!r}")


def cmd_sweep(cfg: dict, tol: Tolerances) -> int:
    from .verify import certify_for_sweep, sharpness_sweep, sweep_csv, sweep_summary, sweep_data

    h = _frac(cfg["h"])
    params = [_frac(x) for x in cfg["params"].split(",") if x.strip()]
    nu = make_measure(cfg["measure"], cfg["theorem"], cfg["n"], h)
    d = nu.dimension if nu.dimension is not None else float(cfg["n"])
    p = Params(n=cfg["n"], k=cfg["k"], alpha=cfg["alpha"], q=parse_q(cfg["q"]), d=d)
    if nu.dimension is None:
        certs = (None, None)
    else:
        certs = certify_for_sweep(nu, tol, rho0=cfg["rho0"])
    data = sweep_data(cfg["theorem"], params, nu, p, h)
    res = sharpness_sweep(cfg["theorem"], params, nu, cfg["multiple"], p, h, tol, data=data, certificates=certs)
    text = "\n".join(header("sweep", cfg)) + "\n" + sweep_csv(res)
    if cfg["csv"]:
        with open(cfg["csv"], "w") as fh:
            fh.write(text)
    summary = sweep_summary(res)
    g, nd = res.growth, res.nondegeneracy
    summary.append(f"growth_certificate={'none' if g is None else ('pass' if g.passed else 'fail')}")
    summary.append(f"nondegeneracy_certificate={'none' if nd is None else ('pass' if nd.passed else 'fail')}")
    sys.stdout.write(text + "\n".join(summary) + "\n")
    return EXIT_OK


def cmd_verify(cfg: dict) -> int:
    from .suites import run_suite

    tol = Tolerances.load(cfg["tolerances"])
    checks = run_suite(cfg["suite"], tol, cfg["seed"])
    lines = header("verify", cfg) + [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"summary: {len(checks) - failed} passed, {failed} failed")
    print("\n".join(lines))
    return EXIT_OK if failed == 0 else EXIT_FAIL


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads:
        from ._kernels import set_threads

        set_threads(args.threads)
    try:
        cfg = resolve(args)
        if args.command == "constants":
            return cmd_constants(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, Tolerances.load())
        return cmd_verify(cfg)
    except (UsageError, DomainError, ValueError, OSError) as exc:
        ap.print_usage(sys.stderr)
        print(f"tracemt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
