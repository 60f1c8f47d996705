"""Command-line front end: ``phi``, ``bench``, ``integrate`` and ``theta``.

Exit status is 0 on success, 1 on a numerical failure and 2 on a usage or
parse error. ``PHILYAP_SEED`` replaces the default seed 42; options given on
the command line win over a ``--config`` file of ``key = value`` lines, which
wins over the defaults.
"""

import argparse
import os
import sys

from .bench import parse_ladder, parse_range, run_integrate_ladder, run_phi_bench
from .densecore import DEFAULT_SEED, NumericalError
from .gallery import CASE_NAMES, gallery_case, laplacian_1d, random_symmetric
from .kernel import phi_lyap
from .matio import MatrixFormatError, format_matrix, read_matrix, write_matrix
from .params import UNIT_ROUNDOFF, derive_theta

__all__ = ["main", "build_parser", "read_config"]


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("PHILYAP_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PHILYAP_SEED must be an integer, got {raw!r}") from None


def read_config(path) -> dict:
    """``key = value`` pairs; blank lines and ``#`` comments are skipped.
    Dashes in keys are read as underscores."""
    out = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise UsageError(f"{path}: line {lineno}: expected 'key = value'")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _band(text):
    lo, hi = (float(t) for t in text.split(","))
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="philyap-cli",
                                description="Lyapunov operator phi-functions")
    p.add_argument("--config", help="file of key = value defaults")
    sub = p.add_subparsers(dest="command", required=True)

    ph = sub.add_parser("phi", help="compute phi_l(t L_A)[Q]")
    src = ph.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="file holding A")
    src.add_argument("--gallery", choices=CASE_NAMES + ("laplacian1d",))
    ph.add_argument("--n", type=int, default=8, help="size for --gallery")
    ph.add_argument("--scale", type=float, default=1.0, help="factor c for laplacian1d")
    ph.add_argument("--q", help="file holding Q (default: seeded random symmetric)")
    ph.add_argument("--l", type=int)
    ph.add_argument("--t", type=float, default=1.0)
    ph.add_argument("--seed", type=int)
    ph.add_argument("--out", help="output file (default: stdout)")

    be = sub.add_parser("bench", help="kernel accuracy and cost table")
    be.add_argument("--suite", choices=("structured", "laplacian1d"), default="structured")
    be.add_argument("--n", type=int, default=8)
    be.add_argument("--scale", type=float, default=1.0)
    be.add_argument("--l", default="1..8", help="range a..b or list a,b,c")
    be.add_argument("--cases", help="comma-separated subset of the structured suite")
    be.add_argument("--no-oracle", action="store_true")
    be.add_argument("--repeats", type=int, default=5)
    be.add_argument("--workers", type=int, default=1)
    be.add_argument("--seed", type=int)
    be.add_argument("--out", default="bench", help="output stem for .csv and .json")

    it = sub.add_parser("integrate", help="Riccati convergence ladder")
    it.add_argument("--scheme", choices=("exp_euler", "exprb2", "exprb3"))
    it.add_argument("--n0", type=int, default=10)
    it.add_argument("--axis", choices=("x", "y"), default="x")
    it.add_argument("--b-band", type=_band, default=(0.1, 0.3))
    it.add_argument("--c-band", type=_band, default=(0.7, 0.9))
    ladder = it.add_mutually_exclusive_group()
    ladder.add_argument("--steps-ladder", default=None, help="doubling ladder lo..hi")
    ladder.add_argument("--steps", type=int)
    it.add_argument("--t-end", type=float, default=0.05)
    it.add_argument("--ref-steps", type=int, default=8192)
    it.add_argument("--seed", type=int)
    it.add_argument("--out", default="integrate")

    th = sub.add_parser("theta", help="derive the threshold theta_d")
    th.add_argument("--degree", type=int)
    th.add_argument("--tol", type=float, default=UNIT_ROUNDOFF)
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    command = next((a for a in argv if a in COMMANDS), None)
    if command is None:
        return
    sub = parser._subparsers._group_actions[0].choices[command]
    by_dest = {a.dest: a for a in sub._actions}
    typed = {}
    for key, raw in values.items():
        action = by_dest.get(key)
        if action is None or key == "help":
            raise UsageError(f"unknown config key {key!r} for {command}")
        if action.nargs == 0:
            typed[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                typed[key] = action.type(raw) if action.type else raw
            except ValueError:
                raise UsageError(f"config key {key!r}: bad value {raw!r}") from None
    sub.set_defaults(**typed)


def _load_A(args, seed):
    if args.matrix:
        return read_matrix(args.matrix)
    if args.gallery == "laplacian1d":
        return laplacian_1d(args.n, args.scale)
    return gallery_case(args.gallery, args.n, seed).A


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option {', '.join(missing)}")


def cmd_phi(args, seed):
    _require(args, "l")
    A = _load_A(args, seed)
    Q = read_matrix(args.q) if args.q else random_symmetric(A.shape[0], seed)
    if Q.shape != A.shape:
        raise UsageError(f"Q is {Q.shape[0]}x{Q.shape[1]} but A is {A.shape[0]}x{A.shape[1]}")
    if not args.t > 0:
        raise UsageError("--t must be positive")
    res = phi_lyap(args.t * A, Q, args.l)
    p = res.params
    print(f"seed={seed} m={p.m} s={p.s} degree={p.total_degree} "
          f"products={res.products_used} predicted={res.predicted_products}", file=sys.stderr)
    if args.out:
        write_matrix(args.out, res.top)
    else:
        sys.stdout.write(format_matrix(res.top))
    return 0


def cmd_bench(args, seed):
    ls = parse_range(args.l)
    cases = args.cases.split(",") if args.cases else None
    report = run_phi_bench(args.suite, args.n, ls, seed=seed, oracle=not args.no_oracle,
                           scale=args.scale, cases=cases, repeats=args.repeats,
                           workers=args.workers)
    paths = report.write(args.out)
    errs = [e for e in report.errors if e is not None]
    worst = f"{max(errs):.6e}" if errs else "n/a"
    print(f"seed={seed} rows={len(report.rows)} max_error={worst} -> {paths[0]}",
          file=sys.stderr)
    return 0


def cmd_integrate(args, seed):
    _require(args, "scheme")
    if args.steps is not None:
        steps = [args.steps]
    else:
        steps = parse_ladder(args.steps_ladder or "16..512")
    report = run_integrate_ladder(args.scheme, steps, t_end=args.t_end, n0=args.n0,
                                  ref_steps=args.ref_steps, axis=args.axis,
                                  b_band=args.b_band, c_band=args.c_band, seed=seed)
    paths = report.write(args.out)
    slope = report.metadata.get("slope")
    msg = f"seed={seed} scheme={args.scheme}"
    if slope is not None:
        msg += f" slope={slope:.4f}"
    print(f"{msg} -> {paths[0]}", file=sys.stderr)
    return 0


def cmd_theta(args, seed):
    _require(args, "degree")
    print(f"{derive_theta(args.degree, args.tol):.6e}")
    return 0


COMMANDS = {"phi": cmd_phi, "bench": cmd_bench, "integrate": cmd_integrate, "theta": cmd_theta}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        seed = args.seed if getattr(args, "seed", None) is not None else default_seed()
        return COMMANDS[args.command](args, seed)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (UsageError, MatrixFormatError, OSError) as exc:
        print(f"philyap-cli: error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ArithmeticError, FloatingPointError) as exc:
        print(f"philyap-cli: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"philyap-cli: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
