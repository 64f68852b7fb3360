"""Command-line interface.

Exit codes: 0 success (a rejection is a result, not an error), 2 usage
error, 3 data error, 4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import DataError, KCMDError, NumericalDegeneracy, UsageError
from .estimators import estimate_all
from .inference import run_test
from .io import dumps, load_sample, read_config
from .kernels import gram_pair, resolve_kernel
from .simulate import KINDS, Scenario, monte_carlo
from .weights import WeightFamily, certificate, generate, verify_conditions

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DEGENERATE = 4


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("KCMD_THREADS")
    if env is None:
        return 1
    try:
        t = int(env)
    except ValueError:
        raise UsageError(f"KCMD_THREADS must be an integer, got {env!r}") from None
    if t < 1:
        raise UsageError("KCMD_THREADS must be positive")
    return t


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_test(args) -> int:
    cfg = read_config(args.config)
    sample = load_sample(args.manifest)
    alpha = cfg.alpha if args.alpha is None else args.alpha
    result = run_test(sample, cfg.kernel, cfg.family, alpha)
    _emit(dumps(result.to_dict()), args.output or cfg.output)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    cfg = read_config(args.config)
    sample = load_sample(args.manifest)
    spec = resolve_kernel(cfg.kernel, sample)
    bundle = estimate_all(gram_pair(spec, sample), cfg.family)
    payload = bundle.to_dict()
    kernel = spec.to_dict()
    if cfg.kernel == "median":
        kernel["bandwidth"] = "median"
    payload["kernel"] = kernel
    _emit(dumps(payload), args.output or cfg.output)
    return EXIT_OK


def _scenario(args, seed) -> Scenario:
    if args.scenario in KINDS:
        fields = {"kind": args.scenario}
    else:
        path = Path(args.scenario)
        if not path.is_file():
            raise UsageError(
                f"--scenario must be one of {KINDS} or a JSON file, got {args.scenario!r}"
            )
        try:
            fields = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"scenario file is not valid JSON: {exc}") from None
        if not isinstance(fields, dict):
            raise UsageError("scenario file must hold a JSON object")
        if "seed" in fields:
            raise UsageError("set the seed in the run config, not in the scenario file")
    for name in ("n", "b", "data"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    try:
        return Scenario(seed=seed, **fields)
    except TypeError as exc:
        raise UsageError(f"bad scenario fields: {exc}") from None


def _cmd_simulate(args) -> int:
    cfg = read_config(args.config)
    scenario = _scenario(args, cfg.seed)
    report = monte_carlo(
        scenario,
        args.replicates,
        kernel=cfg.kernel,
        family=cfg.family,
        alpha=cfg.alpha,
        threads=_threads(args.threads),
    )
    _emit(dumps(report.to_dict()), args.output or cfg.output)
    if args.csv:
        report.write_csv(args.csv)
    if not report.ok:
        print(
            f"kcmd: {report.n_degenerate} of {report.replicates} replicates were degenerate",
            file=sys.stderr,
        )
        return EXIT_DEGENERATE
    return EXIT_OK


def _cmd_weights(args) -> int:
    family = WeightFamily(args.family, args.gamma)
    payload = {
        "family": family.kind,
        "gamma": family.gamma,
        "n": args.n,
        "weights": generate(family, args.n).tolist(),
    }
    if family.inferential:
        payload["certificate"] = certificate(family).to_dict()
    if args.verify:
        payload["verification"] = verify_conditions(family, args.n).to_dict()
    _emit(dumps(payload), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcmd",
        description="Weighted kernel conditional mean dependence test.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifest=True):
        if manifest:
            p.add_argument("--manifest", required=True, help="dataset manifest (JSON)")
        p.add_argument("--config", help="run configuration (JSON)")
        p.add_argument("--output", "-o", help="write JSON here instead of stdout")
        p.add_argument("--threads", type=int, help="upper bound on worker threads")

    p = sub.add_parser("test", help="run the test on a dataset")
    common(p)
    p.add_argument("--alpha", type=float, help="significance level (overrides config)")
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("estimate", help="print every estimate for a dataset")
    common(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("simulate", help="Monte Carlo size/power study")
    common(p, manifest=False)
    p.add_argument("--scenario", required=True, help=f"one of {', '.join(KINDS)} or a JSON file")
    p.add_argument("--replicates", type=int, required=True)
    p.add_argument("--n", type=int, help="sample size (overrides scenario)")
    p.add_argument("--b", type=float, help="signal strength for H1 scenarios")
    p.add_argument("--data", choices=("vector", "curve"), help="data type for H1 scenarios")
    p.add_argument("--csv", help="also write per-replicate records as CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("weights", help="print a weight array")
    p.add_argument("--family", default="alternating", choices=("alternating", "sinusoidal", "constant"))
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="also check the weight conditions up to n")
    p.add_argument("--output", "-o")
    p.set_defaults(func=_cmd_weights)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"kcmd: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"kcmd: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalDegeneracy as exc:
        print(f"kcmd: numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except KCMDError as exc:
        print(f"kcmd: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"kcmd: I/O error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
