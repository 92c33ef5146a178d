"""Command-line front end: run methods, scan labels, verify trajectories.

Exit codes: 0 success/verified, 1 verification violations or a diverged
run, 2 usage or input errors.  Every subcommand accepts --config FILE
holding one key=value pair per line (# starts a comment); explicit
flags override file values.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .algorithms import (
    ALGORITHMS,
    AlgoConfig,
    SchemaError,
    run,
    trajectory_from_json,
    trajectory_to_csv,
    trajectory_to_json,
)
from .harness import verify_run
from .objectives import corpus_manifest, corpus_names, get_objective
from .regions import Region, RegionParams, region_scan, scan_to_csv

__all__ = ["main"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

_X0_PRESETS = ("ones", "zeros", "rand")

_RUN_EPILOG = """\
trajectory CSV schema v1 columns:
  k, x0..x{n-1}, f, grad_norm, lambda_minus, nu, delta, step_norm,
  accepted, region, delta_f
Floats carry 17 significant digits (lossless round-trip); empty cells
mean not applicable.  The JSON twin carries schema_version 1 and parses
back to an identical trajectory.  Config file: key=value lines, '#'
comments; flags override file values.  --batch DIR treats every regular
file in DIR as one config spec and runs them in a work pool; outputs
default to the spec file's own name.  Unbounded-below objectives get a
default --divergence-floor of f_ref - 1e12 when none is given.
"""

_SCAN_EPILOG = """\
region-map CSV schema v1 columns: x0..x{n-1}, label, delta_f, grad_norm,
lambda_minus.  Floats carry 17 significant digits.
"""

_VERIFY_EPILOG = """\
report JSON carries schema_version 1.  Summary CSV schema v1 columns:
k, region, applicable, regime, ratio_bound, observed_ratio, satisfied.
Exit 0 when the violations list is empty, 1 otherwise.
"""


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _read_config(path: str) -> dict:
    settings: dict = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            settings[key.strip().replace("-", "_")] = value.strip()
    return settings


def _pick(args, cfg: dict, key: str, conv, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in cfg:
        return conv(cfg[key])
    return default


def _parse_x0(text: str, obj, seed: int) -> np.ndarray:
    if text in _X0_PRESETS:
        if text == "ones":
            return np.ones(obj.n)
        if text == "zeros":
            return np.zeros(obj.n)
        rng = np.random.default_rng(seed)
        lo = np.array([b[0] for b in obj.scan_domain])
        hi = np.array([b[1] for b in obj.scan_domain])
        return rng.uniform(lo, hi)
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(
            f"x0 must be comma-separated floats or one of {_X0_PRESETS}, got {text!r}"
        ) from None
    if len(values) != obj.n:
        raise ValueError(f"x0 has {len(values)} coordinates; objective needs {obj.n}")
    return np.array(values)


def _run_single(args, cfg: dict, default_out: str | None = None) -> tuple[int, str]:
    """Resolve one run spec and execute it; returns (exit code, summary)."""
    obj_name = _pick(args, cfg, "obj", str)
    if obj_name is None:
        return EXIT_USAGE, "missing required option --obj"
    try:
        obj = get_objective(obj_name)
    except KeyError:
        return EXIT_USAGE, f"unknown objective {obj_name!r}; known: {', '.join(corpus_names())}"
    algo = _pick(args, cfg, "algo", str)
    if algo is None:
        return EXIT_USAGE, "missing required option --algo"
    if algo not in ALGORITHMS:
        return EXIT_USAGE, f"unknown algorithm {algo!r}; known: {', '.join(ALGORITHMS)}"

    kappa = _pick(args, cfg, "kappa", float, obj.recommended_kappa)
    f_ref = _pick(args, cfg, "f_ref", float, obj.recommended_f_ref)
    if kappa is None:
        return EXIT_USAGE, f"objective {obj_name!r} has no recommended kappa; pass --kappa"
    if f_ref is None:
        return EXIT_USAGE, f"objective {obj_name!r} has no recommended f_ref; pass --f-ref"

    config_kwargs = {"algo": algo}
    for key, conv in (
        ("l1", float),
        ("l2", float),
        ("eta", float),
        ("psi", float),
        ("nu_min", float),
        ("nu_max", float),
        ("nu0", float),
        ("nu_reset", str),
        ("max_iters", int),
        ("eps_f", float),
        ("eps_1", float),
        ("eps_2", float),
        ("divergence_floor", float),
    ):
        value = _pick(args, cfg, key, conv)
        if value is not None:
            config_kwargs[key] = value
    # Unbounded-below entries demand a floor; default it so qualitative
    # runs (saddle escapes) work without one, at f_ref - 1e12.
    if "divergence_floor" not in config_kwargs and "unbounded-below" in obj.tags:
        config_kwargs["divergence_floor"] = f_ref - 1e12

    seed = _pick(args, cfg, "seed", int, 0)
    x0_text = _pick(args, cfg, "x0", str, "ones")
    out = _pick(args, cfg, "out", str, default_out or f"{obj_name}_{algo}")
    try:
        x0 = _parse_x0(x0_text, obj, seed)
        config = AlgoConfig(**config_kwargs)
        params = RegionParams(kappa=kappa, f_ref=f_ref)
        traj = run(obj, config, params, x0)
    except ValueError as exc:
        return EXIT_USAGE, str(exc)
    try:
        trajectory_to_csv(traj, out + ".csv")
        trajectory_to_json(traj, out + ".json")
    except OSError as exc:
        return EXIT_USAGE, f"cannot write output: {exc}"
    last = traj.records[-1]
    summary = (
        f"iterations={last.k} termination={traj.termination_reason} "
        f"final_delta_f={last.delta_f:.17g} out={out}.csv,{out}.json"
    )
    code = EXIT_VIOLATION if traj.termination_reason == "diverged" else EXIT_OK
    return code, summary


def _cmd_run(args) -> int:
    if args.batch is not None:
        return _run_batch(args)
    try:
        cfg = _read_config(args.config) if args.config else {}
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    code, summary = _run_single(args, cfg)
    if code == EXIT_USAGE:
        return _fail(summary)
    print(summary)
    return code


def _run_batch(args) -> int:
    batch_dir = args.batch
    if not os.path.isdir(batch_dir):
        return _fail(f"--batch expects a directory, got {batch_dir!r}")
    specs = sorted(
        name
        for name in os.listdir(batch_dir)
        if not name.startswith(".") and os.path.isfile(os.path.join(batch_dir, name))
    )
    if not specs:
        return _fail(f"no spec files in {batch_dir!r}")

    def one(name: str) -> tuple[str, int, str]:
        path = os.path.join(batch_dir, name)
        try:
            cfg = _read_config(path)
        except (OSError, ValueError) as exc:
            return name, EXIT_USAGE, str(exc)
        stem = os.path.join(batch_dir, os.path.splitext(name)[0])
        code, summary = _run_single(args, cfg, default_out=stem)
        return name, code, summary

    with ThreadPoolExecutor(max_workers=min(8, len(specs))) as pool:
        results = list(pool.map(one, specs))
    worst = EXIT_OK
    for name, code, summary in results:
        stream = sys.stderr if code == EXIT_USAGE else sys.stdout
        print(f"{name}: {summary}", file=stream)
        worst = max(worst, code)
    return worst


def _cmd_scan(args) -> int:
    try:
        cfg = _read_config(args.config) if args.config else {}
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    obj_name = _pick(args, cfg, "obj", str)
    if obj_name is None:
        return _fail("missing required option --obj")
    try:
        obj = get_objective(obj_name)
    except KeyError:
        return _fail(f"unknown objective {obj_name!r}; known: {', '.join(corpus_names())}")
    kappa = _pick(args, cfg, "kappa", float, obj.recommended_kappa)
    f_ref = _pick(args, cfg, "f_ref", float, obj.recommended_f_ref)
    if kappa is None or f_ref is None:
        return _fail("region parameters unresolved; pass --kappa and --f-ref")
    res = _pick(args, cfg, "res", int, 201)
    mode = _pick(args, cfg, "mode", str, "full")
    out = _pick(args, cfg, "out", str, f"{obj_name}_scan.csv")
    try:
        params = RegionParams(kappa=kappa, f_ref=f_ref)
        result = region_scan(obj, res, params, mode=mode)
        scan_to_csv(result, out)
    except ValueError as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(f"cannot write output: {exc}")
    counts = result.counts()
    for region in Region:
        if region.value in counts:
            print(f"{region.value} {counts[region.value]}")
    print(f"total {len(result.labels)} out={out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        cfg = _read_config(args.config) if args.config else {}
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    path = args.traj
    if not os.path.isfile(path):
        return _fail(f"trajectory file not found: {path}")
    try:
        traj = trajectory_from_json(path)
    except SchemaError as exc:
        return _fail(f"trajectory schema mismatch: {exc}")
    override = {}
    for key in ("kappa", "zeta", "m"):
        value = _pick(args, cfg, key, float if key != "m" else int)
        if value is not None:
            override[key] = value
    eps_1 = _pick(args, cfg, "eps_1", float, 1e-3)
    eps_2 = _pick(args, cfg, "eps_2", float, 1e-3)
    out = _pick(args, cfg, "out", str, os.path.splitext(path)[0] + "_report.json")
    csv_path = _pick(args, cfg, "csv", str)
    try:
        report = verify_run(
            traj,
            None,
            override or None,
            use_recommended=bool(args.use_recommended),
            eps_1=eps_1,
            eps_2=eps_2,
        )
    except (ValueError, KeyError) as exc:
        return _fail(str(exc))
    try:
        report.to_json(out)
        if csv_path:
            report.summary_csv(csv_path)
    except OSError as exc:
        return _fail(f"cannot write report: {exc}")
    cov = report.coverage()
    print(
        f"checks={cov['checks']} applicable={cov['applicable']} "
        f"satisfied={cov['satisfied']} violations={len(report.violations)} out={out}"
    )
    return EXIT_OK if not report.violations else EXIT_VIOLATION


def _cmd_corpus(args) -> int:
    manifest = corpus_manifest()
    if args.json:
        print(json.dumps(manifest, indent=2, sort_keys=True))
        return EXIT_OK
    header = f"{'name':<12} {'n':>2} {'order':>5} {'f_inf':>8} {'kappa':>7}  tags"
    print(header)
    for entry in manifest:
        f_inf = "-" if entry["f_inf"] is None else f"{entry['f_inf']:g}"
        kappa = "-" if entry["recommended_kappa"] is None else f"{entry['recommended_kappa']:g}"
        tags = ",".join(entry["tags"]) or "-"
        print(
            f"{entry['name']:<12} {entry['n']:>2} {entry['smoothness_order']:>5} "
            f"{f_inf:>8} {kappa:>7}  {tags}"
        )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regionopt",
        description="Run decrease-guaranteed methods, map landscape labels, "
        "and verify recorded trajectories against their rate bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    p_run = sub.add_parser(
        "run", help="run one method and persist the trajectory",
        epilog=_RUN_EPILOG, formatter_class=fmt,
    )
    p_run.add_argument("--obj", help="objective name from the corpus")
    p_run.add_argument("--algo", help=f"one of {', '.join(ALGORITHMS)}")
    p_run.add_argument("--x0", help="comma-separated floats or ones/zeros/rand")
    p_run.add_argument("--seed", type=int, help="seed for the rand x0 preset")
    p_run.add_argument("--l1", type=float, help="gradient step majorant constant")
    p_run.add_argument("--l2", type=float, help="cubic model regularization constant")
    p_run.add_argument("--eta", type=float, help="acceptance fraction in (0,1)")
    p_run.add_argument("--psi", type=float, help="rejection growth factor > 1")
    p_run.add_argument("--nu-min", dest="nu_min", type=float)
    p_run.add_argument("--nu-max", dest="nu_max", type=float)
    p_run.add_argument("--nu0", type=float, help="initial adaptive parameter")
    p_run.add_argument("--nu-reset", dest="nu_reset", choices=("clamp", "reset_min"))
    p_run.add_argument("--max-iters", dest="max_iters", type=int)
    p_run.add_argument("--eps-f", dest="eps_f", type=float, help="suboptimality tolerance")
    p_run.add_argument("--eps-1", dest="eps_1", type=float, help="gradient tolerance")
    p_run.add_argument("--eps-2", dest="eps_2", type=float, help="curvature tolerance")
    p_run.add_argument("--divergence-floor", dest="divergence_floor", type=float)
    p_run.add_argument("--kappa", type=float, help="region constant (default: corpus)")
    p_run.add_argument("--f-ref", dest="f_ref", type=float, help="reference value (default: corpus)")
    p_run.add_argument("--out", help="output basename; writes <out>.csv and <out>.json")
    p_run.add_argument("--config", help="key=value spec file; flags override it")
    p_run.add_argument("--batch", help="directory of spec files to run in a work pool")
    p_run.set_defaults(func=_cmd_run)

    p_scan = sub.add_parser(
        "scan", help="classify a grid over an objective's scan domain",
        epilog=_SCAN_EPILOG, formatter_class=fmt,
    )
    p_scan.add_argument("--obj", help="objective name from the corpus")
    p_scan.add_argument("--res", type=int, help="grid points per axis (default 201)")
    p_scan.add_argument("--kappa", type=float, help="region constant (default: corpus)")
    p_scan.add_argument("--f-ref", dest="f_ref", type=float, help="reference value (default: corpus)")
    p_scan.add_argument("--mode", choices=("full", "first_order"))
    p_scan.add_argument("--out", help="output CSV path")
    p_scan.add_argument("--config", help="key=value spec file; flags override it")
    p_scan.set_defaults(func=_cmd_scan)

    p_verify = sub.add_parser(
        "verify", help="check a stored trajectory against its rate bounds",
        epilog=_VERIFY_EPILOG, formatter_class=fmt,
    )
    p_verify.add_argument("traj", help="trajectory JSON file")
    p_verify.add_argument("--kappa", type=float, help="override the template kappa")
    p_verify.add_argument("--zeta", type=float, help="override the decrease constant")
    p_verify.add_argument("--m", type=int, help="override the window length")
    p_verify.add_argument(
        "--use-recommended", action="store_true",
        help="use the corpus recommended kappa instead of the trajectory-certified one",
    )
    p_verify.add_argument("--eps-1", dest="eps_1", type=float)
    p_verify.add_argument("--eps-2", dest="eps_2", type=float)
    p_verify.add_argument("--out", help="report JSON path")
    p_verify.add_argument("--csv", help="also write the per-check summary CSV here")
    p_verify.add_argument("--config", help="key=value spec file; flags override it")
    p_verify.set_defaults(func=_cmd_verify)

    p_corpus = sub.add_parser("corpus", help="list the objective corpus")
    p_corpus.add_argument("--json", action="store_true", help="print the manifest as JSON")
    p_corpus.set_defaults(func=_cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
