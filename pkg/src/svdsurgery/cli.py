"""Batch command-line front end and file formats.

Subcommands: gen, surgery, stats, cloud, ph, bottleneck, demo.  All artifacts
are CSV with `#` header lines carrying provenance (command line, seed,
version); floats are written as shortest round-trip decimals, so a repeated
run with the same config is byte-identical.  Exit codes: 0 success, 2 invalid
input or config, 3 simplex budget exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .cloud import (
    MatrixSet,
    flatten_normalize,
    generate_matrices,
    inverse_cloud,
    parse_descriptor,
    read_cloud,
    sample_torus,
    write_cloud,
)
from .errors import BudgetExceeded, EmptyCloud, InvalidInput, InvalidPlan
from .homology import (
    DEFAULT_SIMPLEX_BUDGET,
    barcode_svg,
    pairwise_distances,
    read_diagram,
    rips_persistence,
    write_diagram,
)
from .metrics import bottleneck_distance
from .surgery import apply_surgery, build_plan, preset_plans
from .errors import SingularMatrix  # noqa: F401  (re-export convenience)

HISTOGRAM_BINS = 50

# fixed scale for the torus demo; --ratio sets major/minor
TORUS_MINOR = 1.0


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    if math.isinf(x):
        return "inf"
    return repr(float(x))


# ---------------------------------------------------------------- run config

def parse_config_text(text: str) -> dict[str, str]:
    """Flat key=value lines; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidInput(f"config line {lineno} is not key=value: {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def serialize_config(config: dict[str, str]) -> str:
    return "".join(f"{k}={v}\n" for k, v in sorted(config.items()))


# ------------------------------------------------------------- matrix files

def write_matrix_set(mset: MatrixSet, path, command: str = "") -> None:
    rows, cols = mset.shape
    lines = [f"# svdsurgery v{__version__}"]
    if command:
        lines.append(f"# command: {command}")
    lines.append(
        f"# rows={rows} cols={cols} count={mset.count} "
        f"seed={mset.seed} dist={mset.descriptor}"
    )
    for flat in mset.matrices.reshape(mset.count, -1):
        lines.append(",".join(repr(x) for x in flat.tolist()))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix_set(path) -> MatrixSet:
    meta: dict[str, str] = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if "=" in token:
                        k, v = token.split("=", 1)
                        meta[k] = v
                continue
            rows.append([float(x) for x in line.split(",")])
    if not rows:
        raise InvalidInput(f"no matrices in {path}")
    try:
        r, c = int(meta["rows"]), int(meta["cols"])
    except KeyError as exc:
        raise InvalidInput(f"{path} is missing the rows=/cols= header") from exc
    data = np.array(rows)
    if data.shape[1] != r * c:
        raise InvalidInput(
            f"{path}: rows of length {data.shape[1]}, header says {r}x{c}"
        )
    descriptor = parse_descriptor(meta["dist"]) if "dist" in meta else None
    return MatrixSet(
        matrices=data.reshape(-1, r, c),
        seed=int(meta.get("seed", 0)),
        descriptor=descriptor,
    )


# ------------------------------------------------------------------ surgery

def _parse_plan(spec: str, n: int):
    presets = preset_plans(n)
    if spec in presets:
        return presets[spec]
    # explicit form: j=3:w=1,0
    try:
        j_part, w_part = spec.split(":")
        if not (j_part.startswith("j=") and w_part.startswith("w=")):
            raise ValueError
        j = int(j_part[2:])
        weights = [float(x) for x in w_part[2:].split(",")]
    except (ValueError, IndexError) as exc:
        raise InvalidPlan(f"cannot parse plan {spec!r}") from exc
    plan = build_plan(j, weights)
    if plan.n != n:
        raise InvalidPlan(f"plan covers n={plan.n} but matrices are {n}x{n}")
    return plan


def cmd_gen(args) -> int:
    try:
        r, c = (int(x) for x in args.shape.lower().split("x"))
    except ValueError as exc:
        raise InvalidInput(f"cannot parse shape {args.shape!r}") from exc
    descriptor = parse_descriptor(args.dist)
    mset = generate_matrices(args.count, r, c, descriptor, seed=args.seed)
    command = f"gen --count {args.count} --shape {args.shape} --dist {args.dist} --seed {args.seed}"
    write_matrix_set(mset, args.out, command)
    return 0


def cmd_surgery(args) -> int:
    mset = read_matrix_set(getattr(args, "in"))
    rows, cols = mset.shape
    if rows != cols:
        raise InvalidInput("surgery needs square matrices")
    plan = _parse_plan(args.plan, rows)
    out_mats = np.empty_like(mset.matrices)
    reports = []
    for i in range(mset.count):
        out_mats[i], report = apply_surgery(mset.matrices[i], plan)
        reports.append(report)
    command = f"surgery --plan {args.plan} --seed {mset.seed}"
    write_matrix_set(
        MatrixSet(out_mats, mset.seed, mset.descriptor), args.out, command
    )
    if args.stats:
        lines = [
            f"# svdsurgery v{__version__}",
            f"# command: {command}",
            f"# count={mset.count} seed={mset.seed} plan={args.plan}",
            "index,norm_before,norm_after,inv_norm_before,inv_norm_after,"
            "kappa_before,kappa_after,replaced_value",
        ]
        for i, rep in enumerate(reports):
            lines.append(
                f"{i},{_fmt(rep.norm_before)},{_fmt(rep.norm_after)},"
                f"{_fmt(rep.inverse_norm_before)},{_fmt(rep.inverse_norm_after)},"
                f"{_fmt(rep.kappa_before)},{_fmt(rep.kappa_after)},"
                f"{_fmt(rep.replaced_value)}"
            )
        with open(args.stats, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _histogram(values: np.ndarray, log: bool = False):
    data = np.log10(values) if log else values
    counts, edges = np.histogram(data, bins=HISTOGRAM_BINS)
    return counts, edges


def cmd_stats(args) -> int:
    from .linalg import singular_values

    mset = read_matrix_set(getattr(args, "in"))
    rows, cols = mset.shape
    if rows != cols:
        raise InvalidInput("stats needs square matrices")
    norms, inv_norms, kappas = [], [], []
    singular = 0
    for i in range(mset.count):
        sigma = singular_values(mset.matrices[i])
        norms.append(float(sigma[0]))
        if sigma[-1] > 0.0 and sigma[-1] > 1e-300 * sigma[0]:
            inv_norms.append(1.0 / float(sigma[-1]))
            kappas.append(float(sigma[0] / sigma[-1]))
        else:
            singular += 1
    lines = [
        f"# svdsurgery v{__version__}",
        f"# command: stats --seed {mset.seed}",
        f"# count={mset.count} singular={singular} seed={mset.seed}",
        "metric,count,min,max,mean",
    ]
    metrics = {
        "norm": np.array(norms),
        "inv_norm": np.array(inv_norms),
        "kappa": np.array(kappas),
    }
    for name, vals in metrics.items():
        if vals.size == 0:
            continue
        lines.append(
            f"{name},{vals.size},{_fmt(vals.min())},{_fmt(vals.max())},{_fmt(vals.mean())}"
        )
    lines.append("hist_metric,bin_low,bin_high,count")
    for name, vals in metrics.items():
        if vals.size == 0:
            continue
        log = args.log_kappa and name == "kappa"
        label = "log10_kappa" if log else name
        counts, edges = _histogram(vals, log=log)
        for b in range(HISTOGRAM_BINS):
            lines.append(
                f"{label},{_fmt(edges[b])},{_fmt(edges[b + 1])},{int(counts[b])}"
            )
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def cmd_cloud(args) -> int:
    mset = read_matrix_set(getattr(args, "in"))
    cloud = inverse_cloud(mset) if args.inverse else flatten_normalize(mset)
    write_cloud(cloud, args.out)
    return 0


def _load_ph_cloud(args):
    if args.demo:
        if args.demo != "torus":
            raise InvalidInput(f"unknown demo {args.demo!r}")
        minor = TORUS_MINOR
        cloud = sample_torus(args.count, args.ratio * minor, minor, seed=args.seed)
        if args.cap is None:
            args.cap = 2.0 * minor
        return cloud
    if args.cloud:
        return read_cloud(args.cloud)
    if args.matrices:
        mset = read_matrix_set(args.matrices)
        return inverse_cloud(mset) if args.inverse else flatten_normalize(mset)
    raise InvalidInput("ph needs one of --cloud, --matrices or --demo")


def cmd_ph(args) -> int:
    cloud = _load_ph_cloud(args)
    dm = pairwise_distances(cloud)
    diagram = rips_persistence(dm, max_dim=args.maxdim, cap=args.cap,
                               budget=args.budget)
    header = f"source={cloud.source} count={cloud.points.shape[0]}"
    write_diagram(diagram, args.out, extra_header=header)
    if args.svg:
        barcode_svg(diagram, args.svg)
    return 0


def cmd_bottleneck(args) -> int:
    d1 = read_diagram(args.d1)
    d2 = read_diagram(args.d2)
    value = bottleneck_distance(d1, d2, args.dim)
    print("inf" if math.isinf(value) else f"{value:.12g}")
    return 0


def cmd_demo(args) -> int:
    import os

    os.makedirs(args.out, exist_ok=True)
    minor = TORUS_MINOR
    cloud = sample_torus(args.count, args.ratio * minor, minor, seed=args.seed)
    write_cloud(cloud, os.path.join(args.out, "torus_cloud.csv"))
    dm = pairwise_distances(cloud)
    diagram = rips_persistence(dm, max_dim=1, cap=2.0 * minor)
    write_diagram(diagram, os.path.join(args.out, "torus_diagram.csv"),
                  extra_header=f"source=torus count={args.count}")
    barcode_svg(diagram, os.path.join(args.out, "torus_barcodes.svg"))
    return 0


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svdsurgery",
        description="Condition-number surgery on small matrices and "
        "persistent homology of their point clouds.",
    )
    parser.add_argument("--config", help="flat key=value file with defaults "
                        "for the chosen subcommand")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded random matrix set")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--shape", default="3x3")
    p.add_argument("--dist", default="gaussian:0:0.01",
                   help="gaussian:MEAN:STD or uniform:LOW:HIGH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("surgery", help="apply a tail-replacement plan to a set")
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--plan", required=True,
                   help="preset name or explicit j=3:w=1,0")
    p.add_argument("--out", required=True)
    p.add_argument("--stats", help="optional per-matrix stats CSV")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("stats", help="norm/condition-number summary of a set")
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log-kappa", action="store_true",
                   help="histogram log10 of the condition number")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("cloud", help="unit-sphere cloud from a matrix file")
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cloud)

    p = sub.add_parser("ph", help="Vietoris-Rips persistence diagram")
    p.add_argument("--cloud")
    p.add_argument("--matrices")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--demo", choices=["torus"])
    p.add_argument("--count", type=int, default=1500)
    p.add_argument("--ratio", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--maxdim", type=int, choices=[1, 2], default=1)
    p.add_argument("--cap", type=float)
    p.add_argument("--budget", type=int, default=DEFAULT_SIMPLEX_BUDGET)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_ph)

    p = sub.add_parser("bottleneck", help="bottleneck distance of two diagrams")
    p.add_argument("d1")
    p.add_argument("d2")
    p.add_argument("--dim", type=int, default=1)
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("demo", help="end-to-end torus demonstration")
    p.add_argument("what", choices=["torus"])
    p.add_argument("--count", type=int, default=1500)
    p.add_argument("--ratio", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_demo)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Expand --config FILE into leading defaults for the subcommand."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        raise InvalidInput("--config needs a file argument")
    with open(path) as fh:
        config = parse_config_text(fh.read())
    rest = argv[:idx] + argv[idx + 2:]
    extra: list[str] = []
    for key, value in sorted(config.items()):
        flag = f"--{key.replace('_', '-')}"
        if flag not in rest and f"--{key}" not in rest:
            if value == "true":
                extra.append(flag)
            else:
                extra.extend([flag, value])
    if not rest:
        return extra
    return [rest[0]] + extra + rest[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidInput, InvalidPlan, EmptyCloud, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
