"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .coupling import SizeBiasCoupling
from .degree_dist import degree_pmf
from .errors import VerificationError
from .experiments import (
    ExperimentConfig,
    qq_data,
    run_correlation_experiment,
    run_powerlaw_experiment,
)
from .graph_core import Graph, ModelSpec, build_kernel, load_kernel, sample_graph
from .normal_bound import bound_components
from .poisson_bound import poisson_process_bound
from .svg import emit_svg
from .verification import run_suite


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kernel", type=Path, help="kernel JSON config")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--threads", type=int, default=1)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="inhomgraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("sample", parents=[common], help="sample one graph and print its edge list")

    pmf = sub.add_parser("pmf", parents=[common], help="exact degree pmf as CSV")
    pmf.add_argument("--vertex", type=int, required=True)
    pmf.add_argument("--exclude", type=str, default="", help="comma-separated vertices to delete")

    couple = sub.add_parser("couple", parents=[common], help="size-biased coupling of one graph")
    couple.add_argument("--vertex", type=int, required=True)
    couple.add_argument("--degree", type=int, required=True)
    couple.add_argument("--graph", type=Path, help="edge-list file; sampled from the kernel if omitted")

    bounds = sub.add_parser("bounds", help="approximation bounds")
    bsub = bounds.add_subparsers(dest="which", required=True)
    normal = bsub.add_parser("normal", parents=[common])
    normal.add_argument("--degrees", type=str, required=True)
    normal.add_argument("--d2", type=float, default=1.0)
    normal.add_argument("--d3", type=float, default=1.0)
    poisson = bsub.add_parser("poisson", parents=[common])
    poisson.add_argument("--M", type=int, required=True)

    verify = sub.add_parser("verify", parents=[common], help="oracle-backed self checks")
    verify.add_argument("suite", choices=["all", "coupling", "covariance", "poisson"])
    verify.add_argument("--n", type=int, default=4)
    verify.add_argument("--kernels", type=int, default=5)

    exp = sub.add_parser("experiment", parents=[common], help="simulation harness")
    exp.add_argument("kind", choices=["corr", "powerlaw", "qq"])
    exp.add_argument("--model", choices=["m1", "m2", "m3", "m4"], default="m1")
    exp.add_argument("--n", type=int, default=100)
    exp.add_argument("--reps", type=int, default=10_000)
    exp.add_argument("--degree", type=int, default=0, help="degree for the QQ table")
    exp.add_argument("--full-range", action="store_true")
    return parser


def _kernel(args):
    if args.kernel is None:
        raise ValueError("--kernel is required")
    return load_kernel(args.kernel)


def _out_dir(args) -> Path | None:
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
    return args.out


def write_edge_list(g: Graph) -> str:
    return f"# n={g.n}\n" + "".join(f"{a} {b}\n" for a, b in g.edges)


def read_edge_list(text: str, n: int | None = None) -> Graph:
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("# n="):
            n = int(line[4:]) if n is None else n
        elif line and not line.startswith("#"):
            a, b = line.split()
            edges.append((int(a), int(b)))
    if n is None:
        raise ValueError("edge list has no '# n=' header")
    return Graph(n, tuple(edges))


def _emit(text: str, args, name: str) -> None:
    out = _out_dir(args)
    if out is not None:
        (out / name).write_text(text)
    sys.stdout.write(text)


def _cmd_sample(args) -> int:
    g = sample_graph(_kernel(args), args.seed)
    _emit(write_edge_list(g), args, "graph.txt")
    return 0


def _cmd_pmf(args) -> int:
    excluded = [int(x) for x in args.exclude.split(",") if x.strip()]
    pmf = degree_pmf(_kernel(args), args.vertex, excluded)
    text = "degree,prob\n" + "".join(f"{d},{p!r}\n" for d, p in enumerate(pmf.probs.tolist()))
    _emit(text, args, f"pmf_v{args.vertex}.csv")
    return 0


def _cmd_couple(args) -> int:
    kernel = _kernel(args)
    if args.graph is not None:
        g = read_edge_list(args.graph.read_text(), kernel.n)
    else:
        g = sample_graph(kernel, args.seed)
    outcome = SizeBiasCoupling(kernel).couple(g, args.vertex, args.degree, args.seed + 1)
    record = {
        "target_vertex": args.vertex,
        "target_degree": args.degree,
        "removed": sorted(list(e) for e in outcome.removed),
        "added": sorted(list(e) for e in outcome.added),
    }
    out = _out_dir(args)
    if out is not None:
        (out / "coupled.txt").write_text(write_edge_list(outcome.graph))
        (out / "coupled.json").write_text(json.dumps(record, indent=2) + "\n")
    else:
        sys.stdout.write(write_edge_list(outcome.graph))
    print(json.dumps(record))
    return 0


def _cmd_bounds(args) -> int:
    kernel = _kernel(args)
    if args.which == "normal":
        degrees = [int(x) for x in args.degrees.split(",") if x.strip()]
        report = bound_components(kernel, degrees)
        payload = report.to_dict()
        payload.update({"d2_norm": args.d2, "d3_norm": args.d3, "total": report.total(args.d2, args.d3)})
    else:
        payload = poisson_process_bound(kernel, args.M).to_dict()
    _emit(json.dumps(payload, indent=2) + "\n", args, f"bounds_{args.which}.json")
    return 0


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, args.n, args.seed, args.kernels)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    if not all(r.passed for r in results):
        raise VerificationError("verification failed")
    return 0


def _cmd_experiment(args) -> int:
    spec = ModelSpec(args.model, args.n)
    if args.kernel is not None:
        cfg_json = json.loads(args.kernel.read_text())
        spec = ModelSpec.from_config(cfg_json)
        build_kernel(spec)
    cfg = ExperimentConfig(spec, args.reps, args.seed, _out_dir(args), args.threads)
    tag = f"{spec.variant}_n{spec.n}"
    if args.kind == "corr":
        result = run_correlation_experiment(cfg, args.full_range)
        if cfg.out_dir is None:
            sys.stdout.write(result.to_csv())
    elif args.kind == "powerlaw":
        table = run_powerlaw_experiment(cfg)
        if cfg.out_dir is None:
            sys.stdout.write(table.to_csv())
        else:
            svg = emit_svg([(d, z) for d, z, *_ in table.rows() if z > 0], "d", "Z_d", loglog=True, title=tag)
            (cfg.out_dir / f"powerlaw_{tag}.svg").write_text(svg)
    else:
        rows = qq_data(cfg, args.degree)
        text = "normal_quantile,sample_quantile\n" + "".join(f"{a!r},{b!r}\n" for a, b in rows.tolist())
        _emit(text, args, f"qq_{tag}_d{args.degree}.csv")
        if cfg.out_dir is not None:
            svg = emit_svg(rows.tolist(), "normal quantile", f"standardized W_{args.degree}", title=tag)
            (cfg.out_dir / f"qq_{tag}_d{args.degree}.svg").write_text(svg)
    return 0


COMMANDS = {
    "sample": _cmd_sample,
    "pmf": _cmd_pmf,
    "couple": _cmd_couple,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
    "experiment": _cmd_experiment,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
