"""Command-line pipeline: construct -> certify -> color -> verify cliques.

Exit codes: 0 all asserted verdicts pass, 1 usage or I/O error, 2 an
asserted verdict failed (a theorem violation, i.e. a bug), 3 a budget ran
out and only partial results exist. Identical configuration and seed
produce byte-identical output files.

Heavy modules are imported lazily inside the handlers so that --threads
can cap the BLAS thread pools via the environment before numpy loads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERDICT = 2
EXIT_BUDGET = 3

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this pipeline reserves 2 for
    # verdict failures, so remap usage problems to exit code 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._usage_exit(message))

    def _usage_exit(self, message) -> int:
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _parse_kv(tokens, required, optional=()) -> dict[str, int]:
    """Parse 'key=value' tokens such as `z=5 r=1` into an int dict."""
    allowed = set(required) | set(optional)
    out: dict[str, int] = {}
    for tok in tokens:
        if "=" not in tok:
            raise ValueError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        if key not in allowed:
            raise ValueError(f"unknown key {key!r}; allowed: {sorted(allowed)}")
        out[key] = int(val)
    missing = [k for k in required if k not in out]
    if missing:
        raise ValueError(f"missing keys: {missing}")
    return out


def _devore_params(args):
    from . import devore

    if getattr(args, "devore_file", None):
        return devore.load_structural(args.devore_file)
    if args.z is None or args.r is None:
        raise ValueError("provide --devore FILE or both --z and --r")
    return devore.DeVoreParams(z=args.z, r=args.r)


def _add_devore_source(parser, with_matrix: bool = False):
    parser.add_argument("--devore", dest="devore_file", metavar="FILE",
                        help="structural matrix file")
    parser.add_argument("--z", type=int, help="prime modulus")
    parser.add_argument("--r", type=int, help="degree bound")
    if with_matrix:
        parser.add_argument("--matrix", metavar="FILE",
                            help="dense unit-column matrix file")


def _cmd_construct(args) -> int:
    from . import devore

    params = _devore_params(args)
    devore.save_structural(params, args.output)
    print(f"wrote {args.output} (n={params.n}, p={params.p})")
    return EXIT_OK


def _cmd_export(args) -> int:
    from . import devore, matrices

    params = _devore_params(args)
    dense = matrices.ColumnMatrix(devore.to_dense(params, max_entries=args.budget))
    matrices.save_dense(dense, args.output)
    print(f"wrote {args.output} ({params.n} x {params.p})")
    return EXIT_OK


def _cmd_coherence(args) -> int:
    from . import devore

    params = _devore_params(args)
    ip, pair = devore.coherence_exact(params, max_pairs=args.budget)
    record = {
        "z": params.z,
        "r": params.r,
        "coherence": [ip.numerator, ip.denominator],
        "coherence_float": ip.value,
        "bound": [params.r, params.z],
        "witness_pair": list(pair),
        "exact": True,
    }
    if args.json:
        _dump_json(record, Path(args.json))
    print(
        f"coherence = {ip.numerator}/{ip.denominator} "
        f"(bound r/z = {params.r}/{params.z}), witness pair {pair}"
    )
    return EXIT_OK


def _load_matrix(args):
    from . import devore, matrices

    if args.matrix:
        return matrices.load_dense(args.matrix)
    params = _devore_params(args)
    return matrices.ColumnMatrix(devore.to_dense(params))


def _cmd_certify(args) -> int:
    from . import devore, rip

    if args.method == "coherence" and not args.matrix:
        cert = devore.rip_certificate_coherence(_devore_params(args), args.s)
    else:
        matrix = _load_matrix(args)
        if args.method == "exhaustive":
            cert = rip.delta_exhaustive(matrix, args.s, budget=args.budget)
        elif args.method == "sampled":
            cert = rip.delta_sampled(matrix, args.s, trials=args.trials, seed=args.seed)
        else:
            cert = rip.coherence_certificate(matrix, args.s)
    if args.json:
        _dump_json(cert.to_json_dict(), Path(args.json))
    validity = "valid" if cert.valid else "INVALID (delta >= 1)"
    print(f"method={cert.method} s={cert.s} delta={cert.delta:.12g} {validity}")
    return EXIT_OK


def _cmd_color(args) -> int:
    from . import coloring as col

    if args.matrix:
        matrix = _load_matrix(args)
        result = col.color_edges(matrix, palette=2 if args.two_color else 3)
    else:
        from . import devore

        params = _devore_params(args)
        if args.two_color:
            result = col.color_edges_exact_devore(params, max_edges=args.budget)
        else:
            result = col.color_edges(_load_matrix(args), max_edges=args.budget)
    col.write_coloring(result, args.output)
    counts = result.counts()
    print(
        f"wrote {args.output}: p={result.p} palette={result.palette} "
        f"white={counts[col.WHITE]} blue={counts[col.BLUE]} red={counts[col.RED]}"
    )
    return EXIT_OK


def _cmd_cliques(args) -> int:
    from . import clique, coloring as col

    edge_coloring = col.read_coloring(args.coloring)
    results = []
    for color in edge_coloring.palette_colors():
        graph = clique.ColorClassGraph.from_coloring(edge_coloring, color)
        found = clique.max_clique_exact(graph, budget=args.budget)
        results.append(
            {
                "color": col.COLOR_NAME[color],
                "max_size": found.size,
                "witness": list(found.witness),
                "exact": found.exact,
            }
        )
        flag = "" if found.exact else " (budget hit, lower bound)"
        print(f"{col.COLOR_NAME[color]}: max clique {found.size}{flag}")
    record = {"p": edge_coloring.p, "palette": edge_coloring.palette, "results": results}
    if args.json:
        _dump_json(record, Path(args.json))
    if any(not r["exact"] for r in results):
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_random(args) -> int:
    from . import matrices, rip

    matrix = rip.random_baseline(args.n, args.p, distribution=args.dist, seed=args.seed)
    matrices.save_dense(matrix, args.output)
    print(f"wrote {args.output} ({args.n} x {args.p}, {args.dist}, seed={args.seed})")
    return EXIT_OK


def _cmd_regime(args) -> int:
    from . import devore

    report = devore.regime_calculator(args.z, args.epsilon)
    record = {
        "z": report.z,
        "epsilon": report.epsilon,
        "r": report.r,
        "n": report.n,
        "s": report.s,
        "log_p": report.log_p,
        "degenerate": report.degenerate,
        "polylog_ok": report.polylog_ok,
    }
    if args.json:
        _dump_json(record, Path(args.json))
    print(
        f"z={report.z} epsilon={report.epsilon} -> r={report.r} n={report.n} "
        f"s={report.s} log_p={report.log_p:.6g}"
    )
    status = "holds" if report.polylog_ok else "FAILS"
    print(
        f"polylog check n <= (log p)^(2/eps): {status} "
        f"(log n = {report.log_n:.6g} vs {report.polylog_rhs_log:.6g})"
    )
    if report.degenerate:
        print("note: s = 0, certificate degenerate at this scale")
    return EXIT_OK


def _cmd_kl_test(args) -> int:
    from . import klbound

    summary = klbound.run_property_trials(
        range(args.n_min, args.n_max + 1), args.trials, seed=args.seed
    )
    return EXIT_OK if summary["failures"] == 0 else EXIT_VERDICT


def _cmd_verify(args) -> int:
    from . import clique, coloring as col, devore, matrices, rip
    from .errors import BudgetExceededError

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    def fail_stage(stage: str, err: Exception) -> int:
        (outdir / f"{stage}.partial").write_text(f"{stage}: {err}\n")
        print(f"stage {stage}: budget exceeded: {err}", file=sys.stderr)
        return EXIT_BUDGET

    summary: dict = {}

    # Stage 1: matrix provenance.
    params = None
    matrix = None
    try:
        if args.devore is not None:
            kv = _parse_kv(args.devore, required=("z", "r"))
            params = devore.DeVoreParams(z=kv["z"], r=kv["r"])
            devore.save_structural(params, outdir / "matrix.devore")
            n = params.n
            summary["matrix"] = {
                "kind": "devore",
                "z": params.z,
                "r": params.r,
                "n": n,
                "p": params.p,
                "file": "matrix.devore",
            }
            if not args.two_color or params.n * params.p <= args.dense_budget:
                matrix = matrices.ColumnMatrix(
                    devore.to_dense(params, max_entries=args.dense_budget)
                )
        else:
            kv = _parse_kv(args.random, required=("n", "p"), optional=("seed",))
            seed = kv.get("seed", 0)
            matrix = rip.random_baseline(kv["n"], kv["p"], seed=seed)
            matrices.save_dense(matrix, outdir / "matrix.txt")
            n = matrix.n
            summary["matrix"] = {
                "kind": "random-gaussian",
                "n": matrix.n,
                "p": matrix.p,
                "seed": seed,
                "file": "matrix.txt",
            }
    except BudgetExceededError as err:
        return fail_stage("construct", err)

    # Stage 2: restricted isometry certificate.
    try:
        if params is not None:
            s = args.s if args.s else max(1, devore.certified_sparsity(params))
            cert = devore.rip_certificate_coherence(params, s)
        else:
            s = args.s if args.s else clique.min_sparsity_for_theorem(n)
            if args.exhaustive:
                cert = rip.delta_exhaustive(matrix, s, budget=args.support_budget)
            elif args.trials:
                cert = rip.delta_sampled(matrix, s, trials=args.trials, seed=args.sample_seed)
            else:
                cert = rip.coherence_certificate(matrix, s)
        _dump_json(cert.to_json_dict(), outdir / "certificate.json")
        summary["certificate"] = cert.to_json_dict()
    except BudgetExceededError as err:
        return fail_stage("certify", err)

    # Stage 3: edge coloring.
    try:
        if params is not None and args.two_color:
            edge_coloring = col.color_edges_exact_devore(params, max_edges=args.edge_budget)
        else:
            edge_coloring = col.color_edges(
                matrix, palette=2 if args.two_color else 3, max_edges=args.edge_budget
            )
        col.write_coloring(edge_coloring, outdir / "coloring.txt")
        counts = edge_coloring.counts()
        summary["coloring"] = {
            "file": "coloring.txt",
            "palette": edge_coloring.palette,
            "threshold": col.threshold(n),
            "white": counts[col.WHITE],
            "blue": counts[col.BLUE],
            "red": counts[col.RED],
            "boundary_flagged": edge_coloring.boundary_count(),
        }
    except BudgetExceededError as err:
        return fail_stage("color", err)

    # Stages 4-5: exact cliques and the Ramsey verdicts.
    report = clique.verify_ramsey(edge_coloring, n, rip_cert=cert, budget=args.clique_budget)
    _dump_json(report.to_json_dict(), outdir / "report.json")
    summary["report"] = report.to_json_dict()

    # Proof-inequality audit on the blue/red witnesses found above.
    checks = []
    if matrix is not None:
        for name, fn in (
            ("blue", clique.blue_clique_contradiction_check),
            ("red", clique.red_clique_contradiction_check),
        ):
            outcome = report.outcomes.get(name)
            if outcome is not None and outcome.max_size >= 2:
                checks.append(fn(matrix, outcome.witness, edge_coloring).to_json_dict())
    summary["contradiction_checks"] = checks

    _dump_json(summary, outdir / "summary.json")

    for name, outcome in report.outcomes.items():
        kind = "asserted" if outcome.asserted else "observed"
        verdict = "ok" if outcome.ok else "VIOLATION"
        print(
            f"{name}: max clique {outcome.max_size} vs bound {outcome.bound:g} "
            f"[{kind}] {verdict}"
        )
    if report.partial:
        print("clique search budget exhausted; report is partial", file=sys.stderr)
        return EXIT_BUDGET
    if not report.all_asserted_ok() or any(not c["holds"] for c in checks):
        print("asserted verdict failed", file=sys.stderr)
        return EXIT_VERDICT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ripramsey", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("RIPRAMSEY_THREADS", "0")),
        help="cap BLAS thread pools (0 = leave unchanged)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("construct", help="write a structural matrix file")
    _add_devore_source(sp)
    sp.add_argument("-o", "--output", default="matrix.devore")
    sp.set_defaults(func=_cmd_construct)

    sp = sub.add_parser("export", help="materialize the dense text matrix")
    _add_devore_source(sp)
    sp.add_argument("-o", "--output", default="matrix.txt")
    sp.add_argument("--budget", type=int, default=50_000_000,
                    help="max dense entries")
    sp.set_defaults(func=_cmd_export)

    sp = sub.add_parser("coherence", help="exact coherence over all column pairs")
    _add_devore_source(sp)
    sp.add_argument("--budget", type=int, default=10_000_000, help="max pairs")
    sp.add_argument("--json", help="also write a JSON record")
    sp.set_defaults(func=_cmd_coherence)

    sp = sub.add_parser("certify", help="restricted isometry certificate")
    _add_devore_source(sp, with_matrix=True)
    sp.add_argument("--s", type=int, required=True, help="sparsity")
    sp.add_argument("--method", choices=("coherence", "exhaustive", "sampled"),
                    default="coherence")
    sp.add_argument("--trials", type=int, default=1000, help="sampled supports")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=1_000_000, help="max supports")
    sp.add_argument("--json", help="also write a JSON record")
    sp.set_defaults(func=_cmd_certify)

    sp = sub.add_parser("color", help="threshold edge coloring")
    _add_devore_source(sp, with_matrix=True)
    sp.add_argument("--two-color", action="store_true",
                    help="two-color palette (nonnegative matrices)")
    sp.add_argument("--budget", type=int, default=50_000_000, help="max edges")
    sp.add_argument("-o", "--output", default="coloring.txt")
    sp.set_defaults(func=_cmd_color)

    sp = sub.add_parser("cliques", help="exact max clique per color class")
    sp.add_argument("--coloring", required=True, help="coloring file")
    sp.add_argument("--budget", type=int, default=None, help="node expansions")
    sp.add_argument("--json", help="also write a JSON record")
    sp.set_defaults(func=_cmd_cliques)

    sp = sub.add_parser("verify", help="full pipeline with verdicts")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--devore", nargs=2, metavar=("z=Z", "r=R"),
                       help="e.g. --devore z=5 r=1")
    group.add_argument("--random", nargs="+", metavar="k=v",
                       help="e.g. --random n=8 p=14 seed=1")
    sp.add_argument("--two-color", action="store_true")
    sp.add_argument("--s", type=int, default=0,
                    help="certificate sparsity (default: certified / theorem value)")
    sp.add_argument("--exhaustive", action="store_true",
                    help="exhaustive delta for random matrices")
    sp.add_argument("--trials", type=int, default=0,
                    help="sampled delta with this many supports")
    sp.add_argument("--sample-seed", type=int, default=0)
    sp.add_argument("--support-budget", type=int, default=1_000_000)
    sp.add_argument("--edge-budget", type=int, default=50_000_000)
    sp.add_argument("--dense-budget", type=int, default=50_000_000)
    sp.add_argument("--clique-budget", type=int, default=None)
    sp.add_argument("--outdir", default=".")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("kl-test", help="pair-coherence property harness")
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int, default=20)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=_cmd_kl_test)

    sp = sub.add_parser("random", help="random baseline matrix")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--dist", choices=("gaussian", "rademacher"), default="gaussian")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", default="matrix.txt")
    sp.set_defaults(func=_cmd_random)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 0 for --help; keep that, map anything else to usage.
        return 0 if exc.code in (0, None) else EXIT_USAGE
    if args.threads and args.threads > 0:
        for var in _THREAD_VARS:
            os.environ[var] = str(args.threads)
    from .errors import BudgetExceededError

    try:
        return args.func(args)
    except BudgetExceededError as err:
        print(f"budget exceeded: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
