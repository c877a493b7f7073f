"""Command line front end.

Exit codes: 0 success, 2 configuration or input error, 3 some trials failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import fixtures
from .collapse import freeness_certificate
from .complex import Complex, ComplexError, clique_complex, density_report
from .graph import GraphError, from_edgelist, p_from_alpha, sample_gnp, to_edgelist
from .harness import ConfigError, _jsonable, parse_config, run_experiment, threshold_sweep
from .homology import GF2, Q, betti
from .patterns import PatternError, count_embeddings, get_pattern

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 2, 3


class InputError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(s) for s in text.split(",") if s.strip()]


def _ints(text: str) -> list[int]:
    return [int(s) for s in text.split(",") if s.strip()]


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("input (one of: sampled graph, edge list, complex file, fixture)")
    src.add_argument("--n", type=int, help="vertex count of the sampled graph")
    src.add_argument("--alpha", type=float, help="p = n**alpha")
    src.add_argument("--p", type=float, help="edge probability (instead of --alpha)")
    src.add_argument("--seed", type=int, default=0)
    src.add_argument("--graph", type=Path, help="edge list file ('n m' header, then 'i j' lines)")
    src.add_argument("--complex", type=Path, help="complex text file")
    src.add_argument("--fixture", help=f"shipped fixture: {', '.join(fixtures.FIXTURES)}")
    p.add_argument("--dim-cap", type=int, default=3)


def _graph(args):
    if args.graph is not None:
        return from_edgelist(args.graph.read_text())
    if args.fixture is not None or args.complex is not None:
        # host graph is the complex's 1-skeleton, relabelled 0..v-1
        return _complex(args).one_skeleton()[0]
    if args.n is None or (args.alpha is None and args.p is None):
        raise InputError("give --n with --alpha or --p, or an input file")
    p = args.p if args.p is not None else p_from_alpha(args.n, args.alpha)
    return sample_gnp(args.n, p, args.seed)


def _complex(args) -> Complex:
    if args.fixture is not None:
        if args.fixture not in fixtures.FIXTURES:
            raise InputError(f"unknown fixture {args.fixture!r}")
        return fixtures.build(args.fixture)
    if args.complex is not None:
        return Complex.from_text(args.complex.read_text())
    return clique_complex(_graph(args), args.dim_cap)


def _emit(data: dict, fmt: str, out: Path | None) -> None:
    if fmt == "json":
        text = json.dumps(_jsonable(data), indent=1, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in data.items():
            w.writerow([k, " ".join(map(str, v)) if isinstance(v, (list, tuple)) else v])
        text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_sample(args) -> int:
    g = _graph(args)
    text = to_edgelist(g)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
    return EXIT_OK


def cmd_invariants(args) -> int:
    x = _complex(args)
    rep = density_report(x)
    data = {
        "f_vector": x.f_vector,
        "dimension": x.dim,
        "truncated": x.truncated,
        "chi": rep.chi,
        "L": rep.L,
        "nu": rep.nu,
        "nu_tilde": rep.nu_tilde,
        "betti_gf2": betti(x, GF2).b,
        "betti_q": betti(x, Q).b,
    }
    _emit(data, args.format, args.out)
    return EXIT_OK


def cmd_collapse(args) -> int:
    x = _complex(args)
    cert = freeness_certificate(x)
    data = {
        "kind": cert.kind,
        "free_rank": "" if cert.free_rank is None else cert.free_rank,
        "phase3_steps": len(cert.phase3.steps) if cert.phase3 else 0,
        "phase2_steps": len(cert.phase2.steps) if cert.phase2 else 0,
    }
    if cert.closed_report is not None:
        data.update(
            closed_nu_tilde=cert.closed_report.nu_tilde,
            contains_s1=cert.contains_s1 or "",
            contains_s2=cert.contains_s2 or "",
            corollary_holds=cert.corollary_holds,
        )
    if args.trace is not None:
        args.trace.parent.mkdir(parents=True, exist_ok=True)
        args.trace.write_text("".join(t.dump() for t in (cert.phase3, cert.phase2) if t is not None))
    _emit(data, args.format, args.out)
    return EXIT_OK


def cmd_count(args) -> int:
    g = _graph(args)
    pat = get_pattern(args.pattern)
    p = args.p if args.p is not None else (p_from_alpha(args.n, args.alpha) if args.alpha is not None else None)
    res = count_embeddings(g, pat, cap=args.cap, p=p, time_budget=args.time_budget)
    data = {
        "pattern": res.pattern,
        "count": res.count,
        "expected": "" if res.expected is None else res.expected,
        "saturated": res.saturated,
        "timed_out": res.timed_out,
        "nodes": res.nodes,
    }
    _emit(data, args.format, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    get_pattern(args.pattern)
    alphas = _floats(args.alphas)
    if not alphas or any(a >= 0 for a in alphas):
        raise ConfigError("--alphas must be negative numbers")
    res = threshold_sweep(args.pattern, args.n, alphas, args.trials, args.seed, args.time_budget, args.workers)
    for path in res.write(args.out, plot=not args.no_plot):
        print(path)
    cross = res.crossing
    print(f"crossing {'none' if cross is None else f'{cross:.4f}'} marker {res.marker:.4f}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    overrides = {
        "n_values": tuple(_ints(args.n)) if args.n else None,
        "alpha_values": tuple(_floats(args.alpha)) if args.alpha else None,
        "trials": args.trials,
        "base_seed": args.seed,
        "metrics": tuple(s.strip() for s in args.metrics.split(",") if s.strip()) if args.metrics is not None else None,
        "dim_cap": args.dim_cap,
        "embed_cap": args.embed_cap,
        "bubble_cap": args.bubble_cap,
        "time_budget": args.time_budget,
        "workers": args.workers,
    }
    text = args.config.read_text() if args.config else ""
    cfg = parse_config(text, overrides)
    res = run_experiment(cfg)
    for path in res.write(args.out, args.format, plot=not args.no_plot):
        print(path)
    if res.failures:
        print(f"{res.failures} trial(s) failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cliquetopo", description="Topology of random clique complexes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample G(n, p) as an edge list")
    _add_source(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_sample)

    for name, func, helptext in (
        ("invariants", cmd_invariants, "f-vector, densities and Betti numbers"),
        ("collapse", cmd_collapse, "collapse-to-graph certificate"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_source(p)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", type=Path)
        if name == "collapse":
            p.add_argument("--trace", type=Path, help="write COLLAPSE lines here")
        p.set_defaults(func=func)

    p = sub.add_parser("count", help="labeled pattern embeddings")
    _add_source(p)
    p.add_argument("--pattern", required=True)
    p.add_argument("--cap", type=int, default=0, help="stop after this many (0: count all)")
    p.add_argument("--time-budget", type=float)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sweep", help="containment frequency over an alpha grid")
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphas", required=True, help="comma-separated alpha values")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("experiment", help="seeded Monte Carlo run from a config file and/or flags")
    p.add_argument("--config", type=Path, help="key = value file; flags override it")
    p.add_argument("--n", help="comma-separated vertex counts")
    p.add_argument("--alpha", help="comma-separated alpha values")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--metrics", help="e.g. dimension,collapse,patterns:k4+p2")
    p.add_argument("--dim-cap", type=int)
    p.add_argument("--embed-cap", type=int)
    p.add_argument("--bubble-cap", type=int)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_experiment)
    return ap


def _glue_negative_lists(argv: list[str]) -> list[str]:
    """Let ``--alpha -0.7,-0.6`` through: argparse reads it as an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--alpha", "--alphas") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative_lists(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InputError, GraphError, ComplexError, PatternError, fixtures.FixtureError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
