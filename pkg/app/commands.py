import argparse
import json
from pathlib import Path

import numpy as np

import config
from app.errors import DomainError
from app.models.schemas import (
    RECORD_MODELS,
    Config,
    GraftRecord,
    HomologyReport,
    Record,
    TreesRecord,
)
from app.services.assoc_trees import decode, encode, enumerate_assocs, graft_object, random_assoc
from app.services.catalan_complex import ArityTriple, complex_stats, mis_spanning_check, to_dot
from app.services.group_analysis import abelian_invariants, freeness_verdict
from app.services.presentation import (
    LISTING_FULL,
    LISTING_TABULATED,
    presentation_from_complex,
    scheme_level,
    scheme_presentation,
)
from app.services.reporting import (
    format_presentation,
    format_record,
    format_scheme_table,
    presentation_record,
    record_rows,
    to_csv,
    to_json,
)
from app.services.scalar_coherence import coherence_report, theorem1_report


def check_n(n: int, cfg: Config, minimum: int = 1) -> int:
    """Reject n outside minimum..max_n."""
    if not minimum <= n <= cfg.max_n:
        raise DomainError(f"n must lie in {minimum}..{cfg.max_n}, got {n}")
    return n


def emit(record: Record, cfg: Config, title: str, text: str = None) -> str:
    if cfg.output_format == "json":
        return to_json(record)
    if cfg.output_format == "csv":
        return to_csv(record_rows(record))
    if cfg.output_format == "dot":
        raise DomainError("dot output is only available for the complex command")
    return text if text is not None else format_record(record, title)


def cmd_trees(args, cfg: Config) -> str:
    """List the associations of n letters"""
    n = check_n(args.n, cfg)
    if args.random:
        rng = np.random.default_rng(cfg.seed)
        trees = [encode(random_assoc(n, rng)) for _ in range(args.random)]
    else:
        trees = [encode(t) for t in enumerate_assocs(n)]
    record = TreesRecord(n=n, count=len(trees), trees=trees)
    if cfg.output_format == "csv":
        return to_csv([{"index": i, "tree": t} for i, t in enumerate(trees)])
    return emit(record, cfg, f"A{n}", "\n".join(trees))


def cmd_complex(args, cfg: Config) -> str:
    """Statistics or DOT export of the move graph"""
    n = check_n(args.n, cfg)
    if args.dot or cfg.output_format == "dot":
        return to_dot(n)
    return emit(complex_stats(n), cfg, f"A{n} as a 2-complex")


def cmd_mis(args, cfg: Config) -> str:
    """Check that the MIS spans A_n and carries no homology"""
    n = check_n(args.n, cfg)
    return emit(mis_spanning_check(n), cfg, f"MIS of A{n}")


def cmd_presentation(args, cfg: Config) -> str:
    """Presentation of pi(A_n) from the scheme or the complex"""
    n = check_n(args.n, cfg, minimum=3)
    simplified = not args.raw
    listing = LISTING_FULL if args.full else LISTING_TABULATED
    if args.oracle:
        p = presentation_from_complex(n, cfg.fill, simplified)
        listing = None
    else:
        p = scheme_presentation(n, listing, simplified, tietze=args.tietze)
    record = presentation_record(p, simplified, listing)
    if cfg.output_format != "text":
        return emit(record, cfg, "")
    if not args.oracle and listing == LISTING_TABULATED and not simplified:
        return format_scheme_table(scheme_level(n))
    return format_presentation(p)


def cmd_homology(args, cfg: Config) -> str:
    """Abelian invariants of pi(A_n)"""
    n = check_n(args.n, cfg, minimum=3)
    if args.scheme:
        if args.fill is not None:
            raise DomainError("--fill applies to the complex; drop it with --scheme")
        p = scheme_presentation(n)
        fill = None
    else:
        fill = cfg.fill
        p = presentation_from_complex(n, fill)
    invariants = abelian_invariants(p)
    record = HomologyReport(
        n=n,
        provenance=p.provenance,
        fill=fill,
        generators=len(p.generators),
        relators=len(p.relators),
        free_rank=invariants.free_rank,
        torsion=list(invariants.torsion),
        verdict=str(freeness_verdict(p)),
    )
    title = f"H1 of A{n} ({p.provenance})" if fill is None else f"H1 of A{n} ({p.provenance}, fill={fill})"
    return emit(record, cfg, title)


def cmd_coherence(args, cfg: Config) -> str:
    """Scalar coherence: the image of pi(A_n) in <ζ>"""
    n = check_n(args.n, cfg, minimum=3)
    record = coherence_report(n, args.zeta_order)
    verdict = "✅ coherent" if record.coherent else "❌ not coherent"
    return emit(record, cfg, f"A{n} with ζ of order {args.zeta_order or 'infinity'}: {verdict}")


def cmd_graft(args, cfg: Config) -> str:
    """Graft trees into the leaves of a pattern"""
    pattern = decode(args.pattern, strict=False)
    arguments = [decode(s, strict=False) for s in args.trees]
    result = graft_object(pattern, arguments)
    record = GraftRecord(
        pattern=encode(pattern),
        arguments=[encode(g) for g in arguments],
        result=encode(result),
        leaves=result.leaves,
    )
    return emit(record, cfg, "Grafting", record.result)


def cmd_theorem1(args, cfg: Config) -> str:
    """Brackets reached by grafting a killed bracket"""
    bracket = ArityTriple(args.i, args.j, args.k)
    n_prime = check_n(args.n if args.n is not None else bracket.total, cfg, minimum=bracket.total)
    return emit(theorem1_report(n_prime, bracket), cfg, f"Killing {bracket} in A{n_prime}")


def cmd_schemas(args, cfg: Config) -> str:
    """Write one JSON schema per record model"""
    out = Path(args.out) if args.out else config.SCHEMA_FOLDER
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for model in RECORD_MODELS:
        path = out / f"{model.__name__}.schema.json"
        path.write_text(json.dumps(model.model_json_schema(), indent=2, ensure_ascii=False) + "\n")
        written.append(str(path))
    return "\n".join(written)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Coherence obstructions of the Catalan groupoids A_n")
    parser.add_argument("--format", dest="output_format", default=config.DEFAULT_FORMAT,
                        choices=config.OUTPUT_FORMATS, help="Output format")
    parser.add_argument("--log-level", type=str.upper, default=config.LOG_LEVEL, choices=config.LOG_LEVELS,
                        help="Logging level (default: %(default)s)")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Seed for random trees")
    parser.add_argument("--max-n", type=int, default=config.DEFAULT_MAX_N,
                        help=f"Largest n accepted (hard cap {config.MAX_N_CAP})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", help=cmd_trees.__doc__)
    p.add_argument("n", type=int)
    p.add_argument("--random", type=int, default=0, metavar="K", help="K seeded random trees instead")
    p.set_defaults(handler=cmd_trees)

    p = sub.add_parser("complex", help=cmd_complex.__doc__)
    p.add_argument("n", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--stats", action="store_true")
    mode.add_argument("--dot", action="store_true")
    p.set_defaults(handler=cmd_complex)

    p = sub.add_parser("mis", help=cmd_mis.__doc__)
    p.add_argument("n", type=int)
    p.set_defaults(handler=cmd_mis)

    p = sub.add_parser("presentation", help=cmd_presentation.__doc__)
    p.add_argument("n", type=int)
    source = p.add_mutually_exclusive_group()
    source.add_argument("--scheme", action="store_true", help="Inductive scheme (default)")
    source.add_argument("--oracle", action="store_true", help="Read off the 2-complex")
    stage = p.add_mutually_exclusive_group()
    stage.add_argument("--raw", action="store_true")
    stage.add_argument("--simplified", action="store_true", help="Kill and merge (default)")
    p.add_argument("--tietze", action="store_true", help="Also eliminate generators used once")
    p.add_argument("--full", action="store_true", help="Raw recursion instead of the tabulated listing")
    p.add_argument("--fill", default=config.DEFAULT_FILL, choices=config.FILL_POLICIES)
    p.set_defaults(handler=cmd_presentation)

    p = sub.add_parser("homology", help=cmd_homology.__doc__)
    p.add_argument("n", type=int)
    p.add_argument("--fill", default=None, choices=config.FILL_POLICIES)
    p.add_argument("--scheme", action="store_true", help="Use the scheme instead of the complex")
    p.set_defaults(handler=cmd_homology)

    p = sub.add_parser("coherence", help=cmd_coherence.__doc__)
    p.add_argument("--zeta-order", type=int, default=0, help="Order of ζ; 0 is infinite cyclic")
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(handler=cmd_coherence)

    p = sub.add_parser("graft", help=cmd_graft.__doc__)
    p.add_argument("pattern")
    p.add_argument("trees", nargs="+")
    p.set_defaults(handler=cmd_graft)

    p = sub.add_parser("theorem1", help=cmd_theorem1.__doc__)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--n", type=int, default=None, help="Target level n' (default i+j+k)")
    p.set_defaults(handler=cmd_theorem1)

    p = sub.add_parser("schemas", help=cmd_schemas.__doc__)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_schemas)
    return parser


def build_config(args) -> Config:
    return Config(
        max_n=args.max_n,
        fill=getattr(args, "fill", None) or config.DEFAULT_FILL,
        output_format=args.output_format,
        seed=args.seed,
        log_level=args.log_level,
    )


def dispatch(args, cfg: Config) -> str:
    return args.handler(args, cfg)
