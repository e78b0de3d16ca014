"""Command-line interface: construct map families, symmetrize, take word
powers, verify expansion/spreading, build tensors, compute ranks, certify
lower bounds, refute with decompositions, and run the whole chain.

Exit codes are uniform across subcommands:
  0  the property holds / the requested artifact was produced
  1  the property was refuted (a counterexample is printed)
  2  usage error or malformed input
  3  a configured budget was exceeded (stderr names the stage)

Reports are deterministic `key: value` lines; multi-row values (subspace
bases) repeat the key once per row.  Output is byte-identical for any
--threads setting.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .certify import certify_lower_bound, family_tensor, rank_bound, refute_spreading
from .errors import BudgetExceeded, NotSpreading
from .families import (
    DEFAULT_WORD_CAP,
    MapFamily,
    SpreadingParams,
    dyadic_matchings,
    matching_maps,
    measure_expansion,
    shift_matchings,
    symmetrize,
    verify_expander,
    verify_spreading,
    word_length_for,
    words,
)
from .formats import (
    matrix_report_rows,
    parse_decomposition,
    parse_map_family,
    parse_matchings,
    parse_tensor,
    render_report,
    serialize_decomposition,
    serialize_map_family,
    serialize_tensor,
)
from .gfp import FieldSpec, Matrix
from .subspace import DEFAULT_ENUMERATION_CAP, Subspace
from .tensor import DEFAULT_POOL_CAP, DEFAULT_STEP_CAP, tensor_rank

__all__ = ["RunConfig", "main", "entry"]


@dataclass(frozen=True)
class RunConfig:
    """Validated run-wide knobs shared by the verification subcommands."""

    threads: int = 1
    samples: int | None = None
    seed: int | None = None
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    word_cap: int = DEFAULT_WORD_CAP
    pool_cap: int = DEFAULT_POOL_CAP
    step_cap: int = DEFAULT_STEP_CAP

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ValueError("--threads must be at least 1")
        for name in ("enumeration_cap", "word_cap", "pool_cap", "step_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if self.samples is not None:
            if self.samples < 1:
                raise ValueError("--samples must be positive")
            if self.seed is None:
                raise ValueError("sampled mode requires an explicit --seed")


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        threads=getattr(args, "threads", 1),
        samples=getattr(args, "samples", None),
        seed=getattr(args, "seed", None),
        enumeration_cap=getattr(args, "enumeration_cap", DEFAULT_ENUMERATION_CAP),
        word_cap=getattr(args, "word_cap", DEFAULT_WORD_CAP),
        pool_cap=getattr(args, "pool_cap", DEFAULT_POOL_CAP),
        step_cap=getattr(args, "step_cap", DEFAULT_STEP_CAP),
    )


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _read(path: str) -> str:
    return Path(path).read_text(encoding="ascii")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _family_header(name: str, fam: MapFamily) -> list[tuple[str, object]]:
    return [
        ("report", name),
        ("field", fam.field.modulus),
        ("n", fam.n),
        ("maps", len(fam.maps)),
    ]


def _mode_items(cfg: RunConfig) -> list[tuple[str, object]]:
    if cfg.samples is None:
        return [("mode", "exhaustive")]
    return [
        ("mode", "sampled"),
        ("samples", cfg.samples),
        ("seed", cfg.seed),
        ("confidence", "refutation-only"),
    ]


def _subspace_items(key: str, sub: Subspace) -> list[tuple[str, object]]:
    items: list[tuple[str, object]] = [(f"{key}_dim", sub.dim)]
    items.extend(matrix_report_rows(key, sub.basis))
    return items


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------


def _cmd_build_maps(args: argparse.Namespace) -> int:
    field = FieldSpec(args.field)
    kind = args.kind
    if kind in ("shifts", "dyadic"):
        if args.n is None:
            raise ValueError(f"--n is required for kind {kind!r}")
        make = shift_matchings if kind == "shifts" else dyadic_matchings
        fam = matching_maps(make(args.n), field)
    elif kind == "random":
        if args.n is None:
            raise ValueError("--n is required for kind 'random'")
        if args.seed is None:
            raise ValueError("--seed is required for kind 'random' (reproducibility)")
        rng = random.Random(args.seed)
        p = field.modulus
        maps = tuple(
            Matrix(field, args.n, args.n,
                   tuple(rng.randrange(p) for _ in range(args.n * args.n)))
            for _ in range(args.count)
        )
        fam = MapFamily(field, args.n, maps)
    elif kind == "matchings-file":
        if args.input is None:
            raise ValueError("--input is required for kind 'matchings-file'")
        fam = matching_maps(parse_matchings(_read(args.input)), field)
    elif kind == "from-file":
        if args.input is None:
            raise ValueError("--input is required for kind 'from-file'")
        fam = parse_map_family(_read(args.input))
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown kind {kind!r}")
    _emit(serialize_map_family(fam), args.out)
    return 0


def _cmd_symmetrize(args: argparse.Namespace) -> int:
    fam = parse_map_family(_read(args.maps))
    _emit(serialize_map_family(symmetrize(fam)), args.out)
    return 0


def _cmd_words(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = parse_map_family(_read(args.maps))
    _emit(serialize_map_family(words(fam, args.length, word_cap=cfg.word_cap)), args.out)
    return 0


def _cmd_verify_spreading(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = parse_map_family(_read(args.maps))
    params = SpreadingParams(args.s, args.t)
    res = verify_spreading(
        fam, params, samples=cfg.samples, seed=cfg.seed,
        threads=cfg.threads, enumeration_cap=cfg.enumeration_cap,
    )
    items = _family_header("verify-spreading", fam)
    items += [("s", params.s), ("t", params.t)]
    items += _mode_items(cfg)
    items.append(("verdict", "holds" if res.verified else "refuted"))
    items.append(("conclusive", "yes" if res.conclusive else "no"))
    if not res.verified:
        items.append(("achieved", res.achieved))
        items += _subspace_items("counterexample", res.counterexample)
    sys.stdout.write(render_report(items))
    return 0 if res.verified else 1


def _cmd_verify_expander(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = parse_map_family(_read(args.maps))
    res = verify_expander(
        fam, args.tau, samples=cfg.samples, seed=cfg.seed,
        threads=cfg.threads, enumeration_cap=cfg.enumeration_cap,
    )
    items = _family_header("verify-expander", fam)
    items.append(("tau", args.tau))
    items += _mode_items(cfg)
    items.append(("verdict", "holds" if res.verified else "refuted"))
    items.append(("conclusive", "yes" if res.conclusive else "no"))
    if not res.verified:
        items.append(("achieved", res.achieved))
        items += _subspace_items("counterexample", res.counterexample)
    sys.stdout.write(render_report(items))
    return 0 if res.verified else 1


def _cmd_measure(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = parse_map_family(_read(args.maps))
    rep = measure_expansion(
        fam, samples=cfg.samples, seed=cfg.seed,
        threads=cfg.threads, enumeration_cap=cfg.enumeration_cap,
    )
    items = _family_header("measure", fam)
    items += _mode_items(cfg)
    items.append(("tau_star", rep.tau_star))
    for dim, low in rep.per_dimension:
        items.append((f"dim_{dim}_min_image_sum", low))
    items += _subspace_items("witness", rep.witness)
    items.append(("conclusive", "yes" if rep.exhaustive else "no"))
    sys.stdout.write(render_report(items))
    return 0


def _cmd_build_tensor(args: argparse.Namespace) -> int:
    fam = parse_map_family(_read(args.maps))
    _emit(serialize_tensor(family_tensor(fam)), args.out)
    return 0


def _cmd_tensor_rank(args: argparse.Namespace) -> int:
    cfg = _config(args)
    t = parse_tensor(_read(args.tensor))
    items: list[tuple[str, object]] = [
        ("report", "tensor-rank"),
        ("field", t.field.modulus),
        ("dims", f"{t.d1} {t.d2} {t.d3}"),
        ("r_max", args.r_max),
    ]
    found = tensor_rank(t, args.r_max, pool_cap=cfg.pool_cap, step_cap=cfg.step_cap)
    if found is None:
        items.append(("verdict", "above_max"))
        items.append(("certified_above", args.r_max))
        sys.stdout.write(render_report(items))
        return 1
    rank, dec = found
    items.append(("verdict", "determined"))
    items.append(("rank", rank))
    items.append(("terms", len(dec.terms)))
    sys.stdout.write(render_report(items))
    if args.dec_out:
        _emit(serialize_decomposition(dec), args.dec_out)
    return 0


def _cmd_certify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = parse_map_family(_read(args.maps))
    params = SpreadingParams(args.s, args.t)
    items = _family_header("certify", fam)
    items += [("s", params.s), ("t", params.t)]
    items += _mode_items(cfg)
    try:
        cert = certify_lower_bound(
            fam, params, samples=cfg.samples, seed=cfg.seed,
            threads=cfg.threads, enumeration_cap=cfg.enumeration_cap,
        )
    except NotSpreading as e:
        items.append(("verdict", "not-spreading"))
        items.append(("achieved", e.achieved))
        items += _subspace_items("counterexample", e.counterexample)
        sys.stdout.write(render_report(items))
        return 1
    items.append(("verdict", "certified"))
    items.append(("bound", cert.bound))
    items.append(("conclusive", "yes" if cert.conclusive else "no"))
    sys.stdout.write(render_report(items))
    return 0


def _cmd_refute(args: argparse.Namespace) -> int:
    fam = parse_map_family(_read(args.maps))
    dec = parse_decomposition(_read(args.dec))
    params = SpreadingParams(args.s, args.t)
    trace = refute_spreading(fam, params, dec)
    items = _family_header("refute", fam)
    items += [("s", params.s), ("t", params.t), ("terms", trace.terms)]
    items.append(("verdict", "refuted"))
    items.append(
        ("s_indices", " ".join(str(i) for i in trace.s_indices) if trace.s_indices else "none")
    )
    items += _subspace_items("kernel", trace.kernel)
    items += _subspace_items("image_span", trace.image_span)
    items += _subspace_items("violating", trace.violating)
    items.append(("achieved", trace.achieved))
    sys.stdout.write(render_report(items))
    return 1


def _rank_check_feasible(p: int, n: int, r_max: int, pool_cap: int) -> bool:
    classes = ((p**n - 1) // (p - 1)) ** 2
    if classes > pool_cap:
        return False
    return math.comb(classes, min(r_max, classes)) <= 2 * 10**6


def _cmd_pipeline(args: argparse.Namespace) -> int:
    cfg = _config(args)
    eps = args.epsilon
    if not 0 < eps < 1:
        raise ValueError("--epsilon must satisfy 0 < epsilon < 1")
    fam = parse_map_family(_read(args.maps))
    sym = symmetrize(fam)
    items: list[tuple[str, object]] = [
        ("report", "pipeline"),
        ("field", fam.field.modulus),
        ("n", fam.n),
        ("maps_in", len(fam.maps)),
        ("maps_symmetrized", len(sym.maps)),
        ("epsilon", eps),
    ]
    items += _mode_items(cfg)

    rep = measure_expansion(
        sym, samples=cfg.samples, seed=cfg.seed,
        threads=cfg.threads, enumeration_cap=cfg.enumeration_cap,
    )
    items.append(("tau_star", rep.tau_star))
    if rep.tau_star <= 0:
        items.append(("stage", "expansion"))
        items.append(("verdict", "refuted"))
        items += _subspace_items("witness", rep.witness)
        sys.stdout.write(render_report(items))
        return 1

    t = word_length_for(eps, rep.tau_star)
    items.append(("word_length", t))
    word_fam = words(sym, t, word_cap=cfg.word_cap)
    items.append(("word_count", len(word_fam.maps)))

    params = SpreadingParams(_ceil(eps * fam.n), _ceil((1 - eps) * fam.n))
    items += [("s", params.s), ("t", params.t)]
    try:
        cert = certify_lower_bound(
            word_fam, params, samples=cfg.samples, seed=cfg.seed,
            threads=cfg.threads, enumeration_cap=cfg.enumeration_cap,
        )
    except NotSpreading as e:
        items.append(("spreading", "refuted"))
        items.append(("stage", "spreading"))
        items.append(("verdict", "refuted"))
        items.append(("achieved", e.achieved))
        items += _subspace_items("counterexample", e.counterexample)
        sys.stdout.write(render_report(items))
        return 1
    items.append(("spreading", "holds"))
    items.append(("certified_bound", cert.bound))

    r_max = cert.bound - 1
    rank_check = "skipped"
    if cfg.samples is None and _rank_check_feasible(
        fam.field.modulus, fam.n, r_max, cfg.pool_cap
    ):
        try:
            found = tensor_rank(
                family_tensor(word_fam), r_max,
                pool_cap=cfg.pool_cap, step_cap=cfg.step_cap,
            )
        except BudgetExceeded:
            pass
        else:
            if found is None:
                rank_check = "confirmed"
            else:
                items.append(("rank_check",
                              f"VIOLATION rank {found[0]} < bound {cert.bound}"))
                items.append(("verdict", "discrepancy"))
                sys.stdout.write(render_report(items))
                return 1
    items.append(("rank_check", rank_check))
    items.append(("verdict", "certified"))
    items.append(("conclusive", "yes" if cert.conclusive else "no"))
    sys.stdout.write(render_report(items))
    return 0


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def _add_run_options(sp: argparse.ArgumentParser, *, sampled: bool = True) -> None:
    sp.add_argument("--threads", type=int, default=1,
                    help="worker threads for exhaustive scans (output unchanged)")
    sp.add_argument("--enumeration-cap", type=int, default=DEFAULT_ENUMERATION_CAP,
                    help="max subspaces an exhaustive scan may enumerate")
    if sampled:
        sp.add_argument("--samples", type=int, default=None,
                        help="sampled mode: number of random subspaces per dimension")
        sp.add_argument("--seed", type=int, default=None,
                        help="RNG seed (required with --samples)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimspread",
        description="Exact verification of dimension-spreading map families and "
                    "certified rank bounds for their slice tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build-maps", help="construct a .maps file")
    sp.add_argument("--kind", required=True,
                    choices=["shifts", "dyadic", "random", "matchings-file", "from-file"])
    sp.add_argument("--n", type=int, default=None, help="ambient dimension")
    sp.add_argument("--field", type=int, default=2, help="prime field modulus")
    sp.add_argument("--count", type=int, default=3, help="number of random maps")
    sp.add_argument("--seed", type=int, default=None, help="seed for kind=random")
    sp.add_argument("--input", default=None, help="input file for *-file kinds")
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    sp.set_defaults(func=_cmd_build_maps)

    sp = sub.add_parser("symmetrize", help="close a family under transpose, add identity")
    sp.add_argument("maps")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_symmetrize)

    sp = sub.add_parser("words", help="all products of a fixed number of maps")
    sp.add_argument("maps")
    sp.add_argument("--length", type=int, required=True, help="word length")
    sp.add_argument("--word-cap", type=int, default=DEFAULT_WORD_CAP)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_words)

    sp = sub.add_parser("verify-spreading", help="check the image-sum threshold t at dim s")
    sp.add_argument("maps")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    _add_run_options(sp)
    sp.set_defaults(func=_cmd_verify_spreading)

    sp = sub.add_parser("verify-expander", help="check (1+tau)-fold growth up to dim n/2")
    sp.add_argument("maps")
    sp.add_argument("--tau", type=_fraction, required=True)
    _add_run_options(sp)
    sp.set_defaults(func=_cmd_verify_expander)

    sp = sub.add_parser("measure", help="exact best expansion constant of a family")
    sp.add_argument("maps")
    _add_run_options(sp)
    sp.set_defaults(func=_cmd_measure)

    sp = sub.add_parser("build-tensor", help="stack a family into its slice tensor")
    sp.add_argument("maps")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_build_tensor)

    sp = sub.add_parser("tensor-rank", help="exact tensor rank by exhaustive span search")
    sp.add_argument("tensor")
    sp.add_argument("--r-max", type=int, required=True)
    sp.add_argument("--pool-cap", type=int, default=DEFAULT_POOL_CAP)
    sp.add_argument("--step-cap", type=int, default=DEFAULT_STEP_CAP)
    sp.add_argument("--dec-out", default=None,
                    help="write the witness decomposition to this path")
    sp.set_defaults(func=_cmd_tensor_rank)

    sp = sub.add_parser("certify", help="verify spreading and certify the rank bound")
    sp.add_argument("maps")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    _add_run_options(sp)
    sp.set_defaults(func=_cmd_certify)

    sp = sub.add_parser("refute", help="replay a small decomposition into a counterexample")
    sp.add_argument("maps")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--dec", required=True, help=".dec file with fewer than n+t-s terms")
    sp.set_defaults(func=_cmd_refute)

    sp = sub.add_parser("pipeline",
                        help="symmetrize, measure, take words, verify, certify, cross-check")
    sp.add_argument("maps")
    sp.add_argument("--epsilon", type=_fraction, required=True)
    sp.add_argument("--word-cap", type=int, default=DEFAULT_WORD_CAP)
    sp.add_argument("--pool-cap", type=int, default=DEFAULT_POOL_CAP)
    sp.add_argument("--step-cap", type=int, default=DEFAULT_STEP_CAP)
    _add_run_options(sp)
    sp.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"budget exceeded in {e.stage}: needs {e.needed}, cap {e.cap}",
              file=sys.stderr)
        return 3
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
