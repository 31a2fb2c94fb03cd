"""Command-line front end: each subcommand runs an N-sweep and writes CSV or JSON.

Exit codes: 0 ok, 2 parse/validation error, 3 size budget exceeded,
4 file I/O error, 5 internal consistency check failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import gaussian_mc, matrix_model, partitions, second_order
from .dsl import format_centered_spec, parse_spec, parse_word_dsl
from .errors import InternalInconsistencyError, SizeLimitError, ValidationError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_IO = 4
EXIT_INTERNAL = 5

# options that affect the rows; output plumbing is left out of the hash
_OUTPUT_KEYS = {"out", "format", "config", "workers", "func"}


def exact_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal_str(x) -> str:
    """12 significant digits, computed from the exact rational."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, ".12g")


def _exact_cols(name, value) -> dict:
    if isinstance(value, Fraction) or isinstance(value, int):
        return {name: exact_str(value), f"{name}_decimal": decimal_str(value)}
    return {name: "" if value is None else str(value), f"{name}_decimal": ""}


def config_hash(config: dict) -> str:
    canon = json.dumps({k: v for k, v in config.items() if k not in _OUTPUT_KEYS}, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def parse_int_list(text) -> list[int]:
    if isinstance(text, list):
        values = [int(v) for v in text]
    else:
        try:
            values = [int(v) for v in str(text).split(",") if v.strip()]
        except ValueError:
            raise ValidationError(f"expected a comma-separated list of integers, got {text!r}") from None
    if not values:
        raise ValidationError("empty sweep")
    if any(v < 1 for v in values):
        raise ValidationError(f"sizes must be positive: {values}")
    return values


def load_perm(source: str, N: int) -> matrix_model.EntryPermutation:
    """A built-in name, or a mapping file given as ``file:<path>`` or any
    string containing a path separator or a dot."""
    if source.startswith("file:"):
        perm = matrix_model.read_mapping_file(source[5:])
    elif "/" in source or "." in source or os.sep in source:
        perm = matrix_model.read_mapping_file(source)
    else:
        return matrix_model.builtin_perm(source, N)
    if perm.N != N:
        raise ValidationError(f"mapping file is for N={perm.N}, sweep asks for N={N}")
    return perm


# -- subcommands ----------------------------------------------------------


def _partition_fields(kind, p):
    row = {"partition": str(p), "blocks": len(p.blocks) if hasattr(p, "blocks") else len(p.pairs)}
    if kind in ("pairings", "nc2"):
        row["genus"] = partitions.genus(p)
        row["noncrossing"] = partitions.is_noncrossing(p)
    return row


_ENUMERATORS = {
    "set": partitions.enumerate_set_partitions,
    "nc": partitions.enumerate_nc,
    "nc2": partitions.enumerate_nc2,
    "pairings": partitions.enumerate_pairings,
    "intervals": partitions.enumerate_intervals,
}


def cmd_enumerate(cfg):
    rows = []
    for n in parse_int_list(cfg["n"]):
        items = _ENUMERATORS[cfg["kind"]](n)
        if cfg["count_only"]:
            rows.append({"kind": cfg["kind"], "n": n, "count": len(items)})
            continue
        for idx, p in enumerate(items):
            rows.append({"kind": cfg["kind"], "n": n, "index": idx, **_partition_fields(cfg["kind"], p)})
    return rows, ("n", "index")


def cmd_moment(cfg):
    word = parse_word_dsl(cfg["word"])
    engine = (
        matrix_model.semicircular_word_moment if cfg["model"] == "semicircular" else matrix_model.bernoulli_word_moment
    )
    rows = []
    for N in parse_int_list(cfg["N"]):
        perm = load_perm(cfg["perm"], N)
        value = engine(N, word, perm)
        rows.append({
            "N": N,
            "model": cfg["model"],
            "word": matrix_model.format_word(word, *(("S", "St") if cfg["model"] == "semicircular" else ("B", "Bs"))),
            "perm": cfg["perm"],
            **_exact_cols("value", value),
            **_exact_cols("N_value", N * value),
        })
    return rows, ("N",)


def cmd_check_sigma(cfg):
    rows = []
    for N in parse_int_list(cfg["N"]):
        v = matrix_model.classify(load_perm(cfg["perm"], N))
        rows.append({
            "N": N,
            "perm": cfg["perm"],
            "commutes_with_t": v.commutes_with_t,
            "row_fixing_count": v.row_fixing_count,
            **_exact_cols("ratio", v.ratio),
            "verdict": v.verdict,
        })
    return rows, ("N",)


def cmd_gaussian_mc(cfg):
    word = parse_word_dsl(cfg["word"])
    m = cfg["m"]
    sigma = load_perm(cfg["perm"], m)
    limit = gaussian_mc.semicircular_limit_value(word, sigma)
    rows = []
    for N in parse_int_list(cfg["N"]):
        est = gaussian_mc.empirical_word_moment(word, sigma, N, cfg["samples"], cfg["seed"], workers=cfg["workers"])
        exact = gaussian_mc.gaussian_word_moment(word, sigma, N)
        rows.append({
            "N": N,
            "m": m,
            "word": matrix_model.format_word(word, "G", "Gs"),
            "estimate": repr(est.mean),
            "stderr": repr(est.stderr),
            **_exact_cols("exact", exact),
            "gap": repr(abs(est.mean - float(limit))),
            **_exact_cols("exact_gap", exact - limit),
        })
    return rows, ("N",)


def _parse_blocks(text: str, m: int):
    pairs = []
    for tok in text.replace("(", " ").replace(")", " ").split():
        a, _, b = tok.partition(",")
        try:
            pairs.append((int(a), int(b)))
        except ValueError:
            raise ValidationError(f"bad block token {tok!r}; expected 'j,k'") from None
    return gaussian_mc.BlockWordSpec(m, tuple(pairs))


def cmd_genus_expansion(cfg):
    m = cfg["m"]
    if cfg["blocks"]:
        spec = _parse_blocks(cfg["blocks"], m)
    else:
        spec = gaussian_mc.BlockWordSpec(m, ((1, 1),) * cfg["power"])
    label = " ".join(f"({a},{b})" for a, b in spec.blocks)
    rows = []
    for N in parse_int_list(cfg["N"]):
        rows.append({"N": N, "m": m, "blocks": label, **_exact_cols("exact", gaussian_mc.genus_expansion_moment(spec, N))})
    return rows, ("N",)


def _trace_prediction(spec: second_order.TraceProductSpec):
    if spec.r >= 3:
        return Fraction(0)
    if spec.r == 2:
        # a single-run trace differs from its centered version by a constant,
        # which kappa_2 ignores
        runs = [set(w) for w in spec.words()]
        if all(len(r) == 1 for r in runs):
            words = spec.words()
            centered = second_order.CenteredPolyWord.monomials(
                [len(w) for w in words], [1 if w[0] == 0 else -1 for w in words], 1
            )
            return second_order.kappa2_limit_prediction(centered)
    return None


def cmd_second_order(cfg):
    spec = parse_spec(cfg["spec"])
    if isinstance(spec, second_order.CenteredPolyWord):
        label = format_centered_spec(spec)
        prediction = second_order.kappa2_limit_prediction(spec)
        kappa = second_order.kappa2_centered
    else:
        label = str(spec)
        prediction = _trace_prediction(spec)
        kappa = second_order.kappa_r_traces
    rows = []
    for N in parse_int_list(cfg["N"]):
        value = kappa(spec, N)
        row = {"N": N, "spec": label, **_exact_cols("kappa2_exact", value), **_exact_cols("prediction", prediction)}
        if isinstance(prediction, Fraction):
            gap = value - prediction
            row.update(_exact_cols("gap", gap))
            row.update(_exact_cols("N_gap", N * gap))
        else:
            row.update(_exact_cols("gap", None))
            row.update(_exact_cols("N_gap", None))
        rows.append(row)
    return rows, ("N",)


# -- plumbing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--config", help="JSON file of option defaults; flags override it")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=10_000)

    parser = argparse.ArgumentParser(prog="permfree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list partitions of [n]")
    p.add_argument("--kind", choices=sorted(_ENUMERATORS), default="nc")
    p.add_argument("--n", default="4", help="comma-separated sizes")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("moment", parents=[common], help="exact phi(tr) of a word in S and S^sigma")
    p.add_argument("--word", required=False, default="S St")
    p.add_argument("--perm", default="transpose", help="identity|transpose|antidiagonal|lpt:<m>|<mapping file>")
    p.add_argument("--model", choices=("semicircular", "bernoulli"), default="semicircular")
    p.add_argument("--N", default="2,4,8")
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("check-sigma", parents=[common], help="classify an entry permutation")
    p.add_argument("--perm", default="transpose")
    p.add_argument("--N", default="4")
    p.set_defaults(func=cmd_check_sigma)

    p = sub.add_parser("gaussian-mc", parents=[common], help="Monte Carlo moments of G and its block permutation")
    p.add_argument("--word", default="G G G G")
    p.add_argument("--m", type=int, default=1, help="number of blocks per side")
    p.add_argument("--perm", default="transpose", help="permutation of the m x m block grid")
    p.add_argument("--N", default="8", help="block size sweep")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_gaussian_mc)

    p = sub.add_parser("genus-expansion", parents=[common], help="exact E tr of a Gaussian block word")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--power", type=int, default=4, help="word (1,1)^power when --blocks is absent")
    p.add_argument("--blocks", default="", help="e.g. '(1,2)(2,1)'")
    p.add_argument("--N", default="1,2,4,8")
    p.set_defaults(func=cmd_genus_expansion)

    p = sub.add_parser("second-order", parents=[common], help="exact trace cumulants and their predicted limits")
    p.add_argument("--spec", default="Tr(S)|Tr(St)")
    p.add_argument("--N", default="2,4,8,16")
    p.set_defaults(func=cmd_second_order)
    return parser


def _sort_key(keys):
    return lambda row: tuple(row.get(k, 0) for k in keys)


def render(rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, default=str) + "\n"
    buf = io.StringIO()
    fields = []
    for row in rows:
        fields += [k for k in row if k not in fields]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _parse_args(parser, argv):
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            defaults = json.load(fh)
        if not isinstance(defaults, dict):
            raise ValidationError("config file must hold a JSON object")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in defaults.items() if k != "command"})
        args = parser.parse_args(argv)
    return args


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse_args(parser, argv)
        cfg = vars(args)
        digest = config_hash(cfg)
        rows, keys = args.func(cfg)
        rows = sorted(rows, key=_sort_key(keys))
        rows = [{"config_hash": digest, **row} for row in rows]
        text = render(rows, args.format)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (ValidationError, json.JSONDecodeError) as exc:
        print(f"permfree: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeLimitError as exc:
        print(f"permfree: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"permfree: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InternalInconsistencyError as exc:
        print(f"permfree: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))
