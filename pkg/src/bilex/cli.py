"""Command-line entry point: ``bilex {list,extract,audit,charsum,dh-demo}``.

Exit codes: 0 success, 2 usage or parse error, 3 capacity exceeded,
4 an audit found a violated non-vacuous bound.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import charsum
from .audit import DEFAULT_PAIR_CAP, _round15, audit_extractor
from .catalog import ENV_VAR, load_catalog
from .dh import derive
from .ec import CurvePoint
from .errors import BilexError, CapacityError, DomainError, ParameterError
from .extract import ExtractorKind, extract, symbol_text, symbol_value
from .field_fpn import ExtFieldDesc

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_BOUND = 0, 2, 3, 4


def _emit(obj, out=None) -> None:
    text = json.dumps(_round15(obj), indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _parse_element(fld, text: str):
    try:
        if isinstance(fld, ExtFieldDesc):
            coords = [int(c) for c in text.split(",")]
            if len(coords) != fld.n or any(not 0 <= c < fld.p for c in coords):
                raise ParameterError(f"{text!r} is not {fld.n} residues mod {fld.p}")
            return fld(coords)
        v = int(text)
    except ValueError as exc:
        raise ParameterError(f"cannot parse field element {text!r}") from exc
    if not 0 <= v < fld.p:
        raise ParameterError(f"{v} is not a canonical residue mod {fld.p}")
    return fld(v)


def _parse_point(curve, text: str) -> CurvePoint:
    if "/" in text:
        xs, ys = text.split("/", 1)
    elif not isinstance(curve.base, ExtFieldDesc) and text.count(",") == 1:
        xs, ys = text.split(",")
    else:
        raise ParameterError(f"cannot parse point {text!r}; expected X/Y")
    return curve.point(_parse_element(curve.base, xs), _parse_element(curve.base, ys))


def cmd_list(args, catalog) -> int:
    _emit([{"name": e.name, "kind": e.kind.value, "p": e.p, "k": e.k, "q1": e.q1, "q2": e.q2}
           for e in catalog])
    return EXIT_OK


def cmd_extract(args, catalog) -> int:
    entry = catalog[args.entry]
    spec = entry.spec
    k = spec.k if args.k is None else args.k
    if spec.kind.on_curve:
        curve = entry.curve_desc
        s1, s2 = _parse_point(curve, args.x1), _parse_point(curve, args.x2)
    else:
        s1, s2 = _parse_element(spec.field, args.x1), _parse_element(spec.field, args.x2)
    out = extract(spec, s1, s2, k=k, check=not args.no_check)
    _emit({"entry": entry.name, "kind": spec.kind.value, "k": k,
           "symbol": symbol_text(out, k), "value": symbol_value(out, spec.p)})
    return EXIT_OK


def cmd_audit(args, catalog) -> int:
    if args.all:
        entries = list(catalog)
    elif args.entry:
        entries = [catalog[name] for name in args.entry]
    else:
        raise ParameterError("give --entry NAME or --all")
    reports = [audit_extractor(e.spec, threads=args.threads, name=e.name, pair_cap=args.pair_cap)
               for e in entries]
    payload = [r.to_json_dict() for r in reports]
    _emit(payload if args.all or len(payload) != 1 else payload[0], args.out)
    return EXIT_BOUND if any(r.status == "fail" for r in reports) else EXIT_OK


def cmd_charsum(args, catalog) -> int:
    entry = catalog[args.entry]
    spec = entry.spec
    src = spec.source1 if args.source == 1 else spec.source2
    if args.check == "pv":
        if spec.kind is not ExtractorKind.FP_LSB:
            raise ParameterError("pv applies to prime-field (fp_lsb) entries")
        result = charsum.check_polya_vinogradov(src, args.threads).to_dict()
    elif args.check == "bilinear":
        if spec.kind is ExtractorKind.FP_LSB:
            check = charsum.check_bilinear(spec.source1, spec.source2, args.threads)
        elif spec.kind is ExtractorKind.FPN_COORD:
            check = charsum.check_bilinear_fpn(spec.source1, spec.source2, args.threads)
        else:
            check = charsum.check_ec_bilinear(spec.source1, spec.source2, args.threads)
        result = check.to_dict()
    else:
        if args.all_subspaces:
            from .subspaces import winterhof_sweep

            if not isinstance(spec.field, ExtFieldDesc):
                raise ParameterError("winterhof applies to extension-field entries")
            result = {"check": "winterhof_sweep", **winterhof_sweep(spec.field).to_dict()}
        else:
            result = charsum.check_winterhof(entry.winterhof_subspace()).to_dict()
    _emit({"entry": entry.name, **result})
    return EXIT_OK


def cmd_dh_demo(args, catalog) -> int:
    entry = catalog[args.entry]
    seed = entry.dh_seed if args.seed is None else args.seed
    _emit({"entry": entry.name, **derive(entry.spec, args.secret_a, args.secret_b, seed)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bilex", description=__doc__.splitlines()[0])
    parser.add_argument("--catalog", help=f"catalog JSON (default: ${ENV_VAR} or the shipped one)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list catalog entries").set_defaults(func=cmd_list)

    p = sub.add_parser("extract", help="apply an entry's extractor to one input pair")
    p.add_argument("--entry", required=True)
    p.add_argument("--x1", required=True, help="integer, comma coordinates, or point X/Y")
    p.add_argument("--x2", required=True)
    p.add_argument("--k", type=int, help="output length (default: the entry's k)")
    p.add_argument("--no-check", action="store_true", help="skip subgroup membership checks")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("audit", help="exhaustive audit against the matching bound")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--entry", action="append")
    group.add_argument("--all", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--pair-cap", type=int, default=DEFAULT_PAIR_CAP)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("charsum", help="character-sum bound checks")
    p.add_argument("--entry", required=True)
    p.add_argument("--check", required=True, choices=["pv", "winterhof", "bilinear"])
    p.add_argument("--source", type=int, choices=[1, 2], default=1)
    p.add_argument("--all-subspaces", action="store_true",
                   help="winterhof: sweep every subspace of the entry's field")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("dh-demo", help="Diffie-Hellman exchange with extractor key derivation")
    p.add_argument("--entry", required=True)
    p.add_argument("--secret-a", type=int, required=True)
    p.add_argument("--secret-b", type=int, required=True)
    p.add_argument("--seed", type=int, help="public seed for the second-source sample")
    p.set_defaults(func=cmd_dh_demo)
    return parser


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(line_buffering=True, encoding="utf-8")
    args = build_parser().parse_args(argv)
    try:
        catalog = load_catalog(args.catalog)
        return args.func(args, catalog)
    except CapacityError as exc:
        print(f"bilex: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except KeyError as exc:
        print(f"bilex: unknown catalog entry {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DomainError, BilexError, OSError) as exc:
        print(f"bilex: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
