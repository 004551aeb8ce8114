"""``fuzzysub`` command line.

    fuzzysub count "D8 x C8" --method both
    fuzzysub table D8_C2M --range 3..10 --oracle
    fuzzysub verify --preset paper-tables --max-order 256 --ledger ledger.json
    fuzzysub lattice D8
    fuzzysub families
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from .errors import FuzzySubError, InternalError, SpecError
from .formulas import D2N_C8_READINGS, family_signature, list_families
from .groupspec import group_from_spec
from .lattice import DEFAULT_SUBGROUP_LIMIT, enumerate_subgroups
from .report import (
    DEFAULT_MAX_ORDER,
    PRESETS,
    TABLE_COLUMNS,
    Cache,
    cmd_count,
    cmd_table,
    cmd_verify,
)


def _interpretations(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or key != "d2n_c8" or value not in D2N_C8_READINGS:
            raise argparse.ArgumentTypeError(
                f"bad --interpretation {item!r}; expected d2n_c8=<{'|'.join(D2N_C8_READINGS)}>"
            )
        out[key] = value
    return out


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like 3..10, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--cache", metavar="PATH", help="JSON result cache")
    common.add_argument(
        "--interpretation", action="append", default=[], metavar="KEY=READING",
        help="opt-in reading for a garbled formula, e.g. d2n_c8=j_minus_1",
    )
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="fuzzysub", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="number of fuzzy subgroups of one group")
    p.add_argument("spec")
    p.add_argument("--method", choices=["dp", "ie", "both", "formula"], default="both")

    p = sub.add_parser("table", parents=[common], help="tabulate a formula family")
    p.add_argument("family")
    p.add_argument("--range", dest="span", type=_range, required=True, metavar="LO..HI")
    p.add_argument("-p", type=int, default=None, help="prime for p-parameterised families")
    p.add_argument("--oracle", action="store_true", help="add lattice-oracle values")
    p.add_argument("--format", choices=["csv", "json"], default=None)

    p = sub.add_parser("verify", parents=[common], help="run the verification ledger")
    p.add_argument("specs", nargs="*", help="explicit specs (overrides --preset)")
    p.add_argument("--preset", default="smoke", help=f"one of {sorted(PRESETS) + ['families']}")
    p.add_argument("--ledger", metavar="PATH", default=None, help="write the full JSON ledger here")

    p = sub.add_parser("lattice", parents=[common], help="dump the subgroup lattice as JSON")
    p.add_argument("spec")
    p.add_argument("--subgroup-limit", type=int, default=DEFAULT_SUBGROUP_LIMIT)

    sub.add_parser("families", parents=[common], help="list formula families")
    return ap


def _print_verify(report, out) -> None:
    for e in report.entries:
        head = f"{e['spec']:<22} order {e['order']:>5}  "
        if e["status"] != "ok":
            print(head + f"{e['status'].upper()}: {e['reason']}", file=out)
            continue
        print(head + f"h = {e['oracle_value']}  ({e['subgroup_count']} subgroups)", file=out)
        for c in e["checks"]:
            claims = " ".join(f"{cl['source']}={cl['value']}" for cl in c["claims"])
            flags = [c["formula_matches_oracle"], *c["claims_match_oracle"].values(),
                     *c["formula_matches_claims"].values()]
            if c["mismatches"]:
                verdict = "MISMATCH " + ",".join(c["mismatches"])
            else:
                verdict = "agree" if any(f is True for f in flags) else "n/a"
            print(
                f"    {c['family']}{tuple(c['params'].values())}: formula={c['formula_value']} "
                f"[{c['validity']}] {claims}  -> {verdict}",
                file=out,
            )
    print("summary: " + ", ".join(f"{k}={v}" for k, v in report.summary.items()), file=out)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = sys.stdout
    try:
        interp = _interpretations(args.interpretation)
        cache = Cache(args.cache) if args.cache else None

        if args.command == "count":
            res = cmd_count(args.spec, args.method, cache=cache, interpretations=interp)
            if args.json:
                json.dump(res, out, indent=1)
                print(file=out)
            else:
                for k in ("spec", "order", "subgroup_count", "h", "method", "family", "params",
                          "validity", "runtime_ms"):
                    if k in res and res[k] is not None:
                        v = f"{res[k]:.1f}" if k == "runtime_ms" else res[k]
                        print(f"{k}: {v}", file=out)
            return 0

        if args.command == "table":
            lo, hi = args.span
            rows = cmd_table(args.family, lo, hi, p=args.p, with_oracle=args.oracle,
                             max_order=args.max_order, cache=cache, interpretations=interp)
            if args.json or args.format == "json":
                json.dump(rows, out, indent=1)
                print(file=out)
            else:
                w = csv.DictWriter(out, fieldnames=TABLE_COLUMNS, extrasaction="ignore",
                                   lineterminator="\n")
                w.writeheader()
                w.writerows(rows)
            return 0

        if args.command == "verify":
            corpus = args.specs if args.specs else args.preset
            report = cmd_verify(corpus, args.max_order, cache=cache, interpretations=interp,
                                ledger=args.ledger)
            if args.json:
                json.dump(report.to_dict(), out, indent=1)
                print(file=out)
            else:
                _print_verify(report, out)
            return report.exit_code

        if args.command == "lattice":
            g = group_from_spec(args.spec, cap=max(args.max_order, 1))
            json.dump(enumerate_subgroups(g, args.subgroup_limit).to_dict(), out, indent=1)
            print(file=out)
            return 0

        if args.command == "families":
            fams = list_families()
            if args.json:
                json.dump(
                    [{"family": f.family.value, "params": f.params, "lower_bounds": f.lower_bounds,
                      "primes": f.primes, "describes": f.describes,
                      "flags": [x.value for x in f.flags]} for f in fams],
                    out, indent=1,
                )
                print(file=out)
            else:
                for f in fams:
                    flag = "  [garbled source]" if f.flags else ""
                    print(family_signature(f.family) + flag, file=out)
            return 0
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except (FuzzySubError, SpecError, argparse.ArgumentTypeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0  # pragma: no cover


if __name__ == "__main__":
    raise SystemExit(main())
