"""Counting, table regeneration and the verification ledger behind the CLI."""

from __future__ import annotations

import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from . import __version__
from .chains import DEFAULT_IE_CAP, Method, fuzzy_subgroup_count
from .errors import CapacityError, FuzzySubError, InternalError
from .formulas import (
    FormulaFamily,
    Validity,
    cross_check,
    eval_formula,
    family_instances,
    family_signature,
    match_families,
)
from .groupspec import canonicalize, parse_spec, realize
from .lattice import DEFAULT_SUBGROUP_LIMIT

log = logging.getLogger(__name__)

ENGINE_VERSION = f"{__version__}+lattice1"
DEFAULT_MAX_ORDER = 256


class NoMatchingFamilyError(FuzzySubError):
    pass


# -- cache -------------------------------------------------------------------


class Cache:
    """JSON file mapping canonical spec -> ``{h, method, engine_version, subgroup_count}``.

    ``h`` is a decimal string.  Entries written by another engine version
    are ignored and replaced on the next write.
    """

    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path else None
        self.entries: dict[str, dict] = {}
        if self.path and self.path.exists():
            with open(self.path) as fh:
                self.entries = json.load(fh)

    def get(self, spec: str, require_both: bool = False) -> dict | None:
        e = self.entries.get(spec)
        if e is None or e.get("engine_version") != ENGINE_VERSION:
            return None
        if require_both and e.get("method") != Method.BOTH.value:
            return None
        return e

    def put(self, spec: str, h: int, method: Method, subgroup_count: int) -> None:
        old = self.get(spec)
        if old is not None and old["method"] == Method.BOTH.value and method is not Method.BOTH:
            return
        self.entries[spec] = {
            "h": str(h),
            "method": method.value,
            "engine_version": ENGINE_VERSION,
            "subgroup_count": subgroup_count,
        }

    def save(self) -> None:
        if not self.path:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(self.entries, fh, indent=1, sort_keys=True)
        os.replace(tmp, self.path)


# -- count -------------------------------------------------------------------


def cmd_count(
    spec: str,
    method: str = "both",
    *,
    cache: Cache | None = None,
    interpretations: Mapping[str, str] | None = None,
    subgroup_limit: int = DEFAULT_SUBGROUP_LIMIT,
    ie_cap: int = DEFAULT_IE_CAP,
) -> dict:
    expr = parse_spec(spec)
    canon = canonicalize(expr)
    t0 = time.perf_counter()

    if method == "formula":
        matches = match_families(canon)
        if not matches:
            known = "\n  ".join(family_signature(f) for f in FormulaFamily)
            raise NoMatchingFamilyError(f"no formula family describes {canon}; families:\n  {known}")
        results = [(f, a, eval_formula(f, *a, interpretations=interpretations)) for f, a in matches]
        results.sort(key=lambda r: (r[2].value is None, r[2].validity is not Validity.OK))
        fam, args, res = results[0]
        return {
            "spec": canon,
            "order": expr.order,
            "subgroup_count": None,
            "h": None if res.value is None else str(res.value),
            "method": "formula",
            "family": fam.value,
            "params": dict(zip(fam.info.params, args)),
            "validity": res.validity.value,
            "notes": res.notes,
            "runtime_ms": (time.perf_counter() - t0) * 1e3,
        }

    m = Method(method)
    if cache is not None:
        hit = cache.get(canon, require_both=m is Method.BOTH)
        if hit is not None and (m is Method.BOTH or hit["method"] in (m.value, Method.BOTH.value)):
            return {
                "spec": canon,
                "order": expr.order,
                "subgroup_count": hit["subgroup_count"],
                "h": hit["h"],
                "method": hit["method"],
                "cached": True,
                "runtime_ms": (time.perf_counter() - t0) * 1e3,
            }
    result = fuzzy_subgroup_count(realize(expr), m, subgroup_limit=subgroup_limit, ie_cap=ie_cap)
    if cache is not None:
        cache.put(canon, result.value, m, result.subgroup_count)
        cache.save()
    return {
        "spec": canon,
        "order": result.order,
        "subgroup_count": result.subgroup_count,
        "h": str(result.value),
        "method": m.value,
        "cached": False,
        "runtime_ms": (time.perf_counter() - t0) * 1e3,
        "runtimes_ms": result.runtimes_ms,
    }


# -- oracle helper -------------------------------------------------------------


@dataclass
class OracleOutcome:
    status: str  # "ok", "skipped" or "internal_error"
    value: int | None = None
    subgroup_count: int | None = None
    cached: bool = False
    reason: str = ""
    runtimes_ms: dict[str, float] = field(default_factory=dict)


def oracle(
    canon: str,
    max_order: int,
    cache: Cache | None = None,
    subgroup_limit: int = DEFAULT_SUBGROUP_LIMIT,
    ie_cap: int = DEFAULT_IE_CAP,
) -> OracleOutcome:
    """h via method BOTH (DP and inclusion-exclusion must agree)."""
    expr = parse_spec(canon, cap=1 << 62)
    if expr.order > max_order:
        return OracleOutcome("skipped", reason=f"order {expr.order} exceeds max order {max_order}")
    if cache is not None:
        hit = cache.get(canon, require_both=True)
        if hit is not None:
            return OracleOutcome("ok", int(hit["h"]), hit["subgroup_count"], cached=True)
    try:
        r = fuzzy_subgroup_count(realize(expr, cap=max(max_order, expr.order)), Method.BOTH,
                                 subgroup_limit=subgroup_limit, ie_cap=ie_cap)
    except InternalError as exc:
        return OracleOutcome("internal_error", reason=str(exc))
    except CapacityError as exc:
        return OracleOutcome("skipped", reason=str(exc))
    if cache is not None:
        cache.put(canon, r.value, Method.BOTH, r.subgroup_count)
    return OracleOutcome("ok", r.value, r.subgroup_count, runtimes_ms=r.runtimes_ms)


# -- table -------------------------------------------------------------------


def _verdict(values: dict[str, int | None]) -> str:
    present = {k: v for k, v in values.items() if v is not None}
    if len(present) < 2:
        return "n/a"
    names = sorted(present)
    bad = [f"{a}!={b}" for i, a in enumerate(names) for b in names[i + 1 :] if present[a] != present[b]]
    return "match" if not bad else "MISMATCH " + ",".join(bad)


def cmd_table(
    family: str,
    lo: int,
    hi: int,
    *,
    p: int | None = None,
    with_oracle: bool = False,
    max_order: int = DEFAULT_MAX_ORDER,
    cache: Cache | None = None,
    interpretations: Mapping[str, str] | None = None,
) -> list[dict]:
    fam = FormulaFamily(family.upper())
    rows = []
    for k in range(lo, hi + 1):
        args = (k,) if "p" not in fam.info.params else (p if p is not None else 2, k)
        check = cross_check(fam, args, None, interpretations)
        oracle_value = None
        oracle_note = ""
        if with_oracle:
            out = oracle(canonicalize(parse_spec(check.spec, cap=1 << 62)), max_order, cache)
            if out.status == "internal_error":
                raise InternalError(out.reason)
            oracle_value, oracle_note = out.value, out.reason
        values = {"formula": check.formula.value, "oracle": oracle_value}
        for c in check.claims:
            values[c.source] = c.value
        rows.append(
            {
                "param": k,
                "spec": check.spec,
                "formula_value": check.formula.value,
                "validity": check.formula.validity.value,
                "fixture_value": check.claims[0].value if check.claims else None,
                "claims": {c.source: c.value for c in check.claims},
                "oracle_value": oracle_value,
                "oracle_note": oracle_note,
                "verdict": _verdict(values),
            }
        )
    if cache is not None:
        cache.save()
    return rows


TABLE_COLUMNS = ("param", "formula_value", "fixture_value", "oracle_value", "verdict")


# -- verify ------------------------------------------------------------------

_SMOKE = [
    "C1", "C2", "C4", "C8", "C16", "C32", "C64", "C3", "C9", "C27", "C5", "C25",
    "C2 x C2", "C2 x C4", "C2 x C8", "C2 x C16", "C2 x C32", "C3 x C3", "C3 x C9", "C5 x C5",
    "C4 x C4", "C4 x C8", "C4 x C16", "C8 x C8",
    "C2^3", "C2 x C2 x C4", "C2 x C2 x C8", "C2 x C2 x C16", "C3^3", "C2^4",
    "D4", "D8", "D16", "D32", "D64", "D8 x C2", "D16 x C2", "D32 x C2", "D8 x C4", "D16 x C4",
    "D8 x C8",
]

PRESETS: dict[str, list[str]] = {
    "smoke": _SMOKE,
    "table1": [f"D8 x C{2**m}" for m in range(3, 11)],
    "table2": [f"D16 x C{2**n}" for n in range(4, 7)],
    "paper-tables": [f"D8 x C{2**m}" for m in range(3, 11)]
    + [f"D16 x C{2**n}" for n in range(4, 7)]
    + ["D8 x C4", "D16 x C4", "D32 x C4", "D16 x C2", "D32 x C2", "D64 x C2", "D16 x C8", "D32 x C8"]
    + [f"C4 x C{2**n}" for n in range(2, 9)]
    + [f"C8 x C{2**n}" for n in range(3, 8)]
    + ["C2^3", "C2 x C2 x C4", "C3^3", "C3 x C3 x C9"],
}


def corpus_specs(corpus: str | Iterable[str], max_order: int) -> list[str]:
    """Canonical specs of a preset name, ``"families"``, or an explicit list."""
    if isinstance(corpus, str):
        if corpus == "families":
            return sorted({c for _, _, c in family_instances(max_order)})
        if corpus not in PRESETS:
            raise KeyError(f"unknown preset {corpus!r}; known: {sorted(PRESETS) + ['families']}")
        specs = PRESETS[corpus]
    else:
        specs = list(corpus)
    return sorted({canonicalize(parse_spec(s, cap=1 << 62)) for s in specs})


@dataclass
class VerifyReport:
    entries: list[dict]
    max_order: int
    engine_version: str = ENGINE_VERSION

    @property
    def summary(self) -> dict[str, int]:
        s = {"entries": len(self.entries), "agreements": 0, "mismatches": 0, "garbled": 0,
             "skipped": 0, "internal_errors": 0}
        for e in self.entries:
            if e["status"] == "skipped":
                s["skipped"] += 1
            elif e["status"] == "internal_error":
                s["internal_errors"] += 1
            for c in e["checks"]:
                if c["validity"] == Validity.GARBLED_SOURCE.value:
                    s["garbled"] += 1
                flags = [c["formula_matches_oracle"], *c["claims_match_oracle"].values(),
                         *c["formula_matches_claims"].values()]
                s["agreements"] += sum(f is True for f in flags)
                s["mismatches"] += sum(f is False for f in flags)
        return s

    @property
    def exit_code(self) -> int:
        return 1 if self.summary["internal_errors"] else 0

    def to_dict(self) -> dict:
        return {
            "engine_version": self.engine_version,
            "max_order": self.max_order,
            "summary": self.summary,
            "entries": self.entries,
        }

    def entry(self, spec: str) -> dict:
        canon = canonicalize(parse_spec(spec, cap=1 << 62))
        for e in self.entries:
            if e["spec"] == canon:
                return e
        raise KeyError(canon)


def cmd_verify(
    corpus: str | Iterable[str],
    max_order: int = DEFAULT_MAX_ORDER,
    *,
    cache: Cache | None = None,
    interpretations: Mapping[str, str] | None = None,
    ledger: str | os.PathLike | None = None,
    subgroup_limit: int = DEFAULT_SUBGROUP_LIMIT,
    ie_cap: int = DEFAULT_IE_CAP,
) -> VerifyReport:
    entries = []
    for canon in corpus_specs(corpus, max_order):
        t0 = time.perf_counter()
        out = oracle(canon, max_order, cache, subgroup_limit, ie_cap)
        checks = [
            cross_check(f, a, out.value, interpretations).to_dict()
            for f, a in match_families(canon)
        ]
        log.info("%s: %s h=%s", canon, out.status, out.value)
        entries.append(
            {
                "spec": canon,
                "order": parse_spec(canon, cap=1 << 62).order,
                "status": out.status,
                "reason": out.reason,
                "oracle_value": out.value,
                "oracle_method": Method.BOTH.value if out.status == "ok" else None,
                "subgroup_count": out.subgroup_count,
                "cached": out.cached,
                "runtimes_ms": {**out.runtimes_ms, "total": (time.perf_counter() - t0) * 1e3},
                "checks": checks,
            }
        )
    if cache is not None:
        cache.save()
    report = VerifyReport(entries, max_order)
    if ledger:
        path = Path(ledger)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report.to_dict(), indent=1) + "\n")
    return report
