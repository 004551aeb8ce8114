"""Closed forms and recurrences for h(G), evaluated exactly as printed.

Nothing here corrects a suspected typo.  Out-of-range parameters still get
a value when the expression is defined, but the result is flagged
``OUT_OF_RANGE``.  The ``D2N_C8`` expression contains an unreadable
exponent.  It yields a value only under an explicit interpretation, and
even then the result stays flagged ``GARBLED_SOURCE``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import CapacityError, InternalError, InvalidParameterError, SpecError
from .fixtures import Claim, claims_for


class Validity(enum.Enum):
    OK = "ok"
    OUT_OF_RANGE = "out_of_range"
    GARBLED_SOURCE = "garbled_source"


_RANK = {Validity.OK: 0, Validity.OUT_OF_RANGE: 1, Validity.GARBLED_SOURCE: 2}


def _worst(*vs: Validity) -> Validity:
    return max(vs, key=_RANK.__getitem__)


@dataclass(frozen=True)
class FormulaResult:
    value: int | None
    validity: Validity
    notes: str = ""


# interpretation keys accepted for the garbled exponent in D2N_C8
D2N_C8_READINGS = {"j_minus_1": lambda j: j - 1}


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise InternalError(f"{what}: {num} is not divisible by {den}")
    return q


# -- raw expressions -------------------------------------------------------


def _cyclic(p: int, n: int) -> int:
    return 2**n


def _rank2(p: int, n: int) -> int:
    return 2 ** (n - 1) * (2 + (n - 1) * p)


def _z4_chain(n: int) -> int:
    return 2**n * (n * n + 5 * n - 2)


def _z8_chain(n: int) -> int:
    return _exact_div(2 ** (n + 1) * (n**3 + 12 * n**2 + 17 * n - 24), 3, "Z8_CHAIN")


def _rank3(p: int, n: int) -> int:
    return (
        2**n * p * (p + 1) * (n - 1) * (3 + n * p + 2 * p)
        + (2**n - 2) * p**3
        - 2 ** (n + 1) * (n - 1) * p**3
        + 2**n * (p**3 + 4 * (1 + p + p * p))
    )


def _rank3_p3(n: int) -> int:
    return 2 ** (n + 1) * (18 * n * n + 9 * n + 26) - 54


def _rank3_rec(p: int, n: int) -> int:
    h = _rank3(p, 1)
    for k in range(2, n + 1):
        h = 2 * (
            (p + p * p) * _rank2(p, k + 1)
            + h
            - p**3 * _cyclic(p, k)
            - (p + p * p) * _cyclic(p, k - 1)
            + p**3
        )
    return h


def _d2n_c2(n: int) -> int:
    return 2 ** (2 * n) * (2 * n + 1) - 2 ** (n + 1)


def _d2n_c4(n: int) -> int:
    tail = sum(2 ** (n - 1 + j) * (2 * n + 1 - 2 * j) for j in range(1, n - 2))
    return 2 ** (2 * (n - 2)) * (64 * n + 173) + 3 * tail


def _d8_c2m(m: int) -> int:
    return m * (89 - 23 * m) + 85 * 2 ** (m + 3) - 124


def _d2n_c8(n: int, reading: Callable[[int], int]) -> int:
    inner = sum(2 ** reading(j) * (2 * n + 1 - 2 * j) for j in range(1, n - 2))
    cubic = sum(
        2**k * ((n - 2 - k) ** 3 + 12 * (n - 2 - k) ** 2 + 17 * (n - k) - 58)
        for k in range(1, n - 4)
    )
    bracket = (n - 1) ** 3 + (n - 2) ** 3 + 24 * n * n - 38 * n - 30 + cubic
    return (
        2 ** (2 * (n - 1)) * (6 * n + 113)
        + 2**n * (13 - 6 * n - 2 * n * n + 3 * inner)
        + _exact_div(2 ** (n + 2) * bracket, 3, "D2N_C8")
    )


# -- family table ----------------------------------------------------------


@dataclass(frozen=True)
class FamilyInfo:
    params: tuple[str, ...]
    lower: Mapping[str, int]
    describes: str
    spec_template: Callable[..., str]
    primes: tuple[int, ...] | None = None  # allowed p values; None = any prime
    defined_from: int = 0
    garbled: bool = False
    refers_to_garbled: bool = False


class FormulaFamily(enum.Enum):
    CYCLIC = "CYCLIC"
    RANK2 = "RANK2"
    Z4_CHAIN = "Z4_CHAIN"
    Z8_CHAIN = "Z8_CHAIN"
    RANK3 = "RANK3"
    RANK3_P3 = "RANK3_P3"
    RANK3_REC = "RANK3_REC"
    D2N_C2 = "D2N_C2"
    D2N_C4 = "D2N_C4"
    D8_C2M = "D8_C2M"
    D16_C2N = "D16_C2N"
    D2N_C8 = "D2N_C8"

    @property
    def info(self) -> FamilyInfo:
        return FAMILIES[self]

    def spec(self, *args: int) -> str:
        return self.info.spec_template(*args)


F = FormulaFamily
FAMILIES: dict[FormulaFamily, FamilyInfo] = {
    F.CYCLIC: FamilyInfo(("p", "n"), {"n": 0}, "C_{p^n}", lambda p, n: f"C{p**n}"),
    F.RANK2: FamilyInfo(("p", "n"), {"n": 2}, "C_p x C_{p^(n-1)}", lambda p, n: f"C{p} x C{p**(n-1)}",
                          defined_from=1),
    F.Z4_CHAIN: FamilyInfo(("n",), {"n": 2}, "C_4 x C_{2^n}", lambda n: f"C4 x C{2**n}"),
    F.Z8_CHAIN: FamilyInfo(("n",), {"n": 3}, "C_8 x C_{2^n}", lambda n: f"C8 x C{2**n}"),
    F.RANK3: FamilyInfo(("p", "n"), {"n": 1}, "C_p x C_p x C_{p^n}", lambda p, n: f"C{p} x C{p} x C{p**n}"),
    F.RANK3_P3: FamilyInfo(("n",), {"n": 1}, "C_3 x C_3 x C_{3^n}", lambda n: f"C3 x C3 x C{3**n}"),
    F.RANK3_REC: FamilyInfo(
        ("p", "n"), {"n": 1}, "C_p x C_p x C_{p^n} by recurrence",
        lambda p, n: f"C{p} x C{p} x C{p**n}", primes=(5, 7), defined_from=1,
    ),
    F.D2N_C2: FamilyInfo(("n",), {"n": 4}, "D_{2^n} x C_2", lambda n: f"D{2**n} x C2"),
    F.D2N_C4: FamilyInfo(("n",), {"n": 3}, "D_{2^n} x C_4", lambda n: f"D{2**n} x C4", defined_from=2),
    F.D8_C2M: FamilyInfo(("m",), {"m": 3}, "D_8 x C_{2^m}", lambda m: f"D8 x C{2**m}"),
    F.D16_C2N: FamilyInfo(
        ("n",), {"n": 4}, "D_16 x C_{2^n}", lambda n: f"D16 x C{2**n}", defined_from=4,
        refers_to_garbled=True,
    ),
    F.D2N_C8: FamilyInfo(("n",), {"n": 3}, "D_{2^n} x C_8", lambda n: f"D{2**n} x C8", defined_from=1,
                           garbled=True),
}


def _bind(family: FormulaFamily, args: tuple, kwargs: dict) -> dict[str, int]:
    names = family.info.params
    if len(args) > len(names):
        raise InvalidParameterError(f"{family.value} takes parameters {names}")
    bound = dict(zip(names, args))
    for k, v in kwargs.items():
        if k not in names or k in bound:
            raise InvalidParameterError(f"{family.value} takes parameters {names}, got {k!r}")
        bound[k] = v
    missing = [n for n in names if n not in bound]
    if missing:
        raise InvalidParameterError(f"{family.value} is missing parameters {missing}")
    for k, v in bound.items():
        if isinstance(v, bool) or int(v) != v:
            raise InvalidParameterError(f"{family.value}: parameter {k} must be an integer, got {v!r}")
        bound[k] = int(v)
    if "p" in bound and not is_prime(bound["p"]):
        raise InvalidParameterError(f"{family.value}: p = {bound['p']} is not prime")
    return bound


def _range_problems(family: FormulaFamily, bound: dict[str, int]) -> list[str]:
    info = family.info
    out = [f"{k} = {bound[k]} below {lo}" for k, lo in info.lower.items() if bound[k] < lo]
    if info.primes is not None and bound["p"] not in info.primes:
        out.append(f"p = {bound['p']} not in {info.primes}")
    return out


def _d2n_c8_reading(interpretations: Mapping[str, str] | None):
    key = (interpretations or {}).get("d2n_c8")
    if key is None:
        return None, ""
    if key not in D2N_C8_READINGS:
        raise InvalidParameterError(
            f"unknown d2n_c8 interpretation {key!r}; known: {sorted(D2N_C8_READINGS)}"
        )
    return D2N_C8_READINGS[key], f"d2n_c8 exponent read as {key}"


def eval_formula(
    family: FormulaFamily | str,
    *args: int,
    interpretations: Mapping[str, str] | None = None,
    **kwargs: int,
) -> FormulaResult:
    family = FormulaFamily(family)
    bound = _bind(family, args, kwargs)
    problems = _range_problems(family, bound)
    validity = Validity.OUT_OF_RANGE if problems else Validity.OK
    notes = "; ".join(problems)

    # below this bound some exponent goes negative and the expression is undefined
    if bound[family.info.params[-1]] < family.info.defined_from:
        return FormulaResult(None, validity if family is not F.D2N_C8 else Validity.GARBLED_SOURCE,
                             "; ".join(s for s in (notes, "expression undefined") if s))

    if family is F.D2N_C8:
        reading, note = _d2n_c8_reading(interpretations)
        if reading is None:
            return FormulaResult(None, Validity.GARBLED_SOURCE, "exponent unreadable; no interpretation given")
        value = _d2n_c8(bound["n"], reading)
        return FormulaResult(value, Validity.GARBLED_SOURCE, "; ".join(s for s in (note, notes) if s))

    if family is F.D16_C2N:
        return _d16_c2n(bound["n"], validity, notes, interpretations)

    fn = {
        F.CYCLIC: _cyclic, F.RANK2: _rank2, F.Z4_CHAIN: _z4_chain, F.Z8_CHAIN: _z8_chain,
        F.RANK3: _rank3, F.RANK3_P3: _rank3_p3, F.RANK3_REC: _rank3_rec, F.D2N_C2: _d2n_c2,
        F.D2N_C4: _d2n_c4, F.D8_C2M: _d8_c2m,
    }[family]
    return FormulaResult(fn(**bound), validity, notes)


def _d16_c2n(n, validity, notes, interpretations) -> FormulaResult:
    parts: list[FormulaResult] = []

    def h(family: FormulaFamily, *a: int) -> int | None:
        r = eval_formula(family, *a, interpretations=interpretations)
        parts.append(r)
        return r.value

    total = 2 ** (n + 3) * (422 - n * n - 5 * n) - 9 * n * n + 356 * n - 29160
    terms: list[tuple[int, int | None]] = []
    for j in range(1, n - 3):
        k = n - 1 + j
        terms += [(2, h(F.D2N_C8, k)), (4, h(F.D2N_C4, k)), (-6, h(F.CYCLIC, 2, n + 1 - j))]
    for j in range(1, n - 4):
        terms += [(-4, h(F.D8_C2M, n - j)), (8, h(F.D2N_C4, n - j)), (-4, h(F.D2N_C8, n - j))]

    validity = _worst(validity, *(r.validity for r in parts))
    tainted = sorted({r.notes for r in parts if r.validity is not Validity.OK and r.notes})
    notes = "; ".join([s for s in (notes, *tainted) if s])
    if any(v is None for _, v in terms):
        return FormulaResult(None, validity, notes or "a referenced family has no value")
    return FormulaResult(total + sum(c * v for c, v in terms), validity, notes)


@dataclass(frozen=True)
class FamilyDescriptor:
    family: FormulaFamily
    params: tuple[str, ...]
    lower_bounds: dict[str, int]
    primes: tuple[int, ...] | None
    describes: str
    flags: tuple[Validity, ...]


def list_families() -> list[FamilyDescriptor]:
    out = []
    for fam, info in FAMILIES.items():
        flags = (Validity.GARBLED_SOURCE,) if info.garbled else ()
        out.append(FamilyDescriptor(fam, info.params, dict(info.lower), info.primes, info.describes, flags))
    return out


def family_signature(family: FormulaFamily) -> str:
    info = family.info
    ranges = ", ".join(f"{k} >= {v}" for k, v in info.lower.items())
    return f"{family.value}({', '.join(info.params)}) [{ranges}] {info.describes}"


@dataclass
class CrossCheck:
    """Formula value, oracle value and any stated values for one group.

    Values are only ever compared; none replaces another.
    """

    family: FormulaFamily
    params: tuple[int, ...]
    spec: str
    formula: FormulaResult
    oracle: int | None
    claims: list[Claim]

    @property
    def formula_matches_oracle(self) -> bool | None:
        if self.formula.value is None or self.oracle is None:
            return None
        return self.formula.value == self.oracle

    @property
    def claims_match_oracle(self) -> dict[str, bool | None]:
        return {c.source: None if self.oracle is None else c.value == self.oracle for c in self.claims}

    @property
    def formula_matches_claims(self) -> dict[str, bool | None]:
        v = self.formula.value
        return {c.source: None if v is None else c.value == v for c in self.claims}

    def mismatches(self) -> list[str]:
        out = []
        if self.formula_matches_oracle is False:
            out.append("formula_vs_oracle")
        out += [f"{s}_vs_oracle" for s, ok in self.claims_match_oracle.items() if ok is False]
        out += [f"formula_vs_{s}" for s, ok in self.formula_matches_claims.items() if ok is False]
        return out

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "params": dict(zip(self.family.info.params, self.params)),
            "spec": self.spec,
            "formula_value": self.formula.value,
            "validity": self.formula.validity.value,
            "notes": self.formula.notes,
            "oracle_value": self.oracle,
            "claims": [{"source": c.source, "value": c.value, "note": c.note} for c in self.claims],
            "formula_matches_oracle": self.formula_matches_oracle,
            "claims_match_oracle": self.claims_match_oracle,
            "formula_matches_claims": self.formula_matches_claims,
            "mismatches": self.mismatches(),
        }


def cross_check(
    family: FormulaFamily | str,
    params: tuple[int, ...] | list[int],
    oracle: int | None,
    interpretations: Mapping[str, str] | None = None,
) -> CrossCheck:
    family = FormulaFamily(family)
    params = tuple(int(x) for x in params)
    result = eval_formula(family, *params, interpretations=interpretations)
    return CrossCheck(
        family, params, family.spec(*params), result, oracle, claims_for(family.value, params)
    )


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def family_instances(max_order: int):
    """Every ``(family, params, spec)`` whose group has order <= ``max_order``.

    Parameters below a family's stated range are included (their
    evaluations are flagged); parameters where the expression is undefined
    are not.
    """
    from .groupspec import canonical_spec

    for fam, info in FAMILIES.items():
        ps = [None] if "p" not in info.params else (info.primes or _primes_upto(max(max_order, 2)))
        for p in ps:
            k = info.defined_from
            while True:
                args = (k,) if p is None else (p, k)
                spec = info.spec_template(*args)
                k += 1
                try:
                    canon = canonical_spec(spec, cap=max_order)
                except CapacityError:
                    break
                except SpecError:
                    continue
                yield fam, args, canon


def match_families(spec: str, max_order: int | None = None) -> list[tuple[FormulaFamily, tuple[int, ...]]]:
    from .groupspec import canonical_spec, parse_spec

    expr = parse_spec(spec, cap=max_order or 1 << 62)
    canon = canonical_spec(spec, cap=expr.order)
    return [(fam, args) for fam, args, c in family_instances(expr.order) if c == canon]


__all__ = [
    "CrossCheck",
    "cross_check",
    "family_instances",
    "match_families",
    "D2N_C8_READINGS",
    "FAMILIES",
    "FamilyDescriptor",
    "FamilyInfo",
    "FormulaFamily",
    "FormulaResult",
    "Validity",
    "eval_formula",
    "family_signature",
    "is_prime",
    "list_families",
]
