"""Values the source states outright (tables, worked examples, constants).

Keyed by ``(family name, params tuple)``.  Several of these contradict the
matching formula or each other.  They are stored verbatim and compared,
never reconciled.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Claim:
    source: str
    value: int
    note: str = ""


_TABLE1 = dict(zip(range(3, 11), (5376, 10728, 21506, 43347, 86536, 173320, 347098, 694910)))
# printed with thousands separators as "20, 200", "375, 648", "3, 893, 800"
_TABLE2 = {4: 20200, 5: 375648, 6: 3893800}
_LISTED = {5: 1536, 6: 4096, 7: 10496, 8: 26112}

# the worked proof for D16 x C16 prints 4 * [700 + 8416 + 10744 - 10752 - 1088 + 162 + 704 - 40]
D16_C16_BRACKET = (700, 8416, 10744, -10752, -1088, 162, 704, -40)
D16_C16_BRACKET_PRINTED_TOTAL = 15346

CLAIMS: dict[tuple[str, tuple[int, ...]], list[Claim]] = {}


def _add(family: str, params: tuple[int, ...], claim: Claim) -> None:
    CLAIMS.setdefault((family, params), []).append(claim)


for _m, _v in _TABLE1.items():
    _add("D8_C2M", (_m,), Claim("table1", _v))
for _n, _v in _TABLE2.items():
    _add("D16_C2N", (_n,), Claim("table2", _v))
for _n, _v in _LISTED.items():
    _add("Z4_CHAIN", (_n,), Claim("listed", _v))
_add(
    "D16_C2N",
    (4,),
    Claim(
        "headline",
        61384,
        f"proof bracket sums to {sum(D16_C16_BRACKET)}, printed as {D16_C16_BRACKET_PRINTED_TOTAL}",
    ),
)
_add("D2N_C4", (3,), Claim("proof_constant", 1460, "base constant of the D_{2^n} x C_4 proof"))


def claims_for(family: str, params: tuple[int, ...]) -> list[Claim]:
    return list(CLAIMS.get((family, tuple(params)), ()))
