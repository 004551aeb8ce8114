import pytest

from fuzzysub.errors import InternalError, InvalidParameterError
from fuzzysub.fixtures import D16_C16_BRACKET, D16_C16_BRACKET_PRINTED_TOTAL, claims_for
from fuzzysub.formulas import (
    FAMILIES,
    FormulaFamily as F,
    Validity,
    _exact_div,
    cross_check,
    eval_formula,
    family_instances,
    family_signature,
    is_prime,
    list_families,
    match_families,
)

J1 = {"d2n_c8": "j_minus_1"}


def val(family, *args, **kw):
    return eval_formula(family, *args, **kw).value


def test_stated_values_reproduce():
    assert [val(F.Z4_CHAIN, n) for n in range(5, 9)] == [1536, 4096, 10496, 26112]
    assert val(F.D8_C2M, 3) == 5376
    assert val(F.D8_C2M, 5) == 21506
    assert val(F.D2N_C4, 3) == 1460


def test_substituted_values():
    assert val(F.D2N_C2, 4) == 2272 and val(F.D2N_C2, 5) == 11200
    assert val(F.RANK3, 2, 1) == 72
    assert val(F.RANK3_P3, 1) == 158 and val(F.RANK3, 3, 1) == 158
    assert val(F.Z8_CHAIN, 3) == 864 and val(F.Z8_CHAIN, 4) == 3200
    assert val(F.D16_C2N, 4) == 21528
    assert [val(F.D8_C2M, m) for m in range(3, 11)] == [
        5376, 10744, 21506, 43102, 86412, 173196, 346974, 694786]


def test_cyclic_and_rank2_closed_forms():
    for p in (2, 3, 5, 7):
        for n in range(0, 6):
            assert val(F.CYCLIC, p, n) == 2**n
        for n in range(2, 6):
            assert val(F.RANK2, p, n) == 2 ** (n - 1) * (2 + (n - 1) * p)
        assert val(F.RANK2, p, 2) == 2 * (p + 2)


def test_rank2_closed_form_at_n_equal_one():
    r = eval_formula(F.RANK2, 2, 1)
    assert r.value == 2 and r.validity is Validity.OUT_OF_RANGE


def test_z4_z8_overlap():
    # both describe C8 x C4 when their parameters line up
    assert val(F.Z4_CHAIN, 3) == 176
    r = eval_formula(F.Z8_CHAIN, 2)
    assert r.value == 176 and r.validity is Validity.OUT_OF_RANGE
    assert F.Z4_CHAIN.spec(3) == "C4 x C8" and F.Z8_CHAIN.spec(2) == "C8 x C4"


def test_z8_division_is_exact():
    for n in range(3, 13):
        v = val(F.Z8_CHAIN, n)
        assert isinstance(v, int) and v > 0


def test_exact_div_guard():
    assert _exact_div(9, 3, "x") == 3
    with pytest.raises(InternalError):
        _exact_div(10, 3, "x")


def test_rank3_recurrence_equals_closed_form():
    for p in (5, 7):
        for n in range(1, 6):
            assert val(F.RANK3_REC, p, n) == val(F.RANK3, p, n)
    assert [val(F.RANK3_REC, 5, n) for n in range(1, 5)] == [498, 3006, 12182, 41254]
    r = eval_formula(F.RANK3_REC, 3, 2)
    assert r.validity is Validity.OUT_OF_RANGE and "not in (5, 7)" in r.notes


@pytest.mark.parametrize("family", [f for f in F if not FAMILIES[f].garbled])
def test_in_range_values_are_even(family):
    info = family.info
    ps = [None] if "p" not in info.params else (info.primes or (2, 3, 5))
    for p in ps:
        for k in range(info.lower[info.params[-1]], info.lower[info.params[-1]] + 5):
            args = (k,) if p is None else (p, k)
            r = eval_formula(family, *args, interpretations=J1)
            # the trivial group (h = 1) is the only odd case
            if r.validity is Validity.OK and r.value and r.value > 1:
                assert r.value % 2 == 0, (family, args, r.value)


def test_out_of_range_flag():
    r = eval_formula(F.D2N_C2, 3)
    assert r.value is not None and r.validity is Validity.OUT_OF_RANGE
    assert "n = 3 below 4" in r.notes
    r = eval_formula(F.D2N_C4, 1)
    assert r.value is None and "undefined" in r.notes
    assert eval_formula(F.D8_C2M, 3).validity is Validity.OK


def test_parameter_validation():
    with pytest.raises(InvalidParameterError, match="not prime"):
        eval_formula(F.RANK2, 4, 3)
    with pytest.raises(InvalidParameterError, match="integer"):
        eval_formula(F.CYCLIC, 2, 2.5)
    with pytest.raises(InvalidParameterError, match="integer"):
        eval_formula(F.Z4_CHAIN, True)
    with pytest.raises(InvalidParameterError, match="missing"):
        eval_formula(F.RANK2, 3)
    with pytest.raises(InvalidParameterError):
        eval_formula(F.Z4_CHAIN, 3, 4)
    with pytest.raises(InvalidParameterError):
        eval_formula(F.Z4_CHAIN, m=3)
    assert eval_formula("RANK2", p=3, n=3).value == 32
    with pytest.raises(ValueError):
        eval_formula("NOPE", 3)


def test_is_prime():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_garbled_family_needs_interpretation():
    r = eval_formula(F.D2N_C8, 4)
    assert r.value is None and r.validity is Validity.GARBLED_SOURCE
    r = eval_formula(F.D2N_C8, 4, interpretations=J1)
    assert r.value == 13472 and r.validity is Validity.GARBLED_SOURCE
    assert [val(F.D2N_C8, n, interpretations=J1) for n in (3, 5, 6)] == [2776, 56768, 252928]
    with pytest.raises(InvalidParameterError):
        eval_formula(F.D2N_C8, 4, interpretations={"d2n_c8": "guess"})


def test_dependent_family_inherits_taint():
    # n = 4 has empty sums, so no garbled term is referenced
    r = eval_formula(F.D16_C2N, 4)
    assert r.value == 21528 and r.validity is Validity.OK
    r = eval_formula(F.D16_C2N, 5)
    assert r.value is None and r.validity is Validity.GARBLED_SOURCE
    r = eval_formula(F.D16_C2N, 5, interpretations=J1)
    assert r.value == 316011 and r.validity is Validity.GARBLED_SOURCE
    assert [val(F.D16_C2N, n, interpretations=J1) for n in (6, 7)] == [6147556, 117108059]


def test_fixtures():
    assert [c.value for c in claims_for("D16_C2N", (4,))] == [20200, 61384]
    assert claims_for("D8_C2M", (4,))[0].value == 10728
    assert claims_for("RANK2", (2, 3)) == []
    assert sum(D16_C16_BRACKET) == 8846 != D16_C16_BRACKET_PRINTED_TOTAL
    assert 4 * D16_C16_BRACKET_PRINTED_TOTAL == 61384


def test_cross_check_records_everything():
    cc = cross_check(F.D8_C2M, (4,), 35456)
    assert cc.spec == "D8 x C16"
    assert cc.formula.value == 10744
    assert cc.formula_matches_oracle is False
    assert cc.claims_match_oracle == {"table1": False}
    assert cc.formula_matches_claims == {"table1": False}
    assert cc.mismatches() == ["formula_vs_oracle", "table1_vs_oracle", "formula_vs_table1"]
    d = cc.to_dict()
    assert d["params"] == {"m": 4} and d["claims"][0]["value"] == 10728

    cc = cross_check("D2N_C2", [4], 2272)
    assert cc.mismatches() == [] and cc.formula_matches_oracle is True

    cc = cross_check(F.D2N_C8, (4,), 77184)
    assert cc.formula_matches_oracle is None and cc.mismatches() == []


def test_family_instances_and_matching():
    inst = list(family_instances(64))
    assert all(s != "" for _, _, s in inst)
    assert (F.D8_C2M, (3,), "D8 x C8") in inst
    assert not any(f is F.D16_C2N for f, _, _ in inst)
    assert set(match_families("C8 x C4")) == {(F.Z4_CHAIN, (3,)), (F.Z8_CHAIN, (2,))}
    assert (F.RANK3, (3, 1)) in match_families("C3 x C3 x C3")
    assert (F.RANK3_P3, (1,)) in match_families("C3^3")
    assert match_families("D12") == []
    assert (F.CYCLIC, (2, 0)) in match_families("C1")


def test_listing():
    fams = list_families()
    assert len(fams) == len(F) == 12
    garbled = [f.family for f in fams if f.flags]
    assert garbled == [F.D2N_C8]
    assert family_signature(F.D8_C2M) == "D8_C2M(m) [m >= 3] D_8 x C_{2^m}"
