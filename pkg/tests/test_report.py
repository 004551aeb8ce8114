import json

import pytest

from fuzzysub import report
from fuzzysub.chains import Method
from fuzzysub.errors import InternalError, MethodMismatchError
from fuzzysub.report import (
    ENGINE_VERSION,
    PRESETS,
    Cache,
    NoMatchingFamilyError,
    cmd_count,
    cmd_table,
    cmd_verify,
    corpus_specs,
    oracle,
)


def strip_times(d):
    if isinstance(d, dict):
        return {k: strip_times(v) for k, v in d.items() if k not in ("runtimes_ms", "runtime_ms")}
    if isinstance(d, list):
        return [strip_times(x) for x in d]
    return d


def test_count_methods():
    for m in ("dp", "ie", "both"):
        r = cmd_count("C2 x C4", m)
        assert (r["spec"], r["h"], r["order"], r["subgroup_count"]) == ("C4 x C2", "24", 8, 8)
        assert r["method"] == m and r["cached"] is False


def test_count_formula():
    r = cmd_count("C8 x C4", "formula")
    assert r["family"] == "Z4_CHAIN" and r["params"] == {"n": 3} and r["h"] == "176"
    assert r["validity"] == "ok"
    r = cmd_count("D8 x C4", "formula")
    assert (r["family"], r["h"]) == ("D2N_C4", "1460")
    r = cmd_count("D16 x C8", "formula")
    assert r["h"] is None and r["validity"] == "garbled_source"
    r = cmd_count("D16 x C8", "formula", interpretations={"d2n_c8": "j_minus_1"})
    assert r["h"] == "13472"


def test_count_formula_no_family():
    with pytest.raises(NoMatchingFamilyError) as info:
        cmd_count("D12", "formula")
    assert "D8_C2M" in str(info.value) and "D12" in str(info.value)


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.json"
    cache = Cache(path)
    assert cmd_count("D8 x C4", "both", cache=cache)["cached"] is False
    on_disk = json.loads(path.read_text())
    assert on_disk["D8 x C4"] == {"h": "2432", "method": "both", "engine_version": ENGINE_VERSION,
                                  "subgroup_count": on_disk["D8 x C4"]["subgroup_count"]}
    again = cmd_count("C4 x D8", "dp", cache=Cache(path))
    assert again["cached"] is True and again["h"] == "2432"


def test_cache_rules(tmp_path):
    cache = Cache(tmp_path / "c.json")
    cache.put("D8", 32, Method.DP, 10)
    assert cache.get("D8") is not None and cache.get("D8", require_both=True) is None
    # a DP-only entry does not satisfy a BOTH request
    assert cmd_count("D8", "both", cache=cache)["cached"] is False
    assert cache.get("D8")["method"] == "both"
    cache.put("D8", 32, Method.DP, 10)
    assert cache.get("D8")["method"] == "both"


def test_cache_version_invalidation(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"D8": {"h": "999", "method": "both", "engine_version": "0.0.0",
                                       "subgroup_count": 10}}))
    cache = Cache(path)
    assert cache.get("D8") is None
    r = cmd_count("D8", "both", cache=cache)
    assert r["h"] == "32" and r["cached"] is False
    assert json.loads(path.read_text())["D8"]["engine_version"] == ENGINE_VERSION


def test_cache_is_never_trusted_over_a_stale_version(tmp_path):
    cache = Cache(tmp_path / "c.json")
    assert oracle("C2", 256, cache).cached is False
    assert oracle("C2", 256, cache).cached is True


def test_oracle_skips_and_errors(monkeypatch):
    assert oracle("D16 x C32", 256).status == "skipped"
    assert oracle("C2^6", 256, subgroup_limit=100).status == "skipped"

    def boom(*a, **k):
        raise MethodMismatchError("DP gives 1 but inclusion-exclusion gives 2")

    monkeypatch.setattr(report, "fuzzy_subgroup_count", boom)
    out = oracle("D8", 256)
    assert out.status == "internal_error" and "DP gives 1" in out.reason
    with pytest.raises(InternalError):
        cmd_table("D8_C2M", 3, 3, with_oracle=True)
    rep = cmd_verify(["D8"], 256)
    assert rep.exit_code == 1 and rep.summary["internal_errors"] == 1


def test_table_rows():
    rows = cmd_table("d8_c2m", 3, 4, with_oracle=True, max_order=128)
    assert [r["param"] for r in rows] == [3, 4]
    assert rows[0]["formula_value"] == 5376 and rows[0]["fixture_value"] == 5376
    assert rows[0]["oracle_value"] == 10048
    assert rows[0]["verdict"] == "MISMATCH formula!=oracle,oracle!=table1"
    assert rows[1]["fixture_value"] == 10728 and rows[1]["formula_value"] == 10744
    assert "formula!=table1" in rows[1]["verdict"]
    rows = cmd_table("RANK2", 2, 3, p=3)
    assert [r["spec"] for r in rows] == ["C3 x C3", "C3 x C9"]
    assert rows[0]["verdict"] == "n/a" and rows[0]["oracle_value"] is None
    rows = cmd_table("D8_C2M", 6, 6, with_oracle=True, max_order=256)
    assert rows[0]["oracle_value"] is None and "exceeds" in rows[0]["oracle_note"]


def test_corpus_specs():
    assert corpus_specs(["C4 x C2", "C2 x C4", "Z2x z4"], 64) == ["C4 x C2"]
    assert corpus_specs([], 64) == []
    assert corpus_specs("table2", 256) == ["D16 x C16", "D16 x C32", "D16 x C64"]
    fam = corpus_specs("families", 32)
    assert "D8 x C8" not in fam and "C2 x C2 x C2" in fam
    with pytest.raises(KeyError):
        corpus_specs("nope", 64)
    assert len(PRESETS["smoke"]) >= 40


def test_verify_entry_and_ledger(tmp_path):
    ledger = tmp_path / "sub" / "ledger.json"
    rep = cmd_verify(["D8 x C4", "C8 x C4", "D12", "D16 x C32"], 128, ledger=ledger)
    assert rep.exit_code == 0
    e = rep.entry("C4 x D8")
    assert e["oracle_value"] == 2432 and e["status"] == "ok" and e["oracle_method"] == "both"
    checks = {c["family"]: c for c in e["checks"]}
    assert set(checks) == {"D2N_C4", "D8_C2M"}
    assert checks["D8_C2M"]["validity"] == "out_of_range"
    check = checks["D2N_C4"]
    assert check["formula_value"] == 1460 and check["validity"] == "ok"
    assert check["claims_match_oracle"] == {"proof_constant": False}
    assert rep.entry("D12")["checks"] == []
    assert rep.entry("D16 x C32")["status"] == "skipped"
    c84 = rep.entry("C8 x C4")
    assert {c["family"] for c in c84["checks"]} == {"Z4_CHAIN", "Z8_CHAIN"}
    s = rep.summary
    assert s["entries"] == 4 and s["skipped"] == 1 and s["internal_errors"] == 0
    assert s["mismatches"] >= 3
    saved = json.loads(ledger.read_text())
    assert saved["summary"] == s and len(saved["entries"]) == 4


def test_verify_is_deterministic():
    a = cmd_verify("smoke", 32).to_dict()
    b = cmd_verify("smoke", 32).to_dict()
    assert strip_times(a) == strip_times(b)


def test_verify_empty_corpus():
    rep = cmd_verify([], 256)
    assert rep.entries == [] and rep.exit_code == 0
    assert rep.summary == {"entries": 0, "agreements": 0, "mismatches": 0, "garbled": 0,
                           "skipped": 0, "internal_errors": 0}


def test_smoke_preset_cyclic_and_rank2_agree():
    rep = cmd_verify("smoke", 64)
    assert rep.exit_code == 0
    seen = 0
    for e in rep.entries:
        for c in e["checks"]:
            if c["family"] in ("CYCLIC", "RANK2") and e["status"] == "ok":
                assert c["formula_matches_oracle"] is True, (e["spec"], c)
                seen += 1
    assert seen >= 15


def test_cache_matches_recomputation(tmp_path):
    cache = Cache(tmp_path / "c.json")
    first = cmd_verify("smoke", 32, cache=cache)
    reloaded = Cache(tmp_path / "c.json")
    second = cmd_verify("smoke", 32, cache=reloaded)
    fresh = cmd_verify("smoke", 32)
    assert all(e["cached"] for e in second.entries if e["status"] == "ok")
    for a, b, c in zip(first.entries, second.entries, fresh.entries):
        assert a["oracle_value"] == b["oracle_value"] == c["oracle_value"]
