import io
import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

import published as pv
from starter_forge import cli
from starter_forge.catalog import (
    RecordError,
    canonical_json,
    content_hash,
    parse_record,
    parse_records,
    record_from_starter,
)
from starter_forge.cyclotomy import cosets_for
from starter_forge.starter import canonical_pairs, construct, verify_starter

DATA = Path(__file__).parent / "data"


def run(*argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def _record(q=29, betas=(2, 26)):
    sys = cosets_for(q)
    starter = construct(sys, *betas)
    return record_from_starter(starter, verify_starter(sys.F, starter.pairs))


def test_canonical_json_is_compact_and_sorted():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_record_round_trip():
    rec = _record()
    again = parse_record(rec.to_json())
    assert again == rec
    assert again.hash == rec.hash
    assert parse_record(rec.to_json(pretty=True)) == rec


def test_hash_is_stable_and_content_sensitive():
    rec = _record()
    payload = rec.payload()
    assert payload["hash"] == content_hash(payload)
    tampered = dict(payload, pairs=payload["pairs"][::-1][:-1] + [[1, 3]])
    with pytest.raises(RecordError):
        parse_record(tampered)
    assert _record().hash == rec.hash


def test_parse_rejects_bad_records():
    with pytest.raises(RecordError):
        parse_record("not json")
    with pytest.raises(RecordError):
        parse_record({"q": 29, "p": 29, "m": 1})
    with pytest.raises(RecordError):
        parse_record({"q": 29, "p": 29, "m": 1, "modulus": [0, 1], "pairs": [[1, 2, 3]]})
    with pytest.raises(RecordError):
        parse_record({"q": 27, "p": 29, "m": 1, "modulus": [0, 1], "pairs": []})
    with pytest.raises(RecordError):
        parse_record({"q": 29, "p": 29, "m": 1, "modulus": [0, 1], "pairs": [], "colour": 1})
    rec = parse_record({"q": 25, "p": 5, "m": 2, "modulus": [0, 0, 1], "pairs": [[1, 2]]})
    with pytest.raises(RecordError):
        rec.field()


def test_parse_records_ndjson_and_list():
    a, b = _record(), _record(41, (3, 12))
    assert parse_records(a.to_json() + "\n" + b.to_json() + "\n") == [a, b]
    assert parse_records(json.dumps([a.payload(), b.payload()])) == [a, b]
    assert parse_records("  ") == []


@given(st.sampled_from(sorted(pv.STARTERS_29)))
def test_records_of_published_starters_round_trip(betas):
    rec = _record(29, betas)
    assert parse_record(rec.to_json()).pairs == canonical_pairs(pv.STARTERS_29[betas])


# -- CLI ------------------------------------------------------------------------


def test_construct_29():
    code, out = run("construct", "29", "2", "26")
    assert code == cli.EXIT_OK
    rec = parse_record(out)
    assert rec.pairs == canonical_pairs(pv.STARTERS_29[(2, 26)])
    assert rec.is_strong and rec.quotient_set == (2, 3)
    assert rec.provenance.betas == (2, 26)


def test_construct_41():
    code, out = run("construct", "41", "3", "12")
    assert code == cli.EXIT_OK
    assert parse_record(out).pairs == canonical_pairs(pv.STARTERS_41[(3, 12)])


def test_construct_is_deterministic():
    assert run("construct", "41", "3", "12") == run("construct", "41", "3", "12")
    assert run("construct", "49")[1] == run("construct", "49", "--jobs", "2")[1]


def test_construct_defaults_and_dinitz():
    code, out = run("construct", "7", "--dinitz", "3")
    assert code == 0 and parse_record(out).pairs == ((1, 3), (2, 6), (4, 5))
    code, out = run("construct", "11")
    assert code == 0 and parse_record(out).provenance.kind == "dinitz"
    code, out = run("construct", "13")
    assert code == 0 and parse_record(out).provenance.kind == "two-quotient"


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "9"],
        ["construct", "15"],
        ["construct", "3"],
        ["construct", "29", "2", "2"],
        ["construct", "29", "2"],
        ["construct", "29", "2", "8"],
        ["construct", "29", "--dinitz", "2"],
        ["construct", "11", "--dinitz", "10"],
        ["construct", "7", "2", "3"],
        ["search", "19"],
        ["tables", "17"],
        ["census"],
        ["census", "--small", "13"],
        ["census", "--sweep", "99999"],
    ],
)
def test_invalid_input_exits_1(argv):
    code, out = run(*argv)
    assert code == cli.EXIT_INVALID
    assert out == ""


def test_search_output():
    code, out = run("search", "13", "--all")
    rows = [json.loads(line) for line in out.splitlines()]
    assert [(r["beta1"], r["beta2"]) for r in rows] == [(2, 7), (6, 11), (7, 2), (11, 6)]
    assert all(r["cond_minus_plus"] and r["cond_plus_minus"] for r in rows)
    code, out = run("search", "29")
    assert code == 0 and len(out.splitlines()) == 1


def test_search_jobs_do_not_change_output():
    assert run("search", "4973", "--all")[1] == run("search", "4973", "--all", "--jobs", "2")[1]


def test_verify_round_trip(monkeypatch, tmp_path):
    _, out = run("construct", "29", "2", "26")
    code, report = run("verify", stdin=out, monkeypatch=monkeypatch)
    assert code == cli.EXIT_OK
    doc = json.loads(report)
    assert doc["is_strong"] and doc["oracle_agrees"] and doc["min_quotient"] == 2
    path = tmp_path / "s.json"
    path.write_text(out)
    assert run("verify", str(path))[0] == cli.EXIT_OK


def test_verify_failure_exit_2(tmp_path):
    payload = {"q": 13, "p": 13, "m": 1, "modulus": [0, 1], "pairs": [[x, 13 - x] for x in range(1, 7)]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    code, out = run("verify", str(path))
    assert code == cli.EXIT_FAILED
    doc = json.loads(out)
    assert doc["is_starter"] and not doc["is_strong"] and doc["oracle_agrees"]


def test_verify_tampered_exit_1(tmp_path):
    _, out = run("construct", "29", "2", "26")
    doc = json.loads(out)
    doc["pairs"][0] = [1, 4]
    path = tmp_path / "t.json"
    path.write_text(json.dumps(doc))
    assert run("verify", str(path))[0] == cli.EXIT_INVALID
    assert run("verify", str(tmp_path / "missing.json"))[0] == cli.EXIT_INVALID


@pytest.mark.parametrize("q", [29, 41])
def test_tables_match_golden(q):
    code, out = run("tables", str(q))
    assert code == cli.EXIT_OK
    assert out == (DATA / f"tables_{q}.txt").read_text()


def test_golden_tables_hold_the_published_cells():
    for q, table in ((29, pv.TABLE_29), (41, pv.TABLE_41)):
        text = (DATA / f"tables_{q}.txt").read_text()
        rows = [line.split() for line in text.splitlines() if line.startswith("S(") and "b1" not in line]
        got = {tuple(r) for r in rows}
        want = {tuple(f"S({a},{b})" for a, b in row) for row in table}
        assert got == want


def test_table_order_29_follows_published_order():
    text = (DATA / "tables_29.txt").read_text()
    firsts = [line.split()[0] for line in text.splitlines() if line.startswith("S(") and "b1" not in line]
    assert firsts == [f"S({a},{b})" for (a, b), *_ in pv.TABLE_29]


def test_census_small_and_sweep():
    code, out = run("census", "--small", "7")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["starters"] for r in rows] == [1, 1, 3]
    code, out = run("census", "--sweep", "100")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [r["q"] for r in lines[:-1]] == [13, 25, 29, 37, 41, 49, 53, 61, 73, 81, 89, 97]
    assert lines[-1] == {"checked": 12, "failures": 0}


def test_pretty_output_parses():
    code, out = run("construct", "29", "2", "26", "--pretty")
    assert code == 0 and "\n  " in out
    assert parse_record(out).q == 29
