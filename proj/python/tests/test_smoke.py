import json

import pytest

import totalk


def test_odd_part():
    assert [totalk.odd_part(k) for k in range(1, 9)] == [1, 1, 3, 1, 5, 3, 7, 1]


def test_smith_normal_form():
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    f = totalk.smith_normal_form(m)
    assert f["diagonal"] == [2, 6, 12]
    assert f["rank"] == 3

    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]

    assert mul(mul(f["U"], m), f["V"]) == f["S"]


def test_big_integers_survive():
    big = 10**40
    f = totalk.smith_normal_form([[big, 0], [0, 2 * big]])
    assert f["diagonal"] == [big, 2 * big]


def test_cokernel():
    assert totalk.cokernel([[2, 0], [0, 3]]) == "Z_6"


def test_fixture_groups():
    assert "E1" in totalk.fixture_names()
    assert totalk.fixture_group("A", 0, 9, bound=9)["structure"] == "Z_3+Z_9"
    assert totalk.fixture_group("E1", 1, 4, bound=9)["structure"] == "0"
    with pytest.raises(ValueError):
        totalk.fixture_group("nope", 0, 1)


def test_de_conjugation_witness():
    r = totalk.de_conjugation(9, bound=9)
    assert not r["pass"]
    assert any(w["element"] == "([1]_9,[1]_3)" and w["lhs"] == "[6]_9" and w["rhs"] == "[0]_9" for w in r["witnesses"])
    assert totalk.de_conjugation(3, bound=9)["pass"]


def test_verify_subset():
    reports = totalk.verify(["refute"], max_coeff=12)
    assert len(reports) == 1 and reports[0]["pass"]


def test_check_document():
    doc = {
        "groups": {"Z4": {"kind": "cyclic", "n": 4}},
        "homs": {
            "id": {"kind": "identity", "group": "Z4"},
            "two": {"kind": "matrix", "domain": "Z4", "codomain": "Z4", "entries": [[2]]},
        },
        "assertions": [
            {"kind": "square", "top": "id", "right": "two", "left": "two", "bottom": "id", "expected": "commutes"},
            {"kind": "exact_at", "f": "two", "g": "two", "expected": "exact"},
        ],
    }
    results = totalk.check_document(json.dumps(doc))
    assert [r["pass"] for r in results] == [True, True]
    canonical = totalk.canonical_document(json.dumps(doc))
    assert totalk.canonical_document(canonical) == canonical
    with pytest.raises(ValueError):
        totalk.check_document('{"homs": {"x": {"kind": "negate", "of": "missing"}}}')
    with pytest.raises(ValueError):
        totalk.check_document("{")


def test_cli_entry():
    code, out, _ = totalk.main(["paper", "verify", "--case", "de", "--max-coeff", "9"])
    assert code == 0
    assert "CHECK de" in out
    assert totalk.main(["check", "/nonexistent.json"])[0] == 2
