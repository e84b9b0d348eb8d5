import json

import pytest

import kla


def test_hnf():
    assert kla.hnf([[2, 4], [0, 2]]) == [["2", "0"], ["0", "2"]]


def test_snf():
    d, u, v = kla.snf([[2, 0], [0, 3]])
    assert d == ["1", "6"]


def test_kernel():
    basis = kla.kernel([[1, 1]])
    assert len(basis) == 2 and len(basis[0]) == 1
    assert int(basis[0][0]) * int(basis[1][0]) == -1


def test_h1():
    assert kla.h1([[-1, 0], [0, -1]], 2) == ["2", "2"]
    assert kla.h1([[0, -1], [1, -1]], 3) == ["3"]
    with pytest.raises(kla.KlaError):
        kla.h1([[2]], 2)


def test_analyze():
    an = kla.analyze([[-1]], 2)
    assert an["e"] == 0
    assert an["freeAwayFromZero"] is True
    assert an["jCard"] == 2


def test_compute():
    rows = kla.compute(json.dumps({"type": "zd", "d": 3}), "Z", "L", 0, 3)
    assert [r["text"] for r in rows] == [
        "Z + (Z/2)^3",
        "Z^3 + Z/2",
        "Z^3 + Z/2",
        "Z + (Z/2)^3",
    ]


def test_compute_localized():
    group = json.dumps({"type": "crystZp", "d": 1, "p": 2, "rho": [[-1]]})
    rows = kla.compute(group, "generic", "Sper", 0, 0, localize2=True)
    assert "UNil" not in rows[0]["text"]


def test_oracle_suite():
    reports = kla.oracle_suite(seed=1, quick=True)
    assert reports and all(r["agree"] for r in reports)
