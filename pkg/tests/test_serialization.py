import json

import numpy as np
import pytest

from speclab.config import make_config, worker_cap
from speclab.errors import MalformedInputError
from speclab.reports import Hypothesis, TheoremReport, to_jsonable
from speclab.serialization import (
    dump_json,
    load_matrix,
    load_pair,
    load_vector,
    matrix_from_dict,
    matrix_to_dict,
    pair_kind,
    vector_from_dict,
    vector_to_dict,
)


def test_matrix_round_trip(rng):
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_array_equal(matrix_from_dict(json.loads(json.dumps(matrix_to_dict(M)))), M)


def test_vector_round_trip():
    x = np.array([1, -2j, 0.5 + 0.25j])
    np.testing.assert_array_equal(vector_from_dict(vector_to_dict(x)), x)


def test_real_entries_accepted():
    M = matrix_from_dict({"dim": 2, "entries": [1, 0, [0, 1], 2.5]})
    np.testing.assert_array_equal(M, [[1, 0], [1j, 2.5]])


@pytest.mark.parametrize("bad", [
    {"dim": 2, "entries": [1, 2, 3]},
    {"entries": []},
    {"dim": 1, "entries": [[1, 2, 3]]},
    {"dim": 1, "entries": ["x"]},
    [1, 2],
])
def test_malformed_matrix(bad):
    with pytest.raises(MalformedInputError):
        matrix_from_dict(bad)


def test_empty_vector_file(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("")
    with pytest.raises(MalformedInputError, match="malformed vector"):
        load_vector(p)
    p.write_text('{"entries": []}')
    with pytest.raises(MalformedInputError, match="malformed vector"):
        load_vector(p)


def test_missing_file(tmp_path):
    with pytest.raises(MalformedInputError):
        load_matrix(tmp_path / "nope.json")


def test_pairs(tmp_path):
    A = np.array([[0, 0], [1, 0]])
    d = tmp_path / "d.json"
    dump_json({"A": matrix_to_dict(A), "T": matrix_to_dict(np.eye(2))}, d)
    assert pair_kind(d) == "derivation"
    a, t = load_pair(d)
    np.testing.assert_array_equal(a, A)
    o = tmp_path / "o.json"
    dump_json({"T": matrix_to_dict(A), "x": vector_to_dict([0, 1])}, o)
    assert pair_kind(o) == "orbit"
    bad = tmp_path / "b.json"
    dump_json({"T": matrix_to_dict(A), "x": vector_to_dict([0, 1, 2])}, bad)
    with pytest.raises(MalformedInputError):
        load_pair(bad)
    dump_json({"B": 1}, bad)
    with pytest.raises(MalformedInputError):
        load_pair(bad)


def test_report_json_stable():
    r = TheoremReport("x", [Hypothesis("h", True, 1 + 2j)], 0.1, 0.5, {"tol": 0.5},
                      {"arr": np.array([1.0, np.inf]), "n": np.int64(3)})
    d = json.loads(r.to_json())
    assert d["status"] == "pass" and d["pass"] is True
    assert d["hypotheses"][0]["witness"] == [1.0, 2.0]
    assert d["details"]["arr"] == [1.0, "inf"] and d["details"]["n"] == 3
    assert r.to_json() == TheoremReport(**{k: getattr(r, k) for k in
                                           ("theorem_id", "hypotheses", "conclusion_defect", "tolerance",
                                            "tolerances", "details")}).to_json()


def test_report_status_rules():
    assert TheoremReport("x", [Hypothesis("h", False)], 0.0, 1.0).status == "not-applicable"
    assert TheoremReport("x", [Hypothesis("h", True)], 2.0, 1.0).status == "fail"
    assert to_jsonable({1: (np.float64(0.5), 1j)}) == {"1": [0.5, [0.0, 1.0]]}


def test_config_defaults_and_overrides():
    cfg = make_config()
    assert cfg.seed == 0xC0FFEE
    assert cfg.t_max == 200 and cfg.step == 0.05
    assert cfg.tol("thm2.1") == 1e-5
    cfg = make_config(seed=42, tolerances={"thm2.1": 1e-4}, alpha=None)
    assert cfg.seed == 42 and cfg.tol("thm2.1") == 1e-4 and cfg.tol("cor2.8") == 1e-10
    assert "out" not in cfg.to_dict() and cfg.to_dict()["seed"] == 42


@pytest.mark.parametrize("bad", [
    {"tolerances": {"thm2.1": 0}},
    {"step": 0.0},
    {"t_max": -1.0},
    {"norm": "l7"},
    {"format": "xml"},
])
def test_config_validation(bad):
    with pytest.raises((MalformedInputError, ValueError)):
        make_config(**bad)


def test_worker_cap(monkeypatch):
    monkeypatch.delenv("SPECLAB_WORKERS", raising=False)
    assert worker_cap() == 1
    monkeypatch.setenv("SPECLAB_WORKERS", "3")
    assert worker_cap() == 3
    monkeypatch.setenv("SPECLAB_WORKERS", "many")
    with pytest.raises(MalformedInputError):
        worker_cap()
