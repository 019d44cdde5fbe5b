import os
import pathlib

import pytest

import featrange

CORPUS = pathlib.Path(os.environ.get("FEATRANGE_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2])) / "corpus"

TRIVIAL = """var x;
location A { inv: 0 <= x <= 10; flow: x' = [1, 1]; }
init A { x in [0, 1]; }"""

CROSS = "feature F(); begin var s; @+(x>=5), s=$time |-> F = s; end"


def test_reach_on_trivial_text():
    p = featrange.from_text(TRIVIAL, CROSS)
    r = p.reach(horizon=10)
    assert r["match"]
    assert r["exact_min"] == "4"
    assert r["exact_max"] == "5"


def test_corner_within_epsilon():
    p = featrange.from_text(TRIVIAL, CROSS)
    c = p.corner(horizon=10, hops=3, step_size=1, epsilon="1/10000")
    assert 4 <= float(c["min"]["value"]) <= 4.0001
    assert 4.9999 <= float(c["max"]["value"]) <= 5


def test_compare_from_corpus_files():
    p = featrange.load(CORPUS / "models" / "trivial.ha", CORPUS / "features" / "cross.fia")
    j = p.compare(horizon=10, hops=3, step_size=1, epsilon="1/10000", runs=20, seed=3)
    assert j["verdict"] == "PASS"
    assert j["empirical"]["matched_runs"] == 20


def test_bounds_and_product():
    p = featrange.from_text(TRIVIAL, CROSS)
    b = p.bounds()
    assert b["xf"] == b["xh"] + b["locals"] + b["timers"] + 1
    assert "location" in p.product_text()


def test_parameters_and_missing_binding():
    feature = "feature G(c); begin var s; @+(x>=c), s=$time |-> G = s; end"
    r = featrange.from_text(TRIVIAL, feature, {"c": 3}).reach(horizon=10)
    assert r["exact_max"] == "3"
    with pytest.raises(featrange.Error, match="MissingBinding"):
        featrange.from_text(TRIVIAL, feature)


def test_syntax_error_is_raised():
    with pytest.raises(featrange.SyntaxError):
        featrange.from_text("var x; location {", CROSS)


def test_feature_automaton_text():
    assert "F" in featrange.feature_automaton(CROSS)


def test_horizon_is_required():
    p = featrange.from_text(TRIVIAL, CROSS)
    with pytest.raises(TypeError):
        p.reach()
