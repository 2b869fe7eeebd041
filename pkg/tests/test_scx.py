import pytest

from zrk import (GeoSimplex, PLMap, certify_main, find_collapse_sequence,
                 from_maximal, rpoint, standard_cube)
from zrk.complexes import AbsComplex, WeightedComplex
from zrk.scx import ScxDocument, ScxError, parse_scx, print_scx

from conftest import seg


def roundtrip(doc: ScxDocument) -> ScxDocument:
    text = print_scx(doc)
    again = parse_scx(text)
    assert print_scx(again) == text  # canonical form is a fixed point
    return again


def test_complex_roundtrip():
    cx = standard_cube(2)
    again = roundtrip(ScxDocument("complex", cx))
    assert again.payload == cx


def test_plmap_roundtrip(tent):
    again = roundtrip(ScxDocument("plmap", tent))
    assert again.payload.domain == tent.domain
    assert again.payload.images == tent.images


def test_weighted_roundtrip():
    base = AbsComplex(["a", "b", "c"],
                      [frozenset({"a", "b"}), frozenset({"b", "c"})])
    w = WeightedComplex(base, {"a": 1, "b": 2, "c": 3})
    again = roundtrip(ScxDocument("weighted", w)).payload
    assert list(again.base.vertices) == ["a", "b", "c"]
    assert again.weights == w.weights
    assert again.base.faces == base.faces


def test_sequence_roundtrip():
    cx = standard_cube(2)
    seq = find_collapse_sequence(cx)
    again = roundtrip(ScxDocument("sequence", seq)).payload
    assert again == seq


def test_verdict_roundtrip(half_interval, antidiagonal):
    certified = certify_main(half_interval)
    again = roundtrip(ScxDocument("verdict", certified)).payload
    assert again.status == "certified"
    assert again.witnesses.collapse_sequence == certified.witnesses.collapse_sequence
    refuted = certify_main(antidiagonal)
    again = roundtrip(ScxDocument("verdict", refuted)).payload
    assert again.status == "refuted"
    assert again.refutation_reason == "(ii),(iii)"


def test_rejects_unreduced_fraction():
    text = """{"version": "1", "kind": "complex", "dim": 1,
               "maximal_simplexes": [[["0"], ["2/4"]]]}"""
    with pytest.raises(ScxError, match="not in lowest terms"):
        parse_scx(text)


def test_rejects_overlapping_simplexes():
    text = """{"version": "1", "kind": "complex", "dim": 1,
               "maximal_simplexes": [[["0"], ["1"]], [["1/2"], ["3/2"]]]}"""
    with pytest.raises(ScxError, match="not a simplicial complex"):
        parse_scx(text)


def test_json_error_position():
    with pytest.raises(ScxError, match="line 2"):
        parse_scx('{"version": "1",\n  "kind": }')


def test_unknown_kind_and_version():
    with pytest.raises(ScxError, match="version"):
        parse_scx('{"version": "9", "kind": "complex"}')
    with pytest.raises(ScxError, match="kind"):
        parse_scx('{"version": "1", "kind": "mystery"}')


def test_error_location_in_message():
    text = """{"version": "1", "kind": "complex", "dim": 2,
               "maximal_simplexes": [[["0", "0"], ["1", "0"], ["1/2", "xx"]]]}"""
    with pytest.raises(ScxError, match=r"maximal_simplexes\[0\]"):
        parse_scx(text)


def test_corpus_files_are_canonical():
    from importlib import resources

    count = 0
    for entry in resources.files("zrk.corpus").iterdir():
        if not entry.name.endswith(".scx"):
            continue
        text = entry.read_text(encoding="utf-8")
        doc = parse_scx(text)
        assert print_scx(doc) == text, f"{entry.name} not canonical"
        count += 1
    assert count >= 10


def test_plmap_codomain_consistency_checked():
    text = """{"version": "1", "kind": "plmap", "dim": 1, "codomain_dim": 2,
               "maximal_simplexes": [[["0"], ["1"]]],
               "vertex_images": [[["0"], ["0"]], [["1"], ["0"]]]}"""
    with pytest.raises(ScxError, match="codomain_dim"):
        parse_scx(text)
