"""The .scx exchange format: UTF-8 JSON with exact 'p/q' rationals.

Five document kinds: complex, plmap, weighted, sequence, verdict.  Parsing
validates both syntax (fractions must be in lowest terms) and semantics
(complexes must satisfy the simplicial-complex condition); printing is
canonical, so parse . print is the identity on canonical text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .collapse import CollapseSequence, CollapseStep
from .complexes import (AbsComplex, GeoComplex, GeoSimplex, RPoint,
                        WeightedComplex)
from .exactnum import format_rat, parse_rat
from .zmaps import PLMap, RetractVerdict, RetractWitnesses

FORMAT_VERSION = "1"
KINDS = ("complex", "plmap", "weighted", "sequence", "verdict")


class ScxError(ValueError):
    """Parse or validation error with a document location."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass
class ScxDocument:
    kind: str
    payload: Any
    version: str = FORMAT_VERSION


# -- encoding ----------------------------------------------------------------


def _point_out(p: RPoint) -> list[str]:
    return [format_rat(c) for c in p.coords]


def _simplex_out(s: GeoSimplex) -> list[list[str]]:
    return [_point_out(v) for v in s.vertices]


def _complex_body(cx: GeoComplex) -> dict:
    return {
        "dim": cx.ambient_dim,
        "maximal_simplexes": [_simplex_out(s) for s in cx.maximal_simplexes()],
    }


def _payload_body(doc: ScxDocument) -> dict:
    kind, payload = doc.kind, doc.payload
    if kind == "complex":
        return _complex_body(payload)
    if kind == "plmap":
        body = _complex_body(payload.domain)
        body["codomain_dim"] = payload.codomain_dim
        body["vertex_images"] = [[_point_out(v), _point_out(payload.images[v])]
                                 for v in payload.domain.vertices()]
        return body
    if kind == "weighted":
        w: WeightedComplex = payload
        order = list(w.base.vertices)
        index = {v: i for i, v in enumerate(order)}
        return {
            "vertices": [str(v) for v in order],
            "faces": sorted(sorted(index[v] for v in f) for f in w.base.faces),
            "weights": [w.weights[v] for v in order],
        }
    if kind == "sequence":
        seq: CollapseSequence = payload
        return {
            "steps": [[_simplex_out(st.maximal), _simplex_out(st.free_facet)]
                      for st in seq.steps],
            "terminal": _point_out(seq.terminal.vertices[0]),
        }
    if kind == "verdict":
        verdict: RetractVerdict = payload
        body: dict = {"status": verdict.status}
        if verdict.refutation_reason:
            body["refutation_reason"] = verdict.refutation_reason
        if verdict.witnesses:
            wit = verdict.witnesses
            wbody = {}
            if wit.lattice_vertex is not None:
                wbody["lattice_vertex"] = _point_out(wit.lattice_vertex)
            if wit.collapse_complex is not None:
                wbody["collapse_complex"] = _complex_body(wit.collapse_complex)
            if wit.collapse_sequence is not None:
                wbody["collapse_sequence"] = _payload_body(
                    ScxDocument("sequence", wit.collapse_sequence))
            if wit.strongly_regular is not None:
                wbody["strongly_regular"] = _complex_body(wit.strongly_regular)
            body["witnesses"] = wbody
        return body
    raise ScxError(f"unknown kind {kind!r}")


def print_scx(doc: ScxDocument) -> str:
    body = {"version": doc.version, "kind": doc.kind}
    body.update(_payload_body(doc))
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


# -- decoding ----------------------------------------------------------------


def _parse_point(entry, where: str) -> RPoint:
    if not isinstance(entry, list) or not entry:
        raise ScxError("a point must be a nonempty array of rationals", where)
    coords = []
    for i, txt in enumerate(entry):
        if not isinstance(txt, str):
            raise ScxError("rationals are strings like '2/3'", f"{where}[{i}]")
        try:
            coords.append(parse_rat(txt))
        except ValueError as exc:
            raise ScxError(str(exc), f"{where}[{i}]") from None
    return RPoint(tuple(coords))


def _parse_simplex(entry, dim: int, where: str) -> GeoSimplex:
    if not isinstance(entry, list) or not entry:
        raise ScxError("a simplex must be a nonempty array of points", where)
    points = [_parse_point(p, f"{where}[{i}]") for i, p in enumerate(entry)]
    if any(p.dim != dim for p in points):
        raise ScxError(f"points must have dimension {dim}", where)
    try:
        return GeoSimplex(tuple(points))
    except ValueError as exc:
        raise ScxError(str(exc), where) from None


def _parse_complex(body: dict, where: str = "") -> GeoComplex:
    dim = body.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ScxError("'dim' must be a positive integer", where + "dim")
    sims = body.get("maximal_simplexes")
    if not isinstance(sims, list) or not sims:
        raise ScxError("'maximal_simplexes' must be a nonempty array",
                       where + "maximal_simplexes")
    parsed = [_parse_simplex(s, dim, f"{where}maximal_simplexes[{i}]")
              for i, s in enumerate(sims)]
    try:
        return GeoComplex(parsed, validate=True)
    except ValueError as exc:
        raise ScxError(str(exc), where + "maximal_simplexes") from None


def _parse_plmap(body: dict) -> PLMap:
    domain = _parse_complex(body)
    images = {}
    pairs = body.get("vertex_images")
    if not isinstance(pairs, list):
        raise ScxError("'vertex_images' must be an array of pairs",
                       "vertex_images")
    declared = body.get("codomain_dim")
    for i, pair in enumerate(pairs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ScxError("each entry is [vertex, image]", f"vertex_images[{i}]")
        v = _parse_point(pair[0], f"vertex_images[{i}][0]")
        img = _parse_point(pair[1], f"vertex_images[{i}][1]")
        if isinstance(declared, int) and img.dim != declared:
            raise ScxError(f"image dimension {img.dim} contradicts "
                           f"codomain_dim {declared}", f"vertex_images[{i}][1]")
        images[v] = img
    try:
        return PLMap(domain, images)
    except ValueError as exc:
        raise ScxError(str(exc), "vertex_images") from None


def _parse_weighted(body: dict) -> WeightedComplex:
    names = body.get("vertices")
    faces = body.get("faces")
    weights = body.get("weights")
    if not isinstance(names, list) or not names:
        raise ScxError("'vertices' must be a nonempty array", "vertices")
    if not isinstance(faces, list):
        raise ScxError("'faces' must be an array of index arrays", "faces")
    if (not isinstance(weights, list) or len(weights) != len(names)
            or any(not isinstance(w, int) or w < 1 for w in weights)):
        raise ScxError("'weights' must be positive integers, one per vertex",
                       "weights")
    try:
        fsets = [frozenset(names[i] for i in f) for f in faces]
        base = AbsComplex(names, fsets)
        return WeightedComplex(base, dict(zip(names, weights)))
    except (ValueError, IndexError, TypeError) as exc:
        raise ScxError(str(exc), "faces") from None


def _parse_sequence(body: dict) -> CollapseSequence:
    steps_in = body.get("steps")
    terminal_in = body.get("terminal")
    if not isinstance(steps_in, list):
        raise ScxError("'steps' must be an array", "steps")
    terminal = _parse_point(terminal_in, "terminal")
    steps = []
    for i, pair in enumerate(steps_in):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ScxError("each step is [maximal, free_facet]", f"steps[{i}]")
        t = _parse_simplex(pair[0], terminal.dim, f"steps[{i}][0]")
        f = _parse_simplex(pair[1], terminal.dim, f"steps[{i}][1]")
        try:
            steps.append(CollapseStep(t, f))
        except ValueError as exc:
            raise ScxError(str(exc), f"steps[{i}]") from None
    return CollapseSequence(tuple(steps), GeoSimplex((terminal,)))


def _parse_verdict(body: dict) -> RetractVerdict:
    status = body.get("status")
    if status not in ("certified", "refuted", "unknown"):
        raise ScxError("'status' must be certified/refuted/unknown", "status")
    reason = body.get("refutation_reason")
    witnesses = None
    wbody = body.get("witnesses")
    if isinstance(wbody, dict):
        lattice = (_parse_point(wbody["lattice_vertex"], "witnesses.lattice_vertex")
                   if "lattice_vertex" in wbody else None)
        ccx = (_parse_complex(wbody["collapse_complex"], "witnesses.collapse_complex.")
               if "collapse_complex" in wbody else None)
        seq = (_parse_sequence(wbody["collapse_sequence"])
               if "collapse_sequence" in wbody else None)
        srt = (_parse_complex(wbody["strongly_regular"], "witnesses.strongly_regular.")
               if "strongly_regular" in wbody else None)
        witnesses = RetractWitnesses(collapse_complex=ccx, collapse_sequence=seq,
                                     lattice_vertex=lattice, strongly_regular=srt)
    return RetractVerdict(status, witnesses=witnesses, refutation_reason=reason)


def parse_scx(text: str) -> ScxDocument:
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScxError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: "
                       f"{exc.msg}") from None
    if not isinstance(body, dict):
        raise ScxError("the document must be a JSON object")
    version = body.get("version")
    if version != FORMAT_VERSION:
        raise ScxError(f"unsupported format version {version!r}", "version")
    kind = body.get("kind")
    if kind not in KINDS:
        raise ScxError(f"unknown kind {kind!r}", "kind")
    if kind == "complex":
        payload = _parse_complex(body)
    elif kind == "plmap":
        payload = _parse_plmap(body)
    elif kind == "weighted":
        payload = _parse_weighted(body)
    elif kind == "sequence":
        payload = _parse_sequence(body)
    else:
        payload = _parse_verdict(body)
    return ScxDocument(kind, payload, version)


def load(path) -> ScxDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scx(fh.read())


def dump(doc: ScxDocument, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_scx(doc))
