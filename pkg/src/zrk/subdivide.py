"""Subdivision machinery.

Elementary stellar subdivisions, subdivision checks, common refinement by
cell overlay, restriction of a triangulation to a subpolyhedron, and
refinement of a triangulation until a piecewise-linear map is simplexwise
compatible with a target triangulation.

The overlay produces, for each pair of maximal simplexes, the intersection
cell with an explicit H-representation; cells are triangulated by pulling
their lexicographically least vertex.  Pulling depends only on the face
being triangulated, so adjacent cells agree along shared faces and the
union is again a simplicial complex.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import linalg
from .complexes import GeoComplex, GeoSimplex, RPoint, simplex_hrep
from .linalg import AffineForm


class PointNotInSupport(ValueError):
    pass


class SupportMismatch(ValueError):
    pass


class RestrictionError(RuntimeError):
    """Raised when a restriction cannot keep an interior simplex intact."""


# -- stellar subdivision -----------------------------------------------------


def stellar(cx: GeoComplex, p: RPoint) -> GeoComplex:
    """Elementary stellar subdivision at p.

    Every simplex containing p is replaced by the cones conv(F u {p}) over
    its faces F avoiding p; p must lie in the support.

    A simplex of the complex contains p exactly when it has p's carrier as
    a face, and a face avoids the point exactly when it does not contain
    the whole carrier, so after one carrier search everything is
    combinatorial.
    """
    car = cx.carrier(p)
    if car is None:
        raise PointNotInSupport(f"point not in support: {p}")
    if car.dim == 0:
        return cx  # p is already a vertex
    cv = set(car.vertices)
    out = set()
    out.add(GeoSimplex((p,)))
    for s in cx.simplexes:
        sv = set(s.vertices)
        if not cv <= sv:
            out.add(s)
            continue
        for k in range(1, len(s.vertices) + 1):
            for sub in itertools.combinations(s.vertices, k):
                if not cv <= set(sub):
                    out.add(GeoSimplex._raw(tuple(sorted(sub + (p,)))))
    return GeoComplex(out, validate=False, closed=True)


def stellar_chain(cx: GeoComplex, points: Sequence[RPoint]) -> GeoComplex:
    """Iterated elementary stellar subdivision."""
    for p in points:
        cx = stellar(cx, p)
    return cx


# -- support coverage --------------------------------------------------------


def _cell(eqs, ineqs, ambient_dim):
    verts = linalg.enumerate_cell_vertices(eqs, ineqs, ambient_dim)
    return verts


def _simplex_inside(s: GeoSimplex, t: GeoSimplex) -> bool:
    """s subseteq t, decided on vertices (both convex)."""
    return all(t.contains(v) for v in s.vertices)


def _split_off_simplex(piece, t: GeoSimplex):
    """Split a cell along the H-representation of t.

    piece is (vertices, ineq forms).  Returns (inside, outside) where inside
    sub-cells are contained in t and outside sub-cells have relative
    interiors disjoint from t.  Pieces of lower dimension than the input are
    dropped: they are faces of retained pieces.
    """
    dim_piece = linalg.aff_dim(piece[0])
    eqs, ineqs = simplex_hrep(t)
    queue = [piece]
    for form in list(eqs) + list(ineqs):
        nxt = []
        for verts, forms in queue:
            vals = [form(v) for v in verts]
            if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
                nxt.append((verts, forms))
                continue
            for side in (form, form.negate()):
                sub_forms = list(forms) + [side]
                sub = linalg.enumerate_cell_vertices([], sub_forms, t.ambient_dim)
                if sub and linalg.aff_dim(sub) == dim_piece:
                    nxt.append((tuple(sub), tuple(sub_forms)))
        queue = nxt
    inside, outside = [], []
    for verts, forms in queue:
        if all(t.contains(RPoint(v)) for v in verts):
            inside.append((verts, forms))
        else:
            outside.append((verts, forms))
    return inside, outside


def supports(cover: Iterable[GeoSimplex], s: GeoSimplex) -> bool:
    """Exact point-set containment of simplex s in the union of ``cover``.

    Splits s along the covering simplexes' facets until every full-dimension
    piece is inside one of them or provably outside all of them.
    """
    cover = [t for t in cover if t.ambient_dim == s.ambient_dim]
    eqs, ineqs = simplex_hrep(s)
    start = (tuple(v.coords for v in s.vertices),
             tuple(list(ineqs) + [f for e in eqs for f in (e, e.negate())]))

    def covered(piece, remaining) -> bool:
        if any(all(t.contains(RPoint(v)) for v in piece[0]) for t in remaining):
            return True
        for idx, t in enumerate(remaining):
            inter = linalg.enumerate_cell_vertices(
                list(simplex_hrep(t)[0]), list(simplex_hrep(t)[1]) + list(piece[1]),
                s.ambient_dim)
            if inter and linalg.aff_dim(inter) == linalg.aff_dim(piece[0]):
                inside, outside = _split_off_simplex(piece, t)
                rest = remaining[:idx] + remaining[idx + 1:]
                return all(covered(q, rest) for q in outside)
        return False

    return covered(start, list(cover))


def support_equal(a: GeoComplex, b: GeoComplex) -> bool:
    """|a| = |b|, decided exactly."""
    am, bm = a.maximal_simplexes(), b.maximal_simplexes()
    return (all(supports(bm, s) for s in am)
            and all(supports(am, t) for t in bm))


def is_subdivision(fine: GeoComplex, coarse: GeoComplex) -> bool:
    """True iff supports agree and every simplex of ``fine`` lies in some
    simplex of ``coarse``."""
    if fine.ambient_dim != coarse.ambient_dim:
        return False
    cm = coarse.maximal_simplexes()
    if not all(any(_simplex_inside(s, t) for t in cm)
               for s in fine.maximal_simplexes()):
        return False
    return support_equal(fine, coarse)


# -- overlay (common refinement) ---------------------------------------------


def _overlay_cells(a: GeoComplex, b: GeoComplex):
    """Full-dimension cells S cap T per maximal S in a, T in b."""
    cells = []
    for s in a.maximal_simplexes():
        eqs_s, ineqs_s = simplex_hrep(s)
        d = s.dim
        for t in b.maximal_simplexes():
            eqs_t, ineqs_t = simplex_hrep(t)
            verts = linalg.enumerate_cell_vertices(
                list(eqs_s) + list(eqs_t), list(ineqs_s) + list(ineqs_t),
                a.ambient_dim)
            if verts and linalg.aff_dim(verts) == d:
                cells.append((verts, tuple(list(ineqs_s) + list(ineqs_t))))
    return cells


def common_refinement(a: GeoComplex, b: GeoComplex) -> GeoComplex:
    """A triangulation subdividing both a and b (equal supports required).

    Simplexes of a already contained in a simplex of b survive unchanged:
    they appear as faces of overlay cells, and pulling triangulates a face
    that is already a simplex by itself.
    """
    if a.ambient_dim != b.ambient_dim:
        raise SupportMismatch("support mismatch: different ambient dimensions")
    if not support_equal(a, b):
        raise SupportMismatch("support mismatch")
    if a == b:
        return a
    simplexes = []
    for verts, forms in _overlay_cells(a, b):
        for tri in linalg.pull_triangulation(verts, forms):
            simplexes.append(GeoSimplex(tuple(RPoint(v) for v in tri)))
    return GeoComplex(simplexes, validate=False)


# -- restriction to a subpolyhedron ------------------------------------------


def _slice_complex(cx: GeoComplex, form: AffineForm) -> GeoComplex:
    """Subdivide so that every simplex lies in {form >= 0} or {form <= 0}."""
    out = []
    changed = False
    for s in cx.maximal_simplexes():
        vals = [form(v.coords) for v in s.vertices]
        if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
            out.append(s)
            continue
        changed = True
        eqs, ineqs = simplex_hrep(s)
        for side in (form, form.negate()):
            cell_forms = list(ineqs) + [side]
            verts = linalg.enumerate_cell_vertices(list(eqs), cell_forms,
                                                   cx.ambient_dim)
            if verts and linalg.aff_dim(verts) == s.dim:
                for tri in linalg.pull_triangulation(verts, cell_forms):
                    out.append(GeoSimplex(tuple(RPoint(v) for v in tri)))
    if not changed:
        return cx
    return GeoComplex(out, validate=False)


def _adapted(cx: GeoComplex, part: GeoComplex) -> bool:
    """Does {S in cx : S inside |part|} triangulate |part|?"""
    inside = inside_subcomplex(cx, part)
    if inside is None:
        return False
    return all(supports(inside.maximal_simplexes(), q)
               for q in part.maximal_simplexes())


def inside_subcomplex(cx: GeoComplex, part: GeoComplex) -> Optional[GeoComplex]:
    """The subcomplex of simplexes lying inside |part| (None when empty)."""
    cover = part.maximal_simplexes()
    inside = [s for s in cx.simplexes
              if any(_simplex_inside(s, q) for q in cover) or supports(cover, s)]
    if not inside:
        return None
    return GeoComplex(inside, validate=False)


def restrict(cx: GeoComplex, part: GeoComplex) -> GeoComplex:
    """Subdivide cx so that the simplexes inside |part| triangulate |part|.

    Simplexes of cx that already lie inside |part| are never cut.  The
    subdivision slices along the affine hulls and facet functionals of
    part's maximal simplexes; a slicing functional whose hyperplane would
    cut through a preserved simplex is perturbed within its admissible
    freedom, and if no admissible choice exists a RestrictionError is
    raised rather than returning a wrong answer.
    """
    if cx.ambient_dim != part.ambient_dim:
        raise SupportMismatch("containment violation: ambient dimensions differ")
    if not all(supports(cx.maximal_simplexes(), q)
               for q in part.maximal_simplexes()):
        raise SupportMismatch("containment violation: |P| is not inside the support")
    if _adapted(cx, part):
        return cx

    protected = [s for s in cx.simplexes
                 if any(_simplex_inside(s, q) for q in part.maximal_simplexes())
                 or supports(part.maximal_simplexes(), s)]

    def crosses_protected(form: AffineForm) -> bool:
        for s in protected:
            vals = [form(v.coords) for v in s.vertices]
            if any(x > 0 for x in vals) and any(x < 0 for x in vals):
                return True
        return False

    forms: list[AffineForm] = []
    for q in part.maximal_simplexes():
        eqs, ineqs = simplex_hrep(q)
        for e in eqs:
            if crosses_protected(e):
                raise RestrictionError(
                    "restriction cannot preserve interior simplexes: an affine "
                    f"hull of {q} separates a preserved simplex")
            forms.append(e)
        for f in ineqs:
            if not crosses_protected(f):
                forms.append(f)
                continue
            # The facet functional is only determined on aff(q); shift it by
            # the hull equalities until it stops cutting preserved simplexes.
            fixed = None
            for coeffs in itertools.product(range(-6, 7), repeat=len(eqs)):
                cand = f
                for c, e in zip(coeffs, eqs):
                    if c:
                        cand = AffineForm(
                            tuple(x + c * y for x, y in zip(cand.coeffs, e.coeffs)),
                            cand.const + c * e.const)
                if not crosses_protected(cand):
                    fixed = cand
                    break
            if fixed is None:
                raise RestrictionError(
                    "restriction cannot preserve interior simplexes: no "
                    f"admissible extension for a facet of {q}")
            forms.append(fixed)

    out = cx
    for form in forms:
        out = _slice_complex(out, form)

    if not _adapted(out, part):
        raise RestrictionError("restriction failed to adapt to |P|")
    missing = [s for s in protected if s not in out.simplexes]
    if missing:
        raise RestrictionError(
            f"restriction failed to preserve interior simplexes: {missing[:3]}")
    return out


# -- refinement compatible with a map ----------------------------------------


def _pullback_forms(vertices: Sequence[RPoint], images: Sequence[RPoint],
                    forms: Sequence[AffineForm], eqs: Sequence[AffineForm]):
    """Forms g with g(x) = f(eta(x)) on a simplex where eta is affine.

    eta is interpolated from vertex images; the pullback is expressed in the
    barycentric functionals of the simplex.
    """
    bary = linalg.vertex_forms([v.coords for v in vertices])
    out = []
    for f in list(eqs) + list(forms):
        vals = [f(img.coords) for img in images]
        coeffs = tuple(sum(val * b.coeffs[i] for val, b in zip(vals, bary))
                       for i in range(len(vertices[0].coords)))
        const = sum(val * b.const for val, b in zip(vals, bary))
        is_eq = f in list(eqs)
        out.append((AffineForm(coeffs, const), is_eq))
    return out


def refine_for_map(cx: GeoComplex, plmap, target: GeoComplex) -> GeoComplex:
    """Subdivide cx until every simplex maps into one simplex of target.

    ``plmap`` must be compatible with cx (affine on each simplex, which holds
    for any vertex-image map on a subdivision of its domain) and its image
    must lie in |target|.  Simplexes already mapping into a single target
    simplex survive: they are faces of the preimage cells.
    """
    from .zmaps import PLMap  # local import to avoid a cycle

    if isinstance(plmap, PLMap):
        image_of = lambda v: plmap.eval(v)
    else:
        image_of = plmap

    simplexes = []
    target_max = target.maximal_simplexes()
    for s in cx.maximal_simplexes():
        vert_imgs = [image_of(v) for v in s.vertices]
        eqs_s, ineqs_s = simplex_hrep(s)
        good = next((t for t in target_max
                     if all(t.contains(img) for img in vert_imgs)), None)
        if good is not None:
            simplexes.append(s)
            continue
        pieces = []
        for t in target_max:
            eqs_t, ineqs_t = simplex_hrep(t)
            pulled = _pullback_forms(s.vertices, vert_imgs, ineqs_t, eqs_t)
            cell_eqs = list(eqs_s) + [f for f, is_eq in pulled if is_eq]
            cell_ineqs = list(ineqs_s) + [f for f, is_eq in pulled if not is_eq]
            verts = linalg.enumerate_cell_vertices(cell_eqs, cell_ineqs,
                                                   cx.ambient_dim)
            if verts and linalg.aff_dim(verts) == s.dim:
                all_forms = cell_ineqs + [g for f in cell_eqs
                                          for g in (f, f.negate())]
                for tri in linalg.pull_triangulation(verts, tuple(all_forms)):
                    pieces.append(GeoSimplex(tuple(RPoint(v) for v in tri)))
        # The preimage cells must tile s exactly; a gap means the image of s
        # leaves the support of the target.
        if _relative_volume_total(pieces) != _relative_volume_total([s]):
            raise SupportMismatch(
                f"compatibility failure: the image of {s} is not contained "
                "in the target support")
        simplexes.extend(pieces)
    return GeoComplex(simplexes, validate=False)


def _relative_volume_total(simplexes: Sequence[GeoSimplex]) -> Fraction:
    """Sum of top-dimension volumes measured in projected coordinates.

    All inputs must share one affine hull (pieces of a single simplex);
    projecting to a coordinate subspace that is injective on the hull keeps
    volumes rational and makes exact coverage comparisons valid.
    """
    if not simplexes:
        return Fraction(0)
    d = max(s.dim for s in simplexes)
    base = next(s for s in simplexes if s.dim == d)
    dirs = [linalg.vsub(v.coords, base.vertices[0].coords)
            for v in base.vertices[1:]]
    _, pivots = linalg._echelon([list(r) for r in dirs])
    axes = pivots
    total = Fraction(0)
    for s in simplexes:
        if s.dim != d:
            continue
        rows = [[v.coords[a] - s.vertices[0].coords[a] for a in axes]
                for v in s.vertices[1:]]
        total += abs(linalg.det(rows))
    return total  # common factor d! omitted from both sides
