import math
import random
from fractions import Fraction

import pytest

from zrk import (GeoSimplex, anchor, coprime_point, den, desingularize,
                 desingularize_relative, from_maximal,
                 has_strongly_regular_triangulation, homog, is_regular,
                 is_strongly_regular, is_strongly_regular_simplex,
                 is_subdivision, rpoint, standard_cube, stellar)
from zrk.regular import BudgetExhausted
from zrk.exactnum import minor_gcd

from conftest import seg, tri, random_simplex


def test_den_golden():
    assert den(rpoint("1/2", "1/3")) == 6
    assert den(rpoint(0, 1)) == 1
    assert den(rpoint("3/4", "1/6")) == 12


def test_homog_golden():
    assert homog(rpoint("1/2", "1/3")).entries == (3, 2, 6)
    assert homog(rpoint(1, 1)).entries == (1, 1, 1)
    assert homog(rpoint("1/2")).entries == (1, 2)


def test_homog_recovers_point():
    rng = random.Random(5)
    for _ in range(50):
        p = rpoint(*[Fraction(rng.randint(0, 12), rng.randint(1, 12))
                     for _ in range(rng.randint(1, 3))])
        assert homog(p).point() == p
        assert math.gcd(*homog(p).entries) == 1


def test_is_regular_golden():
    assert is_regular(tri((0, 0), (1, 0), ("1/2", "1/2")))
    assert not is_regular(seg("1/3", "2/3"))
    assert is_regular(GeoSimplex((rpoint(0, 0), rpoint(1, 0))))


def test_is_regular_vertex_order_invariant():
    s1 = GeoSimplex((rpoint("1/2", 0), rpoint(0, "1/2"), rpoint(1, 1)))
    s2 = GeoSimplex((rpoint(1, 1), rpoint("1/2", 0), rpoint(0, "1/2")))
    assert s1 == s2
    assert is_regular(s1) == is_regular(s2)


def test_strongly_regular_simplex_golden():
    assert not is_strongly_regular_simplex(GeoSimplex((rpoint("1/2", 0),
                                                       rpoint(0, "1/2"))))
    assert is_strongly_regular_simplex(tri((0, 0), (1, 0), ("1/2", "1/2")))
    assert not is_strongly_regular_simplex(seg("1/3", "2/3"))


def test_strongly_regular_complex_golden(antidiagonal):
    assert is_strongly_regular(from_maximal([seg(0, "1/2"), seg("1/2", 1)]))
    assert not is_strongly_regular(antidiagonal)
    for n in (1, 2, 3):
        assert is_strongly_regular(standard_cube(n))


def test_desingularize_one_step(third_interval):
    out = desingularize(third_interval)
    assert sorted(out.maximal_simplexes()) == [seg("1/3", "1/2"), seg("1/2", "2/3")]
    assert all(is_regular(s) for s in out.simplexes)


def test_desingularize_identity_on_regular():
    cx = standard_cube(2)
    assert desingularize(cx) == cx


def test_desingularize_2d():
    cx = from_maximal([tri(("1/2", "1/2"), (1, 0), ("1/3", 0))])
    assert not all(is_regular(s) for s in cx.simplexes)
    out = desingularize(cx)
    assert is_subdivision(out, cx)
    assert all(is_regular(s) for s in out.simplexes)


def test_desingularize_random_corpus():
    rng = random.Random(23)
    done = 0
    while done < 15:
        s = random_simplex(rng, rng.randint(1, 2), 6)
        if s.dim == 0:
            continue
        cx = from_maximal([s])
        out = desingularize(cx)
        assert is_subdivision(out, cx)
        assert all(is_regular(t) for t in out.simplexes)
        done += 1


def test_desingularize_budget():
    with pytest.raises(BudgetExhausted, match="desingularization budget exhausted"):
        desingularize(from_maximal([seg("1/3", "2/3")]), budget=0)


def test_desingularize_relative_already_regular():
    cx = from_maximal([seg(0, "1/3"), seg("1/3", 1)])
    part = from_maximal([seg(0, "1/3")])
    assert desingularize_relative(cx, part) == cx


def test_desingularize_relative_subdivides_part():
    cx = from_maximal([seg(0, "2/3"), seg("2/3", 1)])
    part = from_maximal([seg(0, "2/3")])
    out = desingularize_relative(cx, part)
    assert sorted(out.maximal_simplexes()) == [
        seg(0, "1/2"), seg("1/2", "2/3"), seg("2/3", 1)]


def test_desingularize_relative_precondition():
    cx = from_maximal([seg(0, 1)])
    part = from_maximal([seg(0, "1/2")])
    with pytest.raises(ValueError, match="precondition violation"):
        desingularize_relative(cx, part)


def test_coprime_point_golden():
    assert coprime_point(seg(0, "1/2"), 2) == rpoint(0)
    assert coprime_point(seg("1/2", 1), 6) == rpoint(1)
    # no vertex works: both denominators share a factor with k on one side
    s = seg("1/2", "1/3")
    p = coprime_point(s, 6)
    assert s.contains(p) and math.gcd(6, den(p)) == 1


def test_coprime_point_corpus():
    simplexes = [seg(0, "1/2"), seg("1/2", 1), seg("1/3", "1/2"),
                 tri((0, 0), (1, 0), ("1/2", "1/2"))]
    for s in simplexes:
        for k in range(2, 13):
            p = coprime_point(s, k)
            assert s.contains(p)
            assert math.gcd(k, den(p)) == 1


def test_coprime_point_precondition():
    with pytest.raises(ValueError, match="strongly regular"):
        coprime_point(GeoSimplex((rpoint("1/2", 0), rpoint(0, "1/2"))), 2)


def test_anchor_lattice_point(half_interval):
    w, eps = anchor(half_interval, rpoint(0))
    assert w == rpoint(0) and eps > 0


def test_anchor_half_interval_witness(half_interval):
    out = anchor(half_interval, rpoint("1/2"))
    assert out is not None
    w, eps = out
    assert all(c.denominator == 1 for c in w.coords)
    assert eps > 0
    # verify the segment stays inside
    end = rpoint(*[a + eps * (b - a) for a, b in zip(rpoint("1/2").coords, w.coords)])
    assert half_interval.contains_point(end)


def test_anchor_absent_on_antidiagonal(antidiagonal):
    assert anchor(antidiagonal, rpoint("1/4", "1/4")) is None


def test_anchor_outside_support(half_interval):
    with pytest.raises(ValueError, match="point not in support"):
        anchor(half_interval, rpoint("3/4"))


def test_has_strongly_regular_triangulation_golden(half_interval, third_interval,
                                                   antidiagonal):
    assert has_strongly_regular_triangulation(half_interval)
    assert has_strongly_regular_triangulation(third_interval)
    assert not has_strongly_regular_triangulation(antidiagonal)


def test_strong_regularity_triangulation_invariance():
    # two different triangulations of each support agree after
    # desingularization
    supports_2d = [
        from_maximal([seg(0, "1/2")]),
        from_maximal([seg("1/3", "2/3")]),
        from_maximal([tri((0, 0), (1, 0), (0, 1))]),
        from_maximal([GeoSimplex((rpoint("1/2", 0), rpoint(0, "1/2")))]),
    ]
    for cx in supports_2d:
        alt = stellar(cx, cx.maximal_simplexes()[0].barycenter())
        v1 = is_strongly_regular(desingularize(cx))
        v2 = is_strongly_regular(desingularize(alt))
        assert v1 == v2


def test_regularity_matches_minor_gcd_oracle():
    rng = random.Random(31)
    for _ in range(200):
        s = random_simplex(rng, rng.randint(1, 3), 6)
        rows = [homog(v).entries for v in s.vertices]
        oracle = minor_gcd(rows, len(rows)) == 1
        assert is_regular(s) == oracle
