import random

import pytest

from zrk import (CollapseSequence, CollapseStep, GeoSimplex,
                 elementary_collapse, find_collapse_sequence, free_faces,
                 from_maximal, replay, rpoint, standard_cube, stellar)
from zrk.collapse import NotAnElementaryCollapse

from conftest import seg, tri


def test_free_faces_segment():
    cx = from_maximal([seg(0, 1)])
    pairs = free_faces(cx)
    edge = seg(0, 1)
    assert pairs == sorted([(edge, GeoSimplex((rpoint(0),))),
                            (edge, GeoSimplex((rpoint(1),)))])


def test_free_faces_square():
    cx = standard_cube(2)
    pairs = free_faces(cx)
    assert len(pairs) == 4
    for t, f in pairs:
        assert t.dim == 2 and f.dim == 1
        # the free facets are the boundary edges, never the diagonal
        assert f != seg2d((0, 0), (1, 1))


def seg2d(a, b):
    return GeoSimplex((rpoint(*a), rpoint(*b)))


def test_free_faces_hollow_triangle():
    cx = from_maximal([seg2d((0, 0), (1, 0)), seg2d((1, 0), (0, 1)),
                       seg2d((0, 0), (0, 1))])
    assert free_faces(cx) == []


def test_elementary_collapse_segment():
    cx = from_maximal([seg(0, 1)])
    out = elementary_collapse(cx, seg(0, 1), GeoSimplex((rpoint(1),)))
    assert set(out.simplexes) == {GeoSimplex((rpoint(0),))}


def test_elementary_collapse_square_count():
    cx = standard_cube(2)
    t, f = free_faces(cx)[0]
    out = elementary_collapse(cx, t, f)
    assert len(out.simplexes) == 9


def test_elementary_collapse_rejects_shared_edge():
    cx = standard_cube(2)
    diag = seg2d((0, 0), (1, 1))
    t = tri((0, 0), (1, 0), (1, 1))
    with pytest.raises(NotAnElementaryCollapse, match="not an elementary collapse"):
        elementary_collapse(cx, t, diag)


def test_collapse_counts_down_by_two():
    cx = standard_cube(2)
    while True:
        pairs = free_faces(cx)
        if not pairs or len(cx.simplexes) == 1:
            break
        before = len(cx.simplexes)
        cx = elementary_collapse(cx, *pairs[0])
        assert len(cx.simplexes) == before - 2


def test_find_collapse_sequence_cubes():
    for n, expected_steps in ((1, 1), (2, 5)):
        cx = standard_cube(n)
        seq = find_collapse_sequence(cx)
        assert seq is not None
        assert len(seq.steps) == expected_steps
        assert replay(cx, seq)
    c3 = standard_cube(3)
    seq3 = find_collapse_sequence(c3)
    assert seq3 is not None and replay(c3, seq3)
    assert len(seq3.steps) == (len(c3.simplexes) - 1) // 2


def test_find_collapse_sequence_single_vertex():
    cx = from_maximal([GeoSimplex((rpoint(0),))])
    seq = find_collapse_sequence(cx)
    assert seq is not None and seq.steps == ()
    assert replay(cx, seq)


def test_replay_rejects_bad_order():
    cx = standard_cube(2)
    seq = find_collapse_sequence(cx)
    twisted = CollapseSequence(tuple(reversed(seq.steps)), seq.terminal)
    assert not replay(cx, twisted)


def test_replay_rejects_wrong_terminal():
    cx = from_maximal([tri((0, 0), (1, 0), (0, 1))])
    assert not replay(cx, CollapseSequence((), GeoSimplex((rpoint(0, 0),))))


def test_stellar_subdivision_stays_collapsible():
    rng = random.Random(17)
    for cx in (standard_cube(1), standard_cube(2),
               from_maximal([tri((0, 0), (1, 0), (0, 1))])):
        assert find_collapse_sequence(cx) is not None
        for _ in range(4):
            s = rng.choice(cx.maximal_simplexes())
            sub = stellar(cx, s.barycenter())
            seq = find_collapse_sequence(sub)
            assert seq is not None and replay(sub, seq)


def test_collapse_step_validation():
    with pytest.raises(ValueError):
        CollapseStep(seg(0, 1), GeoSimplex((rpoint("1/2"),)))
