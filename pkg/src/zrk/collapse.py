"""Free faces, elementary collapses, and collapsibility search.

Collapsibility is the checkable certificate used in place of
contractibility: a found collapse sequence replays independently, while a
failed search means only "not found within budget", never "not
collapsible".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .complexes import GeoComplex, GeoSimplex


class NotAnElementaryCollapse(ValueError):
    pass


@dataclass(frozen=True)
class CollapseStep:
    maximal: GeoSimplex
    free_facet: GeoSimplex

    def __post_init__(self):
        mv, fv = set(self.maximal.vertices), set(self.free_facet.vertices)
        if not (fv < mv and len(fv) == len(mv) - 1):
            raise ValueError("free_facet must be a facet of maximal")


@dataclass(frozen=True)
class CollapseSequence:
    steps: tuple[CollapseStep, ...]
    terminal: GeoSimplex

    def __post_init__(self):
        if self.terminal.dim != 0:
            raise ValueError("terminal must be a vertex")


def free_faces(cx: GeoComplex) -> list[tuple[GeoSimplex, GeoSimplex]]:
    """All pairs (T, F) where F is a facet of exactly one simplex T."""
    out = []
    sims = cx.simplexes
    for f in sims:
        parents = [t for t in sims
                   if len(t.vertices) == len(f.vertices) + 1
                   and set(f.vertices) < set(t.vertices)]
        if len(parents) == 1:
            out.append((parents[0], f))
    return sorted(out)


def elementary_collapse(cx: GeoComplex, t: GeoSimplex, f: GeoSimplex) -> GeoComplex:
    """Remove exactly {T, F}; errors unless (T, F) is a free pair."""
    if (t, f) not in free_faces(cx):
        raise NotAnElementaryCollapse("not an elementary collapse")
    return GeoComplex(cx.simplexes - {t, f}, validate=False)


def _facet_index(sims: frozenset) -> list:
    """Free pairs of an abstract state, sorted for deterministic search."""
    out = []
    for f in sims:
        parents = [t for t in sims if len(t) == len(f) + 1 and f < t]
        if len(parents) == 1:
            out.append((parents[0], f))
    return out


def find_collapse_sequence(cx: GeoComplex,
                           budget: int = 100_000) -> Optional[CollapseSequence]:
    """Depth-first search for a collapse down to a single vertex.

    Greedy on the lexicographically least free pair with backtracking;
    visited states are memoized.  The budget bounds visited nodes; None
    means "not found within budget".
    """
    verts = cx.vertices()
    index = {v: i for i, v in enumerate(verts)}
    start = frozenset(frozenset(index[v] for v in s.vertices)
                      for s in cx.simplexes)
    if len(start) == 1 and len(next(iter(start))) == 1:
        (only,) = start
        return CollapseSequence((), GeoSimplex((verts[min(only)],)))

    def sort_key(pair):
        t, f = pair
        return (tuple(sorted(verts[i] for i in t)),
                tuple(sorted(verts[i] for i in f)))

    visited: set[frozenset] = set()
    nodes = 0
    path: list[tuple[frozenset, frozenset]] = []

    def dfs(state: frozenset) -> bool:
        nonlocal nodes
        if len(state) == 1 and len(next(iter(state))) == 1:
            return True
        if state in visited:
            return False
        nodes += 1
        if nodes > budget:
            return False
        visited.add(state)
        for t, f in sorted(_facet_index(state), key=sort_key):
            path.append((t, f))
            if dfs(state - {t, f}):
                return True
            path.pop()
        return False

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, len(start) * 2 + 100))
    try:
        found = dfs(start)
    finally:
        sys.setrecursionlimit(old_limit)
    if not found:
        return None
    steps = []
    state = start
    for t, f in path:
        steps.append(CollapseStep(
            GeoSimplex(tuple(verts[i] for i in t)),
            GeoSimplex(tuple(verts[i] for i in f))))
        state = state - {t, f}
    (only,) = state
    return CollapseSequence(tuple(steps), GeoSimplex((verts[min(only)],)))


def replay(cx: GeoComplex, seq: CollapseSequence) -> bool:
    """Check every step is a valid elementary collapse in order and the end
    state is the single terminal vertex."""
    sims = set(cx.simplexes)
    for step in seq.steps:
        t, f = step.maximal, step.free_facet
        if t not in sims or f not in sims:
            return False
        parents = [u for u in sims
                   if len(u.vertices) == len(f.vertices) + 1
                   and set(f.vertices) < set(u.vertices)]
        if parents != [t]:
            return False
        sims -= {t, f}
    return sims == {GeoSimplex(seq.terminal.vertices)}
