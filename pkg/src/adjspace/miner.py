"""Exhaustive search over small finite adjunction systems.

Systems are generated up to isomorphism: component topologies come from
:func:`~adjspace.fintop.all_spaces`, and a gluing is an equivalence relation
on the disjoint union whose classes meet each component at most once.  Such a
relation satisfies the three axioms by construction; systems whose gluing maps
fail to be embeddings are discarded.  Duplicates under component
automorphisms and permutations of identical components are removed.

Each lemma is an implication ``hypotheses => conclusion``.  Dropping a
hypothesis and searching for failures yields counterexamples showing it is
needed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

import networkx as nx

from . import fintop
from .adjunction import AdjSystem, AdjunctionError, GluedSpace, component_graph
from .fintop import FinSpace, members

MAX_POINTS = 7


@lru_cache(maxsize=None)
def automorphisms(space: FinSpace) -> tuple[tuple[int, ...], ...]:
    out = []
    for perm in itertools.permutations(range(space.n)):
        if all(fintop.mask(perm[y] for y in members(space.min_open[x])) == space.min_open[perm[x]]
               for x in range(space.n)):
            out.append(perm)
    return tuple(out)


def _partitions(total: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of positive sizes with sum at most ``total``."""
    def rec(left: int, cap: int, acc: tuple):
        if acc:
            yield acc
        for s in range(min(left, cap), 0, -1):
            yield from rec(left - s, s, acc + (s,))
    yield from rec(total, total, ())


def _gluings(comp_of: list[int]) -> Iterator[list[list[int]]]:
    blocks: list[list[int]] = []

    def rec(x: int):
        if x == len(comp_of):
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            if all(comp_of[y] != comp_of[x] for y in b):
                b.append(x)
                yield from rec(x + 1)
                b.pop()
        blocks.append([x])
        yield from rec(x + 1)
        blocks.pop()

    yield from rec(0)


def _symmetries(spaces: tuple[FinSpace, ...]) -> list[tuple[int, ...]]:
    """Permutations of global point indices preserving the component structure."""
    offsets = list(itertools.accumulate([0] + [s.n for s in spaces]))[:-1]
    m = len(spaces)
    comp_perms = [p for p in itertools.permutations(range(m)) if all(spaces[p[i]] == spaces[i] for i in range(m))]
    out = []
    for cp in comp_perms:
        for auts in itertools.product(*(automorphisms(s) for s in spaces)):
            g = []
            for i, s in enumerate(spaces):
                for x in range(s.n):
                    g.append(offsets[cp[i]] + auts[i][x])
            out.append(tuple(g))
    return out


def _system_from_blocks(spaces: tuple[FinSpace, ...], blocks: list[list[int]]) -> AdjSystem:
    locate = [(i, x) for i, s in enumerate(spaces) for x in range(s.n)]
    regions: dict = {}
    maps: dict = {}
    for b in blocks:
        for u, v in itertools.permutations(b, 2):
            (i, x), (j, y) = locate[u], locate[v]
            regions[i, j] = regions.get((i, j), 0) | 1 << x
            maps.setdefault((i, j), {})[x] = y
    return AdjSystem(list(spaces), regions, maps)


def enumerate_systems(max_points: int) -> Iterator[AdjSystem]:
    """Every valid finite system with at most ``max_points`` points, up to isomorphism."""
    if max_points > MAX_POINTS:
        raise AdjunctionError(f"max_points is bounded by {MAX_POINTS}")
    for sizes in _partitions(max_points):
        choices = []
        for size, group in itertools.groupby(sizes):
            count = len(list(group))
            choices.append(list(itertools.combinations_with_replacement(range(len(fintop.all_spaces(size))), count)))
        for combo in itertools.product(*choices):
            spaces = tuple(fintop.all_spaces(size)[k] for size, ks in
                           zip(sorted(set(sizes), reverse=True), combo) for k in ks)
            comp_of = [i for i, s in enumerate(spaces) for _ in range(s.n)]
            sym = _symmetries(spaces)
            seen = set()
            for blocks in _gluings(comp_of):
                key = min(tuple(sorted(tuple(sorted(g[y] for y in b)) for b in blocks)) for g in sym)
                if key in seen:
                    continue
                seen.add(key)
                sys = _system_from_blocks(spaces, blocks)
                if sys.validate().ok:
                    yield sys


# -- lemmas -------------------------------------------------------------------

class Context:
    """A mined system with lazily built glued space."""

    def __init__(self, sys: AdjSystem):
        self.sys = sys
        self._space: GluedSpace | None = None

    @property
    def space(self) -> GluedSpace:
        if self._space is None:
            self._space = GluedSpace(self.sys)
        return self._space

    @property
    def points(self) -> int:
        return sum(s.n for s in self.sys.spaces)


def _nonempty_regions(c: Context) -> bool:
    return all(c.sys.regions[i, j] for i, j in itertools.permutations(range(c.sys.m), 2))


def _connected_components(c: Context) -> bool:
    return all(s.is_connected() for s in c.sys.spaces)


def _connected_graph(c: Context) -> bool:
    return nx.is_connected(component_graph(c.sys))


def _t1_components(c: Context) -> bool:
    return all(s.is_T1() for s in c.sys.spaces)


def _open_maps(c: Context) -> bool:
    return all(fintop.check_open_map(phi) for phi in c.space.phi)


def _open_regions(c: Context) -> bool:
    return c.sys.all_regions_open()


def _separated_components(c: Context) -> bool:
    # finite stand-in for Hausdorff components: no incomparable inseparable pairs
    return all(not s.y_pairs(incomparable=True) for s in c.sys.spaces)


def closure_extends(sys: AdjSystem, i: int, j: int) -> bool:
    """Whether f_ij extends to a homeomorphism between the closures of A_ij and A_ji."""
    xi, xj = sys.spaces[i], sys.spaces[j]
    a, b = sys.regions[i, j], sys.regions[j, i]
    ca, cb = xi.closure(a), xj.closure(b)
    extra_a, extra_b = members(ca & ~a), members(cb & ~b)
    if len(extra_a) != len(extra_b):
        return False
    sub_a, inc_a = fintop.subspace(xi, ca)
    sub_b, inc_b = fintop.subspace(xj, cb)
    pos_b = {p: k for k, p in enumerate(inc_b.table)}
    f = sys.maps[i, j]
    for perm in itertools.permutations(extra_b):
        g = dict(f)
        g.update(zip(extra_a, perm))
        h = fintop.FinMap(sub_a, sub_b, tuple(pos_b[g[p]] for p in inc_a.table))
        if fintop.check_embedding(h) and fintop.check_open_map(h):
            return True
    return False


def _closure_extension(c: Context) -> bool:
    return all(closure_extends(c.sys, i, j) for i, j in itertools.permutations(range(c.sys.m), 2)
               if c.sys.regions[i, j])


def _glued_connected(c: Context) -> bool:
    return c.space.is_connected()


def _conclude_connected(c: Context) -> bool:
    return c.space.is_connected()


def _conclude_t1(c: Context) -> bool:
    return c.space.is_T1()


def _conclude_open_embeddings(c: Context) -> bool:
    return all(fintop.check_embedding(phi) and fintop.check_open_map(phi) for phi in c.space.phi)


def _conclude_boundary_y(c: Context) -> bool:
    from .hausdorff import y_set

    sp = c.space
    q = sp.quotient
    for i in range(sp.m):
        image = sp.phi[i].image(sp.system.spaces[i].full)
        bd = q.closure(image) & ~q.interior(image)
        if sp.to_quotient(y_set(sp, sp.from_quotient(image))) != bd:
            return False
    return True


def _conclude_openness_criterion(c: Context) -> bool:
    sp = c.space
    q = sp.quotient
    for s in range(1 << q.n):
        direct = sp.disjoint.is_open(sp.projection.preimage(s))
        if direct != sp.is_open(sp.from_quotient(s)) or direct != q.is_open(s):
            return False
    return True


@dataclass(frozen=True)
class Lemma:
    name: str
    hypotheses: dict
    conclusion: Callable[[Context], bool]
    statement: str


LEMMAS: dict[str, Lemma] = {lem.name: lem for lem in [
    Lemma("connectedness", {"connected_components": _connected_components,
                            "nonempty_regions": _nonempty_regions},
          _conclude_connected, "connected components, pairwise nonempty gluing regions => connected"),
    Lemma("component_graph", {"connected_components": _connected_components,
                              "connected_graph": _connected_graph},
          _conclude_connected, "connected components, connected component graph => connected"),
    Lemma("t1", {"t1_components": _t1_components, "open_maps": _open_maps},
          _conclude_t1, "T1 components, open canonical maps => T1"),
    Lemma("open_embedding", {"open_regions": _open_regions},
          _conclude_open_embeddings, "open gluing regions => canonical maps are open embeddings"),
    Lemma("boundary_y", {"open_regions": _open_regions, "separated_components": _separated_components,
                         "closure_extension": _closure_extension, "connected": _glued_connected},
          _conclude_boundary_y, "boundary of each canonical image equals its Y-set"),
    Lemma("openness_criterion", {}, _conclude_openness_criterion,
          "a saturated set is open iff all its component preimages are open"),
]}


@dataclass
class MineResult:
    lemma: str
    dropped: str | None
    max_points: int
    checked: int = 0
    applicable: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        from .catalog import system_to_json

        return {"lemma": self.lemma, "dropped": self.dropped, "max_points": self.max_points,
                "checked": self.checked, "applicable": self.applicable,
                "counterexamples": [system_to_json(s) for s in self.counterexamples]}


def mine(lemma: str, max_points: int, drop: str | None = None, minimal: bool | None = None) -> MineResult:
    """Check ``lemma`` on every system up to ``max_points`` points.

    With ``drop`` the named hypothesis is removed and, by default, only the
    counterexamples with the fewest points are returned.
    """
    if lemma not in LEMMAS:
        raise AdjunctionError(f"unknown lemma {lemma!r}; known: {', '.join(LEMMAS)}")
    lem = LEMMAS[lemma]
    if drop is not None and drop not in lem.hypotheses:
        raise AdjunctionError(f"{lemma} has no hypothesis {drop!r}; known: {', '.join(lem.hypotheses)}")
    minimal = drop is not None if minimal is None else minimal
    hyps = [h for name, h in lem.hypotheses.items() if name != drop]
    result = MineResult(lemma, drop, max_points)
    best = None
    for sys in enumerate_systems(max_points):
        result.checked += 1
        c = Context(sys)
        if minimal and best is not None and c.points > best:
            continue
        if not all(h(c) for h in hyps):
            continue
        result.applicable += 1
        if not lem.conclusion(c):
            if minimal and (best is None or c.points < best):
                best = c.points
                result.counterexamples = [s for s in result.counterexamples
                                          if sum(x.n for x in s.spaces) <= best]
            result.counterexamples.append(sys)
    result.counterexamples.sort(key=lambda s: (sum(x.n for x in s.spaces), s.m))
    return result
