"""Hausdorff-violating pairs (the relation Y), Y-sets and H-submanifold checks.

On the euclidean backend Y is decided through gluing-region boundaries: for
open regions, ``[x,i] Y [y,j]`` exactly when the classes differ, ``x`` lies on
the boundary of ``A_ij`` and the (continuously extended) map sends ``x`` to
``y``.  On the finite backend Y is read off the explicit quotient: two classes
are related when their minimal open sets meet and neither specialises the
other (specialisation pairs such as a point and a point in its closure are
never separated in a finite space, but they are not gluing artefacts).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .adjunction import (EUCLIDEAN, FINITE, AdjunctionError, GluedPoint, GluedSet,
                         GluedSpace, HypothesisError, sub_embedding)
from .fintop import members
from .regions import DiagAffine, Interval, Region, _pieces


@dataclass(frozen=True)
class YEntry:
    i: int
    j: int
    boundary: Region
    pairing: DiagAffine

    def to_json(self, labels: Sequence[str]) -> dict:
        return {"i": labels[self.i], "j": labels[self.j],
                "boundary": self.boundary.to_json(), "map": self.pairing.to_json()}


@dataclass
class YPairFamily:
    """Finite presentation of Y.

    Euclidean: entries ``(i, j, B, f)`` with ``i < j``: for ``x`` in ``B``,
    ``[x,i] Y [f(x),j]``.  Finite: an explicit list of unordered point pairs.
    """

    space: GluedSpace
    entries: list = field(default_factory=list)
    pairs: list = field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.entries and not self.pairs

    def point_pairs(self) -> list[tuple[GluedPoint, GluedPoint]]:
        """Distinct unordered pairs of classes; requires every boundary to be finite."""
        if self.space.backend == FINITE:
            return list(self.pairs)
        out = set()
        for e in self.entries:
            if not all(c.is_degenerate for cell in e.boundary.cells for c in cell):
                raise AdjunctionError("Y-family has infinitely many pairs")
            for cell in e.boundary.cells:
                x = tuple(c.lo for c in cell)
                p = self.space.canonical_map(e.i, x)
                q = self.space.canonical_map(e.j, e.pairing(x))
                out.add((min(p, q), max(p, q)))
        return sorted(out)

    def to_json(self) -> dict:
        labels = self.space.labels
        if self.space.backend == FINITE:
            return {"pairs": [[p.show(labels), q.show(labels)] for p, q in self.pairs]}
        return {"entries": [e.to_json(labels) for e in self.entries]}


def _require(space: GluedSpace) -> None:
    if space.backend == EUCLIDEAN and not space.system.all_regions_open():
        raise HypothesisError("Y is only decided for systems whose gluing regions are all open")


def _finite_related(space: GluedSpace, a: int, b: int) -> bool:
    q = space.quotient
    return (a != b and q.min_open[a] & q.min_open[b] != 0
            and not q.leq(a, b) and not q.leq(b, a))


def y_related(space: GluedSpace, p: GluedPoint, q: GluedPoint) -> bool:
    _require(space)
    if space.backend == FINITE:
        return _finite_related(space, space.class_index(p), space.class_index(q))
    p, q = space.canon(p), space.canon(q)
    if p == q:
        return False
    sys = space.system
    for rp in space.representatives(p):
        for rq in space.representatives(q):
            i, j = rp.index, rq.index
            if i == j:
                continue
            a = sys.regions[i, j]
            if a.closure().contains(rp.coords) and not a.contains(rp.coords) \
                    and sys.maps[i, j](rp.coords) == rq.coords:
                return True
    return False


def y_pairs(space: GluedSpace) -> YPairFamily:
    _require(space)
    fam = YPairFamily(space)
    sys = space.system
    if space.backend == FINITE:
        n = space.quotient.n
        separated = all(not s.y_pairs(incomparable=True) for s in sys.spaces)
        for a, b in itertools.combinations(range(n), 2):
            if _finite_related(space, a, b):
                # with separated components every pair comes from the gluing
                assert not separated or not any(
                    phi.preimage(1 << a) and phi.preimage(1 << b) for phi in space.phi), \
                    "same-component Y-pair"
                fam.pairs.append((space.point_of_class(a), space.point_of_class(b)))
        return fam
    for i, j in itertools.combinations(range(space.m), 2):
        b = sys.regions[i, j].boundary()
        if not b.is_empty():
            fam.entries.append(YEntry(i, j, b, sys.maps[i, j]))
    return fam


def y_set(space: GluedSpace, w: GluedSet) -> GluedSet:
    """``Y^W``: all points Y-related to some member of ``W``."""
    _require(space)
    if space.backend == FINITE:
        qw = space.to_quotient(w)
        out = 0
        for a in range(space.quotient.n):
            if any(_finite_related(space, a, b) for b in members(qw)):
                out |= 1 << a
        return space.from_quotient(out)
    sys = space.system
    parts = {}
    for i in range(space.m):
        acc = Region.empty(sys.spaces[i].dim)
        for j in range(space.m):
            if i == j or sys.regions[i, j].is_empty():
                continue
            b = sys.regions[i, j].boundary()
            acc = acc | (b & w.parts[j].preimage(sys.maps[i, j]))
        parts[i] = acc
    return space.saturate(parts)


def boundary_eq_y_check(space: GluedSpace, v: GluedSet) -> bool:
    return space.glued_boundary(v) == y_set(space, v)


@dataclass
class HajicekReport:
    open: bool
    connected: bool
    hausdorff: bool
    boundary: GluedSet
    y_set: GluedSet
    cl_y_set: GluedSet
    criterion: bool

    @property
    def is_h_submanifold(self) -> bool:
        return self.open and self.connected and self.hausdorff and self.criterion

    def to_json(self) -> dict:
        return {"open": self.open, "connected": self.connected, "hausdorff": self.hausdorff,
                "criterion": self.criterion, "is_h_submanifold": self.is_h_submanifold,
                "boundary": self.boundary.to_json(), "y_set": self.y_set.to_json(),
                "cl_y_set": self.cl_y_set.to_json()}


def hajicek_check(space: GluedSpace, v: GluedSet) -> HajicekReport:
    """Open, connected, internally Hausdorff, and ``bd V = Cl(Y^V)``."""
    ys = y_set(space, v)
    cl = space.glued_closure(ys)
    bd = space.glued_boundary(v)
    return HajicekReport(open=space.is_open(v), connected=space.is_connected(v),
                         hausdorff=(ys & v).is_empty(), boundary=bd, y_set=ys,
                         cl_y_set=cl, criterion=bd == cl)


def _relatively_open(space: GluedSpace, i: int, part, within) -> bool:
    ops = space._ops
    rest = ops.diff(within, part)
    return ops.is_empty(ops.inter(part, ops.closure(i, rest)))


def _is_connected_part(space: GluedSpace, i: int, s) -> bool:
    if space.backend == FINITE:
        return space.system.spaces[i].is_connected(s)
    return s.is_connected()


def y_boundary_openness_check(space: GluedSpace, v: GluedSet) -> bool:
    """``Y^V`` meets each gluing-region boundary in a relatively open set.

    When such a boundary is connected, a nonempty meeting forces containment,
    which is asserted.
    """
    if not boundary_eq_y_check(space, v):
        raise HypothesisError("needs bd V = Y^V")
    ys = y_set(space, v)
    ops = space._ops
    ok = True
    for i, j in itertools.permutations(range(space.m), 2):
        a = space.system.regions[i, j]
        bd = ops.diff(ops.closure(i, a), ops.interior(i, a))
        if ops.is_empty(bd):
            continue
        meet = ops.inter(ys.parts[i], bd)
        if not _relatively_open(space, i, meet, bd):
            ok = False
        elif not ops.is_empty(meet) and _is_connected_part(space, i, bd):
            assert ops.is_empty(ops.diff(bd, meet)), "connected boundary only partly in Y^V"
    return ok


def subsystem_preservation_check(space: GluedSpace, v: GluedSet, indices) -> bool:
    """Recompute ``bd V`` and ``Y^V`` inside the sub-adjunction space on ``indices``."""
    if not boundary_eq_y_check(space, v):
        raise HypothesisError("needs bd V = Y^V in the full space")
    emb = sub_embedding(space.system, indices)
    sub_v = emb.restrict(emb.full.saturate(list(v.parts)))
    return boundary_eq_y_check(emb.sub, sub_v)


@dataclass
class ExtensionCheck:
    hypotheses: bool
    contained: bool

    @property
    def ok(self) -> bool:
        return not self.hypotheses or self.contained

    def __bool__(self) -> bool:
        return self.ok


def extension_lemma_check(space: GluedSpace, v: GluedSet, u: GluedSet) -> ExtensionCheck:
    """If ``V`` meets ``U`` and ``U`` avoids ``Y^V``, then ``U`` lies in ``V``."""
    if not hajicek_check(space, v).is_h_submanifold:
        raise HypothesisError("V is not an H-submanifold")
    if not (space.is_open(u) and space.is_connected(u) and (y_set(space, u) & u).is_empty()):
        raise HypothesisError("U must be open, connected and Hausdorff")
    hyp = not (v & u).is_empty() and (u & y_set(space, v)).is_empty()
    return ExtensionCheck(hyp, u <= v)


# -- uniqueness experiments ---------------------------------------------------

def default_grid(space: GluedSpace) -> list[Fraction]:
    """Region endpoints, their midpoints, and one step beyond each end."""
    pts = sorted({e for a in space.system.regions.values() for e in a.endpoints(0)})
    if not pts:
        return [Fraction(0)]
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts + mids + [pts[0] - 1, pts[-1] + 1]))


def _open_unions(grid: Sequence) -> list[Region]:
    """Open subsets of the line that are unions of grid pieces."""
    pieces = _pieces(grid)
    gaps = pieces[0::2]
    points = pieces[1::2]
    out = []
    for choice in itertools.product((False, True), repeat=len(gaps)):
        optional = [k for k in range(len(points)) if choice[k] and choice[k + 1]]
        for extra in itertools.product((False, True), repeat=len(optional)):
            cells = [(g,) for g, c in zip(gaps, choice) if c]
            cells += [(points[k],) for k, e in zip(optional, extra) if e]
            out.append(Region(1, cells))
    return out


def enumerate_h_candidates(space: GluedSpace, grid: Sequence | None = None) -> list[GluedSet]:
    """Open, connected, Hausdorff glued sets built from grid pieces."""
    if space.backend != EUCLIDEAN or any(s.dim != 1 for s in space.system.spaces):
        raise AdjunctionError("candidate enumeration supports one-dimensional euclidean systems")
    _require(space)
    grid = default_grid(space) if grid is None else sorted({Fraction(g) for g in grid})
    if not grid:
        raise AdjunctionError("empty grid")
    sys = space.system
    options = _open_unions(grid)
    m = space.m
    ops = space._ops
    # a tuple is saturated iff V_k meets A_ki exactly in f_ik(V_i) for every i < k
    images = [[[ops.image(i, k, c) for c in options] for k in range(m)] for i in range(m)]
    by_key = []
    for k in range(m):
        index: dict = {}
        for n, c in enumerate(options):
            index.setdefault(tuple(c & sys.regions[k, i] for i in range(k)), []).append(n)
        by_key.append(index)
    found: list[list[Region]] = []

    def extend(chosen: list[int]) -> None:
        k = len(chosen)
        if k == m:
            found.append([options[n] for n in chosen])
            return
        key = tuple(images[i][k][chosen[i]] for i in range(k))
        for n in by_key[k].get(key, ()):
            chosen.append(n)
            extend(chosen)
            chosen.pop()

    extend([])
    out = []
    for parts in found:
        v = GluedSet(space, parts)
        if v.is_empty():
            continue
        assert space.saturate(parts) == v
        if (y_set(space, v) & v).is_empty() and space.is_connected(v):
            out.append(v)
    return out


def uniqueness_experiment(space: GluedSpace, grid: Sequence | None = None) -> list[GluedSet]:
    return [v for v in enumerate_h_candidates(space, grid) if boundary_eq_y_check(space, v)]


# -- non-transitivity and DOT output -----------------------------------------

def boundary_points(space: GluedSpace) -> list[GluedPoint]:
    """Classes involved in some Y-pair (sample points for infinite boundaries)."""
    fam = y_pairs(space)
    if space.backend == FINITE:
        return sorted({p for pair in fam.pairs for p in pair})
    pts = set()
    for e in fam.entries:
        inner, frontier = e.boundary.sample_points()
        for x in inner + frontier:
            if e.boundary.contains(x):
                pts.add(space.canonical_map(e.i, x))
                pts.add(space.canonical_map(e.j, e.pairing(x)))
    return sorted(pts)


def y_transitivity_report(space: GluedSpace) -> list[tuple[GluedPoint, GluedPoint, GluedPoint]]:
    """Triples ``p Y q Y r`` with ``p`` and ``r`` distinct and not Y-related."""
    pts = boundary_points(space)
    rel = {(p, q) for p in pts for q in pts if y_related(space, p, q)}
    out = []
    for p, q, r in itertools.permutations(pts, 3):
        if p < r and (p, q) in rel and (q, r) in rel and (p, r) not in rel:
            out.append((p, q, r))
    return out


def y_graph_dot(space: GluedSpace) -> str:
    pts = boundary_points(space)
    labels = space.labels
    lines = ["graph Y {"]
    for p in pts:
        lines.append(f'  "{p.show(labels)}";')
    for p, q in itertools.combinations(pts, 2):
        if y_related(space, p, q):
            lines.append(f'  "{p.show(labels)}" -- "{q.show(labels)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
