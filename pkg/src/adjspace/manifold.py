"""Manifold layer: adjoined-manifold hypotheses, charts, the representation
round-trip, and an exact checker for partitions of unity built from
piecewise-linear functions on one-dimensional systems.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from . import fintop
from .adjunction import (EUCLIDEAN, FINITE, AdjSystem, AdjunctionError, GluedPoint, GluedSet,
                         GluedSpace, HypothesisError, box_around, chart_radius, component_graph)
from .hausdorff import y_pairs
from .regions import DiagAffine, Interval, NEG_INF, POS_INF, Region, _isinf, rat


# -- adjoined manifolds and charts -------------------------------------------

@dataclass
class AdjoinedReport:
    valid: bool
    regions_open: bool
    open_embeddings: bool
    countable: bool
    witness: object = None
    where: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.valid and self.regions_open and self.open_embeddings and self.countable

    def to_json(self) -> dict:
        out = {"valid": self.valid, "regions_open": self.regions_open,
               "open_embeddings": self.open_embeddings, "countable": self.countable, "ok": self.ok}
        if self.witness is not None:
            out["witness"] = [str(c) for c in self.witness] if isinstance(self.witness, tuple) else self.witness
            out["where"] = list(self.where)
        return out


def is_adjoined_manifold(sys: AdjSystem) -> AdjoinedReport:
    """Open gluing regions, open-embedding gluing maps, countable (here finite) index set."""
    valid = sys.validate().ok
    witness = where = None
    regions_open = True
    for (i, j), a in sorted(sys.regions.items()):
        if sys.backend == FINITE:
            bad = fintop.members(a & ~sys.spaces[i].interior(a))
            bad = bad[0] if bad else None
        else:
            rest = a - a.interior()
            bad = None if rest.is_empty() else rest.witness()
        if bad is not None:
            regions_open = False
            witness, where = bad, (i, j)
            break
    embeddings = True
    for (i, j), a in sys.regions.items():
        if sys.backend == FINITE:
            if a and i != j:
                sub, _ = fintop.subspace(sys.spaces[i], a)
                f = fintop.FinMap(sub, sys.spaces[j], tuple(sys.maps[i, j][x] for x in fintop.members(a)))
                image_open = sys.spaces[j].is_open(f.image(sub.full))
                embeddings &= fintop.check_embedding(f) and image_open
        elif not a.is_empty():
            # increasing diagonal affine maps are homeomorphisms of R^d
            embeddings &= a.map(sys.maps[i, j]).is_open() or not a.is_open()
    return AdjoinedReport(valid, regions_open, embeddings, True, witness, where)


@dataclass(frozen=True)
class Chart:
    index: int
    domain: Region
    map: DiagAffine

    def to_json(self) -> dict:
        return {"index": self.index, "domain": self.domain.to_json(), "map": self.map.to_json()}


def chart_at(space: GluedSpace, p: GluedPoint) -> Chart:
    """Box chart around the canonical representative of ``p``.

    Radius: ``min(1, half the distance to the nearest other finite region endpoint)``.
    """
    if space.backend != EUCLIDEAN:
        raise AdjunctionError("charts exist only on the euclidean backend")
    rep = is_adjoined_manifold(space.system)
    if not rep.ok:
        raise HypothesisError("the system is not an adjoined manifold")
    p = space.canon(p)
    r = chart_radius(space.system, p.index, p.coords)
    domain = box_around(p.coords, r)
    chart = Chart(p.index, domain, DiagAffine.identity(len(p.coords)))
    inner, frontier = domain.sample_points()
    pts = [x for x in inner + frontier if domain.contains(x)]
    classes = [space.canonical_map(p.index, x) for x in pts]
    for (x, cx), (y, cy) in itertools.combinations(zip(pts, classes), 2):
        assert space.point_eq(cx, cy) == (x == y), "chart is not injective"
    return chart


# -- representation round-trip -------------------------------------------------

@dataclass
class RoundtripReport:
    valid: bool
    isomorphic: bool
    details: dict

    def to_json(self) -> dict:
        return {"valid": self.valid, "isomorphic": self.isomorphic, "details": self.details}


def _fit_affine(space: GluedSpace, i: int, j: int, a: Region) -> DiagAffine:
    """Recover the coordinate change from component i to j on ``a`` from class data."""
    def rep_in(x: tuple) -> tuple:
        for q in space.representatives(GluedPoint(i, x)):
            if q.index == j:
                return q.coords
        raise AssertionError("point has no representative in the target component")

    inner, _ = a.sample_points()
    x = next(p for p in inner if a.contains(p))
    r = Fraction(1)
    while not box_around(x, r) <= a:
        r /= 2
    h = r / 2
    y0 = rep_in(x)
    coef, off = [], []
    for axis in range(len(x)):
        xs = list(x)
        xs[axis] += h
        y1 = rep_in(tuple(xs))
        slope = (y1[axis] - y0[axis]) / h
        coef.append(slope)
        off.append(y0[axis] - slope * x[axis])
    f = DiagAffine(tuple(coef), tuple(off))
    pts = a.sample_points()
    for p in pts[0] + pts[1]:
        if a.contains(p):
            assert f(p) == rep_in(p), "gluing is not affine on the overlap"
    return f


def representation_roundtrip(space: GluedSpace) -> RoundtripReport:
    """Rebuild a system from the canonical images and compare it with the original.

    The rebuilt regions are the pairwise overlaps ``phi_i^{-1}(phi_j(X_j))`` and the
    rebuilt maps send a point to its representative in the other component.
    """
    sys = space.system
    m = space.m
    images = [space.canonical_image(j) for j in range(m)]
    regions, maps = {}, {}
    for i, j in itertools.product(range(m), repeat=2):
        a = images[j].parts[i]
        regions[i, j] = a
        if sys.backend == FINITE:
            maps[i, j] = {x: next(q.coords for q in space.representatives(GluedPoint(i, x)) if q.index == j)
                          for x in fintop.members(a)}
        elif not a.is_empty():
            maps[i, j] = _fit_affine(space, i, j, a)
    if sys.backend == EUCLIDEAN and not is_adjoined_manifold(sys).ok:
        raise HypothesisError("round-trip needs an adjoined manifold")
    rebuilt = AdjSystem(sys.spaces, regions, maps, labels=sys.labels, name=f"rebuilt({sys.name})")
    valid = rebuilt.validate().ok
    details: dict = {}
    if not valid:
        return RoundtripReport(False, False, details)
    new = GluedSpace(rebuilt)
    details["components"] = new.m == m
    details["regions"] = all(rebuilt.regions[k] == sys.regions[k] for k in sys.regions)
    details["component_graph"] = nx.utils.graphs_equal(component_graph(rebuilt), component_graph(sys))
    if sys.backend == FINITE:
        details["maps"] = all(rebuilt.maps[k] == sys.maps[k] for k in sys.maps)
        iso = fintop.find_isomorphism(space.quotient, new.quotient)
        details["homeomorphism"] = iso is not None
        details["y_pairs"] = len(y_pairs(space).pairs) == len(y_pairs(new).pairs)
    else:
        details["maps"] = all(rebuilt.maps[k].agrees_on(sys.maps[k], sys.regions[k])
                              for k in sys.maps if not sys.regions[k].is_empty())
        old_y, new_y = y_pairs(space).entries, y_pairs(new).entries
        details["y_pairs"] = (len(old_y) == len(new_y) and all(
            (e.i, e.j, e.boundary) == (g.i, g.j, g.boundary) and e.pairing.agrees_on(g.pairing, e.boundary)
            for e, g in zip(old_y, new_y)))
    return RoundtripReport(True, all(details.values()), details)


# -- piecewise-linear functions ----------------------------------------------------

@dataclass(frozen=True)
class PLPiece:
    """Continuous piecewise-linear function on R with constant tails."""

    breaks: tuple
    values: tuple
    left_tail: Fraction
    right_tail: Fraction

    def __post_init__(self):
        breaks = tuple(rat(b) for b in self.breaks)
        values = tuple(rat(v) for v in self.values)
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "left_tail", rat(self.left_tail))
        object.__setattr__(self, "right_tail", rat(self.right_tail))
        if len(breaks) != len(values):
            raise ValueError("one value per breakpoint required")
        if any(a >= b for a, b in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must increase strictly")
        if breaks:
            if self.left_tail != values[0] or self.right_tail != values[-1]:
                raise ValueError("tails must continue the extreme values")
        elif self.left_tail != self.right_tail:
            raise ValueError("a function without breakpoints is constant")

    @classmethod
    def constant(cls, c) -> PLPiece:
        return cls((), (), c, c)

    @classmethod
    def from_points(cls, breaks, values) -> PLPiece:
        values = tuple(values)
        return cls(tuple(breaks), values, values[0], values[-1])

    def __call__(self, x) -> Fraction:
        x = rat(x)
        b, v = self.breaks, self.values
        if not b or x <= b[0]:
            return self.left_tail
        if x >= b[-1]:
            return self.right_tail
        for k in range(len(b) - 1):
            if b[k] <= x <= b[k + 1]:
                t = (x - b[k]) / (b[k + 1] - b[k])
                return v[k] + t * (v[k + 1] - v[k])
        raise AssertionError(x)

    def pullback(self, f: DiagAffine) -> PLPiece:
        """``self o f`` for an increasing affine map of the line."""
        a, c = f.a[0], f.b[0]
        return PLPiece(tuple((x - c) / a for x in self.breaks), self.values, self.left_tail, self.right_tail)

    def zero_set(self) -> Region:
        cells: list[Interval] = []
        b, v = self.breaks, self.values
        if not b:
            return Region.full(1) if self.left_tail == 0 else Region.empty(1)
        if self.left_tail == 0:
            cells.append(Interval(NEG_INF, False, b[0], True))
        if self.right_tail == 0:
            cells.append(Interval(b[-1], True, POS_INF, False))
        for k, x in enumerate(b):
            if v[k] == 0:
                cells.append(Interval.at(x))
        for k in range(len(b) - 1):
            v0, v1 = v[k], v[k + 1]
            if v0 == 0 and v1 == 0:
                cells.append(Interval.closed(b[k], b[k + 1]))
            elif v0 * v1 < 0:
                cells.append(Interval.at(b[k] + (b[k + 1] - b[k]) * v0 / (v0 - v1)))
        return Region(1, [(c,) for c in cells])

    def support_set(self) -> Region:
        """Where the function is nonzero (its closure is the support)."""
        return ~self.zero_set()

    def to_json(self) -> dict:
        return {"breaks": [str(x) for x in self.breaks], "values": [str(x) for x in self.values],
                "left_tail": str(self.left_tail), "right_tail": str(self.right_tail)}

    @classmethod
    def from_json(cls, data: dict) -> PLPiece:
        try:
            return cls(tuple(data.get("breaks", ())), tuple(data.get("values", ())),
                       data["left_tail"], data["right_tail"])
        except KeyError as exc:
            raise ValueError(f"PL piece is missing {exc}") from None


def _sum(pieces: Sequence[PLPiece]) -> PLPiece:
    breaks = sorted({b for p in pieces for b in p.breaks})
    if not breaks:
        return PLPiece.constant(sum((p.left_tail for p in pieces), Fraction(0)))
    return PLPiece.from_points(breaks, [sum((p(b) for p in pieces), Fraction(0)) for b in breaks])


def _test_points(f: PLPiece, g: PLPiece, iv: Interval) -> list[Fraction]:
    """Points on which two PL functions agree iff they agree on ``iv``."""
    if iv.is_degenerate:
        return [iv.lo]
    pts = sorted({x for x in f.breaks + g.breaks if x in iv} | set(iv.endpoints()))
    if not pts:
        return [Fraction(0), Fraction(1)]
    out = list(pts)
    out += [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    if _isinf(iv.lo):
        out.append(pts[0] - 1)
    if _isinf(iv.hi):
        out.append(pts[-1] + 1)
    if len(pts) == 1 and not (_isinf(iv.lo) or _isinf(iv.hi)):
        out.append(iv.witness())
    return sorted(set(out))


def _first_disagreement(f: PLPiece, g: PLPiece, region: Region) -> Fraction | None:
    for (iv,) in region.cells:
        for x in _test_points(f, g, iv):
            if f(x) == g(x):
                continue
            if x in iv:
                return x
            # an excluded endpoint: the adjacent linear stretch disagrees nearby
            for y in _test_points(f, g, iv):
                if y in iv and f(y) != g(y):
                    return y
            inside = iv.witness()
            t = (x + inside) / 2
            while f(t) == g(t) or t not in iv:
                t = (x + t) / 2
            return t
    return None


@dataclass(frozen=True)
class PLFunction:
    """A function on the glued space, one :class:`PLPiece` per component."""

    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def to_json(self) -> list:
        return [p.to_json() for p in self.pieces]

    @classmethod
    def from_json(cls, data) -> PLFunction:
        if not isinstance(data, list):
            raise ValueError("a PL function is a list of per-component pieces")
        return cls(tuple(PLPiece.from_json(d) for d in data))


class IllFormedCandidate(AdjunctionError):
    def __init__(self, message: str, witness: GluedPoint | None = None):
        self.witness = witness
        super().__init__(message)


@dataclass
class PouResult:
    accepted: bool
    axiom: str | None = None
    witness: GluedPoint | None = None
    member: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        if self.accepted:
            return {"verdict": "accept"}
        return {"verdict": "reject", "axiom": self.axiom, "member": self.member,
                "witness": self.witness.show(labels) if self.witness else None, "detail": self.detail}


def check_well_defined(space: GluedSpace, fn: PLFunction) -> None:
    """Raise :class:`IllFormedCandidate` unless the pieces agree across every gluing."""
    sys = space.system
    if len(fn.pieces) != space.m:
        raise IllFormedCandidate(f"expected {space.m} pieces, got {len(fn.pieces)}")
    for i, j in itertools.permutations(range(space.m), 2):
        a = sys.regions[i, j]
        if a.is_empty():
            continue
        other = fn.pieces[j].pullback(sys.maps[i, j])
        x = _first_disagreement(fn.pieces[i], other, a)
        if x is not None:
            p = space.canonical_map(i, (x,))
            raise IllFormedCandidate(
                f"pieces {sys.labels[i]} and {sys.labels[j]} disagree at {p.show(sys.labels)}", p)


def pou_check(space: GluedSpace, cover: Sequence[GluedSet], candidate: Sequence[PLFunction]) -> PouResult:
    """Check range, support, local finiteness and the sum of a PL partition of unity."""
    sys = space.system
    if space.backend != EUCLIDEAN or any(s.dim != 1 for s in sys.spaces):
        raise AdjunctionError("partitions of unity are checked on one-dimensional euclidean systems")
    if len(cover) != len(candidate):
        raise AdjunctionError("one function per cover member required")
    for u in cover:
        if not space.is_open(u):
            raise HypothesisError("cover members must be open")
    union = space.empty()
    for u in cover:
        union = union | u
    if union != space.whole():
        raise HypothesisError("the cover does not cover the space")
    for fn in candidate:
        check_well_defined(space, fn)
    for k, fn in enumerate(candidate):
        for i, piece in enumerate(fn.pieces):
            vals = list(piece.values) + [piece.left_tail]
            for x, v in zip(piece.breaks + (None,), vals):
                if not 0 <= v <= 1:
                    at = x if x is not None else (piece.breaks[0] - 1 if piece.breaks else Fraction(0))
                    return PouResult(False, "range", space.canonical_map(i, (at,)), k,
                                     f"value {v} outside [0,1]")
    for k, (fn, u) in enumerate(zip(candidate, cover)):
        nonzero = space.saturate([p.support_set() for p in fn.pieces])
        supp = space.glued_closure(nonzero)
        outside = supp - u
        if not outside.is_empty():
            return PouResult(False, "support", outside.witness(), k,
                             "support is not contained in the cover member")
    # local finiteness holds for every finite family
    one = PLPiece.constant(1)
    for i in range(space.m):
        total = _sum([fn.pieces[i] for fn in candidate])
        x = _first_disagreement(total, one, Region.full(1))
        if x is not None:
            return PouResult(False, "sum", space.canonical_map(i, (x,)), None,
                             f"functions sum to {total(x)}")
    return PouResult(True)


def random_candidate(space: GluedSpace, size: int, rng: random.Random,
                     grid: Sequence = (-2, -1, 0, 1, 2)) -> list[PLFunction]:
    """Random well-defined PL functions with values in [0,1] and breakpoints on ``grid``.

    Every region endpoint is a breakpoint, and breakpoints glued by the maps
    (or by their extensions to region closures) share one random value, so the
    pieces agree across gluings.  Nothing is normalised afterwards.
    """
    from networkx.utils import UnionFind

    sys = space.system
    grid = [rat(g) for g in grid]
    cuts = sorted({e for a in sys.regions.values() for e in a.endpoints(0)})
    out = []
    for _ in range(size):
        breaks = sorted(set(rng.sample(grid, rng.randint(1, len(grid)))) | set(cuts))
        uf = UnionFind()
        for i, j in itertools.permutations(range(space.m), 2):
            closure = sys.regions[i, j].closure()
            for b in breaks:
                if closure.contains((b,)):
                    uf.union((i, b), (j, sys.maps[i, j]((b,))[0]))
        shared: dict = {}
        pieces = []
        for i in range(space.m):
            vals = []
            for b in breaks:
                key = uf[(i, b)]
                if key not in shared:
                    shared[key] = Fraction(rng.randint(0, 4), 4)
                vals.append(shared[key])
            pieces.append(PLPiece.from_points(breaks, vals))
        fn = PLFunction(tuple(pieces))
        check_well_defined(space, fn)
        out.append(fn)
    return out
