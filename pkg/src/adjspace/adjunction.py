"""Adjunction systems, their validation, and the glued (adjunction) space.

An :class:`AdjSystem` is an indexed family of component spaces ``X_i`` with
gluing regions ``A_ij`` (subsets of ``X_i``) and gluing maps ``f_ij``.  Two
backends are supported:

* ``finite``: components are :class:`~adjspace.fintop.FinSpace`, regions are
  point bitmasks and maps are dicts ``{x: f(x)}`` defined on ``A_ij``;
* ``euclidean``: components are copies of R^d, regions are
  :class:`~adjspace.regions.Region` and maps are
  :class:`~adjspace.regions.DiagAffine`.

Indices are ``0..m-1``; labels (default ``"1".."m"``) are display-only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx
from networkx.utils import UnionFind

from . import fintop
from .fintop import FinMap, FinSpace, members
from .regions import DiagAffine, Interval, Region, rat

FINITE = "finite"
EUCLIDEAN = "euclidean"


class AdjunctionError(ValueError):
    """Malformed input or a failed precondition."""


class InvalidSystemError(AdjunctionError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("invalid adjunction system:\n" + report.summary())


class HypothesisError(AdjunctionError):
    """An operation's topological hypothesis does not hold for this space."""


@dataclass(frozen=True)
class EuclideanSpace:
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise AdjunctionError(f"unsupported dimension {self.dim}")


@dataclass(frozen=True)
class Violation:
    axiom: str
    i: int
    j: int
    k: int | None
    witness: object
    detail: str

    def show(self, labels: Sequence[str] | None = None) -> str:
        names = [labels[t] if labels else str(t + 1) for t in (self.i, self.j, self.k) if t is not None]
        return f"{self.axiom} ({','.join(names)}): {self.detail} [witness {_fmt_coord(self.witness)}]"

    def __str__(self) -> str:
        return self.show()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    labels: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(v.show(self.labels or None) for v in self.violations)

    def to_json(self) -> dict:
        return {"valid": self.ok,
                "violations": [{"axiom": v.axiom, "i": v.i + 1, "j": v.j + 1,
                                "k": None if v.k is None else v.k + 1,
                                "witness": _json_coord(v.witness), "detail": v.detail}
                               for v in self.violations]}


def _fmt_coord(x) -> str:
    if isinstance(x, tuple):
        return x[0].__str__() if len(x) == 1 else "(" + ",".join(str(c) for c in x) + ")"
    return str(x)


def _json_coord(x):
    if isinstance(x, tuple):
        return [str(c) for c in x]
    return x


class AdjSystem:
    """Spaces ``X_i``, regions ``A_ij`` and maps ``f_ij`` over one backend.

    Omitted ``(i, j)`` entries default to the empty region for ``i != j`` and
    to ``A_ii = X_i`` with the identity map on the diagonal.  Euclidean maps
    default to the identity.
    """

    def __init__(self, spaces: Sequence, regions: Mapping | None = None,
                 maps: Mapping | None = None, labels: Sequence[str] | None = None,
                 name: str | None = None):
        spaces = [EuclideanSpace(s) if isinstance(s, int) else s for s in spaces]
        if not spaces:
            raise AdjunctionError("an adjunction system needs at least one space")
        if all(isinstance(s, FinSpace) for s in spaces):
            self.backend = FINITE
        elif all(isinstance(s, EuclideanSpace) for s in spaces):
            self.backend = EUCLIDEAN
        else:
            raise AdjunctionError("spaces must all be FinSpace or all EuclideanSpace")
        self.spaces = tuple(spaces)
        self.m = len(spaces)
        self.labels = tuple(labels) if labels else tuple(str(i + 1) for i in range(self.m))
        if len(self.labels) != self.m:
            raise AdjunctionError("one label per space required")
        self.name = name
        regions = dict(regions or {})
        maps = dict(maps or {})
        for key in list(regions) + list(maps):
            i, j = key
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise AdjunctionError(f"index pair {key} out of range for {self.m} spaces")
        self.regions: dict = {}
        self.maps: dict = {}
        for i, j in itertools.product(range(self.m), repeat=2):
            self.regions[i, j], self.maps[i, j] = self._normalise(i, j, regions.get((i, j)),
                                                                maps.get((i, j)))
        self._report: ValidationReport | None = None

    def _normalise(self, i: int, j: int, region, fmap):
        if self.backend == FINITE:
            xi, xj = self.spaces[i], self.spaces[j]
            if region is None:
                region = xi.full if i == j else 0
            region = xi._check(region if isinstance(region, int) else fintop.mask(region))
            if fmap is None:
                if i == j:
                    fmap = {x: x for x in members(region)}
                elif region:
                    raise AdjunctionError(f"missing gluing map for nonempty A_{i}{j}")
                else:
                    fmap = {}
            fmap = {int(k): int(v) for k, v in dict(fmap).items()}
            if set(fmap) != set(members(region)):
                raise AdjunctionError(f"map f_{i}{j} must be defined exactly on A_{i}{j}")
            if any(not 0 <= v < xj.n for v in fmap.values()):
                raise AdjunctionError(f"map f_{i}{j} leaves X_{j}")
            return region, fmap
        di, dj = self.spaces[i].dim, self.spaces[j].dim
        if region is None:
            region = Region.full(di) if i == j else Region.empty(di)
        if not isinstance(region, Region):
            raise AdjunctionError(f"A_{i}{j} must be a Region")
        if region.dim != di:
            raise AdjunctionError(f"A_{i}{j} has dimension {region.dim}, X_{i} has {di}")
        if fmap is None:
            fmap = DiagAffine.identity(di)
        if not region.is_empty() and di != dj:
            raise AdjunctionError(f"cannot glue R^{di} to R^{dj}")
        if fmap.dim != di:
            raise AdjunctionError(f"f_{i}{j} has the wrong dimension")
        return region, fmap

    def __repr__(self) -> str:
        return f"AdjSystem({self.name or self.backend}, m={self.m})"

    def validate(self) -> ValidationReport:
        if self._report is None:
            self._report = validate(self)
        return self._report

    def all_regions_open(self) -> bool:
        if self.backend == FINITE:
            return all(self.spaces[i].is_open(self.regions[i, j])
                       for i, j in itertools.product(range(self.m), repeat=2))
        return all(r.is_open() for r in self.regions.values())

    def apply(self, i: int, j: int, x):
        """``f_ij(x)`` for a point ``x`` of ``A_ij``."""
        if self.backend == FINITE:
            return self.maps[i, j][x]
        return self.maps[i, j](x)

    def in_region(self, i: int, j: int, x) -> bool:
        if self.backend == FINITE:
            return bool(self.regions[i, j] >> x & 1)
        return self.regions[i, j].contains(x)


# -- validation ---------------------------------------------------------------

def validate(sys: AdjSystem) -> ValidationReport:
    """Check axioms A1-A3 and that each gluing map is an embedding of its region.

    Axiom failures are collected with witnesses rather than raised.
    """
    report = ValidationReport(labels=sys.labels)
    if sys.backend == FINITE:
        _validate_finite(sys, report.violations)
    else:
        _validate_euclidean(sys, report.violations)
    return report


def _validate_finite(sys: AdjSystem, out: list[Violation]) -> None:
    m = sys.m
    for i in range(m):
        xi = sys.spaces[i]
        if sys.regions[i, i] != xi.full:
            w = members(xi.full & ~sys.regions[i, i])[0]
            out.append(Violation("A1", i, i, None, w, "A_ii is not the whole space"))
        bad = [x for x, y in sys.maps[i, i].items() if x != y]
        if bad:
            out.append(Violation("A1", i, i, None, bad[0], "f_ii is not the identity"))
    for i, j in itertools.product(range(m), repeat=2):
        a_ij, f_ij = sys.regions[i, j], sys.maps[i, j]
        image = fintop.mask(f_ij.values())
        for x in members(a_ij):
            if not sys.regions[j, i] >> f_ij[x] & 1:
                out.append(Violation("A2", i, j, None, x, "f_ij(x) lies outside A_ji"))
                break
        else:
            missed = members(sys.regions[j, i] & ~image)
            if missed:
                out.append(Violation("A2", i, j, None, missed[0],
                                     "A_ji is not the image of A_ij (witness in X_j)"))
            for x in members(a_ij):
                if sys.maps[j, i].get(f_ij[x]) != x:
                    out.append(Violation("A2", i, j, None, x, "f_ji(f_ij(x)) != x"))
                    break
        for k in range(m):
            for a in members(a_ij & sys.regions[i, k]):
                y = f_ij[a]
                if not sys.regions[j, k] >> y & 1:
                    out.append(Violation("A3", i, j, k, a, "f_ij(a) lies outside A_jk"))
                    break
                if sys.maps[j, k][y] != sys.maps[i, k][a]:
                    out.append(Violation("A3", i, j, k, a, "f_ik(a) != f_jk(f_ij(a))"))
                    break
        if a_ij and i != j:
            sub, _ = fintop.subspace(sys.spaces[i], a_ij)
            pts = members(a_ij)
            emb = FinMap(sub, sys.spaces[j], tuple(f_ij[x] for x in pts))
            if not fintop.check_embedding(emb):
                w = next((x for x in pts if not _embeds_at(sys, i, j, x)), pts[0])
                out.append(Violation("embedding", i, j, None, w,
                                     "f_ij is not a topological embedding of A_ij"))


def _embeds_at(sys: AdjSystem, i: int, j: int, x: int) -> bool:
    a_ij, f = sys.regions[i, j], sys.maps[i, j]
    local = sys.spaces[i].min_open[x] & a_ij
    img = fintop.mask(f[p] for p in members(local))
    return img == sys.spaces[j].min_open[f[x]] & fintop.mask(f.values())


def _validate_euclidean(sys: AdjSystem, out: list[Violation]) -> None:
    m = sys.m
    for i in range(m):
        full = Region.full(sys.spaces[i].dim)
        if sys.regions[i, i] != full:
            out.append(Violation("A1", i, i, None, (full - sys.regions[i, i]).witness(),
                                 "A_ii is not the whole space"))
        if not sys.maps[i, i].is_identity:
            out.append(Violation("A1", i, i, None, None, "f_ii is not the identity"))
    for i, j in itertools.product(range(m), repeat=2):
        a_ij, f_ij = sys.regions[i, j], sys.maps[i, j]
        if a_ij.is_empty() and sys.regions[j, i].is_empty():
            continue
        image = a_ij.map(f_ij)
        extra = image - sys.regions[j, i]
        if not extra.is_empty():
            w = f_ij.inverse()(extra.witness())
            out.append(Violation("A2", i, j, None, w, "f_ij(A_ij) is not contained in A_ji"))
        missing = sys.regions[j, i] - image
        if not missing.is_empty():
            out.append(Violation("A2", i, j, None, missing.witness(),
                                 "A_ji is not the image of A_ij (witness in X_j)"))
        if not sys.maps[j, i].compose(f_ij).agrees_on(DiagAffine.identity(f_ij.dim), a_ij):
            out.append(Violation("A2", i, j, None, a_ij.witness(), "f_ji o f_ij is not the identity"))
        for k in range(m):
            both = a_ij & sys.regions[i, k]
            if both.is_empty():
                continue
            outside = both.map(f_ij) - sys.regions[j, k]
            if not outside.is_empty():
                out.append(Violation("A3", i, j, k, f_ij.inverse()(outside.witness()),
                                     "f_ij(a) lies outside A_jk"))
                continue
            if not sys.maps[j, k].compose(f_ij).agrees_on(sys.maps[i, k], both):
                w = next(p for p in both.sample_points()[0] + both.sample_points()[1]
                         if both.contains(p)
                         and sys.maps[j, k](f_ij(p)) != sys.maps[i, k](p)) \
                    if _disagree_somewhere(sys, i, j, k, both) else both.witness()
                out.append(Violation("A3", i, j, k, w, "f_ik(a) != f_jk(f_ij(a))"))


def _disagree_somewhere(sys, i, j, k, both) -> bool:
    g = sys.maps[j, k].compose(sys.maps[i, j])
    pts = both.sample_points()
    return any(both.contains(p) and g(p) != sys.maps[i, k](p) for p in pts[0] + pts[1])


# -- glued points and sets ----------------------------------------------------

@dataclass(frozen=True, order=True)
class GluedPoint:
    """Equivalence class ``[x, i]`` held by a representative.

    Points produced by :class:`GluedSpace` use the canonical representative
    (smallest component index), so ``==`` is class equality for those.
    """

    index: int
    coords: object

    def show(self, labels: Sequence[str] | None = None) -> str:
        lab = labels[self.index] if labels else str(self.index + 1)
        return f"[{_fmt_coord(self.coords)},{lab}]"

    def __str__(self) -> str:
        return self.show()


class GluedSet:
    """Saturated subset of a glued space, stored per component."""

    __slots__ = ("space", "parts")

    def __init__(self, space: GluedSpace, parts: Sequence):
        self.space = space
        self.parts = tuple(parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GluedSet):
            return NotImplemented
        return self.space is other.space and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return "GluedSet(" + "; ".join(
            f"{lab}: {self.space._show_part(p)}" for lab, p in zip(self.space.labels, self.parts)) + ")"

    def _other(self, other: GluedSet) -> GluedSet:
        if not isinstance(other, GluedSet) or other.space is not self.space:
            raise AdjunctionError("glued sets belong to different spaces")
        return other

    def __or__(self, other: GluedSet) -> GluedSet:
        ops = self.space._ops
        return GluedSet(self.space, [ops.union(a, b) for a, b in zip(self.parts, self._other(other).parts)])

    def __and__(self, other: GluedSet) -> GluedSet:
        ops = self.space._ops
        return GluedSet(self.space, [ops.inter(a, b) for a, b in zip(self.parts, self._other(other).parts)])

    def __sub__(self, other: GluedSet) -> GluedSet:
        ops = self.space._ops
        return GluedSet(self.space, [ops.diff(a, b) for a, b in zip(self.parts, self._other(other).parts)])

    def __le__(self, other: GluedSet) -> bool:
        return (self - other).is_empty()

    def is_empty(self) -> bool:
        return all(self.space._ops.is_empty(p) for p in self.parts)

    def __contains__(self, p: GluedPoint) -> bool:
        return self.space._ops.contains(self.parts[p.index], p.coords)

    def points(self) -> list[GluedPoint]:
        """Canonical witnesses: every point (finite) or region sample points (euclidean)."""
        return self.space._witness_points(self)

    def witness(self) -> GluedPoint | None:
        return self.space._witness(self)

    def to_json(self) -> dict:
        ops = self.space._ops
        return {"sets": {str(i + 1): ops.to_json(p) for i, p in enumerate(self.parts)}}


class _FiniteOps:
    def __init__(self, sys: AdjSystem):
        self.sys = sys

    def full(self, i):
        return self.sys.spaces[i].full

    def empty(self, i):
        return 0

    def union(self, a, b):
        return a | b

    def inter(self, a, b):
        return a & b

    def diff(self, a, b):
        return a & ~b

    def is_empty(self, a):
        return a == 0

    def contains(self, a, x):
        return bool(a >> x & 1)

    def image(self, i, j, s):
        f = self.sys.maps[i, j]
        return fintop.mask(f[x] for x in members(s & self.sys.regions[i, j]))

    def is_open(self, i, s):
        return self.sys.spaces[i].is_open(s)

    def closure(self, i, s):
        return self.sys.spaces[i].closure(s)

    def interior(self, i, s):
        return self.sys.spaces[i].interior(s)

    def coerce(self, i, s):
        if isinstance(s, int):
            return self.sys.spaces[i]._check(s)
        return self.sys.spaces[i]._check(fintop.mask(s))

    def to_json(self, s):
        return members(s)

    def show(self, s):
        return "{" + ",".join(str(x) for x in members(s)) + "}"


class _EuclideanOps:
    def __init__(self, sys: AdjSystem):
        self.sys = sys

    def full(self, i):
        return Region.full(self.sys.spaces[i].dim)

    def empty(self, i):
        return Region.empty(self.sys.spaces[i].dim)

    def union(self, a, b):
        return a | b

    def inter(self, a, b):
        return a & b

    def diff(self, a, b):
        return a - b

    def is_empty(self, a):
        return a.is_empty()

    def contains(self, a, x):
        return a.contains(x)

    def image(self, i, j, s):
        if i == j:
            return s
        a = self.sys.regions[i, j]
        if a.is_empty():
            return self.empty(j)
        return (s & a).map(self.sys.maps[i, j])

    def is_open(self, i, s):
        return s.is_open()

    def closure(self, i, s):
        return s.closure()

    def interior(self, i, s):
        return s.interior()

    def coerce(self, i, s):
        dim = self.sys.spaces[i].dim
        if isinstance(s, Region):
            if s.dim != dim:
                raise AdjunctionError(f"set for component {i} has the wrong dimension")
            return s
        if isinstance(s, (str, Interval)):
            return Region(dim, [(s,)] if dim == 1 else [s])
        return Region(dim, s)

    def to_json(self, s):
        return s.to_json()

    def show(self, s):
        return str(s)


class GluedSpace:
    """The adjunction space of a validated system.

    Finite systems additionally carry the explicit quotient space
    (:attr:`quotient`), the class of every component point, and the canonical
    maps :attr:`phi` as :class:`~adjspace.fintop.FinMap`.
    """

    def __init__(self, sys: AdjSystem):
        report = sys.validate()
        if not report.ok:
            raise InvalidSystemError(report)
        self.system = sys
        self.backend = sys.backend
        self.m = sys.m
        self.labels = sys.labels
        self._ops = _FiniteOps(sys) if sys.backend == FINITE else _EuclideanOps(sys)
        if sys.backend == FINITE:
            self._build_finite()

    def __repr__(self) -> str:
        return f"GluedSpace({self.system.name or self.backend}, m={self.m})"

    # finite construction
    def _build_finite(self) -> None:
        sys = self.system
        total, inj = fintop.disjoint_union(sys.spaces)
        self.disjoint, self.injections = total, inj
        uf = UnionFind(range(total.n))
        for (i, j), f in sys.maps.items():
            for x, y in f.items():
                uf.union(inj[i](x), inj[j](y))
        # classes ordered by canonical representative: the disjoint-union order
        # already lists component 0 first, so the class minimum is canonical
        classes = sorted((sorted(c) for c in uf.to_sets()), key=lambda c: c[0])
        self.quotient, self.projection = fintop.quotient(total, classes)
        self.phi = [self.projection.compose(inj[i]) for i in range(self.m)]
        self._rep = [self._locate(c[0]) for c in classes]
        if sys.all_regions_open():
            for i, phi in enumerate(self.phi):
                assert fintop.check_embedding(phi) and fintop.check_open_map(phi), \
                    f"canonical map {i} is not an open embedding"

    def _locate(self, g: int) -> tuple[int, int]:
        for i, f in enumerate(self.injections):
            if f.table and f.table[0] <= g <= f.table[-1]:
                return i, g - f.table[0]
        raise AssertionError(g)

    # points
    def _check_point(self, i: int, x):
        if not 0 <= i < self.m:
            raise AdjunctionError(f"component index {i} out of range")
        if self.backend == FINITE:
            if not 0 <= x < self.system.spaces[i].n:
                raise AdjunctionError(f"{x} is not a point of X_{i}")
            return int(x)
        dim = self.system.spaces[i].dim
        if not isinstance(x, (tuple, list)):
            x = (x,)
        if len(x) != dim:
            raise AdjunctionError(f"{x} is not a point of R^{dim}")
        return tuple(rat(c) for c in x)

    def canonical_map(self, i: int, x) -> GluedPoint:
        """``phi_i(x)`` with its canonical representative."""
        x = self._check_point(i, x)
        for j in range(self.m):
            if self.system.in_region(i, j, x):
                return GluedPoint(j, self.system.apply(i, j, x))
        raise AssertionError("A_ii must contain every point")

    def canon(self, p: GluedPoint) -> GluedPoint:
        return self.canonical_map(p.index, p.coords)

    def point_eq(self, p: GluedPoint, q: GluedPoint) -> bool:
        return self.canon(p) == self.canon(q)

    def representatives(self, p: GluedPoint) -> list[GluedPoint]:
        x = self._check_point(p.index, p.coords)
        return [GluedPoint(j, self.system.apply(p.index, j, x))
                for j in range(self.m) if self.system.in_region(p.index, j, x)]

    def class_index(self, p: GluedPoint) -> int:
        """Point of the finite quotient space holding ``p``."""
        if self.backend != FINITE:
            raise AdjunctionError("explicit quotient points exist only for finite systems")
        return self.phi[p.index](self._check_point(p.index, p.coords))

    def point_of_class(self, c: int) -> GluedPoint:
        i, x = self._rep[c]
        return GluedPoint(i, x)

    # sets
    def saturate(self, parts: Sequence | Mapping) -> GluedSet:
        """Close per-component sets under the gluing identifications."""
        ops = self._ops
        if isinstance(parts, Mapping):
            raw = [ops.coerce(i, parts[i]) if i in parts else ops.empty(i) for i in range(self.m)]
        else:
            if len(parts) != self.m:
                raise AdjunctionError(f"expected {self.m} component sets")
            raw = [ops.coerce(i, p) for i, p in enumerate(parts)]
        while True:
            grown = list(raw)
            for i, j in itertools.product(range(self.m), repeat=2):
                if i != j:
                    grown[j] = ops.union(grown[j], ops.image(i, j, raw[i]))
            if grown == raw:
                return GluedSet(self, raw)
            raw = grown

    def whole(self) -> GluedSet:
        return GluedSet(self, [self._ops.full(i) for i in range(self.m)])

    def empty(self) -> GluedSet:
        return GluedSet(self, [self._ops.empty(i) for i in range(self.m)])

    def pushforward(self, i: int, u) -> GluedSet:
        """``phi_i(U)`` for ``U`` a subset of ``X_i``."""
        return self.saturate({i: u})

    def preimage(self, i: int, s: GluedSet) -> object:
        """``phi_i^{-1}(S)``."""
        return s.parts[i]

    def canonical_image(self, i: int) -> GluedSet:
        return self.pushforward(i, self._ops.full(i))

    def from_points(self, points: Iterable[GluedPoint]) -> GluedSet:
        if self.backend == FINITE:
            parts = {}
            for p in points:
                parts[p.index] = parts.get(p.index, 0) | 1 << p.coords
        else:
            by: dict[int, list] = {}
            for p in points:
                by.setdefault(p.index, []).append(p.coords)
            parts = {i: Region.from_points(self.system.spaces[i].dim, pts) for i, pts in by.items()}
        return self.saturate(parts)

    def _show_part(self, p) -> str:
        return self._ops.show(p)

    def _witness_points(self, s: GluedSet) -> list[GluedPoint]:
        out: list[GluedPoint] = []
        for i, part in enumerate(s.parts):
            if self.backend == FINITE:
                pts = members(part)
            else:
                inner, frontier = part.sample_points()
                pts = [p for p in frontier + inner if part.contains(p)]
            for x in pts:
                g = self.canonical_map(i, x)
                if g not in out:
                    out.append(g)
        return sorted(out)

    def _witness(self, s: GluedSet) -> GluedPoint | None:
        for i, part in enumerate(s.parts):
            if self._ops.is_empty(part):
                continue
            x = members(part)[0] if self.backend == FINITE else part.witness()
            return self.canonical_map(i, x)
        return None

    def is_open(self, s: GluedSet) -> bool:
        """Open in the adjunction topology iff every ``phi_i^{-1}(S)`` is open."""
        return all(self._ops.is_open(i, p) for i, p in enumerate(s.parts))

    def to_quotient(self, s: GluedSet) -> int:
        """Quotient-space bitmask of a glued set (finite backend)."""
        if self.backend != FINITE:
            raise AdjunctionError("explicit quotient exists only for finite systems")
        out = 0
        for i, part in enumerate(s.parts):
            out |= self.phi[i].image(part)
        return out

    def from_quotient(self, q: int) -> GluedSet:
        return GluedSet(self, [phi.preimage(q) for phi in self.phi])

    # topology of the glued space
    def _require_open_regions(self, what: str) -> None:
        if not self.system.all_regions_open():
            raise HypothesisError(f"{what} needs every gluing region A_ij to be open")

    def glued_closure(self, s: GluedSet) -> GluedSet:
        """Closure, computed component-wise (valid because each phi_i(X_i) is open)."""
        self._require_open_regions("glued_closure")
        out = GluedSet(self, [self._ops.closure(i, p) for i, p in enumerate(s.parts)])
        assert out == self.saturate(out.parts)
        return out

    def glued_interior(self, s: GluedSet) -> GluedSet:
        self._require_open_regions("glued_interior")
        out = GluedSet(self, [self._ops.interior(i, p) for i, p in enumerate(s.parts)])
        assert out == self.saturate(out.parts)
        return out

    def glued_boundary(self, s: GluedSet) -> GluedSet:
        return self.glued_closure(s) - self.glued_interior(s)

    def _pieces(self, s: GluedSet) -> list[tuple[int, object]]:
        out = []
        for i, part in enumerate(s.parts):
            if self.backend == FINITE:
                sub_space = self.system.spaces[i]
                out.extend((i, c) for c in sub_space.components(part))
            else:
                out.extend((i, c) for c in part.components())
        return out

    def components(self, s: GluedSet | None = None) -> list[GluedSet]:
        """Connected components of ``s`` (default: the whole space)."""
        s = self.whole() if s is None else s
        if self.backend == FINITE:
            comps = self.quotient.components(self.to_quotient(s))
            return [self.from_quotient(c) for c in comps]
        self._require_open_regions("connectedness in the euclidean backend")
        pieces = self._pieces(s)
        ops = self._ops
        g = nx.Graph()
        g.add_nodes_from(range(len(pieces)))
        for a, b in itertools.combinations(range(len(pieces)), 2):
            (i, p), (j, q) = pieces[a], pieces[b]
            if i == j:
                continue
            # phi_i(P) and phi_j(Q) are not separated
            if (not (p & ops.closure(i, ops.image(j, i, q))).is_empty()
                    or not (q & ops.closure(j, ops.image(i, j, p))).is_empty()):
                g.add_edge(a, b)
        comps = sorted(sorted(cc) for cc in nx.connected_components(g))
        return [self.saturate({}) if not cc else
                self._union_pieces([pieces[k] for k in cc]) for cc in comps]

    def _union_pieces(self, pieces) -> GluedSet:
        parts = [self._ops.empty(i) for i in range(self.m)]
        for i, p in pieces:
            parts[i] = self._ops.union(parts[i], p)
        return self.saturate(parts)

    def is_connected(self, s: GluedSet | None = None) -> bool:
        """Connectedness of ``s``; the empty set reports False."""
        s = self.whole() if s is None else s
        if s.is_empty():
            return False
        return len(self.components(s)) == 1

    def is_T1(self) -> bool:
        if self.backend == FINITE:
            return self.quotient.is_T1()
        # each class meets each component in at most one point, and points of R^d are closed
        return True

    def component_graph(self) -> nx.Graph:
        return component_graph(self.system)

    # universal property, bases, local finiteness
    def universal_map(self, targets: Sequence[FinMap]) -> FinMap:
        """The map ``g`` with ``g o phi_i = psi_i`` for a compatible family ``psi_i``."""
        if self.backend != FINITE:
            raise AdjunctionError("universal_map is only available for finite systems")
        if len(targets) != self.m:
            raise AdjunctionError(f"expected {self.m} maps")
        y = targets[0].target
        sys = self.system
        for i, psi in enumerate(targets):
            if psi.source != sys.spaces[i] or psi.target != y:
                raise AdjunctionError(f"map {i} has the wrong source or target")
            if not fintop.check_continuous(psi):
                raise AdjunctionError(f"map {i} is not continuous")
        for (i, j), f in sys.maps.items():
            for x, fx in f.items():
                if targets[i](x) != targets[j](fx):
                    raise AdjunctionError(
                        f"incompatible family: psi_{i}({sys.spaces[i].label(x)}) != "
                        f"psi_{j}(f_{i}{j}({sys.spaces[i].label(x)})) [witness {sys.spaces[i].label(x)}]")
        table = [targets[i](x) for i, x in self._rep]
        g = FinMap(self.quotient, y, tuple(table))
        assert fintop.check_continuous(g)
        for i in range(self.m):
            assert g.compose(self.phi[i]).table == targets[i].table
        return g

    def glued_basis(self) -> GluedBasis:
        self._require_open_regions("glued_basis")
        return GluedBasis(self)

    def paracompact_witness(self, covers: Sequence[Sequence], p: GluedPoint) -> ParacompactWitness:
        return paracompact_witness(self, covers, p)


def build(sys: AdjSystem) -> GluedSpace:
    return GluedSpace(sys)


def component_graph(sys: AdjSystem) -> nx.Graph:
    """Graph on the index set with an edge ``i - j`` iff ``A_ij`` is nonempty."""
    g = nx.Graph()
    for i in range(sys.m):
        g.add_node(i, label=sys.labels[i])
    for i, j in itertools.combinations(range(sys.m), 2):
        a = sys.regions[i, j]
        if (a != 0) if sys.backend == FINITE else not a.is_empty():
            g.add_edge(i, j)
    return g


# -- subsystems ---------------------------------------------------------------

def subsystem(sys: AdjSystem, indices: Iterable[int]) -> AdjSystem:
    """Restrict to the components listed in ``indices`` (renumbered in order)."""
    idx = sorted(set(indices))
    if not idx:
        raise AdjunctionError("a subsystem needs at least one index")
    if any(not 0 <= i < sys.m for i in idx):
        raise AdjunctionError("subsystem index out of range")
    regions = {(a, b): sys.regions[i, j] for (a, i), (b, j) in itertools.product(enumerate(idx), repeat=2)}
    maps = {(a, b): sys.maps[i, j] for (a, i), (b, j) in itertools.product(enumerate(idx), repeat=2)}
    name = f"{sys.name or 'system'}[{','.join(sys.labels[i] for i in idx)}]"
    return AdjSystem([sys.spaces[i] for i in idx], regions, maps,
                     labels=[sys.labels[i] for i in idx], name=name)


@dataclass
class SubEmbedding:
    """The map from a sub-adjunction space into the full one, ``[[x,j]] -> [x,j]``."""

    sub: GluedSpace
    full: GluedSpace
    indices: tuple

    def __call__(self, p: GluedPoint) -> GluedPoint:
        return self.full.canonical_map(self.indices[p.index], p.coords)

    def image(self, s: GluedSet) -> GluedSet:
        return self.full.saturate({self.indices[a]: part for a, part in enumerate(s.parts)})

    def restrict(self, v: GluedSet) -> GluedSet:
        """``[[V]]``: the part of ``V`` seen by the subsystem; V must lie in the image."""
        sub_set = self.sub.saturate([v.parts[i] for i in self.indices])
        if self.image(sub_set) != v:
            raise AdjunctionError("set is not contained in the image of the subsystem")
        return sub_set

    @property
    def finmap(self) -> FinMap:
        if self.full.backend != FINITE:
            raise AdjunctionError("only finite sub-embeddings have an explicit table")
        table = [self.full.class_index(self(self.sub.point_of_class(c))) for c in range(self.sub.quotient.n)]
        return FinMap(self.sub.quotient, self.full.quotient, tuple(table))

    def is_open_embedding(self) -> bool:
        f = self.finmap
        return fintop.check_embedding(f) and fintop.check_open_map(f)


def sub_embedding(sys: AdjSystem, indices: Iterable[int]) -> SubEmbedding:
    idx = tuple(sorted(set(indices)))
    sub = GluedSpace(subsystem(sys, idx))
    full = GluedSpace(sys)
    emb = SubEmbedding(sub, full, idx)
    if sys.backend == FINITE and sys.all_regions_open():
        assert emb.is_open_embedding()
    return emb


# -- neighbourhoods, bases, local finiteness -----------------------------------

def chart_radius(sys: AdjSystem, i: int, x: tuple) -> Fraction:
    """``min(1, half the distance to the nearest other finite region endpoint)``."""
    dists = []
    for j in range(sys.m):
        a = sys.regions[i, j]
        for axis in range(a.dim):
            dists.extend(abs(e - x[axis]) for e in a.endpoints(axis) if e != x[axis])
    radius = Fraction(1)
    if dists:
        radius = min(radius, min(dists) / 2)
    return radius


def box_around(x: tuple, r: Fraction) -> Region:
    return Region.box(*(Interval.open(c - r, c + r) for c in x))


class GluedBasis:
    """Images ``phi_i(B)`` of per-component basic open sets.

    Finite systems use minimal open sets; euclidean systems use open rational
    boxes, which are generated on demand rather than listed.
    """

    def __init__(self, space: GluedSpace):
        self.space = space

    def elements(self) -> list[GluedSet]:
        sp = self.space
        if sp.backend != FINITE:
            raise AdjunctionError("the euclidean basis is infinite; use element() or covers()")
        out: list[GluedSet] = []
        for i, x_i in enumerate(sp.system.spaces):
            for u in x_i.min_open:
                b = sp.pushforward(i, u)
                if b not in out:
                    out.append(b)
        return out

    def element(self, i: int, box: Region) -> GluedSet:
        if len(box.cells) != 1 or not box.is_open():
            raise AdjunctionError("basic sets are single open boxes")
        return self.space.pushforward(i, box)

    def covers(self, s: GluedSet) -> bool:
        """Check that ``s`` is a union of basis elements contained in it.

        Finite: exact.  Euclidean: every sample point of every component gets
        an open box basis element inside ``s`` (halving radii from 1).
        """
        sp = self.space
        if not sp.is_open(s):
            return False
        if sp.backend == FINITE:
            union = sp.empty()
            for b in self.elements():
                if b <= s:
                    union = union | b
            return union == s
        for i, part in enumerate(s.parts):
            inner, frontier = part.sample_points()
            for x in inner + frontier:
                if not part.contains(x):
                    continue
                r = Fraction(1)
                while not box_around(x, r) <= part:
                    r /= 2
                    if r < Fraction(1, 2 ** 40):
                        return False
                if not self.element(i, box_around(x, r)) <= s:
                    return False
        return True


@dataclass
class ParacompactWitness:
    point: GluedPoint
    neighbourhood: GluedSet
    cases: dict
    meeting: list
    direct_count: int

    @property
    def count(self) -> int:
        return len(self.meeting)


def paracompact_witness(space: GluedSpace, covers: Sequence[Sequence], p: GluedPoint) -> ParacompactWitness:
    """Open neighbourhood of ``p`` meeting finitely many images of the covers.

    ``covers[k]`` is a finite open cover of ``X_k``.  For each ``j != i``
    (``p = [x, i]``) a set ``W^j`` is built according to whether ``x`` lies
    in ``A_ij``, in the interior of its complement, or on its boundary; the
    witness is the intersection of the ``W^j``.
    """
    sys = space.system
    space._require_open_regions("paracompact_witness")
    if len(covers) != space.m:
        raise AdjunctionError("one cover per component required")
    ops = space._ops
    covers = [[ops.coerce(k, u) for u in cov] for k, cov in enumerate(covers)]
    for k, cov in enumerate(covers):
        union = ops.empty(k)
        for u in cov:
            if not ops.is_open(k, u):
                raise HypothesisError(f"cover of X_{k} has a non-open member")
            union = ops.union(union, u)
        if union != ops.full(k):
            raise HypothesisError(f"cover of X_{k} does not cover")
    p = space.canon(p)
    i, x = p.index, p.coords

    def local(k: int, y):
        # a neighbourhood of y in X_k; every finite cover is locally finite there
        if sys.backend == FINITE:
            return sys.spaces[k].min_open[y]
        return box_around(y, chart_radius(sys, k, y))

    w_i = local(i, x)
    w = space.pushforward(i, w_i)
    cases = {}
    for j in range(space.m):
        if j == i:
            continue
        a_ij = sys.regions[i, j]
        if ops.contains(a_ij, x):
            cases[j] = 1
            y = sys.apply(i, j, x)
            back = ops.image(j, i, ops.inter(local(j, y), sys.regions[j, i]))
            w_j = space.pushforward(i, ops.inter(ops.inter(w_i, back), a_ij))
        elif ops.contains(ops.interior(i, ops.diff(ops.full(i), a_ij)), x):
            cases[j] = 2
            w_j = space.pushforward(i, ops.inter(w_i, ops.interior(i, ops.diff(ops.full(i), a_ij))))
        else:
            cases[j] = 3
            if sys.backend == FINITE:
                w_j = space.pushforward(i, w_i)
            else:
                f = sys.maps[i, j]
                y = f(x)
                w_tj = local(j, y)
                part_i = w_i & w_tj.preimage(f)
                part_j = w_tj & w_i.map(f)
                w_j = space.saturate({i: part_i, j: part_j})
        w = w & w_j
    assert p in w and space.is_open(w)
    meeting = []
    direct = 0
    for k, cov in enumerate(covers):
        for n, u in enumerate(cov):
            if not (space.pushforward(k, u) & w).is_empty():
                meeting.append((k, n))
            if not ops.is_empty(ops.inter(u, w.parts[k])):
                direct += 1
    assert direct == len(meeting)
    return ParacompactWitness(p, w, cases, meeting, direct)
