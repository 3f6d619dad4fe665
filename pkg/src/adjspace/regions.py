"""Exact set algebra for finite unions of rational boxes in R^1 and R^2.

Every coordinate is a :class:`fractions.Fraction`; the only non-rational
values are the sentinels ``-inf`` / ``inf`` used as open interval ends.
A :class:`Region` is always held in canonical form, so ``==`` decides set
equality.

Canonical form works on *pieces*: the finite endpoints of a 1-D set cut the
line into alternating open gaps and single points, and every operand of an
operation is a union of such pieces.  In 2-D the same is done on the x-axis,
with each x-piece carrying a canonical 1-D fibre of y-intervals; consecutive
x-pieces with equal fibres are merged.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import networkx as nx

ExtRat = Union[Fraction, float]
NEG_INF: float = -math.inf
POS_INF: float = math.inf

Point = tuple  # tuple of Fractions, one per axis


def _isinf(v) -> bool:
    return isinstance(v, float)


def ext(value) -> ExtRat:
    """Coerce ints, Fractions, ``"p/q"`` strings and infinities to ExtRat."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"not a coordinate: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise TypeError(f"floating point coordinates are not exact: {value!r}")
    if isinstance(value, str):
        s = value.strip().replace("−", "-")
        if s in ("inf", "+inf", "oo", "+oo"):
            return POS_INF
        if s in ("-inf", "-oo"):
            return NEG_INF
        return Fraction(s)
    raise TypeError(f"not a coordinate: {value!r}")


def rat(value) -> Fraction:
    v = ext(value)
    if not isinstance(v, Fraction):
        raise ValueError(f"expected a finite rational, got {value!r}")
    return v


def point(*coords) -> Point:
    return tuple(rat(c) for c in coords)


def encode_ext(v: ExtRat) -> str:
    if v == POS_INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return str(v)


@dataclass(frozen=True)
class Interval:
    """Interval of the extended line; a degenerate interval is a single point."""

    lo: ExtRat
    lo_closed: bool
    hi: ExtRat
    hi_closed: bool

    def __post_init__(self):
        object.__setattr__(self, "lo", ext(self.lo))
        object.__setattr__(self, "hi", ext(self.hi))
        if _isinf(self.lo) and self.lo_closed or _isinf(self.hi) and self.hi_closed:
            raise ValueError("infinite endpoints cannot be closed")
        if self.lo == POS_INF or self.hi == NEG_INF:
            raise ValueError("interval runs off the wrong end of the line")
        if self.lo > self.hi:
            raise ValueError(f"empty interval {self}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError(f"empty interval {self}")

    @classmethod
    def open(cls, lo, hi) -> Interval:
        return cls(lo, False, hi, False)

    @classmethod
    def closed(cls, lo, hi) -> Interval:
        return cls(lo, True, hi, True)

    @classmethod
    def at(cls, x) -> Interval:
        return cls(x, True, x, True)

    @classmethod
    def line(cls) -> Interval:
        return cls(NEG_INF, False, POS_INF, False)

    @classmethod
    def parse(cls, text: str) -> Interval:
        """Parse interval notation such as ``"(-inf,0)"``, ``"[-1,1]"``, ``"{0}"``."""
        s = text.strip().replace("−", "-").replace(" ", "")
        m = re.fullmatch(r"\{([^,]+)\}", s)
        if m:
            return cls.at(m.group(1))
        m = re.fullmatch(r"([\[(])([^,]+),([^,]+)([\])])", s)
        if not m:
            raise ValueError(f"cannot parse interval {text!r}")
        return cls(m.group(2), m.group(1) == "[", m.group(3), m.group(4) == "]")

    def __str__(self) -> str:
        if self.is_degenerate:
            return "{%s}" % self.lo
        return "%s%s,%s%s" % ("[" if self.lo_closed else "(", encode_ext(self.lo),
                              encode_ext(self.hi), "]" if self.hi_closed else ")")

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return not (_isinf(self.lo) or _isinf(self.hi))

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def closure(self) -> Interval:
        return _mk(self.lo, not _isinf(self.lo), self.hi, not _isinf(self.hi))

    def intersect(self, other: Interval) -> Interval | None:
        lo, lo_closed = max((self.lo, not self.lo_closed), (other.lo, not other.lo_closed))
        hi, hi_closed = min((self.hi, self.hi_closed), (other.hi, other.hi_closed))
        lo_closed = not lo_closed
        if lo < hi or (lo == hi and lo_closed and hi_closed):
            return _mk(lo, lo_closed, hi, hi_closed)
        return None

    def witness(self) -> Fraction:
        """Deterministic member: the point, the midpoint, or 1 past the finite end."""
        if self.is_degenerate:
            return self.lo
        if self.is_bounded:
            return (self.lo + self.hi) / 2
        if _isinf(self.lo) and _isinf(self.hi):
            return Fraction(0)
        if _isinf(self.lo):
            return self.hi - 1
        return self.lo + 1

    def endpoints(self) -> list[Fraction]:
        return sorted({e for e in (self.lo, self.hi) if not _isinf(e)})

    def to_json(self) -> list:
        return [encode_ext(self.lo), self.lo_closed, encode_ext(self.hi), self.hi_closed]

    @classmethod
    def from_json(cls, data) -> Interval:
        if isinstance(data, str):
            return cls.parse(data)
        lo, lo_closed, hi, hi_closed = data
        return cls(lo, bool(lo_closed), hi, bool(hi_closed))


def _as_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.parse(x)


# -- 1-D pieces --------------------------------------------------------------

def _pieces(points: Iterable[Fraction]) -> list[Interval]:
    pts = sorted(set(points))
    if not pts:
        return [Interval.line()]
    out = [_mk(NEG_INF, False, pts[0], False)]
    for a, b in zip(pts, pts[1:]):
        out.append(_mk(a, True, a, True))
        out.append(_mk(a, False, b, False))
    out.append(_mk(pts[-1], True, pts[-1], True))
    out.append(_mk(pts[-1], False, POS_INF, False))
    return out


def _join(first: Interval, last: Interval) -> Interval:
    return _mk(first.lo, first.lo_closed, last.hi, last.hi_closed)


def _runs(pieces: Sequence[Interval], labels: Sequence) -> list[tuple[Interval, object]]:
    """Merge maximal runs of consecutive pieces sharing a truthy label."""
    out = []
    for label, group in itertools.groupby(zip(pieces, labels), key=lambda t: t[1]):
        if not label:
            continue
        group = list(group)
        out.append((_join(group[0][0], group[-1][0]), label))
    return out


def _mk(lo, lo_closed: bool, hi, hi_closed: bool) -> Interval:
    # trusted constructor for internally computed intervals
    iv = object.__new__(Interval)
    object.__setattr__(iv, "lo", lo)
    object.__setattr__(iv, "lo_closed", lo_closed)
    object.__setattr__(iv, "hi", hi)
    object.__setattr__(iv, "hi_closed", hi_closed)
    return iv


def _canon1(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    """Maximal disjoint, non-touching intervals with the same union."""
    out: list[Interval] = []
    for iv in sorted(intervals, key=lambda iv: (iv.lo, not iv.lo_closed)):
        if out:
            last = out[-1]
            if iv.lo < last.hi or (iv.lo == last.hi and (last.hi_closed or iv.lo_closed)):
                if (iv.hi, iv.hi_closed) > (last.hi, last.hi_closed):
                    out[-1] = _mk(last.lo, last.lo_closed, iv.hi, iv.hi_closed)
                continue
        out.append(iv)
    return tuple(out)


def _complement1(cells: Sequence[Interval]) -> tuple[Interval, ...]:
    out = []
    lo, lo_closed = NEG_INF, False
    for iv in _canon1(cells):
        hi, hi_closed = iv.lo, not iv.lo_closed
        if lo < hi or (lo == hi and lo_closed and hi_closed):
            out.append(_mk(lo, lo_closed, hi, hi_closed))
        lo, lo_closed = iv.hi, not iv.hi_closed
    if lo != POS_INF:
        out.append(_mk(lo, lo_closed, POS_INF, False))
    return tuple(out)


# -- boxes -------------------------------------------------------------------

Box = tuple  # tuple of Interval, one per axis


def _box_intersect(a: Box, b: Box) -> Box | None:
    out = []
    for x, y in zip(a, b):
        z = x.intersect(y)
        if z is None:
            return None
        out.append(z)
    return tuple(out)


def _box_contains(box: Box, p: Point) -> bool:
    return all(c in iv for c, iv in zip(p, box))


def _box_closure(box: Box) -> Box:
    return tuple(iv.closure() for iv in box)


def _canon2(boxes: Sequence[Box]) -> tuple[Box, ...]:
    boxes = [b for b in boxes]
    pieces = _pieces(e for b in boxes for e in b[0].endpoints())
    fibres = []
    for p in pieces:
        x = p.witness()
        fibres.append(_canon1(b[1] for b in boxes if x in b[0]))
    return tuple((xiv, yiv) for xiv, fibre in _runs(pieces, fibres) for yiv in fibre)


def _slabs(cells: Sequence[Box]) -> list[tuple[Interval, tuple[Interval, ...]]]:
    out: list[tuple[Interval, list[Interval]]] = []
    for xiv, yiv in cells:
        if out and out[-1][0] == xiv:
            out[-1][1].append(yiv)
        else:
            out.append((xiv, [yiv]))
    return [(x, tuple(ys)) for x, ys in out]


class Region:
    """Finite union of axis-aligned rational boxes in R^dim, dim in {1, 2}."""

    __slots__ = ("dim", "cells", "_hash")

    def __init__(self, dim: int, cells: Iterable = ()):
        if dim not in (1, 2):
            raise ValueError(f"unsupported dimension {dim}")
        boxes = []
        for c in cells:
            if isinstance(c, (Interval, str)):
                c = (c,)
            box = tuple(_as_interval(iv) for iv in c)
            if len(box) != dim:
                raise ValueError(f"cell {c!r} does not have dimension {dim}")
            boxes.append(box)
        self.dim = dim
        self.cells = tuple((iv,) for iv in _canon1(b[0] for b in boxes)) if dim == 1 else _canon2(boxes)
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, cells: tuple) -> Region:
        r = object.__new__(cls)
        r.dim = dim
        r.cells = cells
        r._hash = None
        return r

    # constructors
    @classmethod
    def empty(cls, dim: int) -> Region:
        return cls(dim)

    @classmethod
    def full(cls, dim: int) -> Region:
        return cls(dim, [tuple(Interval.line() for _ in range(dim))])

    @classmethod
    def line(cls, *intervals) -> Region:
        """1-D region from interval strings or Intervals."""
        return cls(1, [(_as_interval(iv),) for iv in intervals])

    @classmethod
    def box(cls, *intervals) -> Region:
        """A single box, one interval per axis."""
        return cls(len(intervals), [tuple(_as_interval(iv) for iv in intervals)])

    @classmethod
    def from_points(cls, dim: int, points: Iterable[Point]) -> Region:
        return cls(dim, [tuple(Interval.at(c) for c in p) for p in points])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self.dim == other.dim and self.cells == other.cells

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, self.cells))
        return self._hash

    def __repr__(self) -> str:
        return f"Region({self.dim}, {self})"

    def __str__(self) -> str:
        if not self.cells:
            return "{}"
        return " u ".join("x".join(str(iv) for iv in c) for c in self.cells)

    def _check(self, other: Region) -> None:
        if not isinstance(other, Region):
            raise TypeError(f"expected Region, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    # Boolean algebra
    def union(self, other: Region) -> Region:
        self._check(other)
        return Region(self.dim, self.cells + other.cells)

    def intersect(self, other: Region) -> Region:
        self._check(other)
        boxes = [z for a in self.cells for b in other.cells
                 if (z := _box_intersect(a, b)) is not None]
        return Region(self.dim, boxes)

    def complement(self) -> Region:
        if self.dim == 1:
            return Region._raw(1, tuple((iv,) for iv in _complement1([c[0] for c in self.cells])))
        slabs = _slabs(self.cells)
        pieces = _pieces(e for xiv, _ in slabs for e in xiv.endpoints())
        boxes = []
        for p in pieces:
            x = p.witness()
            fibre = next((ys for xiv, ys in slabs if x in xiv), ())
            boxes.extend((p, yiv) for yiv in _complement1(fibre))
        return Region(2, boxes)

    def difference(self, other: Region) -> Region:
        self._check(other)
        return self.intersect(other.complement())

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def __invert__(self) -> Region:
        return self.complement()

    def issubset(self, other: Region) -> bool:
        return self.difference(other).is_empty()

    __le__ = issubset

    # topology relative to R^dim
    def closure(self) -> Region:
        return Region(self.dim, [_box_closure(c) for c in self.cells])

    def interior(self) -> Region:
        return self.complement().closure().complement()

    def boundary(self) -> Region:
        return self.closure().difference(self.interior())

    def is_empty(self) -> bool:
        return not self.cells

    def is_open(self) -> bool:
        return self == self.interior()

    def is_closed(self) -> bool:
        return self == self.closure()

    def is_bounded(self) -> bool:
        return all(iv.is_bounded for c in self.cells for iv in c)

    def is_compact(self) -> bool:
        return self.is_bounded() and self.is_closed()

    def contains(self, p) -> bool:
        p = _as_point(p, self.dim)
        return any(_box_contains(c, p) for c in self.cells)

    __contains__ = contains

    def _touch_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.cells)))
        closures = [_box_closure(c) for c in self.cells]
        for a, b in itertools.combinations(range(len(self.cells)), 2):
            if (_box_intersect(self.cells[a], closures[b]) is not None
                    or _box_intersect(closures[a], self.cells[b]) is not None):
                g.add_edge(a, b)
        return g

    def components(self) -> list[Region]:
        """Connected components, ordered by their first canonical cell."""
        if self.dim == 1:
            return [Region._raw(1, (c,)) for c in self.cells]
        comps = sorted((sorted(cc) for cc in nx.connected_components(self._touch_graph())))
        return [Region(2, [self.cells[k] for k in cc]) for cc in comps]

    def is_connected(self) -> bool:
        """Connectedness; the empty region reports False (check ``is_empty``)."""
        if self.is_empty():
            return False
        if self.dim == 1:
            return len(self.cells) == 1
        return nx.is_connected(self._touch_graph())

    # affine maps
    def map(self, f: DiagAffine) -> Region:
        if f.dim != self.dim:
            raise ValueError(f"dimension mismatch: map {f.dim} vs region {self.dim}")
        return Region(self.dim, [f.map_box(c) for c in self.cells])

    def preimage(self, f: DiagAffine) -> Region:
        return self.map(f.inverse())

    def endpoints(self, axis: int = 0) -> list[Fraction]:
        return sorted({e for c in self.cells for e in c[axis].endpoints()})

    def sample_points(self) -> tuple[list[Point], list[Point]]:
        """``(interior, frontier)`` witnesses: one member per cell, plus corners.

        The frontier list holds every point built from finite cell endpoints
        (axes without finite endpoints use the cell witness); it is not
        restricted to members of the region.
        """
        interior: list[Point] = []
        frontier: list[Point] = []
        for c in self.cells:
            w = tuple(iv.witness() for iv in c)
            if w not in interior:
                interior.append(w)
            axes = [iv.endpoints() or [iv.witness()] for iv in c]
            for corner in itertools.product(*axes):
                if any(iv.endpoints() for iv in c) and corner != w and corner not in frontier:
                    frontier.append(corner)
        return interior, sorted(frontier)

    def witness(self) -> Point | None:
        """A deterministic member: the first member frontier point, else a cell witness."""
        if self.is_empty():
            return None
        interior, frontier = self.sample_points()
        for p in frontier:
            if self.contains(p):
                return p
        return interior[0]

    def to_json(self) -> dict:
        return {"dim": self.dim, "cells": [[iv.to_json() for iv in c] for c in self.cells]}

    @classmethod
    def from_json(cls, data, dim: int | None = None) -> Region:
        if isinstance(data, dict):
            dim = data.get("dim", dim)
            cells = data["cells"]
        else:
            cells = data
        cells = [[Interval.from_json(iv) for iv in c] if _is_cell(c) else [Interval.from_json(c)]
                 for c in cells]
        if dim is None:
            if not cells:
                raise ValueError("cannot infer the dimension of an empty cell list")
            dim = len(cells[0])
        return cls(dim, cells)


def _is_cell(c) -> bool:
    # a cell is a list of intervals; an interval is [lo, flag, hi, flag] or a string
    return isinstance(c, (list, tuple)) and bool(c) and isinstance(c[0], (list, tuple, str)) \
        and not (len(c) == 4 and isinstance(c[1], bool))


def _as_point(p, dim: int) -> Point:
    if not isinstance(p, (tuple, list)):
        p = (p,)
    if len(p) != dim:
        raise ValueError(f"point {p!r} does not have dimension {dim}")
    return tuple(rat(c) for c in p)


@dataclass(frozen=True)
class DiagAffine:
    """Increasing per-axis affine map ``x_k -> a_k * x_k + b_k``."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(rat(v) for v in self.a)
        b = tuple(rat(v) for v in self.b)
        if len(a) != len(b) or len(a) not in (1, 2):
            raise ValueError("coefficient lists must have equal length 1 or 2")
        if any(v <= 0 for v in a):
            raise ValueError("scale factors must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls, dim: int) -> DiagAffine:
        return cls((1,) * dim, (0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.a)

    @property
    def is_identity(self) -> bool:
        return all(v == 1 for v in self.a) and all(v == 0 for v in self.b)

    def __call__(self, p) -> Point:
        p = _as_point(p, self.dim)
        return tuple(a * x + b for a, b, x in zip(self.a, self.b, p))

    def _axis(self, k: int, x: ExtRat) -> ExtRat:
        if _isinf(x):
            return x
        return self.a[k] * x + self.b[k]

    def map_box(self, box: Box) -> Box:
        return tuple(Interval(self._axis(k, iv.lo), iv.lo_closed, self._axis(k, iv.hi), iv.hi_closed)
                     for k, iv in enumerate(box))

    def compose(self, inner: DiagAffine) -> DiagAffine:
        """``self o inner``."""
        if inner.dim != self.dim:
            raise ValueError("dimension mismatch")
        return DiagAffine(tuple(a * c for a, c in zip(self.a, inner.a)),
                          tuple(a * d + b for a, b, d in zip(self.a, self.b, inner.b)))

    def inverse(self) -> DiagAffine:
        return DiagAffine(tuple(1 / a for a in self.a), tuple(-b / a for a, b in zip(self.a, self.b)))

    def agrees_on(self, other: DiagAffine, region: Region) -> bool:
        """Exact test that the two maps coincide on every point of ``region``."""
        for cell in region.cells:
            for k, iv in enumerate(cell):
                if iv.is_degenerate:
                    if self._axis(k, iv.lo) != other._axis(k, iv.lo):
                        return False
                elif (self.a[k], self.b[k]) != (other.a[k], other.b[k]):
                    return False
        return True

    def to_json(self) -> dict:
        return {"a": [str(v) for v in self.a], "b": [str(v) for v in self.b]}

    @classmethod
    def from_json(cls, data) -> DiagAffine:
        return cls(tuple(data["a"]), tuple(data["b"]))
