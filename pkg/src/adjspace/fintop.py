"""Finite topological spaces in minimal-open-neighbourhood form.

A finite topology is determined by the smallest open set around each point,
so a :class:`FinSpace` on points ``0..n-1`` is just that table.  Point sets
are int bitmasks (bit ``x`` set iff ``x`` is a member); use :func:`mask` and
:func:`members` to convert.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

PointSet = int


def mask(points: Iterable[int]) -> PointSet:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def members(m: PointSet) -> list[int]:
    out = []
    x = 0
    while m:
        if m & 1:
            out.append(x)
        m >>= 1
        x += 1
    return out


def _as_mask(s) -> PointSet:
    if isinstance(s, int):
        return s
    return mask(s)


@dataclass(frozen=True)
class FinSpace:
    n: int
    min_open: tuple
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        table = tuple(_as_mask(s) for s in self.min_open)
        object.__setattr__(self, "min_open", table)
        if len(table) != self.n:
            raise ValueError(f"expected {self.n} minimal opens, got {len(table)}")
        full = (1 << self.n) - 1
        for x, u in enumerate(table):
            if u & ~full:
                raise ValueError(f"min_open({x}) leaves the carrier")
            if not u >> x & 1:
                raise ValueError(f"{x} is not in its own minimal open set")
            for y in members(u):
                if table[y] & ~u:
                    raise ValueError(f"min_open({y}) is not inside min_open({x}) although {y} is")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("one label per point required")

    # constructors
    @classmethod
    def discrete(cls, n: int) -> FinSpace:
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> FinSpace:
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def sierpinski(cls) -> FinSpace:
        """Points a=0, b=1 with {b} the only nontrivial open set."""
        return cls(2, (0b11, 0b10), labels=("a", "b"))

    @classmethod
    def line_model(cls) -> FinSpace:
        """Three-point model of R: L=(-inf,0), O={0}, R=(0,inf)."""
        return cls(3, (0b001, 0b111, 0b100), labels=("L", "O", "R"))

    @property
    def full(self) -> PointSet:
        return (1 << self.n) - 1

    def label(self, x: int) -> str:
        return str(self.labels[x]) if self.labels else str(x)

    def _check(self, s) -> PointSet:
        s = _as_mask(s)
        if s < 0 or s & ~self.full:
            raise ValueError(f"point set {members(s)} is not inside a {self.n}-point space")
        return s

    def leq(self, x: int, y: int) -> bool:
        """Specialisation order: x <= y iff x lies in every open set around y."""
        return bool(self.min_open[y] >> x & 1)

    # open sets and operators
    def is_open(self, s) -> bool:
        s = self._check(s)
        return all(self.min_open[x] & ~s == 0 for x in members(s))

    def is_closed(self, s) -> bool:
        return self.is_open(self.full & ~self._check(s))

    def interior(self, s) -> PointSet:
        s = self._check(s)
        return mask(x for x in members(s) if self.min_open[x] & ~s == 0)

    def closure(self, s) -> PointSet:
        s = self._check(s)
        return mask(x for x in range(self.n) if self.min_open[x] & s)

    def boundary(self, s) -> PointSet:
        return self.closure(s) & ~self.interior(s)

    def complement(self, s) -> PointSet:
        return self.full & ~self._check(s)

    def open_sets(self) -> list[PointSet]:
        """Every open set, by brute force over all subsets (test oracle, small n)."""
        if self.n > 12:
            raise ValueError("open-set enumeration is limited to 12 points")
        return [s for s in range(1 << self.n) if self.is_open(s)]

    # connectedness
    def components(self, s=None) -> list[PointSet]:
        s = self.full if s is None else self._check(s)
        out = []
        rest = s
        while rest:
            seed = rest & -rest
            comp = seed
            while True:
                grown = comp
                for x in members(comp):
                    grown |= self.min_open[x] & s
                    grown |= mask(y for y in members(s) if self.min_open[y] >> x & 1)
                if grown == comp:
                    break
                comp = grown
            out.append(comp)
            rest &= ~comp
        return out

    def is_connected(self, s=None) -> bool:
        """Connectedness of the subspace ``s``; the empty set reports False."""
        s = self.full if s is None else self._check(s)
        return s != 0 and len(self.components(s)) == 1

    # separation
    def separable_pair(self, x: int, y: int) -> bool:
        if x == y:
            raise ValueError("separable_pair needs two distinct points")
        return self.min_open[x] & self.min_open[y] == 0

    def y_pairs(self, incomparable: bool = False) -> list[tuple[int, int]]:
        """Unordered non-separable pairs ``(x, y)`` with ``x < y``.

        With ``incomparable=True`` pairs related by specialisation (one point in
        the closure of the other) are dropped; what remains are the branching
        pairs that model Hausdorff violations between points of a manifold.
        """
        out = []
        for x, y in itertools.combinations(range(self.n), 2):
            if self.separable_pair(x, y):
                continue
            if incomparable and (self.leq(x, y) or self.leq(y, x)):
                continue
            out.append((x, y))
        return out

    def is_hausdorff(self) -> bool:
        return not self.y_pairs()

    def is_T1(self) -> bool:
        closed_points = all(self.closure(1 << x) == 1 << x for x in range(self.n))
        discrete = all(self.min_open[x] == 1 << x for x in range(self.n))
        assert closed_points == discrete
        return closed_points

    def to_json(self) -> dict:
        out = {"n": self.n, "min_open": [members(u) for u in self.min_open]}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> FinSpace:
        labels = tuple(data["labels"]) if data.get("labels") else None
        return cls(int(data["n"]), tuple(mask(u) for u in data["min_open"]), labels=labels)


@dataclass(frozen=True)
class FinMap:
    source: FinSpace
    target: FinSpace
    table: tuple

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.source.n:
            raise ValueError("map table must be total on the source")
        for v in table:
            if not 0 <= v < self.target.n:
                raise ValueError(f"image point {v} is not in the target")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def image(self, s) -> PointSet:
        return mask(self.table[x] for x in members(self.source._check(s)))

    def preimage(self, s) -> PointSet:
        s = self.target._check(s)
        return mask(x for x, v in enumerate(self.table) if s >> v & 1)

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def compose(self, inner: FinMap) -> FinMap:
        """``self o inner``."""
        if inner.target != self.source:
            raise ValueError("carrier mismatch in composition")
        return FinMap(inner.source, self.target, tuple(self.table[v] for v in inner.table))


def identity_map(space: FinSpace) -> FinMap:
    return FinMap(space, space, tuple(range(space.n)))


def check_continuous(f: FinMap) -> bool:
    # every open set is a union of minimal opens, so these preimages suffice
    return all(f.source.is_open(f.preimage(u)) for u in f.target.min_open)


def check_open_map(f: FinMap) -> bool:
    return all(f.target.is_open(f.image(u)) for u in f.source.min_open)


def check_embedding(f: FinMap) -> bool:
    """Injective, continuous, and a homeomorphism onto the image (subspace topology)."""
    if not f.is_injective() or not check_continuous(f):
        return False
    img = f.image(f.source.full)
    return all(f.image(f.source.min_open[x]) == f.target.min_open[f(x)] & img
               for x in range(f.source.n))


def subspace(space: FinSpace, s) -> tuple[FinSpace, FinMap]:
    """Subspace on the members of ``s`` (renumbered in order) and its inclusion."""
    pts = members(space._check(s))
    index = {p: k for k, p in enumerate(pts)}
    table = tuple(mask(index[q] for q in members(space.min_open[p] & _as_mask(s))) for p in pts)
    labels = tuple(space.label(p) for p in pts) if space.labels else None
    sub = FinSpace(len(pts), table, labels=labels)
    return sub, FinMap(sub, space, tuple(pts))


def disjoint_union(spaces: Sequence[FinSpace]) -> tuple[FinSpace, list[FinMap]]:
    table = []
    offsets = []
    offset = 0
    for sp in spaces:
        offsets.append(offset)
        table.extend(u << offset for u in sp.min_open)
        offset += sp.n
    total = FinSpace(offset, tuple(table))
    injections = [FinMap(sp, total, tuple(range(o, o + sp.n))) for sp, o in zip(spaces, offsets)]
    return total, injections


def quotient(space: FinSpace, classes: Iterable[Iterable[int]]) -> tuple[FinSpace, FinMap]:
    """Quotient by a partition; returns the quotient space and the projection.

    Classes are numbered in the order given.  The minimal open set of a class
    is the smallest saturated open set containing it.
    """
    classes = [sorted(set(c)) for c in classes]
    owner = [-1] * space.n
    for k, c in enumerate(classes):
        if not c:
            raise ValueError("empty class in partition")
        for x in c:
            if not 0 <= x < space.n:
                raise ValueError(f"point {x} is not in the space")
            if owner[x] != -1:
                raise ValueError(f"point {x} lies in two classes")
            owner[x] = k
    if -1 in owner:
        raise ValueError(f"points {[x for x, o in enumerate(owner) if o == -1]} are in no class")
    class_mask = [mask(c) for c in classes]

    def saturate(s: PointSet) -> PointSet:
        out = 0
        for x in members(s):
            out |= class_mask[owner[x]]
        return out

    table = []
    for k in range(len(classes)):
        t = class_mask[k]
        while True:
            grown = t
            for x in members(t):
                grown |= space.min_open[x]
            grown = saturate(grown)
            if grown == t:
                break
            t = grown
        table.append(mask({owner[x] for x in members(t)}))
    q = FinSpace(len(classes), tuple(table))
    return q, FinMap(space, q, tuple(owner))


def canonical_form(space: FinSpace) -> tuple:
    """Lexicographically least minimal-open matrix over all relabellings.

    Points are first split by (size of min open, number of points whose min
    open contains them); only permutations respecting that split are tried.
    """
    n = space.n
    inv = [(bin(space.min_open[x]).count("1"),
            sum(1 for y in range(n) if space.min_open[y] >> x & 1)) for x in range(n)]
    groups: dict = {}
    for x in range(n):
        groups.setdefault(inv[x], []).append(x)
    keys = sorted(groups)
    best = None
    for perms in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = [x for p in perms for x in p]
        pos = {x: i for i, x in enumerate(order)}
        rows = tuple(tuple(sorted(pos[y] for y in members(space.min_open[x]))) for x in order)
        if best is None or rows < best:
            best = rows
    return tuple(sorted(inv)), best


def find_isomorphism(a: FinSpace, b: FinSpace) -> FinMap | None:
    """A homeomorphism ``a -> b`` found by exhaustive search, or None."""
    if a.n != b.n:
        return None

    def sizes(sp: FinSpace) -> list[int]:
        return [bin(u).count("1") for u in sp.min_open]

    sa, sb = sizes(a), sizes(b)
    if sorted(sa) != sorted(sb):
        return None
    for perm in itertools.permutations(range(b.n)):
        if any(sa[x] != sb[perm[x]] for x in range(a.n)):
            continue
        if all(mask(perm[y] for y in members(a.min_open[x])) == b.min_open[perm[x]]
               for x in range(a.n)):
            return FinMap(a, b, perm)
    return None


def all_spaces(n: int) -> list[FinSpace]:
    """One representative of every homeomorphism class of n-point spaces."""
    return list(_all_spaces(n))


_SPACE_CACHE: dict[int, tuple[FinSpace, ...]] = {}


def _all_spaces(n: int) -> tuple[FinSpace, ...]:
    if n in _SPACE_CACHE:
        return _SPACE_CACHE[n]
    if n == 0:
        result = (FinSpace(0, ()),)
    else:
        seen = {}
        for base in _all_spaces(n - 1):
            for ext_space in _extensions(base):
                key = canonical_form(ext_space)
                if key not in seen:
                    seen[key] = ext_space
        result = tuple(seen[k] for k in sorted(seen))
    _SPACE_CACHE[n] = result
    return result


def _extensions(base: FinSpace):
    """Spaces on n+1 points whose subspace on the first n points is ``base``."""
    n = base.n
    opens = base.open_sets()
    closeds = {base.full & ~u for u in opens}
    # new point p: `down` = points below p (p's min open minus p) must be open,
    # `up` = points above p must be closed, and down <= up pointwise
    for down in opens:
        for up in closeds:
            if any(base.min_open[u] & down != down for u in members(up)):
                continue
            new_bit = 1 << n
            table = [base.min_open[x] | (new_bit | down if up >> x & 1 else 0) for x in range(n)]
            table.append(new_bit | down)
            yield FinSpace(n + 1, tuple(table))
