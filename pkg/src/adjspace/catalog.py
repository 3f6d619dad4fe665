"""Named example systems, their finite models, and JSON (de)serialisation.

JSON keys ``"i,j"`` and glued-set keys are 1-based positions in ``spaces``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable

from .adjunction import (EUCLIDEAN, FINITE, AdjSystem, AdjunctionError, EuclideanSpace,
                         GluedSet, GluedSpace)
from .fintop import FinSpace, mask
from .regions import DiagAffine, Interval, NEG_INF, POS_INF, Region, _pieces


def _line(text: str) -> Region:
    return Region.line(Interval.parse(text))


def n_branched_line(n: int = 2) -> AdjSystem:
    """``n`` copies of the real line glued along the negative numbers."""
    if n < 1:
        raise AdjunctionError("n must be at least 1")
    neg = _line("(-inf,0)")
    regions = {(i, j): neg for i, j in itertools.permutations(range(n), 2)}
    return AdjSystem([1] * n, regions, name=f"n_branched_line({n})")


def nontransitive_line() -> AdjSystem:
    """Three lines: 1 and 2 share the negatives, 2 and 3 the positives."""
    neg, pos = _line("(-inf,0)"), _line("(0,inf)")
    regions = {(0, 1): neg, (1, 0): neg, (1, 2): pos, (2, 1): pos}
    return AdjSystem([1, 1, 1], regions, name="nontransitive_line")


def doubled_plane() -> AdjSystem:
    """Two planes glued along the open lower half-plane."""
    lower = Region.box(Interval.line(), Interval(NEG_INF, False, Fraction(0), False))
    return AdjSystem([2, 2], {(0, 1): lower, (1, 0): lower}, name="doubled_plane")


def doubled_plane_V(space: GluedSpace) -> GluedSet:
    """Copy 1 minus its closed positive x-axis, copy 2 minus its closed negative x-axis."""
    pos_ray = Region.box(Interval(Fraction(0), True, POS_INF, False), Interval.at(0))
    neg_ray = Region.box(Interval(NEG_INF, False, Fraction(0), True), Interval.at(0))
    u1 = Region.full(2) - pos_ray
    u2 = Region.full(2) - neg_ray
    return space.pushforward(0, u1) | space.pushforward(1, u2)


def N_truncated(k: int) -> AdjSystem:
    """``k`` lines with ``A_ij = (-inf, min(i,j))`` in 1-based numbering."""
    if k < 2:
        raise AdjunctionError("k must be at least 2")
    regions = {(i, j): Region.line(Interval(NEG_INF, False, Fraction(min(i, j) + 1), False))
               for i, j in itertools.permutations(range(k), 2)}
    return AdjSystem([1] * k, regions, name=f"N_truncated({k})")


def region_union_V(space: GluedSpace) -> GluedSet:
    """Union of the images of all off-diagonal gluing regions."""
    sys = space.system
    out = space.empty()
    for i, j in itertools.permutations(range(sys.m), 2):
        out = out | space.pushforward(i, sys.regions[i, j])
    return out


def finite_branched(n: int = 2) -> AdjSystem:
    """``n`` copies of the 3-point line model {L, O, R} glued along the open point L."""
    if n < 1:
        raise AdjunctionError("n must be at least 1")
    line = FinSpace.line_model()
    regions = {(i, j): 1 for i, j in itertools.permutations(range(n), 2)}
    maps = {(i, j): {0: 0} for i, j in itertools.permutations(range(n), 2)}
    return AdjSystem([line] * n, regions, maps, name=f"finite_branched({n})")


def single_line() -> AdjSystem:
    return AdjSystem([1], name="single_line")


BUILDERS: dict[str, tuple[Callable, int]] = {
    "n_branched_line": (n_branched_line, 1),
    "nontransitive_line": (nontransitive_line, 0),
    "doubled_plane": (doubled_plane, 0),
    "N_truncated": (N_truncated, 1),
    "finite_branched": (finite_branched, 1),
    "single_line": (single_line, 0),
}


def build_named(name: str, *params) -> AdjSystem:
    if name not in BUILDERS:
        raise AdjunctionError(f"unknown catalog entry {name!r}; known: {', '.join(BUILDERS)}")
    fn, arity = BUILDERS[name]
    if len(params) > arity:
        raise AdjunctionError(f"{name} takes at most {arity} parameter(s)")
    return fn(*(int(p) for p in params))


def euclidean_catalog() -> list[AdjSystem]:
    return ([n_branched_line(n) for n in (1, 2, 3, 5)] + [nontransitive_line(), doubled_plane()]
            + [N_truncated(k) for k in range(2, 7)] + [single_line()])


# -- finite models ------------------------------------------------------------

class FiniteModel:
    """Finite model of a euclidean system whose regions are unions of grid cells.

    Each axis is cut at the grid points into open gaps and points; a point's
    minimal open set is itself plus its two neighbouring gaps.  Cells of a
    plane are products.  Cells become the points of a finite space and the
    regions and maps are transported cell-by-cell.
    """

    def __init__(self, sys: AdjSystem):
        if sys.backend != EUCLIDEAN:
            raise AdjunctionError("finite models are built from euclidean systems")
        self.source = sys
        grid = self._grid(sys)
        self.cells: list[list[tuple]] = []
        spaces = []
        for i, sp in enumerate(sys.spaces):
            axes = [_pieces(grid[i][a]) for a in range(sp.dim)]
            cells = list(itertools.product(*(range(len(ax)) for ax in axes)))
            self.cells.append([tuple(ax[k] for ax, k in zip(axes, c)) for c in cells])
            index = {c: n for n, c in enumerate(cells)}

            def nbhd(k: int, size: int) -> list[int]:
                # odd positions are points, even are gaps
                return [k - 1, k, k + 1] if k % 2 else [k]

            table = []
            for c in cells:
                opts = [nbhd(k, len(ax)) for k, ax in zip(c, axes)]
                table.append(mask(index[d] for d in itertools.product(*opts)))
            spaces.append(FinSpace(len(cells), tuple(table),
                                   labels=tuple(_cell_label(b) for b in self.cells[i])))
        regions, maps = {}, {}
        for (i, j), a in sys.regions.items():
            inside = [n for n, b in enumerate(self.cells[i]) if self._cell_in(b, a)]
            regions[i, j] = mask(inside)
            f = sys.maps[i, j]
            maps[i, j] = {n: self.cell_of(j, f(_cell_point(self.cells[i][n]))) for n in inside}
        self.system = AdjSystem(spaces, regions, maps, labels=sys.labels,
                                name=f"finite_model({sys.name})")

    @staticmethod
    def _grid(sys: AdjSystem) -> list[list[set]]:
        grid = [[set() for _ in range(sp.dim)] for sp in sys.spaces]
        for (i, _), a in sys.regions.items():
            for axis in range(a.dim):
                grid[i][axis].update(a.endpoints(axis))
        # transport cut points across the maps until stable
        while True:
            changed = False
            for (i, j), f in sys.maps.items():
                if sys.regions[i, j].is_empty():
                    continue
                for axis in range(f.dim):
                    for e in list(grid[i][axis]):
                        y = f.a[axis] * e + f.b[axis]
                        if y not in grid[j][axis]:
                            grid[j][axis].add(y)
                            changed = True
            if not changed:
                return grid

    @staticmethod
    def _cell_in(cell: tuple, a: Region) -> bool:
        box = Region.box(*cell)
        if box <= a:
            return True
        if (box & a).is_empty():
            return False
        raise AdjunctionError("region is not a union of grid cells")

    def cell_of(self, i: int, x: tuple) -> int:
        for n, cell in enumerate(self.cells[i]):
            if all(x[k] in iv for k, iv in enumerate(cell)):
                return n
        raise AssertionError(x)

    def witness(self, i: int, n: int) -> tuple:
        return _cell_point(self.cells[i][n])


def _cell_point(cell: tuple) -> tuple:
    return tuple(iv.witness() for iv in cell)


def _cell_label(cell: tuple) -> str:
    return "x".join(str(iv) for iv in cell)


def finite_model(sys: AdjSystem) -> FiniteModel:
    return FiniteModel(sys)


# -- JSON ---------------------------------------------------------------------

def _key(i: int, j: int) -> str:
    return f"{i + 1},{j + 1}"


def _parse_key(key: str) -> tuple[int, int]:
    try:
        i, j = (int(t) for t in key.split(","))
    except ValueError:
        raise AdjunctionError(f"bad index pair {key!r}") from None
    return i - 1, j - 1


def system_to_json(sys: AdjSystem) -> dict:
    out: dict = {"backend": sys.backend, "labels": list(sys.labels)}
    if sys.name:
        out["name"] = sys.name
    if sys.backend == FINITE:
        out["spaces"] = [sp.to_json() for sp in sys.spaces]
    else:
        out["spaces"] = [{"dim": sp.dim} for sp in sys.spaces]
    out["regions"], out["maps"] = {}, {}
    for i, j in itertools.product(range(sys.m), repeat=2):
        a, f = sys.regions[i, j], sys.maps[i, j]
        if sys.backend == FINITE:
            if i != j and a:
                out["regions"][_key(i, j)] = sorted(f)
                out["maps"][_key(i, j)] = sorted([x, y] for x, y in f.items())
        elif i != j and not a.is_empty():
            out["regions"][_key(i, j)] = a.to_json()
            if not f.is_identity:
                out["maps"][_key(i, j)] = f.to_json()
    return out


def region_from_json(data, dim: int) -> Region:
    if isinstance(data, str):
        return Region(dim, [(Interval.parse(data),)] if dim == 1 else [])
    return Region.from_json(data, dim)


def system_from_json(data: dict) -> AdjSystem:
    if not isinstance(data, dict) or "spaces" not in data:
        raise AdjunctionError("system JSON needs a 'spaces' list")
    backend = data.get("backend", EUCLIDEAN)
    try:
        if backend == FINITE:
            spaces = [FinSpace.from_json(s) for s in data["spaces"]]
        elif backend == EUCLIDEAN:
            spaces = [EuclideanSpace(s["dim"] if isinstance(s, dict) else int(s)) for s in data["spaces"]]
        else:
            raise AdjunctionError(f"unknown backend {backend!r}")
        regions, maps = {}, {}
        for key, val in data.get("regions", {}).items():
            i, j = _parse_key(key)
            if not 0 <= i < len(spaces):
                raise AdjunctionError(f"index pair {key!r} out of range")
            regions[i, j] = val if backend == FINITE else region_from_json(val, spaces[i].dim)
        for key, val in data.get("maps", {}).items():
            i, j = _parse_key(key)
            maps[i, j] = {int(x): int(y) for x, y in val} if backend == FINITE else DiagAffine.from_json(val)
        return AdjSystem(spaces, regions, maps, labels=data.get("labels"), name=data.get("name"))
    except (KeyError, TypeError) as exc:
        raise AdjunctionError(f"malformed system JSON: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, AdjunctionError):
            raise
        raise AdjunctionError(f"malformed system JSON: {exc}") from None


def gluedset_from_json(space: GluedSpace, data: dict) -> GluedSet:
    """``{"sets": {"1": region-or-point-list, ...}}``; the result is saturated."""
    sets = data.get("sets", data) if isinstance(data, dict) else None
    if not isinstance(sets, dict):
        raise AdjunctionError("glued-set JSON needs a 'sets' object")
    parts = {}
    for key, val in sets.items():
        i = int(key) - 1
        if not 0 <= i < space.m:
            raise AdjunctionError(f"component {key} out of range")
        if space.backend == FINITE:
            parts[i] = mask(int(x) for x in val)
        else:
            parts[i] = region_from_json(val, space.system.spaces[i].dim)
    return space.saturate(parts)
