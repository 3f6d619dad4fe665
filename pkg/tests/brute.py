"""Independent brute-force oracles used by the tests.

Nothing here calls the operators under test; each function recomputes its
answer from definitions (open-set lattices, explicit point grids).
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from adjspace.fintop import FinSpace, mask, members


# -- finite spaces ------------------------------------------------------------

def labelled_topologies(n: int) -> list[FinSpace]:
    """Every topology on points 0..n-1, by checking all minimal-open tables."""
    out = []
    for table in itertools.product(range(1 << n), repeat=n):
        if not all(table[x] >> x & 1 for x in range(n)):
            continue
        if all(table[y] & ~table[x] == 0 for x in range(n) for y in members(table[x])):
            out.append(FinSpace(n, table))
    return out


def open_lattice(space: FinSpace) -> set[int]:
    """Open sets generated from the minimal opens by unions."""
    opens = {0}
    for u in space.min_open:
        opens |= {o | u for o in opens}
    return opens


def closure(space: FinSpace, s: int) -> int:
    full = space.full
    out = full
    for u in open_lattice(space):
        closed = full & ~u
        if s & ~closed == 0:
            out &= closed
    return out


def interior(space: FinSpace, s: int) -> int:
    out = 0
    for u in open_lattice(space):
        if u & ~s == 0:
            out |= u
    return out


def is_connected(space: FinSpace, s: int) -> bool:
    """No proper nonempty clopen subset in the subspace topology."""
    if s == 0:
        return False
    rel = {u & s for u in open_lattice(space)}
    return not any(t and t != s and (s & ~t) in rel for t in rel)


def separable(space: FinSpace, x: int, y: int) -> bool:
    opens = open_lattice(space)
    return any(u >> x & 1 and v >> y & 1 and u & v == 0 for u in opens for v in opens)


def quotient_opens(space: FinSpace, classes: list[list[int]]) -> set[int]:
    """Open sets of the quotient: class sets whose union is open upstairs."""
    opens = open_lattice(space)
    out = set()
    for pick in range(1 << len(classes)):
        up = mask(x for k in members(pick) for x in classes[k])
        if up in opens:
            out.add(pick)
    return out


def is_continuous(f_table, source: FinSpace, target: FinSpace) -> bool:
    src = open_lattice(source)
    for v in open_lattice(target):
        pre = mask(x for x in range(source.n) if v >> f_table[x] & 1)
        if pre not in src:
            return False
    return True


def system_key(spaces, blocks) -> tuple:
    """Isomorphism key of a finite gluing: minimise over all point relabellings."""
    offsets = list(itertools.accumulate([0] + [s.n for s in spaces]))
    n = offsets[-1]
    table = []
    comp = []
    for i, s in enumerate(spaces):
        table.extend(u << offsets[i] for u in s.min_open)
        comp.append(list(range(offsets[i], offsets[i + 1])))
    best = None
    for perm in itertools.permutations(range(n)):
        rows = [0] * n
        for x in range(n):
            rows[perm[x]] = mask(perm[y] for y in members(table[x]))
        key = (tuple(rows),
               tuple(sorted(tuple(sorted(perm[x] for x in c)) for c in comp)),
               tuple(sorted(tuple(sorted(perm[x] for x in b)) for b in blocks)))
        if best is None or key < best:
            best = key
    return best


# -- one-dimensional regions on a half-integer grid ---------------------------

LIMIT = 3
GRID = [Fraction(k, 2) for k in range(-2 * LIMIT, 2 * LIMIT + 1)]


def members_1d(region) -> frozenset:
    """Grid points in the region; with integer endpoints in [-2,2] this decides equality."""
    return frozenset(x for x in GRID if region.contains((x,)))


def _cut(x) -> bool:
    # region endpoints are integers in [-2, 2]; everything else sits inside a gap
    return x.denominator == 1 and abs(x) < LIMIT


def closure_1d(s: frozenset) -> frozenset:
    out = set(s)
    for x in GRID:
        if _cut(x) and (x - Fraction(1, 2) in s or x + Fraction(1, 2) in s):
            out.add(x)
    return frozenset(out)


def interior_1d(s: frozenset) -> frozenset:
    out = set()
    for x in s:
        if not _cut(x):
            out.add(x)
        elif x - Fraction(1, 2) in s and x + Fraction(1, 2) in s:
            out.add(x)
    return frozenset(out)


def connected_1d(s: frozenset) -> bool:
    """Nonempty and without a missing grid point between its extremes."""
    if not s:
        return False
    lo, hi = min(s), max(s)
    return all(x in s for x in GRID if lo <= x <= hi)
