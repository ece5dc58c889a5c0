"""Desk-scale ground truth: explicit posets, lattices, and brute force.

Subsets of [n] are bitmasks (bit i set means element i+1 is in the
subset), lattice elements are bitmask encodings closed under OR (join)
and AND (meet), and posets carry their full order relation as bit rows.
Everything here is small by design; the point is to cross-check the
closed-form estimate machinery against objects a desk computer can
enumerate outright.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import networkx as nx
import numpy as np

from .bigcomb import ConstraintViolation, binom

__all__ = [
    "FinitePoset",
    "LatticeTable",
    "CrownCopy",
    "FundamentalPair",
    "BlockPartition",
    "MinGenResult",
    "singleton_poset",
    "crown_poset",
    "build_fsp",
    "build_fd",
    "powerset_lattice",
    "direct_power",
    "join_irreducibles",
    "check_lemma",
    "fundamental_pairs",
    "build_unrelated_family",
    "copies_unrelated",
    "sp_exact",
    "enumerate_crown_copies",
    "permutation_set",
    "gset_size_bruteforce",
    "closure",
    "min_generating_size",
    "max_clique_size",
]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _submasks(m: int) -> Iterator[int]:
    """All submasks of m, including 0 and m itself."""
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


# --- posets ----------------------------------------------------------------


@dataclass(frozen=True)
class FinitePoset:
    """A finite poset on elements 0..size-1.

    ``leq_rows[i]`` has bit j set iff element i <= element j.  ``masks``
    optionally remembers the subset encoding each element came from.
    """

    size: int
    leq_rows: tuple[int, ...]
    masks: tuple[int, ...] | None = None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.leq_rows[i] >> j & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def incomparable(self, i: int, j: int) -> bool:
        return not self.leq(i, j) and not self.leq(j, i)

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> "FinitePoset":
        """The induced inclusion order on distinct subset masks."""
        ms = sorted(set(masks))
        rows = []
        for a in ms:
            row = 0
            for j, b in enumerate(ms):
                if a & b == a:
                    row |= 1 << j
            rows.append(row)
        return cls(size=len(ms), leq_rows=tuple(rows), masks=tuple(ms))

    def validate(self) -> None:
        """Raise unless the relation is reflexive, antisymmetric, transitive."""
        for i in range(self.size):
            if not self.leq(i, i):
                raise ValueError(f"not reflexive at {i}")
            for j in range(self.size):
                if i != j and self.leq(i, j) and self.leq(j, i):
                    raise ValueError(f"not antisymmetric at ({i},{j})")
                if self.leq(i, j):
                    # everything above j must be above i
                    if self.leq_rows[j] & ~self.leq_rows[i]:
                        raise ValueError(f"not transitive through ({i},{j})")

    def cover_pairs(self) -> list[tuple[int, int]]:
        """All (i, j) with j covering i (i < j, nothing strictly between)."""
        covers = []
        for i in range(self.size):
            for j in range(self.size):
                if not self.lt(i, j):
                    continue
                if any(self.lt(i, z) and self.lt(z, j) for z in range(self.size)):
                    continue
                covers.append((i, j))
        return covers

    def lower_covers(self, j: int) -> list[int]:
        return [i for i, jj in self.cover_pairs() if jj == j]

    def _cover_digraph(self) -> "nx.DiGraph":
        g = nx.DiGraph()
        g.add_nodes_from(range(self.size))
        g.add_edges_from(self.cover_pairs())
        return g

    def is_isomorphic_to(self, other: "FinitePoset") -> bool:
        """Order isomorphism, decided on the cover digraphs (VF2)."""
        if self.size != other.size:
            return False
        return nx.is_isomorphic(self._cover_digraph(), other._cover_digraph())


def singleton_poset() -> FinitePoset:
    return FinitePoset(size=1, leq_rows=(1,))


def build_fsp(r: int, a: int, b: int) -> FinitePoset:
    """The subposet {X subset of [r] : a < |X| < b} under inclusion."""
    if not (0 <= a < b <= r and a + 2 <= b):
        raise ConstraintViolation(
            f"need 0 <= a < b <= r and a + 2 <= b, got r={r}, a={a}, b={b}"
        )
    masks = [m for m in range(1 << r) if a < _popcount(m) < b]
    return FinitePoset.from_masks(masks)


def crown_poset() -> FinitePoset:
    """The 6-element poset with two 3-antichains, each bottom below two tops."""
    return build_fsp(3, 0, 3)


# --- lattices ---------------------------------------------------------------


@dataclass(frozen=True)
class LatticeTable:
    """A finite lattice of bitmask-coded elements with join = OR, meet = AND.

    ``masks`` is sorted and closed under OR and AND; ``width`` is the
    number of encoding bits (truth-table bits for free distributive
    lattices, ground-set bits for powerset lattices).  Full size x size
    join/meet tables can be materialized for small instances.
    """

    masks: tuple[int, ...]
    width: int
    _index: dict = field(hash=False, compare=False, repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(self.masks)})

    @property
    def size(self) -> int:
        return len(self.masks)

    def index_of(self, mask: int) -> int:
        return self._index[mask]

    def join(self, i: int, j: int) -> int:
        return self._index[self.masks[i] | self.masks[j]]

    def meet(self, i: int, j: int) -> int:
        return self._index[self.masks[i] & self.masks[j]]

    def join_table(self) -> list[list[int]]:
        if self.size > 1200:
            raise ConstraintViolation(
                f"refusing to materialize a {self.size}x{self.size} join table"
            )
        return [[self.join(i, j) for j in range(self.size)] for i in range(self.size)]

    def meet_table(self) -> list[list[int]]:
        if self.size > 1200:
            raise ConstraintViolation(
                f"refusing to materialize a {self.size}x{self.size} meet table"
            )
        return [[self.meet(i, j) for j in range(self.size)] for i in range(self.size)]

    def leq(self, i: int, j: int) -> bool:
        return self.masks[i] & self.masks[j] == self.masks[i]

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.size - 1


def _monotone_masks(r: int) -> list[int]:
    """Truth-table masks of all monotone Boolean functions of r variables.

    Bit v of a mask is the function value at the point whose coordinate
    bits are the bits of v.  For r <= 4 brute force over all 2^(2^r)
    tables is fine; r = 5 is assembled from ordered pairs (f0, f1) of
    monotone 4-variable functions with f0 <= f1 pointwise, i.e. the two
    cofactors along the fifth variable.
    """
    if r == 0:
        return [0, 1]
    if r <= 4:
        npoints = 1 << r
        full = (1 << npoints) - 1
        # lo_sel[i]: positions v with bit i of v clear
        lo_sel = []
        for i in range(r):
            sel = 0
            for v in range(npoints):
                if not v >> i & 1:
                    sel |= 1 << v
            lo_sel.append(sel)
        result = []
        for mask in range(full + 1):
            ok = True
            for i in range(r):
                low = mask & lo_sel[i]
                high = (mask >> (1 << i)) & lo_sel[i]
                if low & ~high:
                    ok = False
                    break
            if ok:
                result.append(mask)
        return result
    if r == 5:
        quarters = _monotone_masks(4)
        result = []
        for f0 in quarters:
            for f1 in quarters:
                if f0 & f1 == f0:  # f0 <= f1 pointwise
                    result.append(f0 | (f1 << 16))
        return result
    raise ConstraintViolation(f"monotone enumeration supports r <= 5, got r={r}")


def build_fd(r: int) -> tuple[LatticeTable, list[int]]:
    """The free distributive lattice on r generators, plus the generators.

    Elements are the nonconstant monotone Boolean functions of r
    variables as truth-table masks; join and meet are pointwise, i.e.
    bitwise OR and AND.  The generators are the r projections.  Returns
    (lattice, generator indices).
    """
    if not 2 <= r <= 5:
        raise ConstraintViolation(f"build_fd supports 2 <= r <= 5, got r={r}")
    npoints = 1 << r
    full = (1 << npoints) - 1
    masks = [m for m in _monotone_masks(r) if m != 0 and m != full]
    lat = LatticeTable(masks=tuple(sorted(masks)), width=npoints)
    generators = []
    for i in range(r):
        proj = 0
        for v in range(npoints):
            if v >> i & 1:
                proj |= 1 << v
        generators.append(lat.index_of(proj))
    return lat, generators


def powerset_lattice(n: int) -> LatticeTable:
    if n < 0 or n > 20:
        raise ConstraintViolation(f"powerset_lattice supports 0 <= n <= 20, got {n}")
    return LatticeTable(masks=tuple(range(1 << n)), width=n)


def direct_power(lat: LatticeTable, k: int) -> LatticeTable:
    """The k-th direct power; tuples are packed into one wider mask."""
    if k < 1:
        raise ConstraintViolation(f"need k >= 1, got {k}")
    w = lat.width
    combined = [0]
    for _ in range(k):
        combined = [m << w | extra for m in combined for extra in lat.masks]
    return LatticeTable(masks=tuple(sorted(combined)), width=w * k)


def join_irreducibles(lat: LatticeTable) -> FinitePoset:
    """The induced poset of elements with exactly one lower cover.

    In a lattice, an element has exactly one lower cover iff it has a
    strictly smaller element and the join of everything strictly below
    it stays strictly below; that join is bitwise OR here, which keeps
    the scan cheap even for the 7579-element free distributive lattice
    on five generators.
    """
    masks = lat.masks
    if masks and masks[-1] < (1 << 62):
        arr = np.array(masks, dtype=np.uint64)
        ji = []
        for idx, e in enumerate(masks):
            below = (arr & np.uint64(e)) == arr
            below[idx] = False
            if not below.any():
                continue
            orv = int(np.bitwise_or.reduce(arr[below]))
            if orv != e:
                ji.append(e)
    else:
        ji = []
        for e in masks:
            orv = 0
            seen = False
            for x in masks:
                if x != e and x & e == x:
                    orv |= x
                    seen = True
            if seen and orv != e:
                ji.append(e)
    return FinitePoset.from_masks(ji)


def check_lemma(r: int) -> bool:
    """Join-irreducibles of the free distributive lattice vs the full segment poset."""
    lat, _ = build_fd(r)
    return join_irreducibles(lat).is_isomorphic_to(build_fsp(r, 0, r))


# --- the unrelated-family construction --------------------------------------


class BlockPartition(NamedTuple):
    """[n] split into q = floor(n/r) blocks of size r plus a remainder."""

    n: int
    r: int

    @property
    def q(self) -> int:
        return self.n // self.r

    def block(self, j: int) -> int:
        """Mask of block j; j = q gives the remainder block."""
        if j < self.q:
            return ((1 << self.r) - 1) << (j * self.r)
        return ((1 << self.n) - 1) & ~((1 << self.q * self.r) - 1)


class FundamentalPair(NamedTuple):
    i: int
    b_mask: int


def _medium_subsets(block_mask: int, a: int, b: int) -> list[int]:
    bits = [i for i in range(block_mask.bit_length()) if block_mask >> i & 1]
    out = []
    for size in range(a + 1, b):
        for combo in itertools.combinations(bits, size):
            m = 0
            for c in combo:
                m |= 1 << c
            out.append(m)
    return out


def fundamental_pairs(p: int, r: int, a: int, b: int, n: int) -> list[FundamentalPair]:
    """All (i, B) with |B| = h, B disjoint from block i, and B extremal
    (size <= a or >= b) on every earlier block.

    h = p + floor((n - r)/2).  Blocks are the canonical consecutive
    ones; any block choice gives an isomorphic family.
    """
    if not (0 <= a < b <= r and a + 2 <= b):
        raise ConstraintViolation(f"bad segment: r={r}, a={a}, b={b}")
    if not -r <= p <= r:
        raise ConstraintViolation(f"need -r <= p <= r, got p={p}")
    if n < r:
        raise ConstraintViolation(f"need n >= r, got n={n}, r={r}")
    if n > 16:
        raise ConstraintViolation(f"materialization is capped at n <= 16, got n={n}")
    h = p + (n - r) // 2
    blocks = BlockPartition(n, r)
    pairs = []
    if h < 0 or h > n - r:
        return pairs
    for i in range(blocks.q):
        allowed = [pos for pos in range(n) if not blocks.block(i) >> pos & 1]
        for combo in itertools.combinations(allowed, h):
            m = 0
            for c in combo:
                m |= 1 << c
            ok = True
            for j in range(i):
                cnt = _popcount(m & blocks.block(j))
                if a < cnt < b:
                    ok = False
                    break
            if ok:
                pairs.append(FundamentalPair(i, m))
    return pairs


def build_unrelated_family(p: int, r: int, a: int, b: int, n: int) -> list[list[int]]:
    """One poset copy per fundamental pair: {B union X : X medium in block i}.

    The family size equals the general lower estimate with the same
    parameters, and distinct copies are pairwise unrelated; both facts
    are checked by the test suite, not assumed here.
    """
    blocks = BlockPartition(n, r)
    family = []
    for i, b_mask in fundamental_pairs(p, r, a, b, n):
        mediums = _medium_subsets(blocks.block(i), a, b)
        family.append(sorted(b_mask | x for x in mediums))
    return family


def copies_unrelated(c1: Iterable[int], c2: Iterable[int]) -> bool:
    """Every element of one copy incomparable with every element of the other."""
    for x in c1:
        for y in c2:
            xy = x & y
            if xy == x or xy == y:
                return False
    return True


# --- exact unrelated-copy counts ---------------------------------------------


def max_clique_size(neighbors: list[set[int]]) -> int:
    """Maximum clique by branch and bound with a greedy coloring bound.

    Vertex order is the given index order, so results and running time
    are deterministic.
    """
    best = 0

    def expand(size: int, cand: list[int]) -> None:
        nonlocal best
        if not cand:
            if size > best:
                best = size
            return
        color: dict[int, int] = {}
        classes: list[set[int]] = []
        for v in cand:
            for ci, cl in enumerate(classes):
                if neighbors[v].isdisjoint(cl):
                    cl.add(v)
                    color[v] = ci + 1
                    break
            else:
                classes.append({v})
                color[v] = len(classes)
        ordered = sorted(cand, key=lambda v: color[v])
        while ordered:
            v = ordered.pop()
            if size + color[v] <= best:
                return
            expand(size + 1, [w for w in ordered if w in neighbors[v]])

    expand(0, list(range(len(neighbors))))
    return best


@dataclass(frozen=True)
class CrownCopy:
    """A normalized crown copy: core T and dotted parts A, B, C.

    The six member subsets are T|A, T|B, T|C, T|A|B, T|A|C, T|B|C.
    """

    t: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        parts = (self.a, self.b, self.c)
        if any(x == 0 for x in parts):
            raise ConstraintViolation("dotted parts must be nonempty")
        combined = self.t
        for x in parts:
            if combined & x:
                raise ConstraintViolation("crown parts must be pairwise disjoint")
            combined |= x

    def members(self) -> tuple[int, ...]:
        t, a, b, c = self.t, self.a, self.b, self.c
        return (t | a, t | b, t | c, t | a | b, t | a | c, t | b | c)


def enumerate_crown_copies(n: int) -> list[CrownCopy]:
    """All normalized crown copies in the powerset of [n], deduplicated.

    The parts A, B, C are interchangeable, so copies are canonicalized
    by increasing lowest set bit of A, B, C; the enumeration order is
    lexicographic on the (T, A, B, C) masks.
    """
    full = (1 << n) - 1
    out = []
    for t in range(full + 1):
        rest = full & ~t
        for a in _submasks(rest):
            if a == 0:
                continue
            rest2 = rest & ~a
            for b in _submasks(rest2):
                if b == 0 or (b & -b) < (a & -a):
                    continue
                rest3 = rest2 & ~b
                for c in _submasks(rest3):
                    if c == 0 or (c & -c) < (b & -b):
                        continue
                    out.append(CrownCopy(t, a, b, c))
    out.sort(key=lambda cc: (cc.t, cc.a, cc.b, cc.c))
    return out


def _sp_from_copies(copies: list) -> int:
    members = [tuple(c) for c in copies]
    neighbors: list[set[int]] = [set() for _ in members]
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if copies_unrelated(members[i], members[j]):
                neighbors[i].add(j)
                neighbors[j].add(i)
    return max_clique_size(neighbors)


def _copies_of_poset(u: FinitePoset, n: int, node_budget: int = 10**7) -> list[tuple[int, ...]]:
    """All subsets of the powerset of [n] order-isomorphic to u."""
    full = 1 << n
    # place elements in a linear extension so constraints bind early
    order = sorted(range(u.size), key=lambda e: (sum(u.lt(x, e) for x in range(u.size)), e))
    placed: list[int] = []
    found: set[frozenset[int]] = set()
    steps = 0

    def rec(idx: int) -> None:
        nonlocal steps
        if idx == u.size:
            found.add(frozenset(placed))
            return
        e = order[idx]
        for m in range(full):
            steps += 1
            if steps > node_budget:
                raise ConstraintViolation(
                    f"copy enumeration exceeded the {node_budget}-step budget"
                )
            ok = True
            for k in range(idx):
                f = order[k]
                s = placed[k]
                below = s & m == s
                above = s & m == m
                if below != u.leq(f, e) or above != u.leq(e, f):
                    ok = False
                    break
            if ok:
                placed.append(m)
                rec(idx + 1)
                placed.pop()

    rec(0)
    return sorted(tuple(sorted(fs)) for fs in found)


def sp_exact(u: FinitePoset, n: int) -> int:
    """Maximum number of pairwise unrelated copies of u in the powerset of [n].

    Crown-shaped posets go through the normalized crown enumeration;
    anything else is enumerated directly, which is only feasible for
    n <= 6 and small u.
    """
    if n < 0:
        raise ConstraintViolation(f"need n >= 0, got {n}")
    if u.size == 6 and u.is_isomorphic_to(crown_poset()):
        if n > 6:
            raise ConstraintViolation(f"crown count is capped at n <= 6, got n={n}")
        if n < 3:
            return 0
        copies = [cc.members() for cc in enumerate_crown_copies(n)]
        return _sp_from_copies(copies)
    if n > 6 or u.size > 8:
        raise ConstraintViolation(
            f"general count is capped at n <= 6 and |U| <= 8, got n={n}, |U|={u.size}"
        )
    copies = _copies_of_poset(u, n)
    if not copies:
        return 0
    return _sp_from_copies(copies)


# --- permutation sets --------------------------------------------------------


def permutation_set(n: int, mask: int) -> set[tuple[int, ...]]:
    """All permutations of range(n) whose first popcount(mask) entries form mask."""
    if n > 8:
        raise ConstraintViolation(f"permutation sets are capped at n <= 8, got {n}")
    size = _popcount(mask)
    out = set()
    for perm in itertools.permutations(range(n)):
        seg = 0
        for e in perm[:size]:
            seg |= 1 << e
        if seg == mask:
            out.add(perm)
    return out


def gset_size_bruteforce(n: int, c: CrownCopy) -> int:
    """Count permutations whose some initial segment is one of the six
    member subsets of the crown copy; one full pass over all n! orders.
    """
    if n > 8:
        raise ConstraintViolation(f"brute force is capped at n <= 8, got n={n}")
    members = c.members()
    if any(m >> n for m in members):
        raise ConstraintViolation("crown copy does not fit in the ground set")
    by_size: dict[int, set[int]] = {}
    for m in members:
        by_size.setdefault(_popcount(m), set()).add(m)
    count = 0
    for perm in itertools.permutations(range(n)):
        seg = 0
        for idx, e in enumerate(perm, 1):
            seg |= 1 << e
            if idx in by_size and seg in by_size[idx]:
                count += 1
                break
    return count


# --- generation --------------------------------------------------------------


def closure(lat: LatticeTable, seed: Iterable[int]) -> frozenset[int]:
    """Least subuniverse of the lattice containing the seed element indices."""
    seed = list(seed)
    if not seed:
        raise ConstraintViolation("closure needs a nonempty seed")
    masks = lat.masks
    have = {masks[i] for i in seed}
    frontier = list(have)
    while frontier:
        new = []
        for m in frontier:
            for x in list(have):
                for cand in (m | x, m & x):
                    if cand not in have:
                        have.add(cand)
                        new.append(cand)
        frontier = new
    return frozenset(lat.index_of(m) for m in have)


def _closure_reaches_all(masks: tuple[int, ...], seed_masks: tuple[int, ...], size: int) -> bool:
    have = set(seed_masks)
    frontier = list(have)
    while frontier:
        new = []
        for m in frontier:
            for x in list(have):
                u = m | x
                if u not in have:
                    have.add(u)
                    new.append(u)
                w = m & x
                if w not in have:
                    have.add(w)
                    new.append(w)
        frontier = new
        if len(have) == size:
            return True
    return len(have) == size


@dataclass
class MinGenResult:
    """Outcome of the exhaustive minimum-generating-set search.

    When a cap stops the search early, ``value`` is None and
    ``lower_bound`` is the largest m with "no generating set of size
    < m" fully established; ``lower_bound_only`` marks that case.
    """

    value: int | None
    lower_bound: int
    witness: tuple[int, ...] | None
    lower_bound_only: bool
    closure_calls: int


def min_generating_size(
    lat: LatticeTable,
    closure_budget: int = 10**8,
    subsets_cap: int = 5 * 10**6,
) -> MinGenResult:
    """Smallest m such that some m-element subset generates the lattice.

    Sizes are tried in increasing order; within a size, subsets are
    enumerated colexicographically with early exit at the first witness.
    A subset whose overall join is not the top or whose overall meet is
    not the bottom cannot generate and is skipped before closure.
    """
    masks = lat.masks
    size = lat.size
    top = masks[-1]
    bottom = masks[0]
    calls = 0
    if size == 1:
        return MinGenResult(1, 1, (0,), False, 0)
    for m in range(1, size + 1):
        if binom(size, m) > subsets_cap:
            return MinGenResult(None, m, None, True, calls)
        for combo in _colex_combinations(size, m):
            seed = tuple(masks[i] for i in combo)
            join_all = 0
            meet_all = ~0
            for s in seed:
                join_all |= s
                meet_all &= s
            if join_all != top or meet_all != bottom:
                continue
            calls += 1
            if calls > closure_budget:
                return MinGenResult(None, m, None, True, calls)
            if _closure_reaches_all(masks, seed, size):
                return MinGenResult(m, m, combo, False, calls)
    return MinGenResult(None, size + 1, None, True, calls)


def _colex_combinations(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """Size-m index combinations in colexicographic order."""
    if m == 0:
        yield ()
        return
    for top in range(m - 1, n):
        for rest in _colex_combinations(top, m - 1):
            yield rest + (top,)
