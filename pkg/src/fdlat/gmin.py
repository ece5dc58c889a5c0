"""Separated-pair machinery and the accuracy-1/2 decision procedure.

A pair of estimate functions (lower, upper) brackets the unrelated-copy
count Sp(U, n).  When the pair is *separated*, upper(n) <= lower(n+1)
for every n, and the lower estimate is strictly increasing, the minimum
generating size of the k-th direct power is pinned to either a unique
value or a two-element window {n, n+1}: locate the unique n with
lower(n) < k <= lower(n+1); if upper(n) < k the answer is exactly n+1,
otherwise it is n or n+1.

All lower estimates here plateau at value 1 on the first two arguments
(lower(r) == lower(r+1) == 1), so strict increase, and hence the
decision scan, starts at r+1.  That forward-scan start is a documented
implementation choice, not part of the decision statement itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .bigcomb import ConstraintViolation
from .estimates import G3_CERTIFIED_MAX, f_lower_full, flat_lower, g3_doublestar, g_upper

__all__ = [
    "EstimatePair",
    "SeparationReport",
    "GminResult",
    "default_pair",
    "is_separated",
    "gmin_power",
    "find_best_p",
    "corollary_upper",
    "strict_increase_check",
]


@dataclass(frozen=True)
class EstimatePair:
    """A named (lower, upper) estimate pair defined on all n >= domain_start."""

    name: str
    lower: Callable[[int], int]
    upper: Callable[[int], int]
    domain_start: int

    @property
    def search_start(self) -> int:
        """First n from which the lower estimate is strictly increasing.

        The full-segment lower estimates satisfy lower(s) = lower(s+1) = 1
        at s = domain_start, so the decision scan starts one step later.
        """
        return self.domain_start + 1


def chain_pair(r: int) -> EstimatePair:
    """The chain-based pair (flat lower estimate, g upper estimate)."""
    if r < 3:
        raise ConstraintViolation(f"need r >= 3, got {r}")
    return EstimatePair(
        f"flat{r}/g{r}",
        lambda n: flat_lower(r, n),
        lambda n: g_upper(r, n),
        r,
    )


def crown_pair() -> EstimatePair:
    """The sharp r = 3 pair: crown upper estimate on the certified range,
    chain-based estimate beyond it (both separated against the lower one)."""

    def upper3(n: int) -> int:
        if n <= G3_CERTIFIED_MAX:
            return g3_doublestar(n)
        return g_upper(3, n)

    return EstimatePair("flat3/g3**", lambda n: flat_lower(3, n), upper3, 3)


def default_pair(r: int) -> EstimatePair:
    """The default estimate pair for the r-generator segment poset.

    r = 2 pairs the exact antichain count with itself; r = 3 uses the
    sharp crown upper estimate; r >= 4 uses the chain-based pair.
    """
    if r < 2:
        raise ConstraintViolation(f"need r >= 2, got {r}")
    if r == 2:
        from .estimates import g2

        return EstimatePair("g2/g2", g2, g2, 2)
    if r == 3:
        return crown_pair()
    return chain_pair(r)


@dataclass
class SeparationReport:
    """Outcome of a separation sweep over one estimate pair.

    ``violations`` lists every n with upper(n) > lower(n+1) and
    ``equalities`` every n with upper(n) == lower(n+1); the pair is
    separated on the range iff ``violations`` is empty.
    """

    pair: str
    n_lo: int
    n_hi: int
    violations: list[int] = field(default_factory=list)
    equalities: list[int] = field(default_factory=list)

    @property
    def separated(self) -> bool:
        return not self.violations


def is_separated(pair: EstimatePair, n_lo: int, n_hi: int) -> SeparationReport:
    """Check upper(n) <= lower(n+1) for every n in [n_lo, n_hi]."""
    if n_lo < pair.domain_start:
        raise ConstraintViolation(
            f"range starts at {n_lo}, below the pair domain start {pair.domain_start}"
        )
    report = SeparationReport(pair=pair.name, n_lo=n_lo, n_hi=n_hi)
    for n in range(n_lo, n_hi + 1):
        u = pair.upper(n)
        l_next = pair.lower(n + 1)
        if u > l_next:
            report.violations.append(n)
        elif u == l_next:
            report.equalities.append(n)
    return report


@dataclass
class GminResult:
    """Decision for the minimum generating size of the k-th power.

    Exactly one of ``exact`` / ``ambiguous`` is set.  ``witnesses`` is
    the evidence triple (lower(n), upper(n), lower(n+1)) at the located
    crossing n.
    """

    r: int
    k: int
    exact: int | None
    ambiguous: tuple[int, int] | None
    witnesses: tuple[int, int, int]

    def outcome_dict(self) -> dict:
        if self.exact is not None:
            return {"exact": self.exact}
        return {"ambiguous": list(self.ambiguous)}


def _locate_crossing(lower: Callable[[int], int], start: int, k: int) -> int:
    """The unique n >= start with lower(n) < k <= lower(n+1).

    Requires lower strictly increasing on n >= start and lower(start) < k.
    Gallops to bracket the crossing, then bisects, so only O(log n)
    evaluations of the lower estimate are needed even for n ~ 6000.
    """
    cache: dict[int, int] = {}

    def f(n: int) -> int:
        if n not in cache:
            cache[n] = lower(n)
        return cache[n]

    lo = start
    step = 1
    hi = start + step
    while f(hi) < k:
        lo = hi
        step *= 2
        hi = start + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) < k:
            lo = mid
        else:
            hi = mid
    return lo


def gmin_power(r: int, k: int, pair: EstimatePair | None = None) -> GminResult:
    """Decide the minimum generating size of the k-th direct power.

    Returns Exact(n+1) when upper(n) < k at the crossing n, else
    Ambiguous(n, n+1).  When both branches apply (k == lower(n+1) and
    k <= upper(n)) the ambiguous answer is kept; the decision statement
    licenses no tightening there.
    """
    if k < 2:
        raise ConstraintViolation(f"need k >= 2, got {k}")
    if pair is None:
        pair = default_pair(r)
    start = pair.search_start
    if k <= pair.lower(start):
        raise ConstraintViolation(
            f"k={k} is not above lower({start})={pair.lower(start)}; "
            "the decision procedure needs lower(start) < k"
        )
    n = _locate_crossing(pair.lower, start, k)
    f1n = pair.lower(n)
    f1n1 = pair.lower(n + 1)
    f2n = pair.upper(n)
    if f2n > f1n1:
        raise ConstraintViolation(
            f"pair {pair.name} is not separated at n={n}: "
            f"upper({n})={f2n} > lower({n + 1})={f1n1}"
        )
    witnesses = (f1n, f2n, f1n1)
    if f2n < k:
        return GminResult(r=r, k=k, exact=n + 1, ambiguous=None, witnesses=witnesses)
    return GminResult(r=r, k=k, exact=None, ambiguous=(n, n + 1), witnesses=witnesses)


def find_best_p(r: int, n: int) -> set[int]:
    """All p in {-r, ..., r} maximizing the full-segment lower estimate."""
    if not 3 <= r <= n:
        raise ConstraintViolation(f"need 3 <= r <= n, got r={r}, n={n}")
    values = {p: f_lower_full(p, r, n) for p in range(-r, r + 1)}
    best = max(values.values())
    return {p for p, v in values.items() if v == best}


def corollary_upper(r: int, k: int) -> int:
    """Smallest n with k <= flat_lower(r, n).

    This n is an upper bound on the minimum generating size of the k-th
    power of EVERY r-generated distributive lattice.
    """
    if r < 3:
        raise ConstraintViolation(f"need r >= 3, got {r}")
    if k < 2:
        raise ConstraintViolation(f"need k >= 2, got {k}")
    # flat_lower(r, r) = 1 < k, so the crossing search applies directly.
    n = _locate_crossing(lambda m: flat_lower(r, m), r, k)
    return n + 1


def strict_increase_check(fn: Callable[[int], int], n_lo: int, n_hi: int) -> bool:
    """True iff fn(n) < fn(n+1) for every n in [n_lo, n_hi]."""
    prev = fn(n_lo)
    for n in range(n_lo + 1, n_hi + 2):
        cur = fn(n)
        if not prev < cur:
            return False
        prev = cur
    return True
