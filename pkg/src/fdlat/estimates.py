"""Closed-form lower and upper estimates for unrelated-copy counts.

The central objects are the lower-estimate family ``f_lower_general``
(a double sum over block indices and composition vectors), its
restricted fast form ``f_lower_full`` for the (a, b) = (0, r) segment,
and the upper estimates ``g_upper``, ``g3_star`` and ``g3_doublestar``.
All functions return exact ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .bigcomb import ConstraintViolation, binom, factorial, factorial_list, fsp

__all__ = [
    "EstimateParams",
    "f_lower_general",
    "f_lower_max",
    "f_lower_full",
    "flat_lower",
    "g_upper",
    "g2",
    "g3_star",
    "g3_doublestar",
    "G3_CERTIFIED_MAX",
]

# The closed form behind g3_star is certified by exhaustive search only
# up to this n; beyond it callers must opt in to a fresh search.
G3_CERTIFIED_MAX = 300


@dataclass(frozen=True)
class EstimateParams:
    """Parameter tuple (r, a, b, p, n) for the general lower estimate.

    Constraints: 0 <= a < b <= r with a + 2 <= b, -r <= p <= r, n >= r.
    """

    r: int
    a: int
    b: int
    p: int
    n: int

    def __post_init__(self) -> None:
        if not (0 <= self.a < self.b <= self.r):
            raise ConstraintViolation(
                f"need 0 <= a < b <= r, got a={self.a}, b={self.b}, r={self.r}"
            )
        if self.a + 2 > self.b:
            raise ConstraintViolation(
                f"need a + 2 <= b, got a={self.a}, b={self.b}"
            )
        if not (-self.r <= self.p <= self.r):
            raise ConstraintViolation(
                f"need -r <= p <= r, got p={self.p}, r={self.r}"
            )
        if self.n < self.r:
            raise ConstraintViolation(
                f"need n >= r, got n={self.n}, r={self.r}"
            )

    @property
    def index_set(self) -> tuple[int, ...]:
        """The gapped index set {0..a} union {b..r} of the composition vectors."""
        return tuple(range(0, self.a + 1)) + tuple(range(self.b, self.r + 1))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All vectors of `parts` nonnegative ints summing to `total`, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def f_lower_general(params: EstimateParams) -> int:
    """The general lower estimate: a sum over block counts and compositions.

    Outer index i runs from 0 to floor(n/r) - 1.  For each composition
    vector v of weight i over the gapped index set, the summand is

        multinomial(i, v) * C(n - (i+1)r, h - sum_j j*v[j]) * prod_j C(r, j)^v[j]

    with h = p + floor((n - r)/2).  Out-of-range middle binomials
    contribute 0 and the whole summand is skipped in that case.
    """
    r, a, b, p, n = params.r, params.a, params.b, params.p, params.n
    q = n // r
    h = p + (n - r) // 2
    idx = params.index_set
    fact = factorial_list(max(n, q))
    col_binoms = [binom(r, j) for j in idx]
    total = 0
    for i in range(q):
        mid_top = n - (i + 1) * r
        for v in _compositions(i, len(idx)):
            k = h - sum(j * vj for j, vj in zip(idx, v))
            mid = binom(mid_top, k)
            if mid == 0:
                continue
            coeff = fact[i]
            for vj in v:
                coeff //= fact[vj]
            term = coeff * mid
            for cb, vj in zip(col_binoms, v):
                if vj:
                    term *= cb**vj
            total += term
    return total


def _binom_from_table(fact: list[int], n: int, k: int) -> int:
    if k < 0 or k > n or n < 0:
        return 0
    return fact[n] // (fact[k] * fact[n - k])


def f_lower_full(p: int, r: int, n: int) -> int:
    """Lower estimate for the full segment (a, b) = (0, r).

        sum_{i=0}^{floor(n/r)-1} sum_{j=0}^{i} C(i, j) * C(n-(i+1)r, h-jr)

    with h = p + floor((n-r)/2).  Equals ``f_lower_general`` with
    a = 0, b = r.  The inner binomials for consecutive j differ by r in
    the lower index, so each is derived from its neighbour by an exact
    multiply/divide step instead of being recomputed; only one anchored
    binomial per i is taken from the factorial table.  This is what
    makes the n ~ 6000 evaluations cheap.
    """
    if not 3 <= r <= n:
        raise ConstraintViolation(f"need 3 <= r <= n, got r={r}, n={n}")
    if not -r <= p <= r:
        raise ConstraintViolation(f"need -r <= p <= r, got p={p}, r={r}")
    h = p + (n - r) // 2
    if h < 0:
        return 0
    q = n // r
    fact = factorial_list(n)
    total = 0
    for i in range(q):
        mid_top = n - (i + 1) * r
        # j values with 0 <= h - j*r <= mid_top
        j_lo = max(0, -((mid_top - h) // r))
        j_hi = min(i, h // r)
        if j_lo > j_hi:
            continue
        k = h - j_lo * r
        mid = _binom_from_table(fact, mid_top, k)
        inner = 0
        for j in range(j_lo, j_hi + 1):
            inner += math.comb(i, j) * mid
            if j < j_hi:
                # C(N, k-r) = C(N, k) * k(k-1)...(k-r+1) / (N-k+1)...(N-k+r)
                num = 1
                for t in range(r):
                    num *= k - t
                den = 1
                for t in range(1, r + 1):
                    den *= mid_top - k + t
                mid = mid * num // den
                k -= r
        total += inner
    return total


@lru_cache(maxsize=1024)
def flat_lower(r: int, n: int) -> int:
    """The p = 0 member of the full-segment lower-estimate family."""
    return f_lower_full(0, r, n)


def f_lower_max(r: int, a: int, b: int, n: int) -> int:
    """Maximum of the general lower estimate over p in {-r, ..., r}.

    For the full segment (a, b) = (0, r) the per-p values come from the
    fast ``f_lower_full`` kernel; agreement of that kernel with
    ``f_lower_general`` is a separately tested invariant.
    """
    if a == 0 and b == r and r >= 3:
        return max(f_lower_full(p, r, n) for p in range(-r, r + 1))
    return max(
        f_lower_general(EstimateParams(r=r, a=a, b=b, p=p, n=n))
        for p in range(-r, r + 1)
    )


def g_upper(r: int, n: int) -> int:
    """Chain-based upper estimate floor(fsp(n + 2 - r) / 2)."""
    if not 2 <= r <= n:
        raise ConstraintViolation(f"need 2 <= r <= n, got r={r}, n={n}")
    return fsp(n + 2 - r) // 2


def g2(n: int) -> int:
    """Exact unrelated-pair count for the two-element antichain: floor(fsp(n)/2)."""
    if n < 2:
        raise ConstraintViolation(f"need n >= 2, got {n}")
    return fsp(n) // 2


def g3_doublestar(n: int) -> int:
    """Fast closed-form upper estimate for the 3-crown.

    floor(n! / (3*floor(n/2)!*ceil(n/2)! + 3*floor((n+2)/2)!*ceil((n-2)/2)!
               - 6*floor(n/2)!*ceil((n-2)/2)!))
    """
    if n < 3:
        raise ConstraintViolation(f"need n >= 3, got {n}")
    fact = factorial_list(n + 1)
    denom = (
        3 * fact[n // 2] * fact[(n + 1) // 2]
        + 3 * fact[(n + 2) // 2] * fact[(n - 1) // 2]
        - 6 * fact[n // 2] * fact[(n - 1) // 2]
    )
    return fact[n] // denom


def g3_star(n: int, extend: bool = False) -> int:
    """Upper estimate floor(n! / M(n)) with M(n) from the minimum search.

    For n <= 300 the minimum location is certified and the closed form
    is used directly.  Beyond that the closed form is NOT trusted:
    callers must pass ``extend=True``, which reruns the exhaustive
    minimum search for this n.
    """
    if n < 3:
        raise ConstraintViolation(f"need n >= 3, got {n}")
    from . import minsearch

    if n <= G3_CERTIFIED_MAX:
        m_n = minsearch.compute_Mn(n, mode="certified-closed-form")
    elif extend:
        m_n = minsearch.compute_Mn(n, mode="via-H3")
    else:
        raise ConstraintViolation(
            f"g3_star is certified only for n <= {G3_CERTIFIED_MAX}; "
            f"pass extend=True to rerun the minimum search for n={n}"
        )
    return factorial(n) // m_n
