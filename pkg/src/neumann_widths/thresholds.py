"""Sufficient-condition thresholds: the index from which width equalities hold.

Two strict inequalities on (q, n) are evaluated at machine precision:

* tail condition  --  q^n/(1-q^(2n)) <= min(2 q^sqrt(n) / (15 n^2),
  (8/(3n^2)) ((2n-1)/(7(n-1)^2) - pi^2/(8n^2))); it guarantees the
  eigenvalue-magnitude margins used by the spline analysis.

* budget condition  --  (24/(5(1-q))) q^sqrt(n)
  + (160/63) ((2 sqrt(n)-1)/(n (sqrt(n)-1))) q/(1-q)^2
  <= (1/2 + 2q/((1+q^2)(1-q))) ((1-q)/(1+q))^(4/(1-q^2)); it keeps the
  total correction-term budget under the strict positive floor of P_q.

Here sqrt(n) is the real square root.  The smallest n >= 2 satisfying both
is found by a plain upward scan; monotonicity is not assumed, so the scan
also reports any later failures below 4x the first success as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NotFound
from .kernels import pq_floor

# Below these cutoffs the width equalities hold from n = 1 already
# (integer phase / non-integer phase respectively).
INTEGER_BETA_Q_CUTOFF = 0.2
NONINTEGER_BETA_Q_CUTOFF = 0.193864


@dataclass(frozen=True)
class ConditionCheck:
    holds: bool
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ThresholdVerdict:
    n: int
    tail: ConditionCheck
    budget: ConditionCheck

    @property
    def both_hold(self) -> bool:
        return self.tail.holds and self.budget.holds


@dataclass(frozen=True)
class ScanResult:
    """First index where both conditions hold, plus any later failures seen
    below min(cap, 4 * n) (diagnostic for non-monotone behaviour)."""

    n: int
    later_failures: tuple[int, ...]


def _validate(q: float, n: int, n_min: int = 2) -> None:
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if n < n_min:
        raise DomainError(f"n must be >= {n_min}, got {n}")


def check_tail_condition(q: float, n: int) -> ConditionCheck:
    """Strict inequality bounding q^n/(1-q^(2n)); exact float comparison."""
    _validate(q, n)
    lhs = q**n / (1.0 - q ** (2 * n))
    rhs = min(
        2.0 * q ** math.sqrt(n) / (15.0 * n**2),
        8.0 / (3.0 * n**2) * ((2.0 * n - 1.0) / (7.0 * (n - 1.0) ** 2)
                              - math.pi**2 / (8.0 * n**2)),
    )
    return ConditionCheck(holds=lhs <= rhs, lhs=lhs, rhs=rhs)


def check_budget_condition(q: float, n: int) -> ConditionCheck:
    """Correction budget against the P_q floor; needs n >= 2 (sqrt(n) > 1)."""
    _validate(q, n)
    rn = math.sqrt(n)
    lhs = (24.0 / (5.0 * (1.0 - q)) * q**rn
           + 160.0 / 63.0 * (2.0 * rn - 1.0) / (n * (rn - 1.0)) * q / (1.0 - q) ** 2)
    return ConditionCheck(holds=lhs <= pq_floor(q), lhs=lhs, rhs=pq_floor(q))


def verdict(q: float, n: int) -> ThresholdVerdict:
    return ThresholdVerdict(n=n, tail=check_tail_condition(q, n),
                            budget=check_budget_condition(q, n))


def gamma_budget(q: float, n: int) -> float:
    """The budget-condition left side: certified upper bound for the total
    correction sum at the peak shift (valid for n >= 2 under the tail
    condition)."""
    _validate(q, n)
    rn = math.sqrt(n)
    return (24.0 / (5.0 * (1.0 - q)) * q**rn
            + 160.0 / 63.0 * (2.0 * rn - 1.0) / (n * (rn - 1.0)) * q / (1.0 - q) ** 2)


def min_guaranteed_n(q: float, n_cap: int = 1_000_000) -> ScanResult:
    """Smallest n in [2, n_cap] where both conditions hold.

    Linear scan with early exit; raises NotFound when the cap is exhausted
    (expected behaviour for q near 1, where the budget right side collapses
    much faster than the left).
    """
    _validate(q, 2)
    first = None
    for n in range(2, n_cap + 1):
        if verdict(q, n).both_hold:
            first = n
            break
    if first is None:
        raise NotFound(f"no n <= {n_cap} satisfies both conditions for q={q}")
    later = tuple(n for n in range(first + 1, min(n_cap, 4 * first) + 1)
                  if not verdict(q, n).both_hold)
    return ScanResult(n=first, later_failures=later)


def is_integer_beta(beta: float) -> bool:
    """Exact test: beta is integer iff beta mod 1 == 0.

    Deliberately no tolerance -- 2.0000000001 counts as non-integer.
    """
    return beta % 1.0 == 0.0


def min_guaranteed_n_beta(q: float, beta: float, n_cap: int = 1_000_000) -> ScanResult:
    """Piecewise threshold: 1 in the small-q regimes where the equalities are
    known for every n, otherwise the scanned minimum."""
    _validate(q, 2)
    cutoff = INTEGER_BETA_Q_CUTOFF if is_integer_beta(beta) else NONINTEGER_BETA_Q_CUTOFF
    if q <= cutoff:
        return ScanResult(n=1, later_failures=())
    return min_guaranteed_n(q, n_cap)
