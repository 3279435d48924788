"""Variation-diminishing determinant test for periodic kernels.

A kernel phi is CVD_{2n} exactly when every determinant
D_{2l+1}(x, y) = det(eps * phi(x_i - y_j)), over strictly increasing node
vectors in [0, 2pi) and l = 0..n, is nonnegative for one fixed eps.  A pair
of node configurations on which D changes sign therefore rules the property
out for both eps at once (odd dimension flips the determinant under
eps -> -eps).

Determinants run through full-pivoting elimination with compensated entries;
each result carries a forward-error estimate (entry error times a cofactor
norm).  Whenever a value is within two orders of its estimate, the
elimination is repeated in double-double arithmetic.

The module ships the q = 0.21 witness node vectors, all rational multiples
of pi, on which the sign change is established for both beta = 0 and
beta = 1.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .compensated import dd_abs, dd_div, dd_float, dd_from, dd_mul, dd_sub
from .errors import DomainError, NotFound
from .kernels import EvalPolicy, NeumannParams, eval_neumann, eval_neumann_pair

TWO_PI = 2.0 * math.pi

ENTRY_POLICY = EvalPolicy(abs_tol=1e-16, max_terms=1_000_000)


@dataclass(frozen=True)
class NodeVectors:
    """Strictly increasing evaluation nodes 0 <= x_1 < ... < x_{2l+1} < 2pi."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise DomainError("x and y must have equal length")
        if len(self.x) % 2 == 0:
            raise DomainError("node vectors must have odd length 2l+1")
        for name, v in (("x", self.x), ("y", self.y)):
            if not all(0.0 <= a < TWO_PI for a in v):
                raise DomainError(f"{name} entries must lie in [0, 2pi)")
            if not all(a < b for a, b in zip(v, v[1:])):
                raise DomainError(f"{name} entries must be strictly increasing")

    @property
    def size(self) -> int:
        return len(self.x)

    @classmethod
    def from_pi_rationals(cls, x: Sequence[tuple[int, int]],
                          y: Sequence[tuple[int, int]]) -> "NodeVectors":
        """Build nodes from (numerator, denominator) multiples of pi."""
        return cls(x=tuple(num * math.pi / den for num, den in x),
                   y=tuple(num * math.pi / den for num, den in y))

    def to_json_dict(self) -> dict:
        """Serialize as exact rational multiples of pi.

        Entries created by from_pi_rationals round-trip bit-exactly; arbitrary
        floats are stored as the exact dyadic fraction of t/pi (round trip is
        then within one ulp of the product with pi).
        """
        def enc(v):
            out = []
            for t in v:
                ratio = Fraction(t / math.pi)
                f = ratio  # exact dyadic fallback
                for cap in (1, 10, 100, 1000, 10**6, 10**9, 10**12, 10**15):
                    g = ratio.limit_denominator(cap)
                    if float(g.numerator * math.pi / g.denominator) == t:
                        f = g
                        break
                out.append([f.numerator, f.denominator])
            return out

        return {"x": enc(self.x), "y": enc(self.y)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "NodeVectors":
        return cls.from_pi_rationals([tuple(p) for p in data["x"]],
                                     [tuple(p) for p in data["y"]])


# q = 0.21 witness configurations: D_3 is negative on (WITNESS_X, WITNESS_Y_NEG)
# and positive on (WITNESS_X, WITNESS_Y_POS) for both beta = 0 and beta = 1.
WITNESS_X = ((1, 18), (1, 9), (1, 6))
WITNESS_Y_NEG = ((13, 36), (11, 30), (67, 180))
WITNESS_Y_POS = ((13, 30), (10, 9), (7, 6))
WITNESS_Q = 0.21


def builtin_witnesses() -> tuple[NodeVectors, NodeVectors]:
    """(negative-determinant nodes, positive-determinant nodes) at q = 0.21."""
    return (NodeVectors.from_pi_rationals(WITNESS_X, WITNESS_Y_NEG),
            NodeVectors.from_pi_rationals(WITNESS_X, WITNESS_Y_POS))


@dataclass(frozen=True)
class DetResult:
    value: float
    error_estimate: float
    epsilon: int
    used_extended: bool

    @property
    def significant(self) -> bool:
        """True when the sign of ``value`` is trustworthy."""
        return abs(self.value) > 10.0 * self.error_estimate


def neumann_evaluator(params: NeumannParams,
                      policy: EvalPolicy = ENTRY_POLICY) -> Callable[[float], float]:
    return lambda t: eval_neumann(params, t, policy)


def neumann_pair_evaluator(params: NeumannParams,
                           policy: EvalPolicy = ENTRY_POLICY):
    return lambda t: eval_neumann_pair(params, t, policy)


def _det_full_pivot(a: list[list[float]]) -> float:
    """Determinant by Gaussian elimination with full pivoting."""
    m = len(a)
    a = [row[:] for row in a]
    det_sign = 1.0
    det = 1.0
    for step in range(m):
        p_r, p_c, best = step, step, -1.0
        for i in range(step, m):
            for j in range(step, m):
                if abs(a[i][j]) > best:
                    best, p_r, p_c = abs(a[i][j]), i, j
        if best == 0.0:
            return 0.0
        if p_r != step:
            a[step], a[p_r] = a[p_r], a[step]
            det_sign = -det_sign
        if p_c != step:
            for row in a:
                row[step], row[p_c] = row[p_c], row[step]
            det_sign = -det_sign
        pivot = a[step][step]
        det *= pivot
        for i in range(step + 1, m):
            factor = a[i][step] / pivot
            for j in range(step + 1, m):
                a[i][j] -= factor * a[step][j]
    return det_sign * det


def _det_full_pivot_dd(a: list[list[tuple[float, float]]]) -> float:
    m = len(a)
    a = [row[:] for row in a]
    sign = 1.0
    det = dd_from(1.0)
    for step in range(m):
        p_r, p_c, best = step, step, -1.0
        for i in range(step, m):
            for j in range(step, m):
                mag = dd_abs(a[i][j])[0]
                if mag > best:
                    best, p_r, p_c = mag, i, j
        if best == 0.0:
            return 0.0
        if p_r != step:
            a[step], a[p_r] = a[p_r], a[step]
            sign = -sign
        if p_c != step:
            for row in a:
                row[step], row[p_c] = row[p_c], row[step]
            sign = -sign
        pivot = a[step][step]
        det = dd_mul(det, pivot)
        for i in range(step + 1, m):
            factor = dd_div(a[i][step], pivot)
            for j in range(step + 1, m):
                a[i][j] = dd_sub(a[i][j], dd_mul(factor, a[step][j]))
    return sign * dd_float(det)


def _cofactor_norm(a: list[list[float]]) -> float:
    """sum_{i,j} |cofactor_{ij}|, the first-order amplification of entry error."""
    m = len(a)
    if m == 1:
        return 1.0
    total = 0.0
    for i in range(m):
        for j in range(m):
            minor = [[a[r][c] for c in range(m) if c != j] for r in range(m) if r != i]
            total += abs(_det_full_pivot(minor))
    return total


def det_D(kernel: Callable[[float], float], nodes: NodeVectors, epsilon: int = 1,
          entry_tol: float = 1e-15,
          kernel_pair: Callable[[float], tuple[float, float]] | None = None) -> DetResult:
    """D_{2l+1}(x, y) = det(eps * kernel(x_i - y_j)) with an error estimate.

    ``entry_tol`` is the caller's certified absolute error per kernel value;
    the forward estimate is entry error (plus representation rounding) times
    the cofactor-norm bound.  When |det| falls below 100x this estimate the
    elimination is redone in double-double arithmetic, using ``kernel_pair``
    (two-float entries) when provided.
    """
    if epsilon not in (1, -1):
        raise DomainError(f"epsilon must be +1 or -1, got {epsilon}")
    m = nodes.size
    entries = [[float(epsilon) * kernel(xi - yj) for yj in nodes.y] for xi in nodes.x]
    det = _det_full_pivot(entries)

    max_entry = max(abs(e) for row in entries for e in row)
    eps_mach = 2.220446049250313e-16
    per_entry = entry_tol + 4.0 * eps_mach * max_entry
    err = per_entry * _cofactor_norm(entries) + m**3 * eps_mach * max_entry**m

    used_dd = False
    if abs(det) < 100.0 * err:
        if kernel_pair is not None:
            dd_entries = [
                [dd_mul(dd_from(float(epsilon)), dd_from(*kernel_pair(xi - yj)))
                 for yj in nodes.y] for xi in nodes.x]
        else:
            dd_entries = [[dd_from(e) for e in row] for row in entries]
        det = _det_full_pivot_dd(dd_entries)
        used_dd = True
    return DetResult(value=det, error_estimate=err, epsilon=epsilon,
                     used_extended=used_dd)


def _random_nodes(rng: random.Random, size: int) -> NodeVectors:
    def draw():
        while True:
            v = sorted(rng.uniform(0.0, TWO_PI) for _ in range(size))
            if all(b - a > 1e-9 for a, b in zip(v, v[1:])):
                return tuple(v)

    return NodeVectors(x=draw(), y=draw())


def _perturb(rng: random.Random, nodes: NodeVectors, step: float) -> NodeVectors | None:
    def jiggle(v):
        w = sorted(min(max(t + rng.gauss(0.0, step), 0.0), TWO_PI * (1 - 1e-12)) for t in v)
        return tuple(w) if all(b - a > 1e-9 for a, b in zip(w, w[1:])) else None

    x, y = jiggle(nodes.x), jiggle(nodes.y)
    if x is None or y is None:
        return None
    return NodeVectors(x=x, y=y)


def cvd_witness(kernel: Callable[[float], float], l: int, search_budget: int = 100_000,
                rng_seed: int = 0, seeds: Sequence[NodeVectors] = (),
                entry_tol: float = 1e-15) -> tuple[NodeVectors, NodeVectors]:
    """Search for node vectors giving significantly opposite signs of D_{2l+1}.

    Tries any ``seeds`` first, then random sampling, then a stochastic local
    descent from the configuration closest to the missing sign.  A returned
    pair defeats the CVD property for both eps.  Raises NotFound after
    ``search_budget`` determinant evaluations -- which is inconclusive, not a
    proof of the property.
    """
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l}")
    size = 2 * l + 1
    rng = random.Random(rng_seed)
    neg = pos = None
    best_low = None  # (value, nodes) with the smallest signed determinant
    best_high = None
    spent = 0

    def consider(nodes: NodeVectors):
        nonlocal neg, pos, best_low, best_high, spent
        spent += 1
        res = det_D(kernel, nodes, epsilon=1, entry_tol=entry_tol)
        if res.significant:
            if res.value < 0.0 and neg is None:
                neg = nodes
            elif res.value > 0.0 and pos is None:
                pos = nodes
        if best_low is None or res.value < best_low[0]:
            best_low = (res.value, nodes)
        if best_high is None or res.value > best_high[0]:
            best_high = (res.value, nodes)

    for s in seeds:
        if s.size != size:
            raise DomainError(f"seed size {s.size} does not match 2l+1 = {size}")
        consider(s)
        if neg is not None and pos is not None:
            return neg, pos

    sample_budget = search_budget // 2
    while spent < sample_budget and (neg is None or pos is None):
        consider(_random_nodes(rng, size))
    # local descent toward whichever sign is still missing
    while spent < search_budget and (neg is None or pos is None):
        want_neg = neg is None
        base = best_low[1] if want_neg else best_high[1]
        step = 0.3
        while spent < search_budget and (neg is None if want_neg else pos is None):
            cand = _perturb(rng, base, step)
            if cand is None:
                spent += 1  # degenerate perturbations still consume budget
                continue
            before = best_low[0] if want_neg else best_high[0]
            consider(cand)
            after = best_low[0] if want_neg else best_high[0]
            if after != before:  # improved: recentre and tighten
                base = best_low[1] if want_neg else best_high[1]
                step = max(step * 0.7, 1e-4)
    if neg is None or pos is None:
        raise NotFound(
            f"no sign-changing pair within budget {search_budget} "
            f"(observed range [{best_low[0]:.3e}, {best_high[0]:.3e}])")
    return neg, pos
