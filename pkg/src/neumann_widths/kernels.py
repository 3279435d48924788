"""Kernel evaluators with certified series-tail control.

Everything here is a pure function of its arguments.  Each truncated series
carries an explicit tail bound, and summation is compensated so downstream
determinant tests can rely on ~1e-16 entry accuracy.

Conventions
-----------
* ``N_{q,beta}(t)  = sum_{k>=1} q^k/k * cos(k t - beta*pi/2)``, 0 < q < 1.
* ``Psi_beta(t)    = sum_{k>=1} psi(k) * cos(k t - beta*pi/2)`` for a positive
  summable coefficient sequence ``psi``.
* ``Psi_{beta,1}`` is ``Psi_beta`` convolved with the Bernoulli kernel ``B_1``,
  i.e. coefficients ``psi(k)/k`` and phase ``(beta+1)*pi/2``.
* The phase is 4-periodic in ``beta``; ``beta`` is reduced mod 4 before any
  trigonometry to avoid large-argument error.

Certified error bounds are only claimed for the geometric Neumann
coefficients ``psi(k) = q^k/k``.  General ``KernelSpec`` sequences are
supported through the user-supplied ``tail_bound``, which the evaluators
trust as stated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .compensated import KahanSum
from .errors import DomainError, TolUnreachable

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EvalPolicy:
    """Truncation policy: absolute tolerance plus a hard cap on terms."""

    abs_tol: float = 1e-14
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not (self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_POLICY = EvalPolicy()


@dataclass(frozen=True)
class NeumannParams:
    """Parameter pair (q, beta) of the Neumann kernel, psi(k) = q^k/k."""

    q: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.q < 1.0) or not math.isfinite(self.q):
            raise DomainError(f"q must lie in (0, 1), got {self.q}")
        if not math.isfinite(self.beta):
            raise DomainError(f"beta must be finite, got {self.beta}")

    @property
    def beta_mod4(self) -> float:
        """Phase parameter reduced to [0, 4); the kernel is 4-periodic in beta."""
        return self.beta % 4.0

    def psi(self, k: int) -> float:
        return self.q**k / k

    def tail_bound(self, k: int) -> float:
        """Upper bound on sum_{m>k} q^m/m (geometric tail)."""
        return self.q ** (k + 1) / ((k + 1) * (1.0 - self.q))

    def spec(self) -> "KernelSpec":
        return KernelSpec(psi=self.psi, beta=self.beta, tail_bound=self.tail_bound)


@dataclass(frozen=True)
class KernelSpec:
    """A generating kernel: positive summable coefficients plus a phase.

    ``tail_bound(K)`` must bound ``sum_{k>K} psi(k)`` from above, be
    nonincreasing in K and tend to zero; truncating ``Psi_beta`` at K then
    differs from the limit by at most ``tail_bound(K)``.
    """

    psi: Callable[[int], float]
    beta: float
    tail_bound: Callable[[int], float]


def _reduce_phase(beta: float, shift: float = 0.0) -> float:
    return (beta % 4.0 + shift) * (math.pi / 2.0)


def _sum_cosine_series(coef, tail, phase, t, policy, label):
    """sum_k coef(k) * cos(k*t - phase), truncated once tail(k) <= abs_tol.

    ``tail(k)`` must bound the absolute remainder after the k-th term.
    """
    u = math.fmod(t, TWO_PI)
    acc = KahanSum()
    k = 0
    while True:
        k += 1
        if k > policy.max_terms:
            raise TolUnreachable(
                f"{label}: tail bound {tail(k - 1):.3e} still above "
                f"abs_tol={policy.abs_tol:.3e} after {policy.max_terms} terms",
                terms_used=k - 1,
                tail_bound=tail(k - 1),
            )
        acc.add(coef(k) * math.cos(k * u - phase))
        if tail(k) <= policy.abs_tol:
            return acc


def eval_neumann(params: NeumannParams, t: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Evaluate the Neumann kernel N_{q,beta}(t) to within policy.abs_tol.

    The truncation index K satisfies q^(K+1)/((K+1)(1-q)) <= abs_tol.
    """
    q = params.q
    phase = _reduce_phase(params.beta)
    return _sum_cosine_series(
        lambda k: q**k / k, params.tail_bound, phase, t, policy, "eval_neumann"
    ).value


def eval_neumann_pair(params: NeumannParams, t: float,
                      policy: EvalPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """Like eval_neumann but returns the (sum, compensation) pair.

    Feeding both words into double-double arithmetic keeps the extra
    accuracy the compensated accumulator collected.
    """
    q = params.q
    phase = _reduce_phase(params.beta)
    return _sum_cosine_series(
        lambda k: q**k / k, params.tail_bound, phase, t, policy, "eval_neumann"
    ).as_pair()


def eval_psi_beta(spec: KernelSpec, t: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Evaluate Psi_beta(t) = sum psi(k) cos(k t - beta*pi/2)."""
    phase = _reduce_phase(spec.beta)
    return _sum_cosine_series(spec.psi, spec.tail_bound, phase, t, policy, "eval_psi_beta").value


def eval_psi_beta1(spec: KernelSpec, t: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Evaluate the integrated kernel Psi_{beta,1}(t) = (Psi_beta * B_1)(t).

    Coefficients psi(k)/k, phase (beta+1)*pi/2; remainder after K terms is
    bounded by tail_bound(K)/(K+1).
    """
    phase = _reduce_phase(spec.beta, shift=1.0)
    return _sum_cosine_series(
        lambda k: spec.psi(k) / k,
        lambda k: spec.tail_bound(k) / (k + 1),
        phase, t, policy, "eval_psi_beta1",
    ).value


def eval_bernoulli(t: float) -> float:
    """Bernoulli kernel B_1(t) = sum_k sin(k t)/k via its sawtooth closed form.

    Equals (pi - (t mod 2pi))/2 on (0, 2pi) and 0 at t = 0 (mod 2pi); the
    series itself converges far too slowly to evaluate directly.
    """
    u = t % TWO_PI
    if u == 0.0:
        return 0.0
    return (math.pi - u) / 2.0


def eval_pq(q: float, t: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Evaluate P_q(t) = 1/2 + 2 sum_{j>=1} cos(j t)/(q^j + q^-j).

    Tail after J terms is below 2 q^(J+1)/(1-q).
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    u = math.fmod(t, TWO_PI)
    acc = KahanSum(0.5)
    j = 0
    while True:
        j += 1
        if j > policy.max_terms:
            raise TolUnreachable(
                f"eval_pq: tail above abs_tol after {policy.max_terms} terms",
                terms_used=j - 1,
                tail_bound=2.0 * q**j / (1.0 - q),
            )
        acc.add(2.0 * math.cos(j * u) / (q**j + q**-j))
        if 2.0 * q ** (j + 1) / (1.0 - q) <= policy.abs_tol:
            return acc.value


def _theta3(z: float, q: float) -> float:
    acc = KahanSum(1.0)
    m = 1
    while True:
        w = q ** (m * m)
        if w < 1e-20:
            return acc.value
        acc.add(2.0 * w * math.cos(2.0 * m * z))
        m += 1


def _theta4(z: float, q: float) -> float:
    acc = KahanSum(1.0)
    m = 1
    sign = -1.0
    while True:
        w = q ** (m * m)
        if w < 1e-20:
            return acc.value
        acc.add(2.0 * sign * w * math.cos(2.0 * m * z))
        sign = -sign
        m += 1


def eval_pq_theta(q: float, t: float) -> float:
    """P_q(t) through its theta-quotient form,
    (theta3(0) theta4(0) / 2) * theta3(t/2) / theta4(t/2), all in nome q.

    Keeps *relative* accuracy near the minima of P_q, where the plain cosine
    series (absolute error ~ machine epsilon per term) cannot resolve the
    exponentially small positive values once q is close to 1.
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    z = math.fmod(t, TWO_PI) / 2.0
    return 0.5 * _theta3(0.0, q) * _theta4(0.0, q) * _theta3(z, q) / _theta4(z, q)


def pq_floor(q: float) -> float:
    """Strict lower bound for P_q on the whole real line:
    (1/2 + 2q/((1+q^2)(1-q))) * ((1-q)/(1+q))^(4/(1-q^2)).
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    lead = 0.5 + 2.0 * q / ((1.0 + q * q) * (1.0 - q))
    return lead * ((1.0 - q) / (1.0 + q)) ** (4.0 / (1.0 - q * q))


def eval_gq(q: float, n: int, x: float) -> float:
    """Closed form of G_q(x) = sum_nu q^((2nu+1)n)/((2nu+1)n) cos((2nu+1)x).

    Equals (1/(4n)) * ln((1 + 2 q^n cos x + q^(2n)) / (1 - 2 q^n cos x + q^(2n))),
    evaluated through log1p so accuracy is preserved when q^n is tiny.
    """
    a = _geometric_amplitude(q, n)
    u = 2.0 * a * math.cos(x)
    a2 = a * a
    return (math.log1p(u + a2) - math.log1p(-u + a2)) / (4.0 * n)


def eval_hq(q: float, n: int, x: float) -> float:
    """Closed form of H_q(x) = sum_nu q^((2nu+1)n)/((2nu+1)n) sin((2nu+1)x),
    i.e. (1/(2n)) * atan(2 q^n sin x / (1 - q^(2n)))."""
    a = _geometric_amplitude(q, n)
    return math.atan(2.0 * a * math.sin(x) / (1.0 - a * a)) / (2.0 * n)


def _geometric_amplitude(q: float, n: int) -> float:
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return q**n
