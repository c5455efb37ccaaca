"""Geometric-sum and min-sum inequalities, rational approximation, damping.

The two classical inequalities are implemented as exact computations with
the asserted bound returned alongside, so randomized suites can hunt for
violations with no rounding slack on the deciding comparisons: distance
to the nearest integer is exact rational arithmetic whenever the input
is rational, and every min() decision is made by integer cross
multiplication.  All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .factored import ComplexEstimate, FactoredInteger, per_term_bound, unit_root


@dataclass(frozen=True)
class RationalApproximation:
    """A continued-fraction convergent A/Q of some real, with the remainder.

    alpha = A/Q + theta/Q^2 with gcd(A, Q) = 1 and |theta| <= 1.
    """

    A: int
    Q: int
    theta: float

    def __post_init__(self):
        if self.Q < 1:
            raise ValueError(f"Q must be >= 1, got {self.Q}")
        if math.gcd(self.A, self.Q) != 1:
            raise ValueError(f"A = {self.A} and Q = {self.Q} share a factor")
        if abs(self.theta) > 1:
            raise ValueError(f"|theta| must be <= 1, got {self.theta}")


@dataclass(frozen=True)
class DampingFactor:
    """The damping multiplier attached to one coefficient index r.

    Lambda_r is the exact integer range bound k*h^r; Delta_r = min(1, delta_r).
    """

    r: int
    Lambda_r: int
    Q_r: FactoredInteger
    delta_r: float
    Delta_r: float


def dist_to_int(alpha) -> Fraction | float:
    """Distance to the nearest integer, in [0, 1/2]; exact on Fractions."""
    if isinstance(alpha, Fraction):
        f = alpha - (alpha.numerator // alpha.denominator)
        return min(f, 1 - f)
    f = float(alpha) % 1.0
    return min(f, 1.0 - f)


def geometric_sum_check(alpha: Fraction, P: int) -> tuple[ComplexEstimate, float, bool]:
    """Sum of e(alpha*n) for n in [1, P] against min(P, 1/dist).

    Returns (sum, bound, holds).  The bound uses the exact rational
    distance; dist = 0 (alpha an integer) gives bound = P.
    """
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    alpha = Fraction(alpha)
    B = alpha.denominator
    A = alpha.numerator % B
    if A * P < 2**62 and B < 2**62:
        n = np.arange(1, P + 1, dtype=np.int64)
        th = (A * n) % B
        th = th.astype(np.float64) * (2.0 * math.pi / B)
        re = float(np.cos(th).sum())
        im = float(np.sin(th).sum())
    else:
        re = im = 0.0
        r = 0
        for _ in range(P):
            r = (r + A) % B
            z = unit_root(r, B)
            re += z.real
            im += z.imag
    value = ComplexEstimate(re, im, P * per_term_bound())
    dist = dist_to_int(alpha)
    bound = float(P) if dist == 0 else min(float(P), float(1 / dist))
    holds = value.abs_value() <= bound + value.err
    return value, bound, holds


def rational_approx(alpha, Q_max: int) -> RationalApproximation:
    """Best continued-fraction convergent A/Q with Q <= Q_max.

    Guarantees |alpha - A/Q| <= 1/(Q*Q_max) <= 1/Q^2, i.e. |theta| <= 1.
    Floats are treated as the exact rational they represent.
    """
    if Q_max < 1:
        raise ValueError(f"Q_max must be >= 1, got {Q_max}")
    fr = Fraction(alpha)
    num, den = fr.numerator, fr.denominator
    p0, q0, p1, q1 = 1, 0, num // den, 1
    A, Q = p1, q1
    num, den = den, num - (num // den) * den
    while den:
        a = num // den
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > Q_max:
            break
        A, Q = p1, q1
        num, den = den, num - a * den
    theta = float((fr - Fraction(A, Q)) * Q * Q)
    return RationalApproximation(A, Q, theta)


def lemma3_check(
    alpha, beta, U: float, P: int, approx: RationalApproximation
) -> tuple[float, float, bool]:
    """Sum of min(U, 1/dist(alpha*n + beta)) over n in [1, P] vs its bound.

    Returns (lhs, rhs, holds) with rhs = 6(P/Q + 1)(U + Q ln Q).  Each
    term's min() is decided by exact integer comparison; only the chosen
    term value is floated.  Q = 1 contributes Q ln Q = 0.
    """
    if P < 1 or U <= 0:
        raise ValueError("need P >= 1 and U > 0")
    afr, bfr = Fraction(alpha), Fraction(beta)
    B = math.lcm(afr.denominator, bfr.denominator)
    A = afr.numerator * (B // afr.denominator) % B
    C = bfr.numerator * (B // bfr.denominator) % B
    ufr = Fraction(U)
    un, ud = ufr.numerator, ufr.denominator
    lhs = 0.0
    comp = 0.0
    r = C
    for _ in range(P):
        r = (r + A) % B
        k = r if 2 * r <= B else B - r
        # term = min(U, B/k); U <= B/k  iff  un*k <= B*ud
        term = U if k == 0 or un * k <= B * ud else B / k
        y = term - comp
        t = lhs + y
        comp = (t - lhs) - y
        lhs = t
    Q = approx.Q
    rhs = 6.0 * (P / Q + 1.0) * (U + Q * math.log(Q))
    return lhs, rhs, lhs <= rhs


def damping_factor(
    q: FactoredInteger, Q_r: FactoredInteger, Lambda_r: int, r: int, ln_q: float | None = None
) -> DampingFactor:
    """delta_r = 6 ln(q) (1/sqrt(Q_r) + sqrt(Q_r)/(2 Lambda_r))^2, capped at 1.

    Computed in log space so astronomically large Q_r or Lambda_r cannot
    overflow.  ln_q overrides the modulus logarithm for symbolic runs.
    """
    if Q_r.value < 1 or Lambda_r < 1:
        raise ValueError("need Q_r >= 1 and Lambda_r >= 1")
    lnq = math.log(q.value) if ln_q is None else ln_q
    half_lnQ = 0.5 * math.log(Q_r.value)
    t1 = math.exp(-half_lnQ)
    t2 = math.exp(half_lnQ - math.log(2 * Lambda_r))
    delta = 6.0 * lnq * (t1 + t2) ** 2
    return DampingFactor(r, Lambda_r, Q_r, delta, min(1.0, delta))


def v_r_sum(alpha: Fraction, Lambda: int) -> float:
    """Sum of min(2*Lambda, 1/dist(alpha*mu)) over |mu| < Lambda.

    The damping construction bounds this by (2*Lambda)^2 * delta_r when
    delta_r is built from the exact reduced denominator of alpha; the
    trivial bound is (2*Lambda)^2.  Exact residue stepping as in
    lemma3_check; symmetric terms are folded.
    """
    if Lambda < 1:
        raise ValueError(f"Lambda must be >= 1, got {Lambda}")
    alpha = Fraction(alpha)
    B = alpha.denominator
    A = alpha.numerator % B
    U = 2 * Lambda
    total = float(U)  # mu = 0 term: dist 0, min saturates at U
    comp = 0.0
    r = 0
    for _ in range(Lambda - 1):
        r = (r + A) % B
        k = r if 2 * r <= B else B - r
        term = float(U) if k == 0 or U * k <= B else B / k
        term *= 2.0  # mu and -mu agree
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total
