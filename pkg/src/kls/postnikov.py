"""Inverse expansion mod powerful moduli and the smoothed-sum reduction.

For q with every prime raised to a decent power, inverses of 1 + z*q_eps
are given exactly by a short truncated geometric series mod q.  That
expansion turns the smoothed window sum W into a bivariate polynomial
exponential sum with explicit coefficients a_r, whose reduced
denominators Q_r drive all later estimates.  This module computes each
of these objects exactly and cross-checks the expansion multiplicatively
on every call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisibilityFailure, NotCoprime
from .factored import (
    ComplexEstimate,
    FactoredInteger,
    mod_inverse,
    per_term_bound,
    q_epsilon,
    unit_root,
)
from .klsum import SumSpec


@dataclass(frozen=True)
class PostnikovContext:
    """Everything the inverse expansion needs: eps, m, q, q_eps, beta.

    m = floor(2/eps) exactly; q divides q_eps^(m+1).  Build through
    make_context, which verifies the divisibility prime by prime.
    """

    eps: Fraction
    m: int
    q: FactoredInteger
    q_eps: FactoredInteger
    beta: tuple[int, ...]


@dataclass(frozen=True)
class WeylCoefficients:
    """Coefficients of the polynomial phase produced by the reduction.

    a_r are residues mod q (index r-1 holds a_r), alpha_r = a_r/q in
    lowest terms, v is the inverse of the window point, and phase = a*v
    mod q is the constant unit factor split off the polynomial sum.
    """

    m: int
    a_r: tuple[int, ...]
    alpha_r: tuple[Fraction, ...]
    v: int
    phase: int
    ctx: PostnikovContext


def make_context(q: FactoredInteger, eps: Fraction) -> PostnikovContext:
    """Build the expansion context, verifying q | q_eps^(m+1) per prime.

    The verification is the exponent inequality (m+1)(beta_r+1) >= alpha_r;
    it holds for every 0 < eps < 1, so a DivisibilityFailure here means an
    implementation bug, not bad input.
    """
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    m = (2 * eps.denominator) // eps.numerator
    q_eps, beta = q_epsilon(q, eps)
    for (p, alpha), b in zip(q.factors, beta):
        if (m + 1) * (b + 1) < alpha:
            raise DivisibilityFailure(
                f"(m+1)(beta+1) = {(m + 1) * (b + 1)} < {alpha} at prime {p} "
                f"(q={q}, eps={eps})"
            )
    return PostnikovContext(eps, m, q, q_eps, tuple(beta))


def inverse_expansion(z: int, ctx: PostnikovContext) -> int:
    """(1 + z*q_eps)^(-1) mod q via the truncated alternating series.

    Returns sum of (-1)^j (z*q_eps)^j for j = 0..m, reduced mod q, and
    checks multiplicatively that it inverts 1 + z*q_eps.  Periodic in z
    with period q.
    """
    q = ctx.q.value
    t = z * ctx.q_eps.value % q
    acc = 1
    for _ in range(ctx.m):
        acc = (1 - t * acc) % q
    assert acc * (1 + t) % q == 1, "expansion failed to invert; implementation bug"
    return acc


def weyl_coefficients(n: int, spec: SumSpec, ctx: PostnikovContext) -> WeylCoefficients:
    """Exact polynomial-phase coefficients at window point n.

    v = (n+c)^(-1) mod q; a_1 = q_eps*(b - a*v^2); for r >= 2,
    a_r = (-1)^r a v^(r+1) q_eps^r, all mod q.
    """
    if ctx.q != spec.q:
        raise ValueError("context was built for a different modulus")
    q = spec.q.value
    qe = ctx.q_eps.value
    v = mod_inverse(n + spec.c, q)
    t = qe * v % q * v % q * spec.a % q  # a * v^2 * q_eps
    a_list = [(qe * spec.b - t) % q]
    sign = 1
    for _ in range(2, ctx.m + 1):
        t = t * v % q * qe % q
        a_list.append(t if sign > 0 else (-t) % q)
        sign = -sign
    alpha = tuple(Fraction(ar, q) for ar in a_list)
    return WeylCoefficients(ctx.m, tuple(a_list), alpha, v, spec.a * v % q, ctx)


def w_direct(
    n: int, spec: SumSpec, ctx: PostnikovContext, h: int, precision: int = 53
) -> ComplexEstimate:
    """The h-by-h smoothed sum at window point n, term by term.

    Sum over x, y in [1,h] of e_q(a*(n+c+q_eps*x*y)* + b*q_eps*x*y); every
    exponent argument is reduced exactly mod q.  Rows are accumulated in
    ascending x order with compensated summation.
    """
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    q = spec.q.value
    qe = ctx.q_eps.value
    base = n + spec.c
    if math.gcd(base, q) != 1:
        raise NotCoprime(base, q)
    cache: dict[int, complex] = {}
    re = im = 0.0
    cre = cim = 0.0
    for x in range(1, h + 1):
        row_re = row_im = 0.0
        for y in range(1, h + 1):
            u = x * y
            z = cache.get(u)
            if z is None:
                arg = (spec.a * pow(base + qe * u, -1, q) + spec.b * qe * u) % q
                z = unit_root(arg, q)
                cache[u] = z
            row_re += z.real
            row_im += z.imag
        yv = row_re - cre
        t = re + yv
        cre = (t - re) - yv
        re = t
        yv = row_im - cim
        t = im + yv
        cim = (t - im) - yv
        im = t
    return ComplexEstimate(re, im, h * h * per_term_bound(precision))


def w_poly(coeffs: WeylCoefficients, h: int, precision: int = 53) -> ComplexEstimate:
    """The polynomial Weyl sum: sum over x, y in [1,h] of e(sum alpha_r (xy)^r).

    Each grid point's phase is assembled as a single exact rational mod 1
    (integer Horner evaluation of the a_r at xy, mod q, over q) and
    converted to floating point once.
    """
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    q = coeffs.ctx.q.value
    a_rev = coeffs.a_r[::-1]
    cache: dict[int, complex] = {}
    re = im = 0.0
    cre = cim = 0.0
    for x in range(1, h + 1):
        row_re = row_im = 0.0
        for y in range(1, h + 1):
            u = x * y
            z = cache.get(u)
            if z is None:
                arg = 0
                for ar in a_rev:
                    arg = (arg + ar) * u % q
                z = unit_root(arg, q)
                cache[u] = z
            row_re += z.real
            row_im += z.imag
        yv = row_re - cre
        t = re + yv
        cre = (t - re) - yv
        re = t
        yv = row_im - cim
        t = im + yv
        cim = (t - im) - yv
        im = t
    return ComplexEstimate(re, im, h * h * per_term_bound(precision))


def denominator_Q_r(coeffs: WeylCoefficients, r: int) -> tuple[FactoredInteger, FactoredInteger]:
    """Reduced denominator of alpha_r, exact and by the exponent formula.

    Returns (exact, formula): exact = q / gcd(a_r, q), factored over q's
    primes; formula = prod p^max(0, alpha_p - r*e_p) with e_p the exponent
    of p in q_eps.  For r >= 2 the two agree (asserted as divisibility)
    and q <= exact * q_eps^r; at r = 1 the numerator b - a v^2 may cancel
    arbitrarily, so nothing is asserted there.
    """
    ctx = coeffs.ctx
    if not 1 <= r <= coeffs.m:
        raise IndexError(f"r must be in [1, {coeffs.m}], got {r}")
    q = ctx.q.value
    g = math.gcd(coeffs.a_r[r - 1], q)
    exact_val = q // g
    exact_pairs = []
    for p, _ in ctx.q.factors:
        e = 0
        while exact_val % p == 0:
            exact_val //= p
            e += 1
        if e:
            exact_pairs.append((p, e))
    assert exact_val == 1
    exact = FactoredInteger.from_factors(exact_pairs)
    formula = FactoredInteger.from_factors(
        (p, max(0, alpha - r * (b + 1)))
        for (p, alpha), b in zip(ctx.q.factors, ctx.beta)
        if alpha - r * (b + 1) > 0
    )
    if r >= 2:
        assert exact.divides(formula), "reduced denominator escaped the formula lattice"
        assert q <= exact.value * ctx.q_eps.value**r, "denominator below the guaranteed floor"
    return exact, formula
