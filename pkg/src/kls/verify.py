"""Randomized verification suites with replayable seeds.

Every suite draws its cases from ``random.Random(seed)``, the stdlib
Mersenne Twister, so a run is reproducible from the seed printed in its
report.  A report is a JSON-ready dict: case and failure counts plus the
worst margin the suite observed.  The margin conventions are

- lemma1: ``worst_residual``, the largest inversion residual (0 expected);
- lemma2: ``min_slack``, bound + err - |sum| (nonnegative expected);
- lemma3: ``min_slack``, rhs - lhs;
- lemma4: ``worst_log_margin``, ln(count) - ln(bound) (<= 0 expected),
  with over-budget grid points skipped and listed;
- w-identity: ``worst_abs_diff`` between the two evaluation paths, with a
  per-case row list; lhs/rhs are [re, im] pairs;
- amplify: ``min_rel_margin``, (rhs - lhs)/rhs;
- shift: ``worst_excess``, |S - S'| minus the 2*shift + rounding allowance.

``failures`` counts cases outside tolerance; the command line maps any
nonzero count to exit code 1.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .bounds import amplified_bound
from .factored import FactoredInteger, kernel, unit_root
from .klsum import SumSpec, eval_sum, shift_to_kernel
from .postnikov import inverse_expansion, make_context, w_direct, w_poly, weyl_coefficients
from .vmvt import DEFAULT_BUDGET, lemma4_check
from .weyl import geometric_sum_check, lemma3_check, rational_approx

_EPS_CHOICES = (
    Fraction(1, 5),
    Fraction(1, 3),
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(4, 5),
)

_PRIME_POOL = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 53,
    61, 71, 83, 97, 101, 127, 251, 509, 1021,
)

_DESK_MODULI = ("3^6", "2^4*3^4", "5^5", "2^10")


def _random_modulus(rng, max_primes, max_exp, max_value, min_exp=1):
    """A random factored modulus within the given prime/exponent/size caps."""
    count = rng.randint(1, max_primes)
    primes = sorted(rng.sample(_PRIME_POOL, count))
    factors = []
    room = max_value
    for p in primes:
        cap = 0
        v = p
        while v <= room and cap < max_exp:
            cap += 1
            v *= p
        if cap < min_exp:
            continue
        e = rng.randint(min_exp, cap)
        factors.append((p, e))
        room //= p**e
    if not factors:
        factors = [(2, min_exp)]
    return FactoredInteger.from_factors(tuple(factors))


def _random_coprime(rng, lo, hi, modulus):
    while True:
        n = rng.randrange(lo, hi)
        if math.gcd(n, modulus) == 1:
            return n


def _suite_lemma1(seed, cases, budget, threads):
    cases = 1000 if cases is None else cases
    rng = random.Random(seed)
    failures = 0
    worst = 0
    for _ in range(cases):
        q = _random_modulus(rng, max_primes=4, max_exp=32, max_value=2**128)
        eps = rng.choice(_EPS_CHOICES)
        ctx = make_context(q, eps)
        z = rng.randrange(q.value)
        try:
            inv = inverse_expansion(z, ctx)
            residual = (inv * (1 + z * ctx.q_eps.value) - 1) % q.value
        except AssertionError:
            residual = 1
        if residual:
            failures += 1
            worst = max(worst, residual)
    return {
        "suite": "lemma1",
        "seed": seed,
        "cases": cases,
        "failures": failures,
        "worst_residual": worst,
    }


def _suite_lemma2(seed, cases, budget, threads):
    cases = 10000 if cases is None else cases
    rng = random.Random(seed)
    failures = 0
    min_slack = math.inf
    for _ in range(cases):
        Q = rng.randint(1, 10**6)
        A = rng.randrange(Q)
        P = rng.randint(1, 10**4)
        value, bound, holds = geometric_sum_check(Fraction(A, Q), P)
        min_slack = min(min_slack, bound + value.err - value.abs_value())
        if not holds:
            failures += 1
    return {
        "suite": "lemma2",
        "seed": seed,
        "cases": cases,
        "failures": failures,
        "min_slack": min_slack,
    }


def _suite_lemma3(seed, cases, budget, threads):
    cases = 10000 if cases is None else cases
    rng = random.Random(seed)
    failures = 0
    min_slack = math.inf
    for _ in range(cases):
        if rng.randrange(2):
            den = rng.randint(1, 10**6)
            alpha = Fraction(rng.randrange(den + 1), den)
        else:
            s = rng.randint(2, 10**6)
            if math.isqrt(s) ** 2 == s:
                s += 1
            alpha = Fraction(math.isqrt(s << 80), 1 << 40)
        beta = Fraction(rng.randrange(-(10**4), 10**4), rng.randint(1, 10**4))
        U = rng.randint(1, 5000)
        P = rng.randint(1, 1000)
        approx = rational_approx(alpha, rng.randint(1, 10**4))
        lhs, rhs, holds = lemma3_check(alpha, beta, U, P, approx)
        min_slack = min(min_slack, rhs - lhs)
        if not holds:
            failures += 1
    return {
        "suite": "lemma3",
        "seed": seed,
        "cases": cases,
        "failures": failures,
        "min_slack": min_slack,
    }


def _suite_lemma4(seed, cases, budget, threads):
    # the grid is fixed; the seed only tags the report
    checked = failures = 0
    skipped = []
    worst = -math.inf
    for m in (1, 2, 3):
        for tau in (1, 2, 3):
            for P in range(2, 9):
                if P ** (m * tau) > budget:
                    skipped.append([m, tau, P])
                    continue
                count, log_bound, holds = lemma4_check(
                    m, tau, P, budget=budget, threads=threads
                )
                worst = max(worst, math.log(count) - log_bound)
                checked += 1
                if not holds:
                    failures += 1
    return {
        "suite": "lemma4",
        "seed": seed,
        "cases": checked,
        "failures": failures,
        "skipped": len(skipped),
        "skipped_cases": skipped,
        "worst_log_margin": worst,
    }


def _suite_w_identity(seed, cases, budget, threads):
    cases = 200 if cases is None else cases
    rng = random.Random(seed)
    rows = []
    failures = 0
    worst = 0.0
    for _ in range(cases):
        q = _random_modulus(rng, max_primes=3, max_exp=13, max_value=10**12, min_exp=2)
        eps = rng.choice(_EPS_CHOICES)
        ctx = make_context(q, eps)
        qv = q.value
        a = _random_coprime(rng, 1, qv, qv)
        b = rng.randrange(qv)
        n = _random_coprime(rng, 1, qv, kernel(q).value)
        h = rng.randint(1, 40)
        spec = SumSpec(q=q, N=1, a=a, b=b, c=0)
        coeffs = weyl_coefficients(n, spec, ctx)
        lhs = w_direct(n, spec, ctx, h).as_complex()
        rhs = unit_root(coeffs.phase, qv) * w_poly(coeffs, h).as_complex()
        diff = abs(lhs - rhs)
        worst = max(worst, diff)
        if diff > 1e-9:
            failures += 1
        rows.append(
            {
                "q": qv,
                "eps": str(eps),
                "n": n,
                "h": h,
                "lhs": [lhs.real, lhs.imag],
                "rhs": [rhs.real, rhs.imag],
                "abs_diff": diff,
            }
        )
    return {
        "suite": "w-identity",
        "seed": seed,
        "cases": cases,
        "failures": failures,
        "tolerance": 1e-9,
        "worst_abs_diff": worst,
        "rows": rows,
    }


def _suite_amplify(seed, cases, budget, threads):
    cases = 20 if cases is None else cases
    rng = random.Random(seed)
    moduli = [FactoredInteger.parse(s) for s in _DESK_MODULI]
    eps_list = (Fraction(1, 3), Fraction(1, 2))
    rows = []
    failures = 0
    min_margin = math.inf
    for i in range(cases):
        q = moduli[i % len(moduli)]
        eps = eps_list[(i // len(moduli)) % len(eps_list)]
        qv = q.value
        N = math.isqrt(qv)
        h = math.isqrt(math.isqrt(N)) + 1
        a = _random_coprime(rng, 1, qv, qv)
        b = rng.randrange(qv)
        spec = SumSpec(q=q, N=N, a=a, b=b, c=0)
        rhs, lhs, holds = amplified_bound(spec, eps, h, budget=budget, threads=threads)
        min_margin = min(min_margin, (rhs - lhs) / rhs)
        if not holds:
            failures += 1
        rows.append(
            {
                "q": str(q),
                "eps": str(eps),
                "N": N,
                "h": h,
                "a": a,
                "b": b,
                "lhs": lhs,
                "rhs": rhs,
                "holds": holds,
            }
        )
    return {
        "suite": "amplify",
        "seed": seed,
        "cases": cases,
        "failures": failures,
        "min_rel_margin": min_margin,
        "rows": rows,
    }


def _suite_shift(seed, cases, budget, threads):
    cases = 100 if cases is None else cases
    rng = random.Random(seed)
    failures = 0
    worst = -math.inf
    for _ in range(cases):
        q = _random_modulus(rng, max_primes=3, max_exp=9, max_value=10**9, min_exp=2)
        qv = q.value
        d = kernel(q).value
        a = _random_coprime(rng, 1, qv, qv)
        b = rng.randrange(qv)
        spec = SumSpec(q=q, N=rng.randint(1, 2000), a=a, b=b, c=rng.randrange(-qv, qv))
        shifted, shift = shift_to_kernel(spec)
        if not 0 <= shift < d:
            failures += 1
            continue
        r0 = eval_sum(spec)
        r1 = eval_sum(shifted)
        diff = abs(r0.value.as_complex() - r1.value.as_complex())
        allowance = 2.0 * shift + r0.value.err + r1.value.err
        worst = max(worst, diff - allowance)
        if diff > allowance:
            failures += 1
    return {
        "suite": "shift",
        "seed": seed,
        "cases": cases,
        "failures": failures,
        "worst_excess": worst,
    }


SUITES = {
    "lemma1": _suite_lemma1,
    "lemma2": _suite_lemma2,
    "lemma3": _suite_lemma3,
    "lemma4": _suite_lemma4,
    "w-identity": _suite_w_identity,
    "amplify": _suite_amplify,
    "shift": _suite_shift,
}


def run_suite(
    name: str,
    seed: int = 0,
    cases: int | None = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> dict:
    """Run one named suite and return its report dict.

    ``cases = None`` selects each suite's default size.  Unknown names
    raise ValueError (the command line turns that into a usage error).
    """
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(
            f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}"
        ) from None
    return fn(seed, cases, budget, threads)
