"""Special functions backing the closed-form eigenfunctions and extensions.

The polynomial evaluators run three-term recurrences using only ring
arithmetic on the argument, so one implementation serves floats, complex
values, numpy arrays, and Dual scalars alike.  Parameters may be complex
(conjugate-pair Jacobi parameters occur throughout).  Degrees are capped:
the recurrences are exact, but far beyond the working range (k <= 64)
degenerate parameter combinations can zero a recurrence denominator.
"""

from __future__ import annotations

import cmath
import math

from .errors import EvalDomainError, GammaPole, NumericalError

MAX_DEGREE = 64

_INT_TOL = 1e-9


def _check_degree(k: int):
    if not isinstance(k, int) or k < 0:
        raise EvalDomainError(f"polynomial degree must be a non-negative integer, got {k!r}")
    if k > MAX_DEGREE:
        raise EvalDomainError(f"polynomial degree {k} exceeds supported maximum {MAX_DEGREE}")


def jacobi_p(k: int, a, b, z):
    """Jacobi polynomial P_k^(a,b)(z) by the three-term recurrence.

    a, b may be complex; z may be scalar, array, or Dual.
    """
    _check_degree(k)
    one = z * 0 + 1.0
    if k == 0:
        return one
    p_prev = one
    p_cur = (a - b) * 0.5 * one + (a + b + 2) * 0.5 * z
    for n in range(2, k + 1):
        s = 2 * n + a + b
        den = 2 * n * (n + a + b) * (s - 2)
        if abs(den) < 1e-12:
            raise NumericalError(
                f"jacobi recurrence denominator vanishes at degree {n} for parameters ({a}, {b})")
        c1 = (s - 1) * (s * (s - 2))
        c2 = (s - 1) * (a * a - b * b)
        c3 = 2 * (n + a - 1) * (n + b - 1) * s
        p_next = ((c1 * z + c2 * one) * p_cur - c3 * p_prev) / den
        p_prev, p_cur = p_cur, p_next
    return p_cur


def laguerre_l(k: int, a, z):
    """Generalized Laguerre polynomial L_k^(a)(z) by recurrence."""
    _check_degree(k)
    one = z * 0 + 1.0
    if k == 0:
        return one
    p_prev = one
    p_cur = (1 + a) * one - z
    for n in range(2, k + 1):
        p_next = (((2 * n - 1 + a) * one - z) * p_cur - (n - 1 + a) * p_prev) / n
        p_prev, p_cur = p_cur, p_next
    return p_cur


def hermite_h(k: int, z):
    """Physicists' Hermite polynomial H_k(z) by recurrence."""
    _check_degree(k)
    one = z * 0 + 1.0
    if k == 0:
        return one
    p_prev = one
    p_cur = 2 * z
    for n in range(2, k + 1):
        p_next = 2 * z * p_cur - 2 * (n - 1) * p_prev
        p_prev, p_cur = p_cur, p_next
    return p_cur


def _as_nonpositive_int(upper) -> int:
    r = round(float(upper))
    if r > 0 or abs(upper - r) > _INT_TOL:
        raise EvalDomainError(
            f"terminating hypergeometric sum needs a non-positive integer upper parameter, got {upper!r}")
    return int(r)


def hyp1f1_terminating(upper, lower, z):
    """1F1(upper; lower; z) as a finite sum of exactly |upper|+1 terms.

    upper must be a non-positive integer so the series terminates.
    """
    n_terms = -_as_nonpositive_int(upper)
    one = z * 0 + 1.0
    total = one
    term = one
    for j in range(1, n_terms + 1):
        den = lower + j - 1
        if abs(den) < _INT_TOL:
            raise GammaPole(
                f"1F1 lower parameter {lower} hits a pole at term {j} inside the truncated sum")
        term = term * ((upper + j - 1) / (den * j)) * z
        total = total + term
    return total


def hyp2f1_terminating(upper_a, upper_b, lower, z):
    """2F1(upper_a, upper_b; lower; z) truncated at the terminating upper parameter."""
    candidates = []
    for u in (upper_a, upper_b):
        r = round(float(u))
        if r <= 0 and abs(u - r) <= _INT_TOL:
            candidates.append(-int(r))
    if not candidates:
        raise EvalDomainError(
            f"2F1 needs a non-positive integer upper parameter, got ({upper_a!r}, {upper_b!r})")
    n_terms = min(candidates)
    one = z * 0 + 1.0
    total = one
    term = one
    for j in range(1, n_terms + 1):
        den = lower + j - 1
        if abs(den) < _INT_TOL:
            raise GammaPole(
                f"2F1 lower parameter {lower} hits a pole at term {j} inside the truncated sum")
        term = term * ((upper_a + j - 1) * (upper_b + j - 1) / (den * j)) * z
        total = total + term
    return total


# Lanczos approximation, g = 7, 9 coefficients.  Valid on Re z > 0.5 after
# the z -> z-1 shift; the reflection formula covers the left half-plane.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_gamma(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, 9):
        x += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def log_gamma(x: float) -> float:
    """log Gamma(x) for real x > 0."""
    if x <= 0.0:
        raise GammaPole(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def gamma(x: float) -> float:
    """Gamma(x) for real x away from the poles at non-positive integers."""
    if x <= 0.0 and abs(x - round(x)) < 1e-12:
        raise GammaPole(f"gamma pole at {x}")
    return math.gamma(x)


def gamma_abs_complex(z: complex) -> float:
    """|Gamma(z)| for complex z, via Lanczos plus the reflection formula."""
    z = complex(z)
    if z.imag == 0.0:
        return abs(gamma(z.real))
    if z.real >= 0.5:
        return abs(_lanczos_gamma(z))
    # |Gamma(z)| = pi / (|sin(pi z)| |Gamma(1-z)|)
    s = cmath.sin(cmath.pi * z)
    return math.pi / (abs(s) * abs(_lanczos_gamma(1.0 - z)))
