"""Spectra and normalized bound states of the thirteen families.

Eigenenergies come from the families' closed formulas; eigenfunctions are
assembled from the polynomial evaluators with recursively defined
normalization constants.  Three families (hyperbolic Scarf and both
trigonometric Rosen-Morse forms) run through complex arithmetic and are
projected back to the reals after an imaginary-residue check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import specfun
from .errors import InadmissibleState, NumericalError, ValidationError
from .families import FamilyParams

IMAG_RESIDUE_TOL = 1e-9

NORM_KINDS = ("a", "b", "c", "d", "e", "p", "u")

# Which recursion normalizes which family; harm-osc has an explicit constant.
_KIND_FOR_FAMILY = {
    "scarf2": "a", "morse": "a", "morse-mirror": "a",
    "poschl-teller": "b",
    "radial-osc": "c",
    "scarf1": "d", "scarf1-cot": "d",
    "rosen-morse2": "e", "eckart": "e",
    "coulomb": "p",
    "rosen-morse1": "u", "rosen-morse1-cot": "u",
}

_COMPLEX_PATH = ("scarf2", "rosen-morse1", "rosen-morse1-cot")


def _check_index(k) -> int:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 0:
        raise ValidationError(f"level index must be a non-negative integer, got {k!r}")
    return int(k)


@dataclass(frozen=True)
class AdmissibleRange:
    """Contiguous admissible levels 0..max_k; None means unbounded, -1 empty."""

    max_k: Optional[int]

    def contains(self, k: int) -> bool:
        if k < 0:
            return False
        return self.max_k is None or k <= self.max_k

    def levels(self, kmax: int) -> tuple[int, ...]:
        """Admissible levels up to and including kmax."""
        hi = kmax if self.max_k is None else min(kmax, self.max_k)
        return tuple(range(0, hi + 1))


def eigenenergy(fp: FamilyParams, k: int) -> float:
    k = _check_index(k)
    if not admissible_range(fp).contains(k):
        raise InadmissibleState(
            f"level k={k} is not admissible for family {fp.id!r} "
            f"(eps={fp.eps:.6g}, rho={fp.rho:.6g})")
    e, r = fp.eps, fp.rho
    fid = fp.id
    if fid in ("scarf2", "morse", "morse-mirror"):
        return (2 * e - k) * k
    if fid == "poschl-teller":
        return -k * (k - 2 * e)
    if fid == "radial-osc":
        return 4 * r * k
    if fid == "harm-osc":
        return 2 * fp.beta * k
    if fid in ("scarf1", "scarf1-cot"):
        return (k - 2 * e) * k
    ratio = r ** 2 / ((k - e) ** 2 * e ** 2)
    if fid in ("rosen-morse2", "eckart"):
        return k * (k - 2 * e) * (ratio - 1)
    if fid == "coulomb":
        return k * (k - 2 * e) * ratio
    # rosen-morse1, rosen-morse1-cot
    return k * (k - 2 * e) * (ratio + 1)


def _gamma_positive(*args: float) -> bool:
    return all(a > 0 for a in args)


_SCAN_CAP = 65536


def admissible_range(fp: FamilyParams) -> AdmissibleRange:
    """Largest contiguous set of levels with finite, normalizable states."""
    fid, e, r = fp.id, fp.eps, fp.rho
    if fid in ("radial-osc", "harm-osc", "scarf1", "scarf1-cot",
               "rosen-morse1", "rosen-morse1-cot"):
        return AdmissibleRange(None)
    if fid in ("scarf2", "poschl-teller", "morse", "morse-mirror"):
        # Gamma(2(eps - k)) must stay off the poles: k < eps.
        return AdmissibleRange(math.ceil(e) - 1)
    if fid == "coulomb":
        # Gamma(2k - 2 eps) positive at k = 0 requires eps < 0; then every
        # level is admissible and E_k climbs toward the threshold.
        return AdmissibleRange(None if e < 0 else -1)

    def ok(k: int) -> bool:
        s = e - k
        if s == 0 or e - k + 1 == 0:
            return False
        t = r / s
        if fid == "rosen-morse2":
            return _gamma_positive(2 * s, s - t, s + t)
        return _gamma_positive(1 - s + t, 1 - 2 * s, s + t)

    if not ok(0):
        return AdmissibleRange(-1)
    last = 0
    prev_energy = 0.0
    for k in range(1, _SCAN_CAP):
        if not ok(k):
            break
        energy = k * (k - 2 * e) * (r ** 2 / ((k - e) ** 2 * e ** 2) - 1)
        if not energy > prev_energy:
            break
        last, prev_energy = k, energy
    return AdmissibleRange(last)


def norm_coefficient(kind: str, k: int, fp: FamilyParams) -> float:
    """Evaluate one of the printed normalization recursions at level k.

    Each step divides by a square root whose radicand must be positive;
    the parameter argument moves by one unit per step (upward only for
    kind b, as printed).
    """
    if kind not in NORM_KINDS:
        raise ValidationError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")
    k = _check_index(k)
    eps, rho = fp.eps, fp.rho
    value = 1.0
    e = eps

    def radical(rad: float, j: int) -> float:
        if not rad > 0:
            raise InadmissibleState(
                f"norm recursion {kind!r} hit a non-positive radicand {rad:.6g} "
                f"at step k={j} (eps={eps:.6g}, rho={rho:.6g})")
        return math.sqrt(rad)

    for j in range(k, 0, -1):
        if kind in ("e", "p", "u"):
            if e == 0 or j == e:
                raise InadmissibleState(
                    f"norm recursion {kind!r} hit a zero denominator at step k={j}")
        if kind == "a":
            value /= radical((2 * e - j) * j, j)
            e -= 1
        elif kind == "b":
            value /= radical(j * (2 * e - j), j)
            e -= 1
        elif kind == "c":
            value /= radical(4 * rho * j, j)
            e -= 1
        elif kind == "d":
            value /= radical(j * (j - 2 * e), j)
            e -= 1
        elif kind == "e":
            rad = j * (2 * e - j) - rho ** 2 / (j - e) ** 2 + rho ** 2 / e ** 2
            value *= (2 * e - j) / (e * radical(rad, j))
            e -= 1
        elif kind == "p":
            rad = (j - e) ** 2 * e ** 2 / (j * (j - 2 * e) * rho ** 2)
            value *= (2 * e - j) / e * radical(rad, j)
            e -= 1
        else:  # u
            rad = j * (j - 2 * e) - rho ** 2 / (j - e) ** 2 + rho ** 2 / e ** 2
            value *= (2 * e - j) / (e * radical(rad, j))
            e -= 1
    return value


class Wavefunction:
    """Evaluable normalized bound state; accepts scalars or arrays."""

    def __init__(self, fp: FamilyParams, k: int, body: Callable, complex_path: bool):
        self.family = fp
        self.k = k
        self._body = body
        self.complex_path = complex_path

    def _guard(self, x) -> None:
        dom = self.family.domain
        arr = np.asarray(x, dtype=float)
        if arr.size and (float(arr.min()) <= dom.lo or float(arr.max()) >= dom.hi):
            raise NumericalError(
                f"state evaluation outside the open domain ({dom.lo}, {dom.hi})")

    def complex_value(self, x):
        self._guard(x)
        return self._body(x)

    def imag_residue(self, x) -> float:
        """max |Im| / (1 + |Re|) over the points; zero on real paths."""
        if not self.complex_path:
            return 0.0
        raw = np.asarray(self.complex_value(x))
        return float(np.max(np.abs(raw.imag) / (1.0 + np.abs(raw.real))))

    def __call__(self, x):
        raw = self.complex_value(x)
        if not self.complex_path:
            return raw
        arr = np.asarray(raw)
        bad = np.abs(arr.imag) > IMAG_RESIDUE_TOL * (1.0 + np.abs(arr.real))
        if bad.any():
            worst = float(np.max(np.abs(arr.imag) / (1.0 + np.abs(arr.real))))
            raise NumericalError(
                f"imaginary residue {worst:.3e} exceeds {IMAG_RESIDUE_TOL:g} "
                f"for family {self.family.id!r}, k={self.k}")
        real = arr.real
        if np.isscalar(raw) or real.ndim == 0:
            return float(real)
        return real


def wavefunction(fp: FamilyParams, k: int) -> Wavefunction:
    """Assemble the closed-form normalized state zeta_k of V(x; fp)."""
    k = _check_index(k)
    if not admissible_range(fp).contains(k):
        raise InadmissibleState(
            f"level k={k} is not admissible for family {fp.id!r} "
            f"(eps={fp.eps:.6g}, rho={fp.rho:.6g})")
    e, r = fp.eps, fp.rho
    fid = fp.id
    kfact = math.factorial(k)

    if fid == "scarf2":
        norm = norm_coefficient("a", k, fp)
        pref = (2.0 ** (e - 0.5)
                * specfun.gamma_abs_complex(complex(0.5 + e - k, -r))
                / (math.sqrt(math.pi) * math.sqrt(specfun.gamma(2 * (e - k))))
                * kfact * norm) * 1j ** k
        a_j = complex(-0.5 - e, r)
        b_j = complex(-0.5 - e, -r)

        def body(x):
            sh = np.sinh(x)
            outer = np.exp(-r * np.arctan(sh)) * np.cosh(x) ** (-e)
            return pref * outer * specfun.jacobi_p(k, a_j, b_j, -1j * sh)

        return Wavefunction(fp, k, body, True)

    if fid == "poschl-teller":
        norm = norm_coefficient("b", k, fp)
        pref = (2.0 ** e * kfact * norm
                * math.sqrt(specfun.gamma(0.5 - k + e + r)
                            / (specfun.gamma(2 * (e - k))
                               * specfun.gamma(0.5 + k - e + r))))
        a_j, b_j = -0.5 - e - r, -0.5 - e + r

        def body(x):
            ch = np.cosh(x)
            outer = (ch - 1.0) ** ((-e + r) / 2) * (ch + 1.0) ** (-(e + r) / 2)
            return pref * outer * specfun.jacobi_p(k, a_j, b_j, -ch)

        return Wavefunction(fp, k, body, False)

    if fid in ("morse", "morse-mirror"):
        norm = norm_coefficient("a", k, fp)
        scale = r if fid == "morse" else -r
        pref = ((-1.0) ** k * 2.0 ** (e - k) * scale ** (e - k) * norm * kfact
                / math.sqrt(specfun.gamma(2 * (e - k))))
        sign = 1.0 if fid == "morse" else -1.0

        def body(x):
            xa = np.asarray(x, dtype=float)
            w = np.exp(-sign * xa)
            # decay factors fused into one exponent to dodge overflow
            outer = np.exp(-sign * r * w - (e - k) * sign * xa)
            return pref * outer * specfun.laguerre_l(k, 2 * e - 2 * k, 2 * sign * r * w)

        return Wavefunction(fp, k, body, False)

    if fid == "radial-osc":
        norm = norm_coefficient("c", k, fp)
        pref = (math.sqrt(2.0 * r ** (0.5 + k - e) / specfun.gamma(0.5 + k - e))
                * kfact * (-2.0) ** k * norm)

        def body(x):
            return (pref * np.exp(-r * x ** 2 / 2) * x ** (-e)
                    * specfun.laguerre_l(k, -0.5 - e, r * x ** 2))

        return Wavefunction(fp, k, body, False)

    if fid == "harm-osc":
        b = fp.beta
        pref = (b / math.pi) ** 0.25 / math.sqrt(kfact * 2.0 ** k)

        def body(x):
            y = np.asarray(x, dtype=float) + r / b
            return pref * np.exp(-b * y ** 2 / 2) * specfun.hermite_h(k, math.sqrt(b) * y)

        return Wavefunction(fp, k, body, False)

    if fid in ("scarf1", "scarf1-cot"):
        norm = norm_coefficient("d", k, fp)
        pref = (2.0 ** e * kfact * norm
                * math.sqrt(specfun.gamma(1 + 2 * k - 2 * e)
                            / (specfun.gamma(0.5 + k - e - r)
                               * specfun.gamma(0.5 + k - e + r))))
        a_j, b_j = -0.5 - e - r, -0.5 - e + r
        trig = np.sin if fid == "scarf1" else np.cos

        def body(x):
            u = trig(x)
            outer = (1.0 - u) ** (-(e + r) / 2) * (1.0 + u) ** (-(e - r) / 2)
            return pref * outer * specfun.jacobi_p(k, a_j, b_j, u)

        return Wavefunction(fp, k, body, False)

    if fid in ("rosen-morse2", "eckart"):
        norm = norm_coefficient("e", k, fp)
        s = e - k
        t = r / s
        if fid == "rosen-morse2":
            gratio = specfun.gamma(2 * s) / (specfun.gamma(s - t) * specfun.gamma(s + t))
        else:
            gratio = specfun.gamma(1 - s + t) / (specfun.gamma(1 - 2 * s)
                                                 * specfun.gamma(s + t))
        pref = 2.0 ** (0.5 + k - e) * kfact * math.sqrt(gratio) * norm
        a_j, b_j = s + t, s - t

        def body(x):
            if fid == "rosen-morse2":
                u = np.tanh(x)
                outer = (1.0 - u) ** ((s + t) / 2) * (1.0 + u) ** ((s - t) / 2)
            else:
                u = 1.0 / np.tanh(x)
                outer = (u - 1.0) ** ((s + t) / 2) * (u + 1.0) ** ((s - t) / 2)
            return pref * outer * specfun.jacobi_p(k, a_j, b_j, u)

        return Wavefunction(fp, k, body, False)

    if fid == "coulomb":
        norm = norm_coefficient("p", k, fp)
        lam = r / (e - k)
        rad = -r / (k - e) ** 2 * lam ** (2 * k - 2 * e) / specfun.gamma(2 * k - 2 * e)
        if not rad > 0:
            raise InadmissibleState(
                f"coulomb prefactor radicand {rad:.6g} is not positive at k={k}")
        pref = (-1.0) ** k * kfact * math.sqrt(rad) * norm

        def body(x):
            return (pref * (2.0 * x) ** (-e) * np.exp(r * x / (k - e))
                    * specfun.laguerre_l(k, -1 - 2 * e, 2 * r * x / (e - k)))

        return Wavefunction(fp, k, body, False)

    # rosen-morse1, rosen-morse1-cot
    norm = norm_coefficient("u", k, fp)
    s = e - k
    t = r / s
    pref = ((-1j) ** k * kfact * norm
            * specfun.gamma_abs_complex(complex(1 + k - e, -t))
            / math.sqrt(math.pi * specfun.gamma(1 + 2 * k - 2 * e)))
    a_j = complex(s, t)
    b_j = complex(s, -t)
    if fid == "rosen-morse1":

        def body(x):
            xa = np.asarray(x, dtype=float)
            outer = (2.0 * np.cos(xa)) ** (k - e) * np.exp(r * xa / (k - e))
            return pref * outer * specfun.jacobi_p(k, a_j, b_j, -1j * np.tan(xa))

    else:

        def body(x):
            xa = np.asarray(x, dtype=float)
            outer = ((2.0 * np.sin(xa)) ** (k - e)
                     * np.exp(r * (2 * xa - math.pi) / (2 * (k - e))))
            return pref * outer * specfun.jacobi_p(k, a_j, b_j, 1j / np.tan(xa))

    return Wavefunction(fp, k, body, True)


@dataclass(frozen=True)
class EigenState:
    family: FamilyParams
    k: int
    energy: float
    wavefunction: Wavefunction


def eigenstate(fp: FamilyParams, k: int) -> EigenState:
    return EigenState(family=fp, k=k, energy=eigenenergy(fp, k),
                      wavefunction=wavefunction(fp, k))
