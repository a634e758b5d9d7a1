"""The thirteen closed-form superpotential families.

Each family is a solution k(x) of the shape-invariance construction over
parameters m_1..m_n subject to simultaneous unit translation.  Eight
families take the linear form k = sum_j I_j v_j(x) + M G(x) built from a
Riccati solution G (G' + G^2 = alpha) and first-order solutions v_j
(v_j' + v_j G = beta_j); five more take the ratio form k = rho/eps + eps G.
The invariants I_j enter only through the folded effective parameters
(eps, rho) or (beta, rho).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EvalDomainError, RangeViolation, UnverifiedInvariant, ValidationError
from .invariants import InvariantExpr, ParamVector, eval_invariant

_INF = float("inf")


@dataclass(frozen=True)
class Domain:
    """Open interval with a margin kept clear around singular endpoints."""

    lo: float
    hi: float
    delta: float

    def clipped(self) -> tuple[float, float]:
        """Finite endpoints pulled in by delta; infinite ends pass through."""
        lo = self.lo + self.delta if math.isfinite(self.lo) else self.lo
        hi = self.hi - self.delta if math.isfinite(self.hi) else self.hi
        return lo, hi

    def require_inside(self, x) -> None:
        """Open-interval membership; the delta margin only shapes grids."""
        arr = np.asarray(x, dtype=float)
        if arr.size and (float(arr.min()) <= self.lo or float(arr.max()) >= self.hi):
            raise EvalDomainError(
                f"evaluation point outside the open interval ({self.lo}, {self.hi})")


def _make_domain(lo: float, hi: float) -> Domain:
    width = hi - lo
    delta = 1e-3 * (width if math.isfinite(width) else 1.0)
    return Domain(lo, hi, delta)


@dataclass(frozen=True)
class Coupling:
    """One invariant I_j with its constants beta_j, d_j."""

    invariant: InvariantExpr
    beta: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and math.isfinite(self.d)):
            raise ValidationError("coupling constants must be finite")


@dataclass(frozen=True)
class ConstructionData:
    """Parameter vector plus couplings; rho_invariant only for ratio families."""

    p: ParamVector
    couplings: tuple[Coupling, ...]
    rho_invariant: Optional[InvariantExpr] = None

    def __post_init__(self):
        object.__setattr__(self, "couplings", tuple(self.couplings))
        if len(self.couplings) < 1:
            raise ValidationError("need at least one coupling (r >= 1)")
        exprs = [c.invariant for c in self.couplings]
        if self.rho_invariant is not None:
            exprs.append(self.rho_invariant)
        for expr in exprs:
            if not expr.verified:
                raise UnverifiedInvariant(
                    f"expression {expr.source!r} has not passed the invariance check")
            if expr.max_param_index() > self.p.n:
                raise ValidationError(
                    f"expression {expr.source!r} uses m{expr.max_param_index()} "
                    f"but the vector has n={self.p.n}")


# Fold styles: how (M, I_j, beta_j, d_j) collapse to effective parameters.
_FOLD_BETA_MEAN = "eps = M + sum beta_j I_j"
_FOLD_D_MEAN = "eps = M + sum d_j I_j, rho = half sum beta_j I_j"
_FOLD_SLOPE = "beta = sum beta_j I_j"
_FOLD_BETA_MEAN_NEG = "eps = M - sum beta_j I_j"
_FOLD_RATIO = "eps = M + sum d_j I_j, rho = extra invariant"


@dataclass(frozen=True)
class FamilySpec:
    id: str
    label: str
    domain: Domain
    alpha: float
    fold: str
    window: tuple[float, float]   # default finite window for grid checks


_PI = math.pi

FAMILY_SPECS: dict[str, FamilySpec] = {spec.id: spec for spec in (
    FamilySpec("scarf2", "hyperbolic Scarf, k = eps*tanh(x) + rho*sech(x)",
               _make_domain(-_INF, _INF), 1.0, _FOLD_BETA_MEAN, (-8.0, 8.0)),
    FamilySpec("poschl-teller", "Poschl-Teller, k = eps*coth(x) - rho*csch(x)",
               _make_domain(0.0, _INF), 1.0, _FOLD_BETA_MEAN, (0.0, 12.0)),
    FamilySpec("morse", "Morse, k = eps - rho*exp(-x)",
               _make_domain(-_INF, _INF), 1.0, _FOLD_BETA_MEAN, (-2.0, 14.0)),
    FamilySpec("morse-mirror", "mirrored Morse, k = -eps - rho*exp(x)",
               _make_domain(-_INF, _INF), 1.0, _FOLD_BETA_MEAN, (-14.0, 2.0)),
    FamilySpec("radial-osc", "radial oscillator, k = eps/x + rho*x",
               _make_domain(0.0, _INF), 0.0, _FOLD_D_MEAN, (0.0, 10.0)),
    FamilySpec("harm-osc", "shifted harmonic oscillator, k = beta*x + rho",
               _make_domain(-_INF, _INF), 0.0, _FOLD_SLOPE, (-10.0, 10.0)),
    FamilySpec("scarf1", "trigonometric Scarf, k = -eps*tan(x) - rho*sec(x)",
               _make_domain(-_PI / 2, _PI / 2), -1.0, _FOLD_BETA_MEAN_NEG,
               (-_PI / 2, _PI / 2)),
    FamilySpec("scarf1-cot", "trigonometric Scarf cot form, k = eps*cot(x) + rho*csc(x)",
               _make_domain(0.0, _PI), -1.0, _FOLD_BETA_MEAN_NEG, (0.0, _PI)),
    FamilySpec("rosen-morse2", "hyperbolic Rosen-Morse, k = eps*tanh(x) + rho/eps",
               _make_domain(-_INF, _INF), 1.0, _FOLD_RATIO, (-8.0, 8.0)),
    FamilySpec("eckart", "Eckart, k = eps*coth(x) + rho/eps",
               _make_domain(0.0, _INF), 1.0, _FOLD_RATIO, (0.0, 12.0)),
    FamilySpec("coulomb", "Coulomb, k = eps/x + rho/eps",
               _make_domain(0.0, _INF), 0.0, _FOLD_RATIO, (0.0, 20.0)),
    FamilySpec("rosen-morse1", "trigonometric Rosen-Morse, k = -eps*tan(x) + rho/eps",
               _make_domain(-_PI / 2, _PI / 2), -1.0, _FOLD_RATIO,
               (-_PI / 2, _PI / 2)),
    FamilySpec("rosen-morse1-cot", "trigonometric Rosen-Morse cot form, k = eps*cot(x) + rho/eps",
               _make_domain(0.0, _PI), -1.0, _FOLD_RATIO, (0.0, _PI)),
)}

FAMILY_IDS: tuple[str, ...] = tuple(FAMILY_SPECS)
_RATIO_IDS = tuple(fid for fid, s in FAMILY_SPECS.items() if s.fold == _FOLD_RATIO)


def family_ids() -> tuple[str, ...]:
    return FAMILY_IDS


def get_spec(family_id: str) -> FamilySpec:
    try:
        return FAMILY_SPECS[family_id]
    except KeyError:
        raise ValidationError(
            f"unknown family {family_id!r}; known ids: {', '.join(FAMILY_IDS)}") from None


@dataclass(frozen=True)
class FamilyParams:
    """Effective parameters of one family instance.

    eps/rho are the folded parameters; beta is the oscillator slope and is
    zero for every family except harm-osc (whose eps is unused and zero).
    """

    id: str
    eps: float
    rho: float
    beta: float
    alpha: float
    provenance: ConstructionData

    @property
    def spec(self) -> FamilySpec:
        return FAMILY_SPECS[self.id]

    @property
    def domain(self) -> Domain:
        return FAMILY_SPECS[self.id].domain


def _coupling_sums(data: ConstructionData) -> tuple[float, float, float]:
    values = [eval_invariant(c.invariant, data.p) for c in data.couplings]
    sum_beta = math.fsum(c.beta * v for c, v in zip(data.couplings, values))
    sum_d = math.fsum(c.d * v for c, v in zip(data.couplings, values))
    return data.p.mean, sum_beta, sum_d


def _fold(family_id: str, data: ConstructionData) -> tuple[float, float, float]:
    """Return (eps, rho, beta) for the family's stated convention."""
    spec = FAMILY_SPECS[family_id]
    mean, sum_beta, sum_d = _coupling_sums(data)
    if spec.fold == _FOLD_RATIO:
        if data.rho_invariant is None:
            raise ValidationError(
                f"family {family_id!r} needs rho_invariant in its construction data")
        rho = eval_invariant(data.rho_invariant, data.p)
        return mean + sum_d, rho, 0.0
    if data.rho_invariant is not None:
        raise ValidationError(
            f"family {family_id!r} does not take a rho_invariant")
    if spec.fold == _FOLD_BETA_MEAN:
        return mean + sum_beta, sum_d, 0.0
    if spec.fold == _FOLD_BETA_MEAN_NEG:
        return mean - sum_beta, sum_d, 0.0
    if spec.fold == _FOLD_D_MEAN:
        return mean + sum_d, 0.5 * sum_beta, 0.0
    # slope fold: no dependence on the mean at all
    return 0.0, sum_d, sum_beta


def _check_ranges(family_id: str, eps: float, rho: float, beta: float) -> None:
    def fail(condition: str):
        raise RangeViolation(
            f"family {family_id!r} requires {condition} "
            f"(got eps={eps:.6g}, rho={rho:.6g}, beta={beta:.6g})")

    if family_id == "scarf2":
        if not eps > 0:
            fail("eps > 0")
    elif family_id == "poschl-teller":
        if not eps > 0:
            fail("eps > 0")
        if not eps - rho < 0.5:
            fail("eps - rho < 1/2")
    elif family_id == "morse":
        if not eps > 0:
            fail("eps > 0")
        if not rho > 0:
            fail("rho > 0")
    elif family_id == "morse-mirror":
        if not eps > 0:
            fail("eps > 0")
        if not rho < 0:
            fail("rho < 0")
    elif family_id == "radial-osc":
        if not eps < 0.5:
            fail("eps < 1/2")
        if not rho > 0:
            fail("rho > 0")
    elif family_id == "harm-osc":
        if not beta > 0:
            fail("beta > 0")
    elif family_id in ("scarf1", "scarf1-cot"):
        if not eps < 0.5:
            fail("eps < 1/2")
        if not (2 * eps - 1) / 2 < rho < (1 - 2 * eps) / 2:
            fail("(2*eps - 1)/2 < rho < (1 - 2*eps)/2")
    elif family_id == "rosen-morse2":
        if eps == 0:
            fail("eps != 0")
        if not eps > rho / eps:
            fail("eps > rho/eps")
        if not eps + rho / eps > 0:
            fail("eps + rho/eps > 0")
    elif family_id == "eckart":
        if eps == 0:
            fail("eps != 0")
        if not eps < 0.5:
            fail("eps < 1/2")
        if not eps + rho / eps > 0:
            fail("eps + rho/eps > 0")
    elif family_id == "coulomb":
        if eps == 0:
            fail("eps != 0")
        if not eps < 0.5:
            fail("eps < 1/2")
        if not rho / eps > 0:
            fail("rho/eps > 0")
    elif family_id in ("rosen-morse1", "rosen-morse1-cot"):
        if not eps < 0.5:
            fail("eps < 1/2")
    else:
        raise ValidationError(f"unknown family {family_id!r}")


def build_family(family_id: str, data: ConstructionData) -> FamilyParams:
    """Fold the construction data and validate the family's parameter ranges."""
    spec = get_spec(family_id)
    eps, rho, beta = _fold(family_id, data)
    for value, name in ((eps, "eps"), (rho, "rho"), (beta, "beta")):
        if not math.isfinite(value):
            raise ValidationError(f"folded parameter {name} is not finite: {value}")
    _check_ranges(family_id, eps, rho, beta)
    return FamilyParams(id=family_id, eps=eps, rho=rho, beta=beta,
                        alpha=spec.alpha, provenance=data)


def translate_family(fp: FamilyParams, t: int = 1) -> FamilyParams:
    """Rebuild after m_i -> m_i - t; eps drops by t, rho and beta stay."""
    if not isinstance(t, int) or t < 1:
        raise ValidationError(f"translation step must be an integer >= 1, got {t!r}")
    data = dataclasses.replace(fp.provenance, p=fp.provenance.p.translate(t))
    return build_family(fp.id, data)


def _sech(x):
    return 1.0 / np.cosh(x)


def _csch(x):
    return 1.0 / np.sinh(x)


def _sec(x):
    return 1.0 / np.cos(x)


def _csc(x):
    return 1.0 / np.sin(x)


def superpotential(fp: FamilyParams, x):
    """Closed-form k(x) and k'(x); x may be a scalar or an array."""
    fp.domain.require_inside(x)
    e, r, b = fp.eps, fp.rho, fp.beta
    fid = fp.id
    if fid == "scarf2":
        th, sch = np.tanh(x), _sech(x)
        return e * th + r * sch, e * sch ** 2 - r * sch * th
    if fid == "poschl-teller":
        ch, csh = 1.0 / np.tanh(x), _csch(x)
        return e * ch - r * csh, -e * csh ** 2 + r * csh * ch
    if fid == "morse":
        w = np.exp(-np.asarray(x, dtype=float))
        return e - r * w, r * w
    if fid == "morse-mirror":
        w = np.exp(np.asarray(x, dtype=float))
        return -e - r * w, -r * w
    if fid == "radial-osc":
        return e / x + r * x, -e / x ** 2 + r * (x * 0 + 1.0)
    if fid == "harm-osc":
        return b * x + r, b * (x * 0 + 1.0)
    if fid == "scarf1":
        tn, sc = np.tan(x), _sec(x)
        return -e * tn - r * sc, -e * sc ** 2 - r * sc * tn
    if fid == "scarf1-cot":
        ct, cs = 1.0 / np.tan(x), _csc(x)
        return e * ct + r * cs, -e * cs ** 2 - r * cs * ct
    if fid == "rosen-morse2":
        return e * np.tanh(x) + r / e, e * _sech(x) ** 2
    if fid == "eckart":
        return e / np.tanh(x) + r / e, -e * _csch(x) ** 2
    if fid == "coulomb":
        return e / x + r / e, -e / x ** 2
    if fid == "rosen-morse1":
        return -e * np.tan(x) + r / e, -e * _sec(x) ** 2
    if fid == "rosen-morse1-cot":
        return e / np.tan(x) + r / e, -e * _csc(x) ** 2
    raise ValidationError(f"unknown family {fid!r}")


def partner_potentials(fp: FamilyParams, x):
    """V = k^2 - k' and the partner Vtilde = k^2 + k'."""
    k, kp = superpotential(fp, x)
    ksq = k * k
    return ksq - kp, ksq + kp


def riccati_g(family_id: str, x):
    """The family's G(x) and G'(x), satisfying G' + G^2 = alpha."""
    fid = get_spec(family_id).id
    one = np.asarray(x, dtype=float) * 0 + 1.0
    if fid in ("scarf2", "rosen-morse2"):
        return np.tanh(x), _sech(x) ** 2
    if fid in ("poschl-teller", "eckart"):
        return 1.0 / np.tanh(x), -_csch(x) ** 2
    if fid == "morse":
        return one, 0.0 * one
    if fid == "morse-mirror":
        return -one, 0.0 * one
    if fid in ("radial-osc", "coulomb"):
        return 1.0 / x + 0.0 * one, -1.0 / x ** 2
    if fid == "harm-osc":
        return 0.0 * one, 0.0 * one
    if fid in ("scarf1", "rosen-morse1"):
        return -np.tan(x), -_sec(x) ** 2
    return 1.0 / np.tan(x), -_csc(x) ** 2


def coupling_v(family_id: str, x, beta: float, d: float):
    """The linear-equation solution v(x) and v'(x) with constants (beta, d).

    Only the eight linear-form families carry v functions.
    """
    fid = get_spec(family_id).id
    if fid in _RATIO_IDS:
        raise ValidationError(f"family {fid!r} has no v functions (ratio form)")
    if fid == "scarf2":
        th, sch = np.tanh(x), _sech(x)
        return beta * th + d * sch, beta * sch ** 2 - d * sch * th
    if fid == "poschl-teller":
        ch, csh = 1.0 / np.tanh(x), _csch(x)
        return beta * ch - d * csh, -beta * csh ** 2 + d * csh * ch
    if fid == "morse":
        w = np.exp(-np.asarray(x, dtype=float))
        return beta - d * w, d * w
    if fid == "morse-mirror":
        w = np.exp(np.asarray(x, dtype=float))
        return -beta - d * w, -d * w
    if fid == "radial-osc":
        one = np.asarray(x, dtype=float) * 0 + 1.0
        return 0.5 * beta * x + d / x, 0.5 * beta * one - d / x ** 2
    if fid == "harm-osc":
        one = np.asarray(x, dtype=float) * 0 + 1.0
        return beta * x + d, beta * one
    if fid == "scarf1":
        tn, sc = np.tan(x), _sec(x)
        return beta * tn - d * sc, beta * sc ** 2 - d * sc * tn
    # scarf1-cot
    ct, cs = 1.0 / np.tan(x), _csc(x)
    return -beta * ct + d * cs, beta * cs ** 2 - d * cs * ct


def remainder(fp: FamilyParams) -> float:
    """The constant R in Vtilde(x; m) = V(x; m - 1) + R(m - 1)."""
    e, r = fp.eps, fp.rho
    fid = fp.id
    if fid in ("scarf2", "poschl-teller", "morse", "morse-mirror"):
        return 2 * e + 1
    if fid == "radial-osc":
        return 4 * r
    if fid == "harm-osc":
        return 2 * fp.beta
    if fid in ("scarf1", "scarf1-cot"):
        return -2 * e - 1
    shared = (2 * e + 1) * r ** 2 / (e ** 2 * (e + 1) ** 2)
    if fid in ("rosen-morse2", "eckart"):
        return 1 + 2 * e - shared
    if fid == "coulomb":
        return -shared
    # rosen-morse1, rosen-morse1-cot
    return -1 - 2 * e - shared


def construction_remainder(fp: FamilyParams) -> float:
    """R recomputed from the construction: (2M + 1) alpha + 2 sum beta_j I_j.

    Valid for the linear-form families only; the ratio families carry a
    rho-dependent R with no such expression.
    """
    if fp.id in _RATIO_IDS:
        raise ValidationError(
            f"family {fp.id!r} has no construction-side remainder formula")
    mean, sum_beta, _ = _coupling_sums(fp.provenance)
    return (2 * mean + 1) * fp.alpha + 2 * sum_beta


def classic_reconstruction(which: str, m1: float, m2: float, x):
    """Two-parameter reconstruction check: returns (M G + I_1 v_1, direct form).

    PT2: M(2 coth 2x) + I_1(2 csch 2x) against m1 tanh x + m2 coth x on (0, inf);
    PT1: M(2 cot 2x) + I_1(2 csc 2x) against -m1 tan x + m2 cot x on (0, pi/2).
    """
    mean = 0.5 * (m1 + m2)
    inv = 0.5 * (m2 - m1)
    xa = np.asarray(x, dtype=float)
    if which == "pt2":
        if np.any(xa <= 0):
            raise EvalDomainError("pt2 reconstruction needs x > 0")
        lhs = mean * 2.0 / np.tanh(2 * xa) + inv * 2.0 / np.sinh(2 * xa)
        rhs = m1 * np.tanh(xa) + m2 / np.tanh(xa)
    elif which == "pt1":
        if np.any(xa <= 0) or np.any(xa >= _PI / 2):
            raise EvalDomainError("pt1 reconstruction needs 0 < x < pi/2")
        lhs = mean * 2.0 / np.tan(2 * xa) + inv * 2.0 / np.sin(2 * xa)
        rhs = -m1 * np.tan(xa) + m2 / np.tan(xa)
    else:
        raise ValidationError(f"reconstruction id must be 'pt1' or 'pt2', got {which!r}")
    if np.isscalar(x) or (hasattr(x, "ndim") and x.ndim == 0):
        return float(lhs), float(rhs)
    return lhs, rhs
