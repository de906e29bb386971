"""The isotropic double cone and cube sections.

The double cone in R^{d+1} is

    K = {(x, t) : |t| <= lam2 d,  |x| <= lam1 (1 - |t| / (lam2 d))},

whose central sections are balls of radius lam1.  With the parameters from
:func:`isotropic_params` it has unit volume and isotropic constant L_d, and its
section at distance L_d sqrt(3) approaches the universal lower bound
(1/sqrt 2) e^{-sqrt 6} as d grows.  Every d-dependent product is formed in log
space, so d = 10^4 is as cheap and as accurate as d = 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .density import ORACLE_MAX_TERMS, section_volume_cube, uniform_sum_density
from .logconcave import EXTREMAL_VALUE, SQRT3
from .mathcore import (
    DomainError,
    McEstimate,
    RngStream,
    estimate_from_values,
    log_unit_ball_volume,
    sample_sphere,
)
from .report import VerificationReport

CUBE_SECTION_BOUND = math.sqrt(6.0) * math.exp(-math.sqrt(6.0))
REJECTION_MAX_DIM = 3


def _check_d(d: int) -> int:
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d}")
    return int(d)


@dataclass(frozen=True)
class DoubleConeParams:
    d: int
    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        _check_d(self.d)
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            raise DomainError("lambda1 and lambda2 must be positive")
        if not (math.isfinite(self.lambda1) and math.isfinite(self.lambda2)):
            raise DomainError("lambda1 and lambda2 must be finite")

    @property
    def height(self) -> float:
        """Half-length lam2 d of the axis."""
        return self.lambda2 * self.d


@dataclass(frozen=True)
class IsotropicConeResult:
    d: int
    lambda1: float
    lambda2: float
    L_d: float
    log_lambda1: float
    log_lambda2: float
    log_L_d: float

    @property
    def params(self) -> DoubleConeParams:
        return DoubleConeParams(self.d, self.lambda1, self.lambda2)

    def to_dict(self) -> dict:
        return {"d": self.d, "lambda1": self.lambda1, "lambda2": self.lambda2, "L_d": self.L_d,
                "log_lambda1": self.log_lambda1, "log_lambda2": self.log_lambda2,
                "log_L_d": self.log_L_d}


def log_cone_volume(d: int, lambda1: float, lambda2: float) -> float:
    d = _check_d(d)
    return (math.log(2.0 * d) + log_unit_ball_volume(d) + d * math.log(lambda1)
            + math.log(lambda2) - math.log(d + 1.0))


def cone_volume(d: int, lambda1: float, lambda2: float) -> float:
    """Volume 2 d omega_d lam1^d lam2 / (d + 1) of the double cone in R^{d+1}."""
    DoubleConeParams(d, lambda1, lambda2)
    return math.exp(log_cone_volume(d, lambda1, lambda2))


def isotropic_params(d: int) -> IsotropicConeResult:
    """Parameters putting the double cone in isotropic position with unit volume."""
    d = _check_d(d)
    l2, l3 = math.log(d + 2.0), math.log(d + 3.0)
    log_L = ((d + 2) * math.log(d + 1.0) - math.log(2.0) - (d + 1) * (l2 + l3)
             - 2.0 * log_unit_ball_volume(d)) / (2.0 * (d + 1))
    log_l1 = log_L + 0.5 * (l2 + l3 - math.log(d + 1.0))
    log_l2 = log_L + 0.5 * (l2 + l3 - math.log(2.0) - 2.0 * math.log(d))
    return IsotropicConeResult(d, math.exp(log_l1), math.exp(log_l2), math.exp(log_L),
                               log_l1, log_l2, log_L)


def cone_section_volume(d: int, params: DoubleConeParams, t: float) -> float:
    """d-volume of the section {t = const}: omega_d lam1^d (1 - |t|/(lam2 d))^d."""
    if params.d != d:
        raise DomainError("params were built for a different dimension")
    frac = abs(t) / params.height
    if frac >= 1.0:
        return 0.0
    return math.exp(log_unit_ball_volume(d) + d * math.log(params.lambda1) + d * math.log1p(-frac))


def cone_second_moments(d: int, params: DoubleConeParams) -> tuple[float, float]:
    """Per-unit-volume second moments (E t^2, E x_i^2) of the uniform measure.

    Both reduce to Beta integrals over the axis:
    E t^2 = 2 lam2^2 d^2 / ((d+2)(d+3)) and E x_i^2 = lam1^2 (d+1) / ((d+2)(d+3)).
    """
    if params.d != d:
        raise DomainError("params were built for a different dimension")
    denom = (d + 2.0) * (d + 3.0)
    axial = 2.0 * params.lambda2**2 * d * d / denom
    transverse = params.lambda1**2 * (d + 1.0) / denom
    return axial, transverse


def sample_cone_rejection(params: DoubleConeParams, n: int, rng: RngStream,
                          max_rounds: int = 1000) -> np.ndarray:
    """``n`` uniform points of the cone as rows (x_1..x_d, t), by rejection from
    the bounding box.  Only sensible in low dimension."""
    d = params.d
    if d > REJECTION_MAX_DIM:
        raise DomainError(f"rejection sampling is limited to d <= {REJECTION_MAX_DIM}")
    g = rng.generator()
    box = np.array([params.lambda1] * d + [params.height])
    out, have = [], 0
    for _ in range(max_rounds):
        pts = (2.0 * g.random((max(2 * (n - have), 1024), d + 1)) - 1.0) * box
        rad = np.linalg.norm(pts[:, :d], axis=1)
        keep = pts[rad <= params.lambda1 * (1.0 - np.abs(pts[:, d]) / params.height)]
        out.append(keep[: n - have])
        have += len(out[-1])
        if have >= n:
            return np.concatenate(out)
    raise RuntimeError("rejection sampler did not collect enough points")


def cone_moments_mc(params: DoubleConeParams, n: int, rng: RngStream) -> tuple[McEstimate, McEstimate]:
    """Monte Carlo (E t^2, E x_1^2) from rejection samples; the transverse
    estimate averages x_i^2 over coordinates within each sample."""
    pts = sample_cone_rejection(params, n, rng)
    d = params.d
    return (estimate_from_values(pts[:, d] ** 2),
            estimate_from_values(np.mean(pts[:, :d] ** 2, axis=1)))


def section_integral(d: int, params: DoubleConeParams) -> float:
    """Integral of the section volumes over the axis, by quadrature."""
    val, _ = quad(lambda t: cone_section_volume(d, params, t), 0.0, params.height,
                  epsabs=0.0, epsrel=1e-12, limit=200)
    return 2.0 * val


def sharpness_value(d: int) -> tuple[float, bool]:
    """L_d times the volume of the section at distance L_d sqrt 3.

    Returns ``(value, beyond_apex)``; the flag is set (and the value is 0) when
    the hyperplane misses the cone, which does not happen for d >= 1.
    """
    d = _check_d(d)
    frac = SQRT3 * math.sqrt(2.0 / ((d + 2.0) * (d + 3.0)))
    if frac >= 1.0:
        return 0.0, True
    log_val = 0.5 * (2.0 * math.log(d + 1.0) - math.log(2.0) - math.log(d + 2.0)
                     - math.log(d + 3.0)) + d * math.log1p(-frac)
    return math.exp(log_val), False


def sharpness_via_section(d: int) -> float:
    """Same quantity evaluated through :func:`cone_section_volume`."""
    iso = isotropic_params(d)
    return iso.L_d * cone_section_volume(d, iso.params, iso.L_d * SQRT3)


def noncentral_lower_bound(L_K: float) -> float:
    """Lower bound (1/L_K)(1/sqrt 2) e^{-sqrt 6} on sections within L_K sqrt 3 of
    the barycenter of an isotropic convex body with isotropic constant L_K."""
    if not L_K > 0:
        raise DomainError("L_K must be positive")
    return EXTREMAL_VALUE / L_K


def sharpness_sweep(d_values) -> list[dict]:
    rows = []
    for d in d_values:
        iso = isotropic_params(int(d))
        val, flag = sharpness_value(int(d))
        rows.append({"d": int(d), "lambda1": iso.lambda1, "lambda2": iso.lambda2, "L_d": iso.L_d,
                     "sharpness_value": val, "gap_to_limit": val - EXTREMAL_VALUE,
                     "beyond_apex": flag})
    return rows


def verify_isotropy(d_values=range(1, 101), volume_dims=(1, 2, 3, 10, 100, 1000, 10**4),
                    tol: float = 1e-10) -> VerificationReport:
    """Closed-form isotropy, unit volume and the lam1 normalisation identity."""
    rep = VerificationReport("cone_isotropy", config={"d_max": max(d_values)})
    worst_ax, worst_tr = 0.0, 0.0
    for d in d_values:
        iso = isotropic_params(d)
        ax, tr = cone_second_moments(d, iso.params)
        L2 = iso.L_d**2
        worst_ax = max(worst_ax, abs(ax - L2) / L2)
        worst_tr = max(worst_tr, abs(tr - L2) / L2)
    rep.add("max |axial - L_d^2| / L_d^2", worst_ax, tol, worst_ax <= tol)
    rep.add("max |transverse - L_d^2| / L_d^2", worst_tr, tol, worst_tr <= tol)
    for d in volume_dims:
        iso = isotropic_params(d)
        log_vol = log_cone_volume(d, iso.lambda1, iso.lambda2)
        rep.add(f"volume(d={d}) - 1", math.expm1(log_vol), tol, abs(math.expm1(log_vol)) <= tol)
        # omega_d lam1^{d+1} = sqrt((d+1)/2)
        lhs = log_unit_ball_volume(d) + (d + 1) * iso.log_lambda1
        rel = math.expm1(lhs - 0.5 * math.log((d + 1) / 2.0))
        rep.add(f"omega_d lam1^(d+1) / sqrt((d+1)/2) - 1 (d={d})", rel, 1e-8, abs(rel) <= 1e-8)
    iso = isotropic_params(10**4)
    gap = abs(iso.L_d / iso.lambda2 - math.sqrt(2.0))
    rep.add("|L_d/lam2 - sqrt 2| at d=1e4", gap, 1e-3, gap < 1e-3)
    return rep


def verify_cone_mc(d: int, n_samples: int, rng: RngStream, lambdas=None) -> VerificationReport:
    """Closed-form second moments against rejection sampling (d <= 3)."""
    params = isotropic_params(d).params if lambdas is None else DoubleConeParams(d, *lambdas)
    ax, tr = cone_second_moments(d, params)
    mc_ax, mc_tr = cone_moments_mc(params, n_samples, rng)
    rep = VerificationReport("cone_moments_mc",
                             config={"d": d, "lambda1": params.lambda1, "lambda2": params.lambda2,
                                     "n_samples": n_samples, "seed": rng.seed})
    for name, exact, est in (("axial", ax, mc_ax), ("transverse", tr, mc_tr)):
        z = (est.mean - exact) / est.stderr
        rep.add(f"{name} second moment", est.mean, exact, abs(z) <= 3.0, est.stderr, z_score=z)
    return rep


def verify_sharpness(d_values=range(3, 2001), check_d: int = 1000) -> VerificationReport:
    """Monotone decrease towards the limit, the gap at ``check_d``, agreement of
    the two evaluation routes and the lower bound at distance L_d sqrt 3."""
    d_values = list(d_values)
    vals = np.array([sharpness_value(d)[0] for d in d_values])
    rep = VerificationReport("cone_sharpness", config={"d_min": d_values[0], "d_max": d_values[-1]},
                             constants={"limit": EXTREMAL_VALUE})
    inc = float(np.diff(vals).max()) if len(vals) > 1 else -math.inf
    rep.add("max forward difference", inc, 0.0, inc < 0.0)
    gap = sharpness_value(check_d)[0] - EXTREMAL_VALUE
    rep.add(f"gap to limit at d={check_d}", gap, 0.002, abs(gap) < 0.002)
    worst = max(abs(sharpness_via_section(d) / sharpness_value(d)[0] - 1.0)
                for d in (1, 2, 3, 10, 100, 1000, 10**4))
    rep.add("closed chain vs section route (rel)", worst, 1e-8, worst <= 1e-8)
    low = float(vals.min() - EXTREMAL_VALUE)
    rep.add("min over d of value - limit", low, 0.0, low >= 0.0)
    rep.constants["gap_profile"] = {str(d): float(sharpness_value(d)[0] - EXTREMAL_VALUE)
                                    for d in (3, 10, 100, 1000) if d in d_values or d == check_d}
    return rep


def verify_cube_sections(d: int, n_directions: int, rng: RngStream,
                       distances=(0.0, 0.25, 0.5), tol: float = 1e-9) -> VerificationReport:
    """Exact sections of [-1/2, 1/2]^d at distance at most 1/2 against
    sqrt(6) e^{-sqrt 6}, over seeded random directions."""
    if not 2 <= d <= ORACLE_MAX_TERMS:
        raise DomainError(f"cube check needs 2 <= d <= {ORACLE_MAX_TERMS}")
    thetas = sample_sphere(d, rng, n_directions)
    rep = VerificationReport("cube_sections",
                             config={"d": d, "n_directions": n_directions, "seed": rng.seed,
                                     "distances": list(distances)},
                             constants={"bound": CUBE_SECTION_BOUND})
    mins = {s: (math.inf, None) for s in distances}
    for k, theta in enumerate(thetas):
        # one exact density per direction serves all distances
        dens = uniform_sum_density(0.5 * np.abs(theta))
        for s in distances:
            v = float(dens(s))
            if v < mins[s][0]:
                mins[s] = (v, k)
    for s, (v, k) in mins.items():
        rep.add(f"min section at s={s:g}", v, CUBE_SECTION_BOUND, v >= CUBE_SECTION_BOUND - tol,
                direction_index=k)
    return rep


__all__ = [
    "CUBE_SECTION_BOUND", "DoubleConeParams", "IsotropicConeResult", "cone_volume",
    "log_cone_volume", "isotropic_params", "cone_section_volume", "cone_second_moments",
    "sample_cone_rejection", "cone_moments_mc", "section_integral", "sharpness_value",
    "sharpness_via_section", "noncentral_lower_bound", "sharpness_sweep", "verify_isotropy",
    "verify_cone_mc", "verify_sharpness", "verify_cube_sections", "section_volume_cube",
]
