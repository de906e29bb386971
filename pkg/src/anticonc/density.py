"""Densities of weighted sums of ball-uniform vectors.

The density of Y = sum_j a_j U_j (U_j uniform on the unit ball of R^d) is
estimated through the spherical representation

    p(x) = E[ |X|^{-d} 1{|X| > |x|} ] / omega_d,   X = sum_j a_j xi_j,

with xi_j uniform on the sphere S^{d+1} of R^{d+2}.  In dimension one the
density is also available exactly as a piecewise polynomial, which serves as an
independent oracle for the Monte Carlo route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .mathcore import (
    DEFAULT_CHUNK,
    DomainError,
    McEstimate,
    RngStream,
    draw,
    estimate_from_values,
    log_unit_ball_volume,
    sample_ball_gaussian,
    sample_sphere,
    unit_ball_volume,
)
from .piecewise import PiecewisePolynomial, uniform_sum_density
from .report import VerificationReport

ORACLE_MAX_TERMS = 30
CLIP_LEVEL = 1e6
IMPROVED_C1 = math.sqrt(6.0) * math.exp(-math.sqrt(6.0))


@dataclass(frozen=True)
class CoefficientVector:
    """Weights a_1..a_n rescaled to unit Euclidean norm.

    ``scale`` is the factor that was applied to the raw input and
    ``dropped_zeros`` counts zero entries removed during construction.
    """

    a: tuple[float, ...]
    scale: float = 1.0
    dropped_zeros: int = 0

    def __post_init__(self) -> None:
        arr = np.asarray(self.a, dtype=float)
        if arr.ndim != 1 or len(arr) == 0:
            raise DomainError("need at least one coefficient")
        if np.any(arr == 0) or not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be finite and nonzero")
        if abs(float(np.sum(arr**2)) - 1.0) > 1e-12:
            raise DomainError("coefficients must have unit Euclidean norm")

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "CoefficientVector":
        raw = np.asarray(values, dtype=float)
        if raw.ndim != 1 or not np.all(np.isfinite(raw)):
            raise DomainError("coefficients must be a finite 1-D sequence")
        nz = raw[raw != 0]
        if len(nz) == 0:
            raise DomainError("at least one nonzero coefficient is required")
        scale = 1.0 / float(np.linalg.norm(nz))
        a = nz * scale
        # second pass absorbs rounding in the scale factor
        a = a / math.sqrt(float(np.sum(a**2)))
        return cls(tuple(float(v) for v in a), scale, int(len(raw) - len(nz)))

    @classmethod
    def equal(cls, n: int) -> "CoefficientVector":
        if n < 1:
            raise DomainError("n must be positive")
        return cls.from_values(np.ones(n))

    @classmethod
    def random(cls, n: int, rng: RngStream) -> "CoefficientVector":
        """Gaussian direction; a uniformly random point of S^{n-1}."""
        return cls.from_values(sample_sphere(n, rng))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.a)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def l1(self) -> float:
        return float(np.sum(np.abs(self.array)))

    def to_dict(self) -> dict:
        return {"a": list(self.a), "scale": self.scale, "dropped_zeros": self.dropped_zeros}


def parse_coeffs(text: str, rng: RngStream | None = None) -> CoefficientVector:
    """Parse ``equal:n``, ``random:n`` or a comma separated list of reals."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    try:
        if kind == "equal":
            return CoefficientVector.equal(int(arg))
        if kind == "random":
            return CoefficientVector.random(int(arg), rng or RngStream(0))
        return CoefficientVector.from_values([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise DomainError(f"malformed coefficients {text!r}: {exc}") from exc


def _sphere_sum_sampler(coeffs: CoefficientVector, d: int):
    a = coeffs.array
    n = len(a)

    def sampler(size: int, g: np.random.Generator) -> np.ndarray:
        xi = sample_sphere(d + 2, g, size * n).reshape(size, n, d + 2)
        return np.einsum("snk,n->sk", xi, a)

    return sampler


def _ball_sum_sampler(coeffs: CoefficientVector, d: int):
    a = coeffs.array
    n = len(a)

    def sampler(size: int, g: np.random.Generator) -> np.ndarray:
        u = sample_ball_gaussian(d, g, size * n).reshape(size, n, d)
        return np.einsum("snk,n->sk", u, a)

    return sampler


def spherical_sum_sample(coeffs: CoefficientVector, d: int, rng, size: int | None = None) -> np.ndarray:
    """Draw(s) of sum_j a_j xi_j with xi_j uniform on S^{d+1}; lives in R^{d+2}."""
    g = rng.generator() if isinstance(rng, RngStream) else rng
    out = _sphere_sum_sampler(coeffs, d)(1 if size is None else size, g)
    return out[0] if size is None else out


def sphere_sum_norms(coeffs: CoefficientVector, d: int, n_samples: int, rng: RngStream,
                     chunk_size: int = DEFAULT_CHUNK, threads: int = 1) -> np.ndarray:
    """``n_samples`` draws of |sum_j a_j xi_j| using the mc_mean chunk layout."""
    pts = draw(_sphere_sum_sampler(coeffs, d), n_samples, rng, chunk_size, threads)
    return np.linalg.norm(pts, axis=1)


def ball_sum_norms(coeffs: CoefficientVector, d: int, n_samples: int, rng: RngStream,
                     chunk_size: int = DEFAULT_CHUNK, threads: int = 1) -> np.ndarray:
    """``n_samples`` draws of |sum_j a_j U_j| with U_j uniform in the ball."""
    pts = draw(_ball_sum_sampler(coeffs, d), n_samples, rng, chunk_size, threads)
    return np.linalg.norm(pts, axis=1)


@dataclass
class DensityEstimate:
    radius: float
    estimate: McEstimate
    clipped: McEstimate | None = None
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"radius": self.radius, **self.estimate.to_dict(), "flags": self.flags}
        if self.clipped is not None:
            out["clipped_mean"] = self.clipped.mean
            out["clipped_stderr"] = self.clipped.stderr
        return out


def density_from_norms(norms: np.ndarray, d: int, radius: float,
                       clip: float = CLIP_LEVEL) -> DensityEstimate:
    """Spherical-representation estimator at one radius from precomputed samples of |X|."""
    inv_omega = math.exp(-log_unit_ball_volume(d))
    with np.errstate(divide="ignore"):
        weight = np.where(norms > radius, norms ** (-float(d)), 0.0)
    est = estimate_from_values(weight * inv_omega)
    out = DensityEstimate(float(radius), est)
    if est.mean > 0 and est.stderr > 0.1 * est.mean:
        out.flags.append("relative-stderr-above-10pct")
    if radius == 0.0:
        # |X|^{-d} is heavy tailed near the origin; report a clipped companion
        clipped = estimate_from_values(np.minimum(weight, clip) * inv_omega)
        out.clipped = clipped
        if abs(clipped.mean - est.mean) > 3 * max(clipped.stderr, est.stderr):
            out.flags.append("clipped-estimator-disagrees")
    return out


def density_at(coeffs: CoefficientVector, d: int, x, n_samples: int, rng: RngStream) -> McEstimate:
    """Monte Carlo estimate of the density of sum_j a_j U_j at ``x`` in R^d."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (d,):
        raise DomainError(f"x must have dimension {d}")
    norms = sphere_sum_norms(coeffs, d, n_samples, rng)
    res = density_from_norms(norms, d, float(np.linalg.norm(x)))
    if "relative-stderr-above-10pct" in res.flags:
        warnings.warn(f"density estimate at |x|={res.radius:.4g} has relative stderr above 10%",
                      RuntimeWarning, stacklevel=2)
    return res.estimate


def exact_density_1d(coeffs: CoefficientVector) -> PiecewisePolynomial:
    """Exact density of sum_j a_j U_j with U_j uniform on [-1, 1]."""
    if coeffs.n > ORACLE_MAX_TERMS:
        raise DomainError(f"exact oracle is capped at {ORACLE_MAX_TERMS} terms")
    return uniform_sum_density(np.abs(coeffs.array))


def section_volume_cube(theta, s: float) -> float:
    """Volume of the section of [-1/2, 1/2]^d by the hyperplane <x, theta> = s.

    Equal to the density at ``s`` of sum_j theta_j W_j, W_j uniform on
    [-1/2, 1/2]; zero coordinates of theta contribute nothing and are dropped.
    """
    theta = np.asarray(theta, dtype=float)
    if abs(float(np.linalg.norm(theta)) - 1.0) > 1e-10:
        raise DomainError("theta must be a unit vector")
    w = 0.5 * np.abs(theta[theta != 0])
    if len(w) > ORACLE_MAX_TERMS:
        raise DomainError(f"exact oracle is capped at {ORACLE_MAX_TERMS} terms")
    return float(uniform_sum_density(w)(s))


def kr_tail_bound(d: int, t: float) -> float:
    """Upper bound t^{d+2} exp((d+2)(1 - t^2)/2) on P(|X| >= t) for t > 1."""
    if not t > 1:
        raise DomainError("the tail bound needs t > 1")
    k = d + 2
    return math.exp(k * math.log(t) + 0.5 * k * (1.0 - t * t))


def density_floor_constant(d: int) -> float:
    """c_d = 1 / (100 * 2^d * omega_d)."""
    return math.exp(-math.log(100.0) - d * math.log(2.0) - log_unit_ball_volume(d))


def improved_constant_1d() -> float:
    """sqrt(6) e^{-sqrt(6)}: the d = 1 constant obtained from cube sections."""
    return IMPROVED_C1


def verify_kr_lower(coeffs: CoefficientVector, d: int, n_samples: int, rng: RngStream,
                    tail_ts: Sequence[float] = (1.5, 2.0), threads: int = 1) -> VerificationReport:
    """Estimate P(|X| >= 1) against 0.1 and P(|X| >= t) against kr_tail_bound."""
    norms = sphere_sum_norms(coeffs, d, n_samples, rng, threads=threads)
    rep = VerificationReport("kr", config={"d": d, "n_samples": n_samples, "coeffs": coeffs,
                                           "seed": rng.seed})
    # |X| = 1 holds exactly for a single term but its computed norm can round below 1
    lower = estimate_from_values((norms >= 1.0 - 1e-12).astype(float))
    rep.add("P(|X|>=1)", lower.mean, 0.1, lower.mean >= 0.1 - 3 * lower.stderr, lower.stderr)
    for t in tail_ts:
        tail = estimate_from_values((norms >= t).astype(float))
        bound = kr_tail_bound(d, t)
        rep.add(f"P(|X|>={t:g})", tail.mean, bound, tail.mean <= bound + 3 * tail.stderr,
                tail.stderr)
    return rep


def default_grid(d: int, rng: RngStream, n_points: int = 20, n_directions: int = 10) -> np.ndarray:
    """Radii 0..0.999 alternating between e_1 and ``n_directions`` random directions.

    The density is rotation invariant, so radial coverage is what matters; the
    random directions only guard against a symmetry bug.  |x| = 1 is left out
    because the n = 1 case is degenerate on the sphere.
    """
    radii = np.linspace(0.0, 0.999, n_points)
    dirs = sample_sphere(d, rng, n_directions)
    e1 = np.zeros(d)
    e1[0] = 1.0
    pts = [r * (e1 if i % 2 == 0 else dirs[(i // 2) % n_directions]) for i, r in enumerate(radii)]
    return np.array(pts)


def verify_density_floor(coeffs: CoefficientVector, d: int, x_grid=None, n_samples: int = 10**6,
                     rng: RngStream | None = None, compare_exact: bool = True,
                        threads: int = 1) -> VerificationReport:
    """Check density estimates on a grid in the unit ball against c_d.

    Every estimate must satisfy ``estimate >= c_d - 3 stderr``.  In dimension
    one the exact oracle is evaluated at the same points and reported alongside.
    """
    rng = rng or RngStream(42)
    if x_grid is None:
        x_grid = default_grid(d, rng.substream(1))
    x_grid = np.atleast_2d(np.asarray(x_grid, dtype=float))
    if d == 1 and x_grid.shape[0] == 1 and x_grid.shape[1] != 1:
        x_grid = x_grid.T
    if x_grid.shape[1] != d:
        raise DomainError(f"grid points must have dimension {d}")
    radii = np.linalg.norm(x_grid, axis=1)
    if np.any(radii > 1.0 + 1e-12):
        raise DomainError("grid points must lie in the closed unit ball")

    c_d = density_floor_constant(d)
    rep = VerificationReport(
        "density_floor",
        config={"d": d, "n_samples": n_samples, "coeffs": coeffs, "seed": rng.seed},
        constants={"c_d": c_d, "omega_d": unit_ball_volume(d), "inv_omega_d": 1 / unit_ball_volume(d)},
    )
    norms = sphere_sum_norms(coeffs, d, n_samples, rng.substream(0), threads=threads)
    exact = exact_density_1d(coeffs) if (d == 1 and compare_exact and coeffs.n <= 12) else None
    estimates = []
    for x, r in zip(x_grid, radii):
        if abs(r - 1.0) <= 1e-12:
            rep.notes.append("skipped a grid point with |x| = 1 (boundary is degenerate for n = 1)")
            continue
        de = density_from_norms(norms, d, float(r))
        estimates.append(de)
        detail = {"x": x, "radius": r, "flags": de.flags}
        if de.clipped is not None:
            detail["clipped_mean"] = de.clipped.mean
        if exact is not None:
            ex = exact(r)
            detail["exact"] = ex
            detail["z_score"] = (de.estimate.mean - ex) / de.estimate.stderr if de.estimate.stderr > 0 else 0.0
        est = de.estimate
        rep.add(f"p(|x|={r:.4f})", est.mean, c_d, est.mean >= c_d - 3 * est.stderr, est.stderr, **detail)
    if estimates:
        low = min(estimates, key=lambda e: e.estimate.mean)
        rep.constants["min_estimate"] = low.estimate.mean
        rep.constants["min_radius"] = low.radius
        rep.constants["margin_over_c_d"] = low.estimate.mean / c_d
    return rep


def verify_radial_identity(coeffs: CoefficientVector, d: int, r_grid: Sequence[float],
                           n_samples: int = 10**6, rng: RngStream | None = None,
                           use_exact_lhs: bool | None = None,
                           threads: int = 1) -> VerificationReport:
    """Compare the CDF of |sum a_j U_j| with the radial transform of |sum a_j xi_j|.

    Integrating g(r) = d r^{d-1} int_r^inf s^{-d} f(s) ds from 0 to r gives
    E[min(1, (r/S)^d)] with S = |sum a_j xi_j|, which is what the right-hand
    side estimates.  The left-hand side is an empirical CDF from the
    independent Gaussian ball sampler, or exact in dimension one.
    """
    rng = rng or RngStream(42)
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0) or np.any(r_grid >= coeffs.l1):
        raise DomainError("radii must lie in (0, sum |a_j|)")
    if use_exact_lhs is None:
        use_exact_lhs = d == 1 and coeffs.n <= 12
    rep = VerificationReport("radial_identity",
                             config={"d": d, "n_samples": n_samples, "coeffs": coeffs,
                                     "seed": rng.seed, "exact_lhs": use_exact_lhs})
    s = sphere_sum_norms(coeffs, d, n_samples, rng.substream(0), threads=threads)
    exact = exact_density_1d(coeffs) if use_exact_lhs else None
    y = None
    if not use_exact_lhs:
        y = ball_sum_norms(coeffs, d, n_samples, rng.substream(1), threads=threads)
    for r in r_grid:
        rhs = estimate_from_values(np.minimum(1.0, (r / s) ** d))
        if exact is not None:
            lhs = McEstimate(float(exact.cdf(r) - exact.cdf(-r)), 0.0, n_samples)
        else:
            lhs = estimate_from_values((y <= r).astype(float))
        combined = math.hypot(lhs.stderr, rhs.stderr)
        gap = abs(lhs.mean - rhs.mean)
        rep.add(f"cdf(r={r:.4f})", gap, 3 * combined, gap <= 3 * combined + 1e-12, combined,
                lhs=lhs.mean, rhs=rhs.mean, radius=r)
    return rep
