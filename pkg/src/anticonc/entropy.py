"""Rényi entropy powers of tractable densities, the links between the
concentration function Q, the maximum functional M and N_inf, and checks of
the smoothed-sum entropy and concentration inequalities.

Entropies are only ever computed from exact densities.  Four kinds are
supported: uniform balls, point masses, piecewise polynomials on the line and
Gaussians.  Sums are formed exactly in dimension one (repeated convolution with
uniforms, at most one general piecewise component); in higher dimension the
sum-side quantities are exact only for point masses and otherwise go through
the Monte Carlo concentration estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.special import gammaln
from scipy.stats import chi2

from .mathcore import (
    DomainError,
    McEstimate,
    RngStream,
    log_unit_ball_volume,
    sample_ball_gaussian,
)
from .piecewise import PiecewisePolynomial
from .report import VerificationReport

Q_SLACK = 1e-9
LOGCONCAVE_C_DEFAULT = 1.0 / 12.0
LOGCONCAVE_C_UPPER_DEFAULT = 1.0
N_CANDIDATES = 32
MEAN_SHIFT_STEPS = 25


class UnsupportedKindError(DomainError):
    """The requested quantity has no exact formula for this kind of density."""


class InconsistencyError(ValueError):
    """Computed quantities violate an identity that must hold exactly."""


def _check_p(p: float) -> float:
    p = float(p)
    if not p > 1.0:
        raise DomainError(f"p must exceed 1, got {p}")
    return p


def _ball_log_volume(d: int, radius: float) -> float:
    return log_unit_ball_volume(d) + d * math.log(radius)


def _point(d: int, v) -> tuple[float, ...]:
    arr = np.zeros(d) if v is None else np.atleast_1d(np.asarray(v, dtype=float))
    if arr.shape != (d,):
        raise DomainError(f"location must have dimension {d}")
    return tuple(float(t) for t in arr)


# ---------------------------------------------------------------- densities


@dataclass(frozen=True)
class UniformBall:
    d: int
    radius: float
    center: tuple[float, ...] | None = None
    kind = "uniform-ball"

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise DomainError("radius must be positive")
        object.__setattr__(self, "center", _point(self.d, self.center))

    def max_density(self) -> float:
        return math.exp(-_ball_log_volume(self.d, self.radius))

    def renyi_power(self, p: float) -> float:
        _check_p(p)
        # flat density: h_p = log vol for every p
        return math.exp(2.0 * _ball_log_volume(self.d, self.radius) / self.d)

    def concentration(self, lam: float) -> float:
        return min(1.0, (lam / self.radius) ** self.d)

    def sample(self, n: int, g: np.random.Generator) -> np.ndarray:
        return np.asarray(self.center) + self.radius * sample_ball_gaussian(self.d, g, n)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "d": self.d, "radius": self.radius, "center": list(self.center)}


@dataclass(frozen=True)
class PointMass:
    d: int
    loc: tuple[float, ...] | None = None
    kind = "point-mass"

    def __post_init__(self) -> None:
        object.__setattr__(self, "loc", _point(self.d, self.loc))

    def max_density(self) -> float:
        raise UnsupportedKindError("a point mass has no density")

    def renyi_power(self, p: float) -> float:
        raise UnsupportedKindError("a point mass has no density; smooth it first")

    def concentration(self, lam: float) -> float:
        return 1.0

    def sample(self, n: int, g: np.random.Generator) -> np.ndarray:
        return np.tile(np.asarray(self.loc), (n, 1))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "d": self.d, "loc": list(self.loc)}


@dataclass(frozen=True)
class Piecewise1D:
    pp: PiecewisePolynomial
    kind = "piecewise-poly-1d"
    d = 1

    def __post_init__(self) -> None:
        mass = self.pp.integral()
        if abs(mass - 1.0) > 1e-9:
            raise DomainError(f"piecewise density integrates to {mass}, not 1")

    def max_density(self) -> float:
        return self.pp.max_value()[0]

    def renyi_power(self, p: float) -> float:
        p = _check_p(p)
        if math.isinf(p):
            return self.max_density() ** -2.0
        return self.pp.power_integral(p) ** (-2.0 / (p - 1.0))

    def concentration(self, lam: float) -> float:
        return q_from_m(lam, Piecewise1D(self.pp.convolve_uniform(lam)).max_density(), 1)

    def sample(self, n: int, g: np.random.Generator) -> np.ndarray:
        lo, hi = self.pp.support
        top = self.max_density() * (1.0 + 1e-12)
        out, have = [], 0
        while have < n:
            m = 2 * (n - have) + 64
            x = lo + (hi - lo) * g.random(m)
            keep = x[g.random(m) * top <= self.pp(x)]
            out.append(keep[: n - have])
            have += len(out[-1])
        return np.concatenate(out)[:, None]

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.pp.to_dict()}


@dataclass(frozen=True)
class Gaussian:
    cov: tuple
    mean: tuple[float, ...] | None = None
    kind = "gaussian"

    def __post_init__(self) -> None:
        c = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if c.shape[0] != c.shape[1] or not np.allclose(c, c.T, rtol=0, atol=1e-12):
            raise DomainError("covariance must be a symmetric square matrix")
        try:
            np.linalg.cholesky(c)
        except np.linalg.LinAlgError as exc:
            raise DomainError("covariance must be positive definite") from exc
        object.__setattr__(self, "cov", tuple(map(tuple, c.tolist())))
        object.__setattr__(self, "mean", _point(c.shape[0], self.mean))

    @property
    def d(self) -> int:
        return len(self.cov)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.cov)

    def _logdet(self) -> float:
        return 2.0 * float(np.log(np.diag(np.linalg.cholesky(self.matrix))).sum())

    def max_density(self) -> float:
        return math.exp(-0.5 * self.d * math.log(2 * math.pi) - 0.5 * self._logdet())

    def renyi_power(self, p: float) -> float:
        p = _check_p(p)
        log_n = math.log(2 * math.pi) + self._logdet() / self.d
        if not math.isinf(p):
            log_n += math.log(p) / (p - 1.0)
        return math.exp(log_n)

    def concentration(self, lam: float) -> float:
        # the centred ball is optimal for a symmetric unimodal law; the
        # distribution of |X| is a scaled chi only in the isotropic case
        c = self.matrix
        s2 = float(c[0, 0])
        if not np.allclose(c, s2 * np.eye(self.d), rtol=1e-12, atol=0):
            raise UnsupportedKindError("exact Q is implemented for isotropic Gaussians only")
        return float(chi2.cdf(lam * lam / s2, self.d))

    def sample(self, n: int, g: np.random.Generator) -> np.ndarray:
        return g.multivariate_normal(np.asarray(self.mean), self.matrix, size=n, method="cholesky")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "cov": [list(r) for r in self.cov], "mean": list(self.mean)}


TractableDensity = Union[UniformBall, PointMass, Piecewise1D, Gaussian]


def density_from_dict(data: dict) -> TractableDensity:
    kind = data.get("kind")
    if kind == "uniform-ball":
        d = int(data.get("d", len(data.get("center", [0.0]))))
        return UniformBall(d, float(data["radius"]), data.get("center"))
    if kind == "point-mass":
        d = int(data.get("d", len(data.get("loc", [0.0]))))
        return PointMass(d, data.get("loc"))
    if kind == "piecewise-poly-1d":
        return Piecewise1D(PiecewisePolynomial.from_dict(data))
    if kind == "gaussian":
        return Gaussian(data["cov"], data.get("mean"))
    raise DomainError(f"unknown density kind {kind!r}")


def renyi_power(density: TractableDensity, p: float) -> float:
    """N_p = exp(2 h_p / d); for p = inf this is M^{-2/d}."""
    return density.renyi_power(p)


def smooth(density: TractableDensity, lam: float) -> TractableDensity:
    """Exact law of X + lam U with U uniform on the unit ball, where available."""
    if not lam > 0:
        raise DomainError("smoothing radius must be positive")
    if isinstance(density, PointMass):
        return UniformBall(density.d, lam, density.loc)
    if density.d == 1 and isinstance(density, (UniformBall, Piecewise1D)):
        return Piecewise1D(_line_density([density], [lam]))
    raise UnsupportedKindError(f"no exact smoothing for {density.kind} in dimension {density.d}")


def _line_density(components: Sequence[TractableDensity],
                  extra_widths: Sequence[float] = ()) -> PiecewisePolynomial | None:
    """Exact density of sum(components) + sum of uniforms on [-w, w] in 1-D.

    Returns None when the sum is deterministic.  At most one general
    piecewise component is allowed, since only convolution with a uniform is
    implemented exactly.
    """
    shift = 0.0
    widths = [float(w) for w in extra_widths]
    base = None
    for comp in components:
        if comp.d != 1:
            raise DomainError("all components must be one-dimensional")
        if isinstance(comp, PointMass):
            shift += comp.loc[0]
        elif isinstance(comp, UniformBall):
            shift += comp.center[0]
            widths.append(comp.radius)
        elif isinstance(comp, Piecewise1D):
            if base is not None:
                raise UnsupportedKindError("at most one piecewise component per exact sum")
            base = comp.pp
        else:
            raise UnsupportedKindError(f"no exact 1-D sum with {comp.kind}")
    widths = sorted(w for w in widths if w > 0)
    if base is None:
        if not widths:
            return None
        base = PiecewisePolynomial.constant(-widths[0], widths[0], 0.5 / widths[0])
        widths = widths[1:]
    for w in widths:
        base = base.convolve_uniform(w)
    return base.shift(shift) if shift else base


# ---------------------------------------------------------- Q, M and N_inf


def q_from_m(lam: float, M_smoothed: float, d: int) -> float:
    """Q_X(lam) = lam^d omega_d M(X + lam U)."""
    if not (lam > 0 and M_smoothed > 0):
        raise DomainError("lambda and M must be positive")
    q = math.exp(d * math.log(lam) + log_unit_ball_volume(d) + math.log(M_smoothed))
    if q > 1.0 + Q_SLACK:
        raise InconsistencyError(f"Q = {q!r} exceeds 1; the value of M is inconsistent")
    return min(q, 1.0)


def ninf_from_q(lam: float, Q: float, d: int) -> float:
    """N_inf(X + lam U) = omega_d^{2/d} lam^2 Q_X(lam)^{-2/d}."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    if not 0.0 < Q <= 1.0:
        raise DomainError("Q must lie in (0, 1]")
    return math.exp(2.0 * log_unit_ball_volume(d) / d + 2.0 * math.log(lam) - 2.0 * math.log(Q) / d)


def concentration_exact(density: TractableDensity, lam: float) -> float:
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return density.concentration(lam)


def concentration_function(sampler: Callable[[int, np.random.Generator], np.ndarray], lam: float,
                           n_samples: int, rng: RngStream) -> McEstimate:
    """Lower estimate of Q_X(lam) = sup_x P(|X - x| <= lam) from samples.

    Centres are chosen on one sample (the origin, 32 sample points and a
    mean-shift refinement of the best of them) and the winning ball is then
    evaluated on an independent sample, so the estimate is unbiased for that
    centre and biased low for the supremum.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    sel = np.asarray(sampler(n_samples, rng.substream(0).generator()), dtype=float)
    if sel.ndim == 1:
        sel = sel[:, None]
    d = sel.shape[1]

    def hits(center, pts):
        return np.sum((pts - center) ** 2, axis=1) <= lam * lam

    picks = rng.substream(2).generator().choice(n_samples, size=min(N_CANDIDATES, n_samples),
                                                replace=False)
    cands = [np.zeros(d)] + [sel[i] for i in picks]
    scores = [hits(c, sel).mean() for c in cands]
    best = cands[int(np.argmax(scores))]
    best_score = max(scores)
    center = best
    for _ in range(MEAN_SHIFT_STEPS):
        inside = hits(center, sel)
        if not inside.any():
            break
        nxt = sel[inside].mean(axis=0)
        score = hits(nxt, sel).mean()
        if score > best_score:
            best, best_score = nxt, score
        if np.allclose(nxt, center, rtol=0, atol=1e-12):
            break
        center = nxt
    ev = np.asarray(sampler(n_samples, rng.substream(1).generator()), dtype=float)
    if ev.ndim == 1:
        ev = ev[:, None]
    ind = hits(best, ev).astype(float)
    se = float(ind.std(ddof=1) / math.sqrt(n_samples))
    return McEstimate(float(ind.mean()), se, n_samples)


# --------------------------------------------------------------- constants


def repi_constant(p: float, d: int | None = None) -> float:
    """Constant c_p = e^{-1} p^{1/(p-1)} in N_p(sum X_i) >= c_p sum N_p(X_i).

    For p = inf and a given dimension the sharp value
    Gamma(d/2 + 1)^{2/d} / (d/2 + 1) is returned instead.
    """
    p = _check_p(p)
    if math.isinf(p):
        if d is None:
            return math.exp(-1.0)
        return math.exp(2.0 * float(gammaln(d / 2.0 + 1.0)) / d) / (d / 2.0 + 1.0)
    return math.exp(-1.0 + math.log(p) / (p - 1.0))


def _exp_or_inf(x: float) -> float:
    # the constants blow up like 2^{2/(p-1)} near p = 1; logs stay comparable
    return math.exp(x) if x < 709.0 else math.inf


def _p_factor(p: float) -> float:
    """2p / (p - 1), continuous at p = inf."""
    return 2.0 if math.isinf(p) else 2.0 * p / (p - 1.0)


@dataclass(frozen=True)
class SmoothingConstant:
    p: float
    d: int
    exact: float
    bound: float
    log_exact: float
    log_bound: float

    def to_dict(self) -> dict:
        return {"p": self.p, "d": self.d, "exact": self.exact, "bound": self.bound,
                "log_exact": self.log_exact, "log_bound": self.log_bound}


def smoothing_constant(p: float, d: int) -> SmoothingConstant:
    """C_{p,d} for the smoothed-sum entropy inequality.

    ``exact`` is e (100 2^d)^{2p/(d(p-1))}, the value the argument produces;
    ``bound`` is the rounded-up e 2^{(2p/(p-1))(d+7)/d}.  Values beyond the
    float range are reported as inf; the log fields are always finite.
    """
    p = _check_p(p)
    if int(d) != d or d < 1:
        raise DomainError("d must be a positive integer")
    k = _p_factor(p)
    log_exact = 1.0 + k / d * (math.log(100.0) + d * math.log(2.0))
    log_bound = 1.0 + k * (d + 7.0) / d * math.log(2.0)
    if not log_exact < log_bound:
        raise InconsistencyError("exact constant is not below the stated bound")
    return SmoothingConstant(p, int(d), _exp_or_inf(log_exact), _exp_or_inf(log_bound),
                             log_exact, log_bound)


def kappa_d(d: int) -> float:
    """Isotropic constant omega_d^{-1/d} / sqrt(d + 2) of the unit-volume ball."""
    if int(d) != d or d < 1:
        raise DomainError("d must be a positive integer")
    val = math.exp(-log_unit_ball_volume(d) / d - 0.5 * math.log(d + 2.0))
    if val < 1.0 / 12.0:
        raise InconsistencyError(f"kappa_{d} = {val} is below 1/12")
    return val


def logconcave_two_sided(cov_list: Sequence, lam: float, d: int,
                         c: float = LOGCONCAVE_C_DEFAULT,
                         C: float = LOGCONCAVE_C_UPPER_DEFAULT) -> tuple[float, float]:
    """Bounds c^d omega_d lam^d / det(lam^2/(d+2) I + sum Cov)^{1/2} and the same with C.

    For sums of independent log-concave vectors Q_S(lam) lies between them for
    suitable universal c, C; those constants are not known numerically, so
    they are arguments.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    total = lam * lam / (d + 2.0) * np.eye(d)
    for cov in cov_list:
        m = np.atleast_2d(np.asarray(cov, dtype=float))
        if m.shape != (d, d) or not np.allclose(m, m.T, rtol=0, atol=1e-12):
            raise DomainError("covariances must be symmetric d x d matrices")
        if np.linalg.eigvalsh(m).min() < -1e-12 * max(1.0, float(np.abs(m).max())):
            raise DomainError("covariance is not positive semidefinite")
        total = total + m
    logdet = 2.0 * float(np.log(np.diag(np.linalg.cholesky(total))).sum())
    base = log_unit_ball_volume(d) + d * math.log(lam) - 0.5 * logdet
    return math.exp(d * math.log(c) + base), math.exp(d * math.log(C) + base)


# --------------------------------------------------------------- instances


@dataclass
class SumInstance:
    components: list
    lambdas: list[float]
    d: int
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.components) != len(self.lambdas) or not self.components:
            raise DomainError("need one lambda per component and at least one component")
        if any(not lam > 0 for lam in self.lambdas):
            raise DomainError("lambdas must be positive")
        if abs(sum(lam * lam for lam in self.lambdas) - 1.0) > 1e-12:
            raise DomainError("lambdas must satisfy sum lambda_j^2 = 1")
        if any(c.d != self.d for c in self.components):
            raise DomainError("all components must share the dimension d")

    @classmethod
    def normalized(cls, components, lambdas, d: int, label: str = "") -> "SumInstance":
        lam = np.asarray(lambdas, dtype=float)
        return cls(list(components), list(lam / np.linalg.norm(lam)), d, label)

    @classmethod
    def from_dict(cls, data: dict) -> "SumInstance":
        comps = [density_from_dict(c) for c in data["components"]]
        d = int(data.get("d", comps[0].d))
        if data.get("normalize", False):
            return cls.normalized(comps, data["lambdas"], d, data.get("label", ""))
        return cls(comps, [float(x) for x in data["lambdas"]], d, data.get("label", ""))

    def to_dict(self) -> dict:
        return {"label": self.label, "d": self.d, "lambdas": self.lambdas,
                "components": [c.to_dict() for c in self.components]}

    @property
    def deterministic(self) -> bool:
        return all(isinstance(c, PointMass) for c in self.components)

    def sample_sum(self, n: int, g: np.random.Generator) -> np.ndarray:
        total = np.zeros((n, self.d))
        for comp in self.components:
            total += comp.sample(n, g)
        return total


def _sum_plus_ball(instance: SumInstance, radius: float) -> TractableDensity:
    """Exact law of S + radius U0."""
    if instance.deterministic:
        loc = np.sum([c.loc for c in instance.components], axis=0)
        return UniformBall(instance.d, radius, loc)
    if instance.d == 1:
        return Piecewise1D(_line_density(instance.components, [radius]))
    raise UnsupportedKindError("exact sums beyond point masses need d = 1")


def verify_smoothed_sum_entropy(instance: SumInstance, p: float,
                                tol: float = 1e-10) -> VerificationReport:
    """Check N_p(S + U0) >= (1/C_{p,d}) sum_j N_p(X_j + lam_j U_j) exactly."""
    p = _check_p(p)
    const = smoothing_constant(p, instance.d)
    lhs = renyi_power(_sum_plus_ball(instance, 1.0), p)
    parts = [renyi_power(smooth(c, lam), p) for c, lam in zip(instance.components, instance.lambdas)]
    rhs = sum(parts) / const.bound
    rep = VerificationReport("smoothed_sum_entropy",
                             config={"p": p, "instance": instance.to_dict()},
                             constants={"C_pd": const.bound, "C_pd_exact": const.exact})
    rep.add("N_p(S+U0) - sum N_p(X_j+lam_j U_j)/C", lhs - rhs, 0.0, lhs >= rhs - tol,
            lhs=lhs, rhs=rhs, component_powers=parts, slack_factor=lhs / rhs)
    return rep


def _component_concentration(comp: TractableDensity, lam: float) -> float:
    return concentration_exact(comp, lam)


def concentration_bound_rhs(instance: SumInstance, lam: float) -> float:
    """(2 lam + 1)^d e^{d/2} 2^{d+7} (sum lam_j^2 Q_j(lam_j)^{-2/d})^{-d/2}
    for normalized lambdas."""
    d = instance.d
    acc = sum(l * l * _component_concentration(c, l) ** (-2.0 / d)
              for c, l in zip(instance.components, instance.lambdas))
    log_rhs = (d * math.log(2.0 * lam + 1.0) + 0.5 * d + (d + 7) * math.log(2.0)
               - 0.5 * d * math.log(acc))
    return math.exp(log_rhs)


def verify_concentration_bound(instance: SumInstance, lam: float, n_samples: int = 200_000,
                               rng: RngStream | None = None,
                               force_mc: bool = False) -> VerificationReport:
    """Check Q_S(lam) <= RHS + 3 stderr, with Q_S exact when possible.

    The Monte Carlo value is a lower estimate of the supremum; reports say so.
    """
    if lam < 1.0:
        raise DomainError("lambda must be at least (sum lam_j^2)^{1/2} = 1")
    rhs = concentration_bound_rhs(instance, lam)
    rep = VerificationReport("concentration_bound",
                             config={"lambda": lam, "instance": instance.to_dict()},
                             constants={"rhs": rhs})
    exact = None
    if not force_mc:
        if instance.deterministic:
            exact = 1.0
        elif instance.d == 1:
            try:
                smoothed = _sum_plus_ball(instance, lam)
                exact = q_from_m(lam, smoothed.max_density(), 1)
            except UnsupportedKindError:
                exact = None
    if exact is not None:
        rep.add("Q_S(lambda)", exact, rhs, exact <= rhs, 0.0, method="exact")
    else:
        rng = rng or RngStream(42)
        est = concentration_function(instance.sample_sum, lam, n_samples, rng)
        rep.add("Q_S(lambda)", est.mean, rhs, est.mean <= rhs + 3 * est.stderr, est.stderr,
                method="monte-carlo lower estimate")
        rep.notes.append("Q_S is a Monte Carlo lower estimate of the supremum over centres")
    return rep


def verify_repi_1d(widths1: Sequence[float], widths2: Sequence[float], p: float,
                   tol: float = 1e-12) -> VerificationReport:
    """N_p(X1 + X2) >= e^{-1} (N_p(X1) + N_p(X2)) for X_i sums of centred uniforms."""
    p = _check_p(p)
    x1 = Piecewise1D(_line_density([], widths1))
    x2 = Piecewise1D(_line_density([], widths2))
    s = Piecewise1D(_line_density([], list(widths1) + list(widths2)))
    lhs = s.renyi_power(p)
    rhs = math.exp(-1.0) * (x1.renyi_power(p) + x2.renyi_power(p))
    rep = VerificationReport("repi_1d", config={"p": p, "widths1": list(widths1),
                                               "widths2": list(widths2)},
                             constants={"c": math.exp(-1.0), "c_p": repi_constant(p)})
    rep.add("N_p(X1+X2) - (N_p(X1)+N_p(X2))/e", lhs - rhs, 0.0, lhs >= rhs - tol, lhs=lhs, rhs=rhs)
    return rep


def verify_logconcave_uniform_sweep(w_grid=(0.1, 0.5, 1.0, 2.0, 5.0),
                                    lam_grid=(0.1, 0.5, 1.0, 2.0, 10.0),
                                    c: float = LOGCONCAVE_C_DEFAULT,
                                    C: float = LOGCONCAVE_C_UPPER_DEFAULT) -> VerificationReport:
    """Exact Q of a uniform on [-w, w] against the two-sided log-concave bounds."""
    rep = VerificationReport("logconcave_two_sided",
                             config={"w_grid": list(w_grid), "lam_grid": list(lam_grid)},
                             constants={"c": c, "C": C})
    rep.notes.append("c and C are configurable modelling choices, not known universal values")
    for w in w_grid:
        comp = UniformBall(1, w)
        for lam in lam_grid:
            q = comp.concentration(lam)
            lo, hi = logconcave_two_sided([[[w * w / 3.0]]], lam, 1, c, C)
            rep.add(f"Q(w={w:g},lam={lam:g})", q, hi, lo <= q <= hi, lower=lo)
    return rep


__all__ = [
    "UniformBall", "PointMass", "Piecewise1D", "Gaussian", "TractableDensity",
    "UnsupportedKindError", "InconsistencyError", "density_from_dict", "renyi_power", "smooth",
    "q_from_m", "ninf_from_q", "concentration_exact", "concentration_function", "repi_constant",
    "SmoothingConstant", "smoothing_constant", "kappa_d", "logconcave_two_sided", "SumInstance",
    "verify_smoothed_sum_entropy", "concentration_bound_rhs", "verify_concentration_bound",
    "verify_repi_1d", "verify_logconcave_uniform_sweep",
]
