"""The two-parameter extremal family of even log-concave densities

    f(x) = c (1{|x| <= a} + e^{-(|x| - a)} 1{a < |x| <= a + b}),   c = 1 / (2A),

its moment functions A, B, the gap function h, and the minimization of
sigma * f(sigma * t0) over the family.  ``b = inf`` is a first-class value with
its own closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammainc

from .mathcore import DomainError, psi
from .report import VerificationReport

SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)
EXTREMAL_VALUE = math.exp(-SQRT6) / math.sqrt(2.0)
UNIFORM_PEAK_VALUE = 1.0 / (2.0 * SQRT3)
A_MAX = 10.0


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = trace or []


@dataclass(frozen=True)
class ExtremalDensityParams:
    """(a, b) with the exponential rate fixed to 1; ``b`` may be ``math.inf``."""

    a: float
    b: float

    def __post_init__(self) -> None:
        _check(self.a, self.b)

    @property
    def normalizer(self) -> float:
        return 1.0 / (2.0 * A(self.a, self.b))

    @property
    def sigma(self) -> float:
        return B(self.a, self.b) / SQRT3

    def pdf(self, x):
        ax = np.abs(np.asarray(x, dtype=float))
        c = self.normalizer
        val = np.where(ax <= self.a, c,
                       np.where(ax <= self.a + self.b, c * np.exp(self.a - ax), 0.0))
        return float(val) if val.ndim == 0 else val


def _check(a: float, b: float) -> None:
    if not (a >= 0 and b >= 0) or math.isnan(a) or math.isnan(b) or math.isinf(a):
        raise DomainError(f"need finite a >= 0 and b >= 0, got ({a}, {b})")
    if a == 0 and b == 0:
        raise DomainError("a and b cannot both vanish")


def A(a: float, b: float) -> float:
    """Half the total mass before normalization: a + 1 - e^{-b}."""
    if math.isinf(b):
        return a + 1.0
    return a - math.expm1(-b)


def I(a: float, b: float) -> float:
    """Integral of (x + a)^2 e^{-x} over [0, b].

    Written as a^2 g0 + 2a g1 + g2 with g_k = int_0^b x^k e^{-x} dx expressed
    through regularized incomplete gammas, which avoids the cancellation in
    the textbook form (a^2+2a+2) - e^{-b}((a+b)^2 + 2(a+b) + 2) at small b.
    """
    if math.isinf(b):
        return a * a + 2.0 * a + 2.0
    return a * a * -math.expm1(-b) + 2.0 * a * float(gammainc(2, b)) + 2.0 * float(gammainc(3, b))


def I_textbook(a: float, b: float) -> float:
    return (a * a + 2 * a + 2) - math.exp(-b) * ((a + b) ** 2 + 2 * (a + b) + 2)


def B(a: float, b: float) -> float:
    """sigma * sqrt(3) for the (a, b) member."""
    _check(a, b)
    if math.isinf(b):
        return math.sqrt((a**3 + 3.0 * (a * a + 2.0 * a + 2.0)) / (a + 1.0))
    return math.sqrt((a**3 + 3.0 * I(a, b)) / A(a, b))


def f_limit(x: float) -> float:
    """B(a, inf) written in x = a + 1: sqrt(x^2 + 3 + 2/x)."""
    return math.sqrt(x * x + 3.0 + 2.0 / x)


def h(a: float, b: float) -> float:
    """e^{-b} + psi(A) + psi(sqrt 6) - psi(B); nonnegative exactly when
    phi0(a, b) is at least the extremal value."""
    _check(a, b)
    if math.isinf(b):
        x = a + 1.0
        return psi(x) + psi(SQRT6) - psi(f_limit(x))
    return math.exp(-b) + psi(A(a, b)) + psi(SQRT6) - psi(B(a, b))


def phi0(a: float, b: float) -> float:
    """sigma f(sigma sqrt 3) = B / (2 sqrt3 A) * e^{a - B}."""
    Bv = B(a, b)
    return Bv / (2.0 * SQRT3 * A(a, b)) * math.exp(a - Bv)


def standardized_value(a: float, b: float, t0: float) -> float:
    """sigma f(sigma t0) for the (a, b) member; 0 when sigma t0 > a + b."""
    if b == 0:
        # the uniform is scale free: sigma f = 1/(2 sqrt3) on its whole support
        _check(a, b)
        return UNIFORM_PEAK_VALUE if t0 <= SQRT3 else 0.0
    Bv = B(a, b)
    s = Bv / SQRT3
    x = s * t0
    c = 1.0 / (2.0 * A(a, b))
    if x <= a:
        return s * c
    if x <= a + b:
        return s * c * math.exp(a - x)
    return 0.0


# vectorized versions on arrays, used by the grid searches

def _A_vec(a, b):
    return np.where(np.isinf(b), a + 1.0, a - np.expm1(-np.where(np.isinf(b), 0.0, b)))


def _B_vec(a, b):
    fin = ~np.isinf(b)
    bb = np.where(fin, b, 0.0)
    Ifin = a * a * -np.expm1(-bb) + 2.0 * a * gammainc(2, bb) + 2.0 * gammainc(3, bb)
    I_all = np.where(fin, Ifin, a * a + 2.0 * a + 2.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.sqrt((a**3 + 3.0 * I_all) / _A_vec(a, b))


def _standardized_vec(a, b, t0):
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        Bv = _B_vec(a, b)
        s = Bv / SQRT3
        x = s * t0
        c = 1.0 / (2.0 * _A_vec(a, b))
        val = np.where(x <= a, s * c, np.where(x <= a + b, s * c * np.exp(a - x), 0.0))
        val = np.where(b == 0, np.where(t0 <= SQRT3, UNIFORM_PEAK_VALUE, 0.0), val)
    bad = (a == 0) & (b == 0)
    return np.where(bad, np.nan, val)


def _to_ab(v, u):
    """Compactified coordinates a = v/(1-v), b = u/(1-u); u = 1 is b = inf.

    The algebraic map keeps grid resolution at b ~ 5..50, where the
    truncated-exponential minimizers live.
    """
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = v / (1.0 - v)
        b = np.where(u >= 1.0, np.inf, u / (1.0 - np.minimum(u, 1.0)))
    return a, b


def _is_infinite_branch(u: float) -> bool:
    return u >= 1.0 - 1e-12


@dataclass
class FamilyMinimum:
    a: float
    b: float
    value: float
    grid_value: float
    t0: float
    kind: str
    attained: bool = True
    trace: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"t0": self.t0, "a": self.a, "b": self.b, "value": self.value,
                "grid_value": self.grid_value, "kind": self.kind, "attained": self.attained}


def classify(a: float, b: float, tol: float = 1e-6) -> str:
    if b <= tol:
        return "uniform"
    if a <= tol:
        return "exponential" if math.isinf(b) else "truncated-exponential"
    return "flat-exponential" if math.isinf(b) else "flat-truncated-exponential"


def _family_minimize(t0: float, grid: int = 201, a_max: float = A_MAX,
                     n_starts: int = 3) -> FamilyMinimum:
    v_max = a_max / (1.0 + a_max)
    vs = np.linspace(0.0, v_max, grid)
    us = np.linspace(0.0, 1.0, grid)
    V, U = np.meshgrid(vs, us, indexing="ij")
    a, b = _to_ab(V, U)
    vals = _standardized_vec(a, b, t0)
    # value 0 means sigma t0 falls outside the support; treat as infeasible
    vals = np.where((vals > 0) & np.isfinite(vals), vals, np.inf)
    order = np.argsort(vals, axis=None)
    i, j = np.unravel_index(int(order[0]), vals.shape)
    grid_best = float(vals[i, j])
    trace: list = []

    def objective(z):
        aa, bb = _to_ab(z[0], z[1])
        aa, bb = float(aa), float(bb)
        if aa == 0 and bb == 0:
            return math.inf
        val = standardized_value(aa, bb, t0)
        out = val if val > 0 else math.inf
        trace.append((float(z[0]), float(z[1]), out))
        return out

    best_v, best_u, best_val = float(vs[i]), float(us[j]), grid_best
    starts = [np.unravel_index(int(k), vals.shape) for k in order[:n_starts]
              if np.isfinite(vals.flat[int(k)])]
    for si, sj in starts:
        res = minimize(objective, np.array([vs[si], us[sj]]), method="Nelder-Mead",
                       bounds=[(0.0, v_max), (0.0, 1.0)],
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
        if not res.success and res.status != 2:
            raise ConvergenceError(f"Nelder-Mead failed at t0={t0}: {res.message}", trace)
        v, u = float(res.x[0]), float(res.x[1])
        if _is_infinite_branch(u):
            u = 1.0
        for cand_u in {u, float(res.x[1])}:
            val = objective(np.array([v, cand_u]))
            if val < best_val:
                best_v, best_u, best_val = v, cand_u, val
    # e^{-b} underflows long before b is numerically infinite; ties go to b = inf
    at_inf = objective(np.array([best_v, 1.0]))
    if at_inf <= best_val * (1.0 + 1e-13):
        best_u, best_val = 1.0, min(best_val, at_inf)
    a_star, b_star = (float(t) for t in _to_ab(best_v, best_u))
    return FamilyMinimum(a_star, b_star, best_val, grid_best, t0, classify(a_star, b_star),
                         attained=best_v < v_max - 1e-9, trace=trace)


def minimize_phi0(grid: int = 201, a_max: float = A_MAX) -> FamilyMinimum:
    """Global minimum of sigma f(sigma sqrt 3) over the family."""
    return _family_minimize(SQRT3, grid, a_max)


def min_density_at(t0: float, grid: int = 201, a_max: float = A_MAX) -> FamilyMinimum:
    """Infimum of sigma f(sigma t0) over the family for t0 in [0, sqrt 3].

    Every member of the family contains [-sigma sqrt3, sigma sqrt3] in its
    support, so for t0 in range the infimum is over strictly positive values.
    """
    if not 0.0 <= t0 <= SQRT3 + 1e-12:
        raise DomainError("t0 must lie in [0, sqrt 3]")
    return _family_minimize(min(t0, SQRT3), grid, a_max)


def min_density_curve(t0_grid, grid: int = 201) -> list[FamilyMinimum]:
    return [min_density_at(float(t), grid) for t in t0_grid]


def default_ab_grid(n: int = 100) -> tuple[np.ndarray, np.ndarray]:
    return np.geomspace(1e-4, 10.0, n), np.geomspace(1e-4, 20.0, n)


def verify_b_dominates_a(a_values=None, b_values=None) -> VerificationReport:
    """B >= A on the grid, plus B >= a, B >= 1 - e^{-b} and AB^2 - A^3 >= 0."""
    if a_values is None or b_values is None:
        a_values, b_values = default_ab_grid()
    rep = VerificationReport("b_dominates_a", config={"n_a": len(a_values), "n_b": len(b_values)})
    worst = {"B-A": math.inf, "B-a": math.inf, "B-(1-e^-b)": math.inf, "AB^2-A^3": math.inf}
    where = {}
    for a in a_values:
        for b in b_values:
            if a == 0 and b == 0:
                continue
            Av, Bv = A(a, b), B(a, b)
            for key, val in (("B-A", Bv - Av), ("B-a", Bv - a),
                             ("B-(1-e^-b)", Bv + math.expm1(-b) if not math.isinf(b) else Bv - 1.0),
                             ("AB^2-A^3", Av * Bv * Bv - Av**3)):
                if val < worst[key]:
                    worst[key], where[key] = val, (float(a), float(b))
    for key, val in worst.items():
        rep.add(f"min({key})", val, -1e-12, val >= -1e-12, argmin=where.get(key))
    return rep


def verify_h_monotone_in_b(a: float, b_grid=None) -> VerificationReport:
    """b -> h(a, b) is nonincreasing on the grid (tolerance 1e-10)."""
    if not a > 0:
        raise DomainError("the monotonicity check needs a > 0")
    if b_grid is None:
        b_grid = np.linspace(0.1, 20.0, 200)
    b_grid = np.asarray(b_grid, dtype=float)
    if np.any(np.diff(b_grid) <= 0):
        raise DomainError("b_grid must be increasing")
    hv = np.array([h(a, float(b)) for b in b_grid])
    inc = np.diff(hv)
    worst = float(inc.max()) if len(inc) else -math.inf
    rep = VerificationReport("h_monotone_in_b", config={"a": a, "b_min": float(b_grid[0]),
                                               "b_max": float(b_grid[-1]), "n": len(b_grid)})
    rep.add("max h(a,b_{i+1}) - h(a,b_i)", worst, 1e-10, worst <= 1e-10,
            argmax_b=float(b_grid[int(np.argmax(inc))]) if len(inc) else None)
    side = min(3 * (a + b) ** 2 - B(a, float(b)) ** 2 for b in b_grid)
    rep.add("min 3(a+b)^2 - B^2", side, 0.0, side >= -1e-12)
    rep.constants["h_first"] = float(hv[0])
    rep.constants["h_last"] = float(hv[-1])
    rep.constants["h_limit"] = h(a, math.inf)
    return rep


def verify_h_limit_nonnegative(a_grid=None) -> VerificationReport:
    """h(a, inf) >= 0, zero only at a = 0, and increasing in x = a + 1 > 1."""
    if a_grid is None:
        a_grid = np.concatenate([[0.0], np.geomspace(1e-4, 1e2, 100)])
    a_grid = np.sort(np.asarray(a_grid, dtype=float))
    if np.any(a_grid < 0):
        raise DomainError("a_grid must be nonnegative")
    hv = np.array([h(float(a), math.inf) for a in a_grid])
    rep = VerificationReport("h_limit_nonnegative", config={"n": len(a_grid), "a_max": float(a_grid[-1])})
    rep.add("min h(a,inf)", float(hv.min()), 0.0, hv.min() >= -1e-15)
    if a_grid[0] == 0.0:
        rep.add("h(0,inf)", float(hv[0]), 0.0, abs(hv[0]) <= 1e-15)
    pos = a_grid >= 1e-6
    if pos.any():
        rep.add("min h(a,inf) for a>=1e-6", float(hv[pos].min()), 0.0, hv[pos].min() > 0)
    diffs = np.diff(hv[a_grid > 0])
    if len(diffs):
        rep.add("min forward difference (x>1)", float(diffs.min()), 0.0, diffs.min() > 0)
    return rep


def effective_support_check(a: float, b: float) -> VerificationReport:
    """The support [-(a+b), a+b] must contain [-sigma sqrt3, sigma sqrt3].

    That is a + b >= B.  The weaker 3(a+b)^2 >= B^2 is recorded as well.
    """
    _check(a, b)
    if math.isinf(b):
        raise DomainError("effective support check needs finite b")
    Bv = B(a, b)
    rep = VerificationReport("effective_support", config={"a": a, "b": b})
    tol = 1e-12 * max(1.0, Bv)
    rep.add("(a+b) - sigma*sqrt3", a + b - Bv, 0.0, a + b - Bv >= -tol)
    rep.add("3(a+b)^2 - B^2", 3 * (a + b) ** 2 - Bv**2, 0.0, 3 * (a + b) ** 2 - Bv**2 >= -tol)
    return rep
