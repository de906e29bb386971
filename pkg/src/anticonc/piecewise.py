"""Exact piecewise-polynomial densities on the line.

Each piece is stored in its local variable ``z = x - left_breakpoint`` with
ascending-power coefficients, which keeps the arithmetic well conditioned for
the small supports arising from sums of scaled uniforms.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad

log = logging.getLogger(__name__)

MERGE_TOL = 1e-14
MAX_PIECES = 1 << 15


def _shift_rows(coefs: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Row-wise Taylor shift: row i of the result holds q_i(z) = p_i(z + delta_i)."""
    m, k = coefs.shape
    out = np.zeros((m, k))
    # Horner in polynomial arithmetic: p(z+d) = c0 + (z+d)(c1 + (z+d)(c2 + ...))
    for col in range(k - 1, -1, -1):
        nxt = delta[:, None] * out
        nxt[:, 1:] += out[:, :-1]
        nxt[:, 0] += coefs[:, col]
        out = nxt
    return out


def _merge(points: np.ndarray) -> np.ndarray:
    points = np.sort(points)
    gaps = np.diff(points)
    close = gaps < MERGE_TOL
    if close.any():
        n_real = int(np.count_nonzero(close & (gaps > 0)))
        if n_real:
            log.debug("merged %d breakpoint pairs closer than %g", n_real, MERGE_TOL)
        # keep the first point of every run of near-duplicates
        points = points[np.concatenate([[True], ~close])]
    return points


def _polyint_rows(C: np.ndarray) -> np.ndarray:
    k = C.shape[1]
    out = np.zeros((C.shape[0], k + 1))
    out[:, 1:] = C / np.arange(1, k + 1)
    return out


def _polyval_rows(C: np.ndarray, z: np.ndarray) -> np.ndarray:
    val = np.zeros(C.shape[0])
    for col in range(C.shape[1] - 1, -1, -1):
        val = val * z + C[:, col]
    return val


class PiecewisePolynomial:
    """Function equal to ``coefs[i](x - breakpoints[i])`` on
    ``[breakpoints[i], breakpoints[i+1]]`` and zero outside the support.

    Instances are immutable; every operation returns a new object.
    """

    __slots__ = ("breakpoints", "coefs")

    def __init__(self, breakpoints, pieces) -> None:
        bp = np.array(breakpoints, dtype=float)
        if bp.ndim != 1 or len(bp) < 2:
            raise ValueError("need at least two breakpoints")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if isinstance(pieces, np.ndarray) and pieces.ndim == 2:
            C = np.array(pieces, dtype=float)
        else:
            rows = [np.atleast_1d(np.asarray(c, dtype=float)) for c in pieces]
            k = max(len(r) for r in rows)
            C = np.array([np.pad(r, (0, k - len(r))) for r in rows])
        if C.shape[0] != len(bp) - 1:
            raise ValueError("one coefficient array per interval is required")
        bp.setflags(write=False)
        C.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coefs", C)

    def __setattr__(self, name, value):
        raise AttributeError("PiecewisePolynomial is immutable")

    def __repr__(self) -> str:
        lo, hi = self.support
        return (f"PiecewisePolynomial(support=[{lo:.6g}, {hi:.6g}], "
                f"pieces={len(self.coefs)}, degree={self.degree})")

    @classmethod
    def constant(cls, left: float, right: float, value: float) -> "PiecewisePolynomial":
        return cls([left, right], np.array([[value]]))

    @property
    def pieces(self) -> tuple[np.ndarray, ...]:
        return tuple(self.coefs)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def degree(self) -> int:
        return self.coefs.shape[1] - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewisePolynomial):
            return NotImplemented
        return (np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.coefs, other.coefs))

    def __hash__(self) -> int:
        return hash((self.breakpoints.tobytes(), self.coefs.tobytes()))

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xs).ravel()
        out = np.zeros_like(flat)
        lo, hi = self.support
        inside = (flat >= lo) & (flat <= hi)
        if inside.any():
            xi = flat[inside]
            idx = np.clip(np.searchsorted(self.breakpoints, xi, side="right") - 1,
                          0, len(self.coefs) - 1)
            out[inside] = _polyval_rows(self.coefs[idx], xi - self.breakpoints[idx])
        out = out.reshape(np.shape(xs))
        return float(out) if out.ndim == 0 else out

    def _piece_integrals(self) -> np.ndarray:
        return _polyval_rows(_polyint_rows(self.coefs), np.diff(self.breakpoints))

    def antiderivative(self) -> "PiecewisePolynomial":
        """F(x) = integral of f from the left end of the support to x."""
        ic = _polyint_rows(self.coefs)
        acc = np.cumsum(self._piece_integrals())
        ic[:, 0] = np.concatenate([[0.0], acc[:-1]])
        return PiecewisePolynomial(self.breakpoints, ic)

    def integral(self) -> float:
        return float(self._piece_integrals().sum())

    def cdf(self, x):
        """Integral from -inf to x."""
        F = self.antiderivative()
        xs = np.asarray(x, dtype=float)
        val = np.where(xs > self.support[1], self.integral(), F(xs))
        return float(val) if np.ndim(val) == 0 else val

    def moment(self, k: int) -> float:
        total = 0.0
        for c, b, w in zip(self.coefs, self.breakpoints[:-1], np.diff(self.breakpoints)):
            total += float(P.polyval(w, P.polyint(P.polymul(c, P.polypow([b, 1.0], k)))))
        return total

    def convolve_uniform(self, half_width: float) -> "PiecewisePolynomial":
        """Density of X + W with W uniform on [-half_width, half_width].

        Uses g(x) = (F(x + w) - F(x - w)) / (2w) with F the antiderivative,
        so every new piece is an exact polynomial combination of old ones.
        """
        w = float(half_width)
        if not w > 0:
            raise ValueError("half_width must be positive")
        F = self.antiderivative()
        total = self.integral()
        bp = self.breakpoints
        new_bp = _merge(np.concatenate([bp - w, bp + w]))
        if len(new_bp) - 1 > MAX_PIECES:
            raise OverflowError(
                f"convolution would need {len(new_bp) - 1} pieces (limit {MAX_PIECES})")
        FC = F.coefs
        left = new_bp[:-1]
        mid = 0.5 * (new_bp[:-1] + new_bp[1:])

        def shifted(offset: float) -> np.ndarray:
            # F(x + offset) on each new interval, in local z = x - left
            y = mid + offset
            j = np.clip(np.searchsorted(bp, y, side="right") - 1, 0, len(FC) - 1)
            out = _shift_rows(FC[j], left + offset - bp[j])
            out[y < bp[0]] = 0.0
            above = y > bp[-1]
            out[above] = 0.0
            out[above, 0] = total
            return out

        return PiecewisePolynomial(new_bp, (shifted(w) - shifted(-w)) / (2.0 * w))

    def shift(self, by: float) -> "PiecewisePolynomial":
        """Translate: returns x -> f(x - by)."""
        return PiecewisePolynomial(self.breakpoints + by, self.coefs)

    def scale_values(self, factor: float) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.breakpoints, self.coefs * factor)

    def dilate(self, factor: float) -> "PiecewisePolynomial":
        """Density of factor * X for factor > 0."""
        if not factor > 0:
            raise ValueError("dilation factor must be positive")
        k = self.coefs.shape[1]
        return PiecewisePolynomial(self.breakpoints * factor,
                                   self.coefs * factor ** -(np.arange(k) + 1.0))

    def max_value(self) -> tuple[float, float]:
        """Return ``(max f, argmax)`` over the support."""
        best_val, best_x = -math.inf, float(self.breakpoints[0])
        for c, b, w in zip(self.coefs, self.breakpoints[:-1], np.diff(self.breakpoints)):
            cand = [0.0, float(w)]
            dc = np.trim_zeros(P.polyder(c), "b")
            if len(dc) > 1:
                cand += [r.real for r in P.polyroots(dc)
                         if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) and 0.0 < r.real < w]
            vals = P.polyval(np.array(cand), c)
            i = int(np.argmax(vals))
            if vals[i] > best_val:
                best_val, best_x = float(vals[i]), float(b + cand[i])
        return best_val, best_x

    def power_integral(self, p: float) -> float:
        """Integral of f^p; exact for integer p, adaptive quadrature otherwise."""
        if p <= 0:
            raise ValueError("p must be positive")
        widths = np.diff(self.breakpoints)
        if float(p).is_integer():
            return float(sum(P.polyval(w, P.polyint(P.polypow(c, int(p))))
                             for c, w in zip(self.coefs, widths)))
        total = 0.0
        for c, w in zip(self.coefs, widths):
            val, _ = quad(lambda z: max(float(P.polyval(z, c)), 0.0) ** p, 0.0, float(w),
                          epsabs=1e-14, epsrel=1e-12, limit=200)
            total += val
        return total

    def to_dict(self) -> dict:
        return {"breakpoints": self.breakpoints.tolist(), "pieces": self.coefs.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "PiecewisePolynomial":
        return cls(data["breakpoints"], data["pieces"])


def uniform_sum_density(half_widths: Sequence[float]) -> PiecewisePolynomial:
    """Density of sum_j W_j with W_j uniform on [-w_j, w_j], by iterated exact
    convolution.  Zero widths are dropped and the rest sorted, so the result
    does not depend on the order or signs of the input, bit for bit."""
    w = np.sort(np.abs(np.asarray(half_widths, dtype=float)))
    w = w[w > 0]
    if len(w) == 0:
        raise ValueError("at least one nonzero half-width is required")
    f = PiecewisePolynomial.constant(-w[0], w[0], 1.0 / (2.0 * w[0]))
    for wj in w[1:]:
        f = f.convolve_uniform(wj)
    return f
