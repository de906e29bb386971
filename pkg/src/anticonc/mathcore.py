"""Seeded sampling on spheres and balls, special functions and the Monte Carlo
reduction used by every other module.

Randomness flows through :class:`RngStream`, a (seed, stream_id) pair backed by
numpy's counter-based Philox generator.  Calling :meth:`RngStream.generator`
always returns a fresh generator in the same initial state, so any function
that takes an ``RngStream`` is a pure function of its arguments.  Independent
randomness is obtained with :meth:`RngStream.substream`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.special import gammaln

DEFAULT_CHUNK = 1 << 16


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream identified by ``(seed, stream_id)``.

    Substreams extend the key path; Philox keys derived through
    ``SeedSequence.spawn_key`` are independent for distinct paths.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream_id < 0:
            raise DomainError(f"stream_id must be nonnegative, got {self.stream_id}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(self.stream_id, *self.path))
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, index: int) -> "RngStream":
        if index < 0:
            raise DomainError("substream index must be nonnegative")
        return RngStream(self.seed, self.stream_id, (*self.path, int(index)))


RngLike = Union[RngStream, np.random.Generator]


def _gen(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error (unbiased variance / n)."""

    mean: float
    stderr: float
    n_samples: int

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "n_samples": self.n_samples}

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.mean - target) <= k * self.stderr


def _check_dim(d: int) -> int:
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d}")
    return int(d)


def log_unit_ball_volume(d: int) -> float:
    d = _check_dim(d)
    return 0.5 * d * math.log(math.pi) - float(gammaln(0.5 * d + 1.0))


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1).

    Evaluated through log-Gamma so large ``d`` underflows gracefully instead
    of producing ``inf / inf``.
    """
    return math.exp(log_unit_ball_volume(d))


def sample_sphere(d: int, rng: RngLike, size: int | None = None) -> np.ndarray:
    """Uniform points on the unit sphere S^{d-1} in R^d (normalized Gaussians)."""
    d = _check_dim(d)
    g = _gen(rng)
    shape = (1 if size is None else size, d)
    z = g.standard_normal(shape)
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    # norm is zero with probability 0; redraw defensively so output is finite
    bad = norms[:, 0] == 0.0
    while bad.any():
        z[bad] = g.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(z, axis=1, keepdims=True)
        bad = norms[:, 0] == 0.0
    x = z / norms
    return x[0] if size is None else x


def sample_ball_gaussian(d: int, rng: RngLike, size: int | None = None) -> np.ndarray:
    """Uniform points in the closed unit ball: Gaussian direction times U^(1/d)."""
    d = _check_dim(d)
    g = _gen(rng)
    n = 1 if size is None else size
    direction = sample_sphere(d, g, n)
    radius = g.random(n) ** (1.0 / d)
    x = direction * radius[:, None]
    return x[0] if size is None else x


def sample_ball_archimedes(d: int, rng: RngLike, size: int | None = None) -> np.ndarray:
    """Uniform points in the unit ball as the first ``d`` coordinates of a
    uniform point on S^{d+1} in R^{d+2}."""
    d = _check_dim(d)
    n = 1 if size is None else size
    x = sample_sphere(d + 2, rng, n)[:, :d]
    return x[0] if size is None else x


def psi(x):
    """x - 1 - log x for x > 0; accepts scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("psi is defined for x > 0 only")
    out = arr - 1.0 - np.log(arr)
    return float(out) if out.ndim == 0 else out


Sampler = Callable[[int, np.random.Generator], np.ndarray]
Integrand = Callable[[np.ndarray], np.ndarray]


def _chunk_moments(values: np.ndarray, offset: int) -> tuple[int, np.ndarray, np.ndarray]:
    if values.ndim == 1:
        values = values[:, None]
    finite = np.isfinite(values)
    if not finite.all():
        row = int(np.argwhere(~finite)[0, 0])
        raise FloatingPointError(f"non-finite integrand value at sample index {offset + row}")
    m = values.shape[0]
    mean = values.mean(axis=0)
    m2 = ((values - mean) ** 2).sum(axis=0)
    return m, mean, m2


def _combine(parts: Sequence[tuple[int, np.ndarray, np.ndarray]]):
    # Chan et al. pairwise update, applied left to right in chunk order
    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * (nb / tot)
        m2 = m2 + m2b + delta**2 * (n * nb / tot)
        n = tot
    return n, mean, m2


def mc_mean_many(
    integrand: Integrand,
    sampler: Sampler,
    n: int,
    rng: RngStream,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int = 1,
) -> list[McEstimate]:
    """Like :func:`mc_mean` but for an integrand returning ``(size, k)`` values.

    Chunk ``i`` draws from ``rng.substream(i)``; partial moments are combined
    in chunk order, so the result does not depend on ``threads``.
    """
    if n < 2:
        raise DomainError("mc_mean needs at least two samples")
    starts = list(range(0, n, chunk_size))

    def work(i: int):
        start = starts[i]
        size = min(chunk_size, n - start)
        g = rng.substream(i).generator()
        pts = sampler(size, g)
        return _chunk_moments(np.asarray(integrand(pts), dtype=float), start)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(len(starts))))
    else:
        parts = [work(i) for i in range(len(starts))]
    total, mean, m2 = _combine(parts)
    std = np.sqrt(m2 / (total - 1))
    se = std / math.sqrt(total)
    return [McEstimate(float(mu), float(s), total) for mu, s in zip(mean, se)]


def mc_mean(
    integrand: Integrand,
    sampler: Sampler,
    n: int,
    rng: RngStream,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int = 1,
) -> McEstimate:
    """Plain Monte Carlo average of ``integrand`` over ``n`` sampler draws.

    ``sampler(size, generator)`` returns an array of ``size`` points and
    ``integrand`` maps that array to ``size`` reals.  A non-finite integrand
    value raises ``FloatingPointError`` naming the global sample index.
    """
    return mc_mean_many(integrand, sampler, n, rng, chunk_size, threads)[0]


def draw(sampler: Sampler, n: int, rng: RngStream, chunk_size: int = DEFAULT_CHUNK,
         threads: int = 1) -> np.ndarray:
    """Materialize ``n`` draws with the same chunk/substream layout as mc_mean."""
    starts = list(range(0, n, chunk_size))

    def work(i: int) -> np.ndarray:
        return sampler(min(chunk_size, n - starts[i]), rng.substream(i).generator())

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(work, range(len(starts))))
    else:
        out = [work(i) for i in range(len(starts))]
    return np.concatenate(out, axis=0)


def estimate_from_values(values: np.ndarray) -> McEstimate:
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < 2:
        raise DomainError("need at least two values")
    return McEstimate(float(values.mean()), float(values.std(ddof=1) / math.sqrt(n)), n)
