"""Sampling of Ginibre-product spectra and their empirical statistics.

Entry convention: every factor has i.i.d. mean-zero Gaussian entries with
variance 1/n (standard deviation n^(-1/2)). In the complex case the real
and imaginary parts are independent with variance 1/(2n) each. This is
the normalisation under which the first spectral moment is exactly 1 and
the moments converge to Fuss-Catalan numbers.

Exact finite-n moments computed by the moment engine match the *complex*
ensemble; the real ensemble deviates at order 1/n (its second moment at
m = 1 is 2 + 1/n rather than 2) but has the same n -> infinity limits,
so edge-convergence experiments run on either field.

Reproducibility contract: replicate r of a run draws from
``numpy.random.default_rng(SeedSequence(master_seed, spawn_key=(n, m,
field, r)))``. Results are therefore a pure function of (spec, config)
and in particular independent of how replicates are scheduled across
workers. Bit-exactness is promised for repeated runs of this package on
one platform, not across unrelated implementations of the same contract.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .edge_analysis import edge_constant

__all__ = [
    "GinibreSpec",
    "RunConfig",
    "SampleResult",
    "EmpiricalMoments",
    "EdgeEstimate",
    "ConvergenceRow",
    "replicate_rng",
    "draw_factors",
    "sample_product",
    "power_largest_sq_singular_value",
    "collect_spectra",
    "moments_from_spectra",
    "edge_from_values",
    "empirical_moments",
    "estimate_edge",
    "convergence_table",
    "default_workers",
]

WORKERS_ENV_VAR = "GINPROD_WORKERS"

#: Relative tolerance for the sum-of-squares vs Frobenius-norm consistency
#: check applied to every sample.
SVD_CONSISTENCY_RTOL = 1e-8

_FIELD_CODES = {"real": 0, "complex": 1}


def default_workers() -> int:
    """Worker count from the environment (GINPROD_WORKERS), default 1."""
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None:
        return 1
    workers = int(raw)
    if workers < 1:
        raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {workers}")
    return workers


@dataclass(frozen=True)
class GinibreSpec:
    """Matrix size n, number of factors m, and the entry field."""

    n: int
    m: int
    field: str = "real"

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError(f"n and m must be >= 1, got n = {self.n}, m = {self.m}")
        if self.field not in _FIELD_CODES:
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")


@dataclass(frozen=True)
class RunConfig:
    """Replicate count, master seed, and a worker-count hint.

    The worker count never influences results, only scheduling.
    """

    replicates: int
    master_seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass
class SampleResult:
    """Squared singular values of one sampled product, sorted descending."""

    squared_singular_values: np.ndarray
    frobenius_sq: float

    @property
    def s1_sq(self) -> float:
        return float(self.squared_singular_values[0])


@dataclass
class EmpiricalMoments:
    """Replicate-averaged spectral moments (1/n) sum_i s_i^(2k), k = 1 .. k_max."""

    spec: GinibreSpec
    replicates: int
    means: np.ndarray
    standard_errors: np.ndarray
    per_replicate: np.ndarray  # shape (replicates, k_max), row r = replicate r

    def mean(self, k: int) -> float:
        return float(self.means[k - 1])

    def standard_error(self, k: int) -> float:
        return float(self.standard_errors[k - 1])


@dataclass
class EdgeEstimate:
    """Summary statistics of the largest squared singular value."""

    spec: GinibreSpec
    replicates: int
    mean_s1sq: float
    q05: float
    q50: float
    q95: float
    standard_error: float
    values: np.ndarray  # per-replicate s_1^2, indexed by replicate


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    mean_s1sq: float
    gap: float  # u_m - mean
    standard_error: float
    replicates: int


def replicate_rng(spec: GinibreSpec, master_seed: int, replicate: int) -> np.random.Generator:
    """Deterministic per-replicate generator.

    The seed material mixes (master_seed, n, m, field, replicate) through
    numpy's SeedSequence, so any replicate can be (re)drawn in isolation
    and scheduling order cannot leak into the results.
    """
    ss = np.random.SeedSequence(
        entropy=master_seed,
        spawn_key=(spec.n, spec.m, _FIELD_CODES[spec.field], replicate),
    )
    return np.random.default_rng(ss)


def draw_factors(spec: GinibreSpec, rng: np.random.Generator) -> list[np.ndarray]:
    """Draw the m independent n x n factors with the stated entry law."""
    n = spec.n
    factors = []
    for _ in range(spec.m):
        if spec.field == "real":
            w = rng.standard_normal((n, n)) / np.sqrt(n)
        else:
            w = (
                rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            ) / np.sqrt(2 * n)
        factors.append(w)
    return factors


def _as_rng(replicate_seed) -> np.random.Generator:
    if isinstance(replicate_seed, np.random.Generator):
        return replicate_seed
    return np.random.default_rng(replicate_seed)


def sample_product(spec: GinibreSpec, replicate_seed) -> SampleResult:
    """Draw one product W_1 ... W_m and return all squared singular values.

    ``replicate_seed`` is a numpy Generator or anything default_rng
    accepts. Linear-algebra failures raise; a non-finite spectrum raises
    rather than propagating NaN.
    """
    rng = _as_rng(replicate_seed)
    factors = draw_factors(spec, rng)
    product = factors[0]
    for w in factors[1:]:
        product = product @ w
    try:
        singular = np.linalg.svd(product, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"SVD failed for spec {spec}: {exc}") from exc
    squared = singular**2
    frob = float(np.sum(np.abs(product) ** 2))
    if not np.all(np.isfinite(squared)):
        raise ArithmeticError(f"non-finite singular values for spec {spec}")
    if abs(float(np.sum(squared)) - frob) > SVD_CONSISTENCY_RTOL * frob:
        raise ArithmeticError(
            f"SVD inconsistent with Frobenius norm for spec {spec}: "
            f"sum s_i^2 = {np.sum(squared)!r}, ||W||_F^2 = {frob!r}"
        )
    return SampleResult(squared_singular_values=squared, frobenius_sq=frob)


def power_largest_sq_singular_value(
    product: np.ndarray,
    rng: np.random.Generator,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> float:
    """Largest squared singular value by power iteration on W* W.

    Iterates v -> W* W v from a random start vector until the Rayleigh
    quotient ||W v||^2 (for unit v) moves by less than ``tol`` in relative
    terms. Raises if the iteration cap is hit first. Only the top value is
    produced; intended for sizes where a full decomposition is wasteful.
    """
    n = product.shape[0]
    if product.dtype.kind == "c":
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    rayleigh = 0.0
    for _ in range(max_iter):
        u = product @ v
        new_rayleigh = float(np.real(np.vdot(u, u)))
        w = product.conj().T @ u
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        if abs(new_rayleigh - rayleigh) <= tol * max(new_rayleigh, 1e-300):
            return new_rayleigh
        rayleigh = new_rayleigh
    raise ArithmeticError(
        f"power iteration did not converge within {max_iter} iterations"
    )


def _map_replicates(
    spec: GinibreSpec, config: RunConfig, fn: Callable[[np.random.Generator], np.ndarray]
) -> list[np.ndarray]:
    """Run fn once per replicate, each on its own generator, ordered by index.

    Worker threads only affect scheduling: the result list is indexed by
    replicate, and every replicate's generator is derived independently.
    """

    def run_one(r: int) -> np.ndarray:
        return fn(replicate_rng(spec, config.master_seed, r))

    indices = range(config.replicates)
    if config.workers == 1:
        return [run_one(r) for r in indices]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(run_one, indices))


def collect_spectra(spec: GinibreSpec, config: RunConfig) -> np.ndarray:
    """All squared singular values for every replicate, shape (replicates, n).

    Row r holds replicate r's spectrum in descending order, so a single
    collection feeds both the moment and edge summaries without redrawing.
    """

    def one(rng: np.random.Generator) -> np.ndarray:
        return sample_product(spec, rng).squared_singular_values

    return np.vstack(_map_replicates(spec, config, one))


def moments_from_spectra(spec: GinibreSpec, spectra: np.ndarray, k_max: int) -> EmpiricalMoments:
    """Summarise an already-collected spectrum matrix into moments."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    replicates = spectra.shape[0]
    per_replicate = np.empty((replicates, k_max))
    powers = spectra.copy()
    for k in range(k_max):
        per_replicate[:, k] = powers.mean(axis=1)
        powers *= spectra
    means = per_replicate.mean(axis=0)
    if replicates > 1:
        ses = per_replicate.std(axis=0, ddof=1) / np.sqrt(replicates)
    else:
        ses = np.zeros(k_max)
    return EmpiricalMoments(
        spec=spec,
        replicates=replicates,
        means=means,
        standard_errors=ses,
        per_replicate=per_replicate,
    )


def edge_from_values(spec: GinibreSpec, values: np.ndarray) -> EdgeEstimate:
    """Summarise per-replicate largest squared singular values."""
    replicates = values.shape[0]
    q05, q50, q95 = np.quantile(values, [0.05, 0.5, 0.95])
    if replicates > 1:
        se = float(values.std(ddof=1) / np.sqrt(replicates))
    else:
        se = 0.0
    return EdgeEstimate(
        spec=spec,
        replicates=replicates,
        mean_s1sq=float(values.mean()),
        q05=float(q05),
        q50=float(q50),
        q95=float(q95),
        standard_error=se,
        values=values,
    )


def empirical_moments(spec: GinibreSpec, config: RunConfig, k_max: int) -> EmpiricalMoments:
    """Replicate-averaged moments (1/n) sum_i s_i^(2k) for k = 1 .. k_max."""
    return moments_from_spectra(spec, collect_spectra(spec, config), k_max)


def estimate_edge(spec: GinibreSpec, config: RunConfig, method: str = "dense") -> EdgeEstimate:
    """Summary statistics of s_1^2 over replicates.

    ``method`` is "dense" (full SVD of the product) or "power" (top value
    only, by power iteration started from the replicate's own stream).
    """
    if method == "dense":
        values = collect_spectra(spec, config)[:, 0]
    elif method == "power":

        def one(rng: np.random.Generator) -> np.ndarray:
            factors = draw_factors(spec, rng)
            product = factors[0]
            for w in factors[1:]:
                product = product @ w
            return np.array([power_largest_sq_singular_value(product, rng)])

        values = np.concatenate(_map_replicates(spec, config, one))
    else:
        raise ValueError(f"method must be 'dense' or 'power', got {method!r}")
    return edge_from_values(spec, values)


def convergence_table(
    m: int,
    n_grid: Sequence[int],
    config: RunConfig,
    field: str = "real",
) -> list[ConvergenceRow]:
    """Edge estimates along an ascending n-grid, with gaps to u_m.

    The gap u_m - mean(s_1^2) should shrink along a doubling grid up to
    statistical noise; this function only reports, trend assertions live
    with the caller.
    """
    n_grid = list(n_grid)
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError(f"n_grid must be strictly ascending, got {n_grid}")
    u = float(edge_constant(m).u)
    rows = []
    for n in n_grid:
        est = estimate_edge(GinibreSpec(n=n, m=m, field=field), config)
        rows.append(
            ConvergenceRow(
                n=n,
                mean_s1sq=est.mean_s1sq,
                gap=u - est.mean_s1sq,
                standard_error=est.standard_error,
                replicates=config.replicates,
            )
        )
    return rows
