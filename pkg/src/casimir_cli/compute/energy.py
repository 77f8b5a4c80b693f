"""Casimir energies from per-frequency log-determinants.

Every geometry reduces to

    E = (1 / 2 pi) int_0^inf dkappa  log det(I - N(kappa))

where N is built from scattering amplitudes and translation blocks. This
module evaluates the determinant, the kappa quadrature with partial-wave
truncation control, the Matsubara sum at finite temperature and the
substitution for a uniform medium between the bodies.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import linalg

from ..config import thread_count
from ..errors import ConfigError, ConvergenceError, DeterminantError, NumericalOverflowError
from ..models.results import EnergyResult, ForceResult, QuadratureSpec, TruncationPolicy
from ..physics.materials import Medium
from ..physics.scattering import AmplitudeBlock
from ..physics.translation import TranslationBlock

logger = logging.getLogger(__name__)

REAL_RTOL = 1e-8
REAL_ATOL = 1e-13
# natural-log range of positive doubles
_LOG_TINY = -745.0
_LOG_HUGE = 709.0


class LogDet(NamedTuple):
    """log det value and the imaginary residue discarded from it."""

    value: float
    imag: float = 0.0


Integrand = Callable[[float, int], "float | LogDet"]


# ---------------------------------------------------------------------------
# Determinants
# ---------------------------------------------------------------------------


def _check_real(value: float, imag: float) -> LogDet:
    if not math.isfinite(value):
        raise DeterminantError(f"log det is not finite ({value})")
    if abs(imag) > REAL_RTOL * abs(value) + REAL_ATOL:
        raise DeterminantError(
            f"log det has imaginary part {imag:.3g} against real part {value:.3g}; "
            "bodies may overlap or the truncation is inconsistent"
        )
    return LogDet(value, imag)


def logdet(M: np.ndarray) -> LogDet:
    """log det(I - M) via a pivoted LU factorisation.

    The real part is the sum of log |u_ii|; the phase (including row swaps)
    must vanish to the realness tolerance.
    """
    M = np.asarray(M)
    if M.size == 0:
        return LogDet(0.0)
    if not np.all(np.isfinite(M)):
        raise DeterminantError("matrix entries are not finite")
    A = np.eye(M.shape[0], dtype=np.result_type(M, float)) - M
    lu, piv = linalg.lu_factor(A, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0):
        raise DeterminantError("I - N is singular")
    value = float(np.sum(np.log(np.abs(diag))))
    swaps = int(np.count_nonzero(piv != np.arange(len(piv))))
    phase = float(np.sum(np.angle(diag))) + math.pi * swaps
    phase = math.remainder(phase, 2.0 * math.pi)
    return _check_real(value, phase)


def continuum_logdet(m: np.ndarray, weights: np.ndarray | None = None) -> LogDet:
    """sum_i w_i log(1 - m_i) for a channel-diagonal N."""
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise DeterminantError("matrix entries are not finite")
    w = np.ones(m.shape) if weights is None else np.asarray(weights, dtype=float)
    logs = np.log((1.0 - m).astype(complex))
    if np.any(~np.isfinite(logs)):
        raise DeterminantError("I - N is singular")
    total = complex(math.fsum(np.real(w * logs)), math.fsum(np.imag(w * logs)))
    return _check_real(total.real, math.remainder(total.imag, 2.0 * math.pi))


def _channel_weights(block: AmplitudeBlock) -> np.ndarray | None:
    basis = block.basis
    if basis.weights is None:
        return None
    idx = np.array([ch[0] for ch in basis.channels])
    return np.asarray(basis.weights)[idx]


def _scaled_product(blocks) -> np.ndarray:
    """Product of the physical matrices of ``blocks``.

    The running product is renormalised after every factor and its scale is
    tracked as a logarithm, so large and small stored scales cancel before
    anything is exponentiated. A product below the smallest double is zero.
    """
    product = None
    log_scale = 0.0
    for block in blocks:
        stored = block.values if isinstance(block, AmplitudeBlock) else block.matrix
        factor = np.diag(stored) if np.ndim(stored) == 1 else np.asarray(stored)
        product = factor if product is None else product @ factor
        log_scale += block.log_scale
        peak = float(np.max(np.abs(product)))
        if peak == 0.0:
            return product
        if not math.isfinite(peak):
            raise NumericalOverflowError("translated amplitude product is not finite")
        product = product / peak
        log_scale += math.log(peak)
    if log_scale < _LOG_TINY:
        return np.zeros_like(product)
    if log_scale > _LOG_HUGE:
        raise NumericalOverflowError(f"translated amplitude product exceeds the float range (log {log_scale:.4g})")
    with np.errstate(under="ignore"):
        return product * math.exp(log_scale)


def logdet_two_body(
    F_a: AmplitudeBlock,
    X_ab: TranslationBlock,
    F_b: AmplitudeBlock,
    X_ba: TranslationBlock,
) -> LogDet:
    """log det(I - F_a X^ab F_b X^ba) for two bodies at one kappa.

    Dense products are renormalised factor by factor so that stored exponent
    scales never overflow on their own. Channel-diagonal plane-wave blocks
    whose basis carries quadrature weights are treated as a continuum.
    """
    blocks = (F_a, X_ab, F_b, X_ba)
    kappas = {b.kappa for b in blocks}
    if len(kappas) != 1:
        raise ValueError(f"blocks are evaluated at different kappa: {sorted(kappas)}")
    sizes = {len(b.basis) for b in blocks}
    if len(sizes) != 1:
        raise ValueError("blocks are not conformable")

    if all(b.is_diagonal for b in (F_a, F_b)) and X_ab.is_diagonal and X_ba.is_diagonal:
        log_scale = F_a.log_scale + X_ab.log_scale + F_b.log_scale + X_ba.log_scale
        if log_scale > _LOG_HUGE:
            raise NumericalOverflowError(f"amplitude scale exceeds the float range (log {log_scale:.4g})")
        scale = 0.0 if log_scale < _LOG_TINY else math.exp(log_scale)
        m = F_a.values * X_ab.matrix * F_b.values * X_ba.matrix * scale
        weights = _channel_weights(F_a)
        if weights is not None:
            return continuum_logdet(m, weights)
        return continuum_logdet(m)

    return logdet(_scaled_product(blocks))


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pipeline:
    """Per-frequency log-determinant of one geometry.

    ``factory(medium)`` returns the integrand ``(kappa, order) -> log det``
    whose kappa integral, divided by 2 pi, is the energy. ``polar`` is an
    optional equivalent integrand in p = sqrt(kappa^2 + k_z^2) that is used
    in vacuum. ``truncation`` is None for integrands without a partial-wave
    order.
    """

    name: str
    d_char: float
    factory: Callable[[Medium], Integrand]
    polar: Integrand | None = None
    truncation: TruncationPolicy | None = None
    per_unit: str = ""
    medium: Medium = field(default_factory=Medium)

    def __post_init__(self) -> None:
        if not self.d_char > 0:
            raise ValueError(f"{self.name}: characteristic distance must be positive")

    def integrand(self) -> Integrand:
        fn = self.factory(self.medium)

        def evaluate(kappa: float, order: int) -> LogDet:
            out = fn(kappa, order)
            return out if isinstance(out, LogDet) else LogDet(float(out))

        return evaluate

    def quadrature_integrand(self) -> Integrand:
        if self.polar is not None and self.medium.is_vacuum:
            polar = self.polar

            def evaluate(p: float, order: int) -> LogDet:
                out = polar(p, order)
                return out if isinstance(out, LogDet) else LogDet(float(out))

            return evaluate
        return self.integrand()


def apply_medium(pipeline: Pipeline, medium: Medium) -> Pipeline:
    """Place the bodies in a uniform medium.

    Translation blocks are then evaluated at n_m kappa and amplitudes see
    responses relative to the medium. A medium with mu_m != 1 also changes
    the amplitudes themselves, which the builders do not model.
    """
    if medium.is_vacuum and pipeline.medium.is_vacuum:
        return pipeline
    k_char = 1.0 / pipeline.d_char
    kappas = (1e-3 * k_char, k_char, 1e3 * k_char)
    for kappa in kappas:
        try:
            medium.index(kappa)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if any(abs(medium.mu(kappa) - 1.0) > 1e-12 for kappa in kappas):
        logger.warning("medium %s has mu != 1; amplitudes are not recomputed for it", medium.material)
    return dataclasses.replace(pipeline, medium=medium)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _unit_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def kappa_nodes(n: int, d_char: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes kappa = u / (1 - u) / d_char and weights including the Jacobian."""
    u, w = _unit_nodes(n)
    kappa = u / (1.0 - u) / d_char
    return kappa, w / (1.0 - u) ** 2 / d_char


def _evaluate(fn: Integrand, points: Sequence[float], order: int, threads: int) -> list[LogDet]:
    if threads <= 1 or len(points) == 1:
        return [fn(float(p), order) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: fn(float(p), order), points))


def sample_integrand(
    pipeline: Pipeline,
    kappas: Sequence[float],
    order: int | None = None,
    threads: int | None = None,
) -> list[LogDet]:
    """Per-frequency log det at the given kappa, in the given order."""
    if order is None:
        order = pipeline.truncation.initial if pipeline.truncation else 0
    return _evaluate(pipeline.integrand(), kappas, order, thread_count(threads))


@dataclass
class _Level:
    value: float
    nodes: int
    max_imag: float


def _integrate(fn: Integrand, pipeline: Pipeline, n: int, order: int, threads: int) -> _Level:
    kappa, w = kappa_nodes(n, pipeline.d_char)
    values = _evaluate(fn, kappa, order, threads)
    total = math.fsum(wi * v.value for wi, v in zip(w, values)) / (2.0 * math.pi)
    max_imag = max((abs(v.imag) for v in values), default=0.0)
    return _Level(total, n, max_imag)


def _close(a: float, b: float, rtol: float, atol: float) -> bool:
    return abs(a - b) <= rtol * abs(b) + atol


def integrate_energy(
    pipeline: Pipeline,
    quadrature: QuadratureSpec | None = None,
    truncation: TruncationPolicy | None = None,
    *,
    strict: bool = False,
    threads: int | None = None,
) -> EnergyResult:
    """E = (1 / 2 pi) int dkappa log det(kappa) with nested convergence control.

    The node count doubles until two levels agree, then the truncation order
    steps until the energy changes by less than the policy tolerance, and a
    final doubling at the converged order gives the reported value and its
    quadrature error.
    """
    quadrature = quadrature or QuadratureSpec()
    policy = truncation or pipeline.truncation
    workers = thread_count(threads)
    fn = pipeline.quadrature_integrand()
    order = policy.initial if policy else 0
    converged = True
    max_imag = 0.0

    def level(n: int, at_order: int) -> _Level:
        nonlocal max_imag
        out = _integrate(fn, pipeline, n, at_order, workers)
        max_imag = max(max_imag, out.max_imag)
        logger.debug("%s: order=%d nodes=%d E=%.12g", pipeline.name, at_order, n, out.value)
        return out

    current = level(quadrature.nodes(0), order)
    for k in range(1, quadrature.max_levels + 1):
        finer = level(quadrature.nodes(k), order)
        done = _close(current.value, finer.value, quadrature.rtol, quadrature.atol)
        current = finer
        if done:
            break
    else:
        converged = False
        logger.warning("%s: quadrature did not converge in %d levels", pipeline.name, quadrature.max_levels)
    n = current.nodes

    trunc_err = 0.0
    if policy is not None:
        while True:
            if order + policy.increment > policy.cap:
                converged = False
                logger.warning("%s: truncation cap %d reached", pipeline.name, policy.cap)
                break
            stepped = level(n, order + policy.increment)
            trunc_err = abs(stepped.value - current.value)
            order += policy.increment
            current = stepped
            if trunc_err <= policy.rtol * abs(stepped.value) + quadrature.atol:
                break

    final = level(2 * n, order)
    quad_err = abs(final.value - current.value)
    result = EnergyResult(
        value=final.value,
        quad_err=quad_err,
        trunc_err=trunc_err,
        order=order,
        nodes=final.nodes,
        max_imag=max_imag,
        converged=converged,
        per_unit=pipeline.per_unit,
        diagnostics={"pipeline": pipeline.name, "medium": str(pipeline.medium.material)},
    )
    if strict and not converged:
        raise ConvergenceError(f"{pipeline.name}: energy did not converge within caps", result)
    return result


# ---------------------------------------------------------------------------
# Finite temperature
# ---------------------------------------------------------------------------


def _matsubara_sum(
    fn: Integrand,
    pipeline: Pipeline,
    beta: float,
    order: int,
    rtol: float,
    batch: int,
    max_terms: int,
    threads: int,
) -> tuple[float, float, int, float, bool]:
    kappa0 = 1e-6 / pipeline.d_char
    zero = fn(kappa0, order)
    if not math.isfinite(zero.value):
        raise DeterminantError("zero-frequency term is not finite")
    terms = [0.5 * zero.value]
    max_imag = abs(zero.imag)
    n = 1
    while True:
        kappas = [2.0 * math.pi * k / beta for k in range(n, n + batch)]
        values = _evaluate(fn, kappas, order, threads)
        terms.extend(v.value for v in values)
        max_imag = max([max_imag, *(abs(v.imag) for v in values)])
        n += batch
        total = math.fsum(terms) / beta
        tail = abs(values[-1].value) / beta
        if tail <= rtol * abs(total) or all(v.value == 0.0 for v in values):
            return total, tail, n - 1, max_imag, True
        if n > max_terms:
            logger.warning("Matsubara sum stopped after %d terms", max_terms)
            return total, tail, n - 1, max_imag, False


def matsubara_free_energy(
    pipeline: Pipeline,
    beta: float,
    truncation: TruncationPolicy | None = None,
    *,
    rtol: float = 1e-7,
    batch: int = 32,
    max_terms: int = 200_000,
    strict: bool = False,
    threads: int | None = None,
) -> EnergyResult:
    """F = (1 / beta) [1/2 log det(kappa_0) + sum_{n >= 1} log det(2 pi n / beta)].

    ``beta`` is hbar c / kT in length units. The zero mode is evaluated at
    kappa_0 = 1e-6 / d_char.
    """
    if not beta > 0:
        raise ConfigError("beta must be positive")
    policy = truncation or pipeline.truncation
    workers = thread_count(threads)
    fn = pipeline.integrand()
    order = policy.initial if policy else 0

    total, tail, terms, max_imag, converged = _matsubara_sum(
        fn, pipeline, beta, order, rtol, batch, max_terms, workers
    )
    trunc_err = 0.0
    if policy is not None:
        while True:
            if order + policy.increment > policy.cap:
                converged = False
                logger.warning("%s: truncation cap %d reached", pipeline.name, policy.cap)
                break
            order += policy.increment
            stepped, tail, terms, imag, ok = _matsubara_sum(
                fn, pipeline, beta, order, rtol, batch, max_terms, workers
            )
            trunc_err = abs(stepped - total)
            total, converged, max_imag = stepped, converged and ok, max(max_imag, imag)
            if trunc_err <= policy.rtol * abs(total):
                break

    result = EnergyResult(
        value=total,
        quad_err=tail,
        trunc_err=trunc_err,
        order=order,
        nodes=terms,
        max_imag=max_imag,
        converged=converged,
        per_unit=pipeline.per_unit,
        diagnostics={"pipeline": pipeline.name, "beta": beta},
    )
    if strict and not converged:
        raise ConvergenceError(f"{pipeline.name}: Matsubara sum did not converge", result)
    return result


# ---------------------------------------------------------------------------
# Forces
# ---------------------------------------------------------------------------


def _energy_value(out) -> float:
    return float(out.value if isinstance(out, EnergyResult) else out)


def force_by_difference(energy: Callable[[float], "float | EnergyResult"], d: float, h: float) -> ForceResult:
    """Force -dE/dd by central differences at steps h and h/2.

    The Richardson combination (4 F_{h/2} - F_h) / 3 is reported, with the
    difference between the two steps as its error estimate.
    """
    if not h > 0:
        raise ConfigError("difference step must be positive")
    if d - h <= 0:
        raise ConfigError(f"step h = {h:g} is too large for d = {d:g}")

    def central(step: float) -> float:
        return -(_energy_value(energy(d + step)) - _energy_value(energy(d - step))) / (2.0 * step)

    coarse, fine = central(h), central(0.5 * h)
    return ForceResult(value=(4.0 * fine - coarse) / 3.0, error=abs(fine - coarse) / 3.0, step=h)
