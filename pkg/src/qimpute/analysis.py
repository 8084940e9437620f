"""Flat-landscape diagnostics: gradient statistics and output-qubit entropy.

Gradient statistics sample the analytic derivative of the distance with
respect to the first parameter at uniformly random parameter draws; their
variance shrinking exponentially with the input width is the flat-plateau
signature.  The entropy side traces out the input register, leaving a 2x2
reduced state of the output qubit whose von Neumann entropy (base 2, so
the single-qubit maximum is 1) measures how entangled the output is with
the inputs; averaging it over random parameters tracks the same
saturation and is fit with a pinned-base exponential approach to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ansatz import Ansatz, conditional_output, flip_bits, sign_matrix
from .optimize import _bfgs_core, adjusted_target_angles
from .rng import stream
from .targets import TargetDistribution

__all__ = [
    "GradientStats",
    "EntropyStats",
    "ExpFit",
    "MIN_SAMPLE_COUNT",
    "gradient_statistics",
    "gradient_statistics_vs_m",
    "target_entropy",
    "mean_entropy",
    "fit_entropy_curve",
]

MIN_SAMPLE_COUNT = 100

# The saturation model depends on its base a and rate b only through
# b*ln(a), so the base is pinned by convention and only the rate and
# offset are identifiable from data.
DEFAULT_FIT_BASE = 1.2


@dataclass(frozen=True)
class GradientStats:
    n_inputs: int
    n_params: int
    sample_count: int
    mean_abs_gradient: float
    gradient_variance: float
    seed: int


@dataclass(frozen=True)
class EntropyStats:
    n_inputs: int
    n_params: int
    sample_count: int
    mean_entropy: float
    seed: int


@dataclass(frozen=True)
class ExpFit:
    """Parameters of the saturation model value(n) = 1 - a**(-b*(n - c))."""

    a: float
    b: float
    c: float
    residual: float
    degenerate: bool


def _random_parameter_angles(ansatz: Ansatz, sample_count: int, rng) -> np.ndarray:
    """Block angles for a batch of uniform parameter draws, shape (S, 2^N)."""
    draws = rng.uniform(0.0, 2.0 * np.pi, size=(sample_count, ansatz.param_count))
    return draws @ sign_matrix(ansatz).T


def gradient_statistics(
    ansatz: Ansatz,
    target: TargetDistribution,
    sample_count: int = 1000,
    seed: int = 0,
    param_index: int = 0,
) -> GradientStats:
    """Mean |dC/d(one parameter)| and its variance over random parameters.

    The first parameter (the initial rotation, sign +1 on every input) is
    used consistently across sweeps so that curves are comparable;
    ``param_index`` exists for spot checks against other components.
    """
    if sample_count < MIN_SAMPLE_COUNT:
        raise ValueError(f"sample_count must be >= {MIN_SAMPLE_COUNT}, got {sample_count}")
    if not 0 <= param_index < ansatz.param_count:
        raise ValueError(f"param_index {param_index} outside 0..{ansatz.param_count - 1}")
    goal = adjusted_target_angles(ansatz, target)
    seen = target.seen_mask
    rng = stream(seed, "gradient-stats")
    signs = sign_matrix(ansatz)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(sample_count, ansatz.param_count)) @ signs.T
    residual = theta[:, seen] - goal[seen]
    overlap = np.cos(residual).mean(axis=1)
    d_overlap = -(np.sin(residual) * signs[seen, param_index]).mean(axis=1)
    distance = np.sqrt(np.clip(1.0 - np.abs(overlap), 0.0, None))
    grads = -np.sign(overlap) * d_overlap / (2.0 * np.maximum(distance, 1e-15))
    return GradientStats(
        n_inputs=ansatz.n_inputs,
        n_params=ansatz.param_count,
        sample_count=sample_count,
        mean_abs_gradient=float(np.abs(grads).mean()),
        gradient_variance=float(grads.var()),
        seed=seed,
    )


def gradient_statistics_vs_m(
    n_inputs: int,
    target: TargetDistribution,
    sample_count: int = 1000,
    seed: int = 0,
) -> list[GradientStats]:
    """Statistics for every gate set between linear and quadratic.

    Pair-controlled gates are appended one at a time in lexicographic
    order, so the series has M_quadratic - M_linear + 1 entries and its
    first entry is the plain linear statistic.
    """
    n_pairs = n_inputs * (n_inputs - 1) // 2
    return [
        gradient_statistics(
            Ansatz.linear_with_pairs(n_inputs, extra), target, sample_count, seed
        )
        for extra in range(n_pairs + 1)
    ]


def _entropy_from_moments(r00: np.ndarray, r11: np.ndarray, r01: np.ndarray) -> np.ndarray:
    split = np.sqrt(((r00 - r11) / 2.0) ** 2 + r01 ** 2)
    lams = np.stack([0.5 + split, 0.5 - split], axis=-1)
    lams = np.clip(lams, 0.0, 1.0)
    terms = np.where(lams > 0, -lams * np.log2(np.where(lams > 0, lams, 1.0)), 0.0)
    return terms.sum(axis=-1)


def target_entropy(ansatz: Ansatz, params) -> float:
    """Base-2 entropy of the output qubit's reduced state.

    The reduced state under a uniform input register is the average of the
    per-input rank-1 projectors onto (amp0, amp1); its two eigenvalues are
    1/2 +- the Bloch radius in the (z, x) plane.
    """
    out = conditional_output(ansatz, params)
    r00 = float((out.amp0 ** 2).mean())
    r11 = float((out.amp1 ** 2).mean())
    r01 = float((out.amp0 * out.amp1).mean())
    return float(_entropy_from_moments(np.asarray(r00), np.asarray(r11), np.asarray(r01)))


def mean_entropy(ansatz: Ansatz, sample_count: int = 1000, seed: int = 0) -> EntropyStats:
    """Monte Carlo average of ``target_entropy`` over uniform parameters."""
    if sample_count < MIN_SAMPLE_COUNT:
        raise ValueError(f"sample_count must be >= {MIN_SAMPLE_COUNT}, got {sample_count}")
    rng = stream(seed, "entropy-stats")
    theta = _random_parameter_angles(ansatz, sample_count, rng)
    flipped = flip_bits(ansatz)
    c, s = np.cos(theta), np.sin(theta)
    amp0 = np.where(flipped, s, c)
    amp1 = np.where(flipped, c, s)
    r00 = (amp0 ** 2).mean(axis=1)
    r11 = (amp1 ** 2).mean(axis=1)
    r01 = (amp0 * amp1).mean(axis=1)
    entropies = _entropy_from_moments(r00, r11, r01)
    return EntropyStats(
        n_inputs=ansatz.n_inputs,
        n_params=ansatz.param_count,
        sample_count=sample_count,
        mean_entropy=float(entropies.mean()),
        seed=seed,
    )


def fit_entropy_curve(points: Sequence[tuple[float, float]], base: float = DEFAULT_FIT_BASE) -> ExpFit:
    """Least-squares fit of value(n) = 1 - a**(-b*(n - c)) to (n, value) pairs.

    Only the product b*ln(a) and the offset c are identifiable, so ``a``
    is pinned to ``base`` and ``b`` reported relative to it.  The rate and
    offset are initialized by linear regression of log(1 - value) on n and
    polished with the quasi-Newton core.  Constant or otherwise unfittable
    data comes back flagged degenerate rather than raising.
    """
    if len(points) < 4:
        raise ValueError(f"need at least 4 points to fit, got {len(points)}")
    if base <= 1.0:
        raise ValueError(f"base must exceed 1, got {base}")
    ns = np.array([p[0] for p in points], dtype=float)
    values = np.array([p[1] for p in points], dtype=float)

    gaps = np.clip(1.0 - values, 1e-12, None)
    slope, intercept = np.polyfit(ns, np.log(gaps), 1)
    rate0 = max(-float(slope), 1e-6)
    offset0 = float(intercept) / rate0

    def fun_grad(x: np.ndarray):
        rate = np.exp(x[0])
        offset = x[1]
        decay = np.exp(-rate * (ns - offset))
        err = (1.0 - decay) - values
        loss = float(err @ err)
        d_rate = float(2.0 * err @ (decay * (ns - offset)))
        d_offset = float(2.0 * err @ (-rate * decay))
        return loss, np.array([d_rate * rate, d_offset])

    x0 = np.array([np.log(rate0), offset0])
    x, loss, _, _, _ = _bfgs_core(
        fun_grad, x0, stop=lambda f, g: float(np.linalg.norm(g)) < 1e-12, max_iterations=500
    )
    rate = float(np.exp(x[0]))
    offset = float(x[1])
    rms = float(np.sqrt(loss / ns.size))
    degenerate = (
        not np.isfinite(rate)
        or not np.isfinite(offset)
        or rate < 1e-4
        or rate > 1e3
        or float(values.max() - values.min()) < 1e-6
    )
    return ExpFit(
        a=float(base),
        b=rate / float(np.log(base)),
        c=offset,
        residual=rms,
        degenerate=bool(degenerate),
    )
