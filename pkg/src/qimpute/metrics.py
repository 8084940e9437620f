"""Distance and bound computations between targets and circuit outputs.

The working distance everywhere is d(p, q) = sqrt(1 - BC(p, q)) with
BC(p, q) = sum_x sqrt(p_x q_x); state overlaps use the same square-root
form with BC replaced by |<phi|psi>|.  Restricted variants slice both
distributions to one side of the seen/unseen split and renormalize each
slice before comparing.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .ansatz import ConditionalOutput
from .targets import TargetDistribution

__all__ = [
    "DistanceReport",
    "hellinger",
    "state_distance",
    "worst_case_bound",
    "restricted_distance",
]

# Inputs this close to unit mass are silently renormalized; anything
# farther off is rejected.
NORMALIZATION_TOL = 1e-9


class DistanceReport(NamedTuple):
    hellinger: float
    bhattacharyya: float
    support: str


def _as_distribution(p, name: str) -> np.ndarray:
    arr = np.asarray(p, dtype=float).ravel()
    if np.any(arr < 0):
        raise ValueError(f"{name} has negative entries")
    total = arr.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"{name} sums to {total}, not 1")
    return arr / total


def hellinger(p, q, support: str = "full") -> DistanceReport:
    """Distance sqrt(1 - sum(sqrt(p*q))) between two probability vectors."""
    p = _as_distribution(p, "p")
    q = _as_distribution(q, "q")
    if p.size != q.size:
        raise ValueError(f"length mismatch: {p.size} vs {q.size}")
    coefficient = float(np.clip(np.sqrt(p * q).sum(), 0.0, 1.0))
    distance = float(np.sqrt(max(1.0 - coefficient, 0.0)))
    return DistanceReport(hellinger=distance, bhattacharyya=coefficient, support=support)


def state_distance(target: TargetDistribution, out: ConditionalOutput) -> float:
    """Overlap distance sqrt(1 - |F|) between target state and circuit state.

    F accumulates sqrt(p(b, a)) times the circuit amplitude of |b>|a>; for
    a fully seen target this is the mean over inputs of
    sqrt(p(0|b)) amp0(b) + sqrt(p(1|b)) amp1(b).
    """
    if out.amp0.size != target.n_states:
        raise ValueError(
            f"dimension mismatch: output has {out.amp0.size} inputs, "
            f"target has {target.n_states}"
        )
    roots = np.sqrt(target.probs)
    overlap = (roots[:, 0] @ out.amp0 + roots[:, 1] @ out.amp1) / np.sqrt(target.n_states)
    return float(np.sqrt(max(1.0 - min(abs(overlap), 1.0), 0.0)))


def worst_case_bound(n_params: int, n_inputs: int) -> float:
    """Largest optimized distance an M-parameter family can be forced to.

    Exceeding sqrt(1 - M/2^N) after optimization signals optimizer failure,
    not family capacity.
    """
    if n_inputs < 1:
        raise ValueError(f"n_inputs must be >= 1, got {n_inputs}")
    n_states = 1 << n_inputs
    if not 0 <= n_params <= n_states:
        raise ValueError(f"n_params {n_params} outside 0..{n_states}")
    return float(np.sqrt(1.0 - n_params / n_states))


def restricted_distance(
    target: TargetDistribution,
    out: ConditionalOutput,
    support: str = "seen",
    mask: np.ndarray | None = None,
) -> DistanceReport:
    """Distance after restricting both joints to one input subset.

    ``support`` selects the seen inputs, the unseen ones, or everything;
    ``mask`` overrides the target's own seen mask (useful for scoring a
    full reference distribution on the unseen half of a training split).
    Both slices are renormalized to unit mass before comparison.
    """
    if out.amp0.size != target.n_states:
        raise ValueError("dimension mismatch between target and output")
    if mask is None:
        mask = target.seen_mask
    if support == "seen":
        selected = mask
    elif support == "unseen":
        selected = ~mask
    elif support == "full":
        selected = np.ones(target.n_states, dtype=bool)
    else:
        raise ValueError(f"support must be 'seen', 'unseen' or 'full', got {support!r}")
    if not selected.any():
        raise ValueError(f"{support} support is empty")

    target_slice = target.probs[selected].ravel()
    target_mass = target_slice.sum()
    if target_mass <= 0:
        raise ValueError(f"target carries no mass on the {support} support")
    output_slice = out.joint_probabilities()[selected].ravel()
    return hellinger(target_slice / target_mass, output_slice / output_slice.sum(), support=support)
