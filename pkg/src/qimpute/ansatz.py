"""Circuit families and the analytic map from parameters to output blocks.

The simulated circuit acts on N input qubits plus one output qubit.  The
input register is prepared in a uniform superposition, the output qubit
receives an initial y-rotation, and then multi-controlled NOTs (controls
on input qubits, target the output qubit) alternate with further
y-rotations.  Commuting every rotation to the circuit front leaves, for
each input bitstring b, a 2x2 block

    U_b = X^flip(b) . R_y(theta_b)

on the output qubit.  theta_b is linear in the rotation parameters: the
parameter following the k-th controlled gate picks up sign (-1)^phase,
where phase is the mod-2 sum of the fire indicators of gates 1..k at b
(a controlled NOT "fires" when all its control bits are set).  flip(b) is
the total fire parity.  For the single-control gates this reproduces the
prefix-parity sign rule; the flip parities for the full pair and general
gate sets are the all-pairs and all-subsets product parities.

All gates involved (H, R_y, X and controlled X) are real in the
computational basis, so amplitudes are stored as plain floats.

Three named families are provided:

  linear       single-control NOTs only, N+1 parameters
  quadratic    adds all pair-controlled NOTs, (N^2+N+2)/2 parameters
  exponential  every nonempty control subset, 2^N parameters

plus partially extended gate sets between linear and quadratic for
parameter-count sweeps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bitphase import Bitstring

__all__ = [
    "ANSATZ_KINDS",
    "Ansatz",
    "BlockRotation",
    "ConditionalOutput",
    "param_count",
    "block_rotation",
    "effective_angles",
    "flip_bits",
    "sign_matrix",
    "project_signs",
    "conditional_output",
    "statevector",
    "DEFAULT_STATEVECTOR_CAP",
]

ANSATZ_KINDS = ("linear", "quadratic", "exponential")

# 8 * 2**20 bytes of amplitudes keeps the analytic sweep desk sized.
DEFAULT_STATEVECTOR_CAP = 20

# Guard for materializing sign matrices: 2**N * M entries.
_SIGN_MATRIX_MAX_ENTRIES = 1 << 24


def param_count(kind: str, n_inputs: int) -> int:
    """Number of rotation parameters M of a family at a given width."""
    if n_inputs < 1:
        raise ValueError(f"n_inputs must be >= 1, got {n_inputs}")
    if kind == "linear":
        return n_inputs + 1
    if kind == "quadratic":
        return (n_inputs * n_inputs + n_inputs + 2) // 2
    if kind == "exponential":
        return 1 << n_inputs
    raise ValueError(f"unknown ansatz kind {kind!r}")


def _single_controls(n_inputs: int) -> list[tuple[int, ...]]:
    return [(i,) for i in range(1, n_inputs + 1)]


def _pair_controls(n_inputs: int) -> list[tuple[int, ...]]:
    return [(i, j) for i in range(1, n_inputs) for j in range(i + 1, n_inputs + 1)]


@dataclass(frozen=True)
class Ansatz:
    """A circuit family instance: gate list plus parameter bookkeeping.

    ``controls`` lists the control-index tuples of the controlled gates in
    circuit order; parameter slot 0 belongs to the initial rotation and
    slot k to the rotation following gate k.  Single controls come first
    in ascending index order, then pair controls in lexicographic order,
    then larger control sets, matching the drawn circuit layout.
    """

    kind: str
    n_inputs: int
    controls: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n_inputs < 1:
            raise ValueError(f"n_inputs must be >= 1, got {self.n_inputs}")
        seen = set()
        for ctrl in self.controls:
            if not ctrl or any(not 1 <= i <= self.n_inputs for i in ctrl):
                raise ValueError(f"control set {ctrl} outside 1..{self.n_inputs}")
            if tuple(sorted(ctrl)) != ctrl:
                raise ValueError(f"control set {ctrl} must be strictly increasing")
            if ctrl in seen:
                raise ValueError(f"duplicate control set {ctrl}")
            seen.add(ctrl)

    @property
    def param_count(self) -> int:
        return len(self.controls) + 1

    @property
    def index_map(self) -> tuple[tuple[int, ...], ...]:
        """Parameter slot -> control tuple; slot 0 is the bare rotation."""
        return ((),) + self.controls

    @classmethod
    def linear(cls, n_inputs: int) -> "Ansatz":
        return cls("linear", n_inputs, tuple(_single_controls(n_inputs)))

    @classmethod
    def quadratic(cls, n_inputs: int) -> "Ansatz":
        gates = _single_controls(n_inputs) + _pair_controls(n_inputs)
        return cls("quadratic", n_inputs, tuple(gates))

    @classmethod
    def exponential(cls, n_inputs: int) -> "Ansatz":
        gates: list[tuple[int, ...]] = []
        for size in range(1, n_inputs + 1):
            gates.extend(itertools.combinations(range(1, n_inputs + 1), size))
        return cls("exponential", n_inputs, tuple(gates))

    @classmethod
    def linear_with_pairs(cls, n_inputs: int, extra_pairs: int) -> "Ansatz":
        """Linear gate set plus the first ``extra_pairs`` pair controls.

        Sweeping extra_pairs from 0 to N(N-1)/2 walks the parameter count
        from the linear family to the quadratic one, one gate at a time.
        """
        pairs = _pair_controls(n_inputs)
        if not 0 <= extra_pairs <= len(pairs):
            raise ValueError(f"extra_pairs {extra_pairs} outside 0..{len(pairs)}")
        if extra_pairs == 0:
            return cls.linear(n_inputs)
        if extra_pairs == len(pairs):
            return cls.quadratic(n_inputs)
        gates = _single_controls(n_inputs) + pairs[:extra_pairs]
        return cls("custom", n_inputs, tuple(gates))


class BlockRotation(NamedTuple):
    """One output-qubit block: X**flip followed by R_y(angle) read inward."""

    flip: int
    angle: float


def _check_params(ansatz: Ansatz, params) -> np.ndarray:
    arr = np.asarray(params, dtype=float)
    if arr.shape != (ansatz.param_count,):
        raise ValueError(
            f"expected {ansatz.param_count} parameters for {ansatz.kind} "
            f"width {ansatz.n_inputs}, got shape {arr.shape}"
        )
    return arr


def _control_masks(ansatz: Ansatz) -> list[int]:
    # b_i sits at bit position (N - i) of the integer encoding
    n = ansatz.n_inputs
    masks = []
    for ctrl in ansatz.controls:
        mask = 0
        for i in ctrl:
            mask |= 1 << (n - i)
        masks.append(mask)
    return masks


def block_rotation(ansatz: Ansatz, params, b: Bitstring) -> BlockRotation:
    """The (flip, angle) block acting on the output qubit for input ``b``."""
    params = _check_params(ansatz, params)
    if b.width != ansatz.n_inputs:
        raise ValueError(f"bitstring width {b.width} != ansatz width {ansatz.n_inputs}")
    angle = params[0]
    phase = 0
    for k, ctrl in enumerate(ansatz.controls, start=1):
        if all(b.bit(i) for i in ctrl):
            phase ^= 1
        angle += -params[k] if phase else params[k]
    return BlockRotation(flip=phase, angle=float(angle))


def effective_angles(ansatz: Ansatz, params) -> tuple[np.ndarray, np.ndarray]:
    """Vector of theta_b over all 2^N bitstrings, plus the flip bits.

    Runs in O(M * 2^N) time and O(2^N) memory.
    """
    params = _check_params(ansatz, params)
    n_states = 1 << ansatz.n_inputs
    idx = np.arange(n_states)
    theta = np.full(n_states, params[0])
    phase = np.zeros(n_states, dtype=bool)
    for k, mask in enumerate(_control_masks(ansatz), start=1):
        phase ^= (idx & mask) == mask
        theta += np.where(phase, -params[k], params[k])
    return theta, phase


def flip_bits(ansatz: Ansatz) -> np.ndarray:
    """Parameter-independent flip bit of every block, as a bool vector."""
    n_states = 1 << ansatz.n_inputs
    idx = np.arange(n_states)
    phase = np.zeros(n_states, dtype=bool)
    for mask in _control_masks(ansatz):
        phase ^= (idx & mask) == mask
    return phase


def sign_matrix(ansatz: Ansatz) -> np.ndarray:
    """The dense (2^N x M) matrix of parameter signs: theta = S @ params."""
    n_states = 1 << ansatz.n_inputs
    if n_states * ansatz.param_count > _SIGN_MATRIX_MAX_ENTRIES:
        raise ValueError(
            f"sign matrix for {ansatz.kind} width {ansatz.n_inputs} too large; "
            "use effective_angles/project_signs instead"
        )
    idx = np.arange(n_states)
    signs = np.empty((n_states, ansatz.param_count))
    signs[:, 0] = 1.0
    phase = np.zeros(n_states, dtype=bool)
    for k, mask in enumerate(_control_masks(ansatz), start=1):
        phase ^= (idx & mask) == mask
        signs[:, k] = np.where(phase, -1.0, 1.0)
    return signs


def project_signs(ansatz: Ansatz, values: np.ndarray) -> np.ndarray:
    """Adjoint of the sign map: S.T @ values, without materializing S."""
    values = np.asarray(values, dtype=float)
    n_states = 1 << ansatz.n_inputs
    if values.shape != (n_states,):
        raise ValueError(f"expected {n_states} values, got shape {values.shape}")
    idx = np.arange(n_states)
    total = values.sum()
    out = np.empty(ansatz.param_count)
    out[0] = total
    phase = np.zeros(n_states, dtype=bool)
    for k, mask in enumerate(_control_masks(ansatz), start=1):
        phase ^= (idx & mask) == mask
        out[k] = total - 2.0 * values[phase].sum()
    return out


@dataclass(frozen=True)
class ConditionalOutput:
    """Output-qubit amplitudes conditioned on each input bitstring.

    For input b the output qubit carries (amp0[b], amp1[b]), a unit vector;
    amp0[b]**2 is the probability of reading 0 given b.
    """

    amp0: np.ndarray
    amp1: np.ndarray

    @property
    def n_inputs(self) -> int:
        return int(self.amp0.size).bit_length() - 1

    def joint_probabilities(self) -> np.ndarray:
        """Joint (input, output-bit) probabilities, shape (2^N, 2), sum 1."""
        n_states = self.amp0.size
        return np.stack([self.amp0 ** 2, self.amp1 ** 2], axis=1) / n_states


def conditional_output(ansatz: Ansatz, params) -> ConditionalOutput:
    """Evaluate every block on |0>: cos/sin pairs, swapped where flipped."""
    theta, flipped = effective_angles(ansatz, params)
    c, s = np.cos(theta), np.sin(theta)
    return ConditionalOutput(
        amp0=np.where(flipped, s, c),
        amp1=np.where(flipped, c, s),
    )


def statevector(ansatz: Ansatz, params, max_qubits: int = DEFAULT_STATEVECTOR_CAP) -> np.ndarray:
    """Full amplitude vector of length 2^(N+1) over basis states |b>|a>.

    The input register is weighted uniformly (Hadamard preparation), so the
    amplitude at index 2*b + a is amp_a(b) / sqrt(2^N).
    """
    if ansatz.n_inputs > max_qubits:
        raise ValueError(
            f"{ansatz.n_inputs} input qubits exceed the configured cap {max_qubits}"
        )
    out = conditional_output(ansatz, params)
    n_states = out.amp0.size
    state = np.empty(2 * n_states)
    norm = 1.0 / np.sqrt(n_states)
    state[0::2] = out.amp0 * norm
    state[1::2] = out.amp1 * norm
    return state
