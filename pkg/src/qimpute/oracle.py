"""Gate-by-gate simulation oracle for small instances.

This is the independent verification path for the analytic block formulas:
the circuit is applied literally, one explicit 2^(N+1)-dimensional linear
map per gate, with no parity bookkeeping anywhere.  Hadamards on the input
register, the initial output-qubit rotation, then controlled NOTs each
followed by their rotation, in the drawn order.

Deliberately naive and dense; capped at 10 input qubits.
"""

from __future__ import annotations

import numpy as np

from .ansatz import Ansatz, _check_params

__all__ = ["gate_level_oracle", "ORACLE_MAX_INPUTS"]

ORACLE_MAX_INPUTS = 10


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def _op_on_qubit(op: np.ndarray, bit_position: int, n_qubits: int) -> np.ndarray:
    """Embed a 1-qubit operator at a bit position of the full index."""
    upper = np.eye(1 << (n_qubits - bit_position - 1))
    lower = np.eye(1 << bit_position)
    return np.kron(np.kron(upper, op), lower)


def _controlled_not(control_bits: list[int], dim: int) -> np.ndarray:
    """Permutation matrix flipping index bit 0 when all control bits are set."""
    mask = 0
    for p in control_bits:
        mask |= 1 << p
    mat = np.zeros((dim, dim))
    for col in range(dim):
        row = col ^ 1 if (col & mask) == mask else col
        mat[row, col] = 1.0
    return mat


def gate_level_oracle(ansatz: Ansatz, params) -> np.ndarray:
    """Amplitude vector from literal sequential gate application.

    Index layout matches the analytic path: the full basis index is
    2*b + a with a the output bit, so input qubit i (bit b_i) occupies
    index bit N - i + 1.
    """
    n = ansatz.n_inputs
    if n > ORACLE_MAX_INPUTS:
        raise ValueError(f"oracle is capped at {ORACLE_MAX_INPUTS} input qubits, got {n}")
    params = _check_params(ansatz, params)

    n_qubits = n + 1
    dim = 1 << n_qubits
    state = np.zeros(dim)
    state[0] = 1.0

    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    for i in range(1, n + 1):
        state = _op_on_qubit(hadamard, n - i + 1, n_qubits) @ state

    state = _op_on_qubit(_rotation(params[0]), 0, n_qubits) @ state
    for k, ctrl in enumerate(ansatz.controls, start=1):
        control_bits = [n - i + 1 for i in ctrl]
        state = _controlled_not(control_bits, dim) @ state
        state = _op_on_qubit(_rotation(params[k]), 0, n_qubits) @ state
    return state
