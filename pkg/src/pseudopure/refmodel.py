"""Dense density-matrix oracle for the population kernel.

Builds the full controlled-rotation unitary, conjugates the density matrix and
then zeroes the off-diagonal terms (the crush). Only meant for checking the
fast path on small registers; the cost grows as ``4**n``.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from pseudopure.errors import IndexOutOfRange, NonDiagonalInput
from pseudopure.gatekernel import TransferGate

MAX_QUBITS = 4
HERMITIAN_TOL = 1e-12

_I2 = np.eye(2, dtype=complex)
_P0 = np.diag([1.0, 0.0]).astype(complex)
_P1 = np.diag([0.0, 1.0]).astype(complex)


def rotation(theta: float, axis: str = "x") -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def _kron_all(factors):
    return reduce(np.kron, factors)


def controlled_rotation_unitary(n: int, control: int, target: int, theta: float, axis: str = "x") -> np.ndarray:
    """``2**n`` unitary: identity when ``control`` is 0, rotation of ``target`` when it is 1."""
    if not (1 <= n <= MAX_QUBITS):
        raise ValueError(f"oracle supports 1..{MAX_QUBITS} qubits, got {n}")
    if not (1 <= control <= n and 1 <= target <= n):
        raise IndexOutOfRange(f"gate ({control}, {target}) does not fit in {n} qubits")
    if control == target:
        raise ValueError("control and target must differ")
    off = [_I2] * n
    on = [_I2] * n
    off[control - 1] = _P0
    on[control - 1] = _P1
    on[target - 1] = rotation(theta, axis)
    return _kron_all(off) + _kron_all(on)


def density_from_pops(pops) -> np.ndarray:
    return np.diag(np.asarray(pops, dtype=complex))


def crush(rho: np.ndarray) -> np.ndarray:
    """Keep only the diagonal."""
    return np.diag(np.diag(rho))


def is_diagonal(rho: np.ndarray, atol: float = HERMITIAN_TOL) -> bool:
    off = rho - np.diag(np.diag(rho))
    return bool(np.all(np.abs(off) <= atol))


def rotate(rho: np.ndarray, gate: TransferGate, axis: str = "x") -> np.ndarray:
    """``U rho U^dagger`` before the crush."""
    n = int(rho.shape[0]).bit_length() - 1
    u = controlled_rotation_unitary(n, gate.control, gate.target, gate.theta, axis)
    return u @ rho @ u.conj().T


def apply_gate_ref(rho: np.ndarray, gate: TransferGate, axis: str = "x") -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not is_diagonal(rho):
        raise NonDiagonalInput("the oracle contract only covers diagonal inputs")
    return crush(rotate(rho, gate, axis))
