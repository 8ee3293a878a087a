"""Diagonal population states, thermal and pseudo-pure targets, and epsilon.

States are stored as traceless *deviation* populations: the diagonal of the
deviation density matrix. Entries may be negative and are never normalised,
since every quantity computed here is homogeneous of degree zero.

Basis convention: qubit 1 is the most significant bit, so basis index ``s``
encodes ``|q1 q2 ... qn>`` and the last qubit varies fastest. For two qubits
this gives the familiar ordering ``(a, b, c, d)`` of ``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pseudopure.errors import DegenerateInitial

#: Absolute tolerance for "equal populations" on unit-scale inputs.
EQUAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PopulationState:
    """Immutable vector of ``2**n`` diagonal (deviation) populations."""

    pops: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pops, dtype=float)
        if arr.ndim != 1:
            raise ValueError("populations must be a 1-D vector")
        size = arr.shape[0]
        if size < 2 or size & (size - 1):
            raise ValueError(f"population vector length {size} is not 2**n with n >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("populations must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "pops", arr)

    @property
    def n_qubits(self) -> int:
        return int(self.pops.shape[0]).bit_length() - 1

    @property
    def dim(self) -> int:
        return int(self.pops.shape[0])

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.pops.tolist())

    def __eq__(self, other):
        if not isinstance(other, PopulationState):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.pops, other.pops))

    def __hash__(self):
        return hash(self.pops.tobytes())

    def __repr__(self):
        vals = ", ".join(f"{v:.6g}" for v in self.pops)
        return f"PopulationState([{vals}])"

    def allclose(self, other: PopulationState, atol: float = EQUAL_TOL) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.pops, other.pops, rtol=0.0, atol=atol))


def bit(index: int, qubit: int, n_qubits: int) -> int:
    """Bit of 1-based ``qubit`` in basis ``index`` (qubit 1 most significant)."""
    return (index >> (n_qubits - qubit)) & 1


def thermal_state(polarizations: Sequence[float]) -> PopulationState:
    """Deviation populations of a thermal state with per-qubit polarizations.

    Each qubit contributes ``+p_i`` when its bit is 0 and ``-p_i`` when it is 1,
    i.e. the diagonal of ``sum_i p_i * sigma_z^i``.

    >>> thermal_state([1, 1]).pops.tolist()
    [2.0, 0.0, 0.0, -2.0]
    """
    p = np.asarray(polarizations, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("need at least one polarization")
    if not np.all(np.isfinite(p)):
        raise ValueError("polarizations must be finite")
    n = p.size
    idx = np.arange(2**n)
    # bits[s, i] is qubit (i+1)'s bit in basis index s
    bits = (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    return PopulationState((1 - 2 * bits) @ p)


def target_pops(pops: np.ndarray) -> np.ndarray:
    """Array version of :func:`pseudo_pure_target`; works on stacked rows."""
    pops = np.asarray(pops, dtype=float)
    dim = pops.shape[-1]
    rest = (pops.sum(axis=-1) - pops[..., 0]) / (dim - 1)
    out = np.repeat(rest[..., None], dim, axis=-1)
    out[..., 0] = pops[..., 0]
    return out


def pseudo_pure_target(initial: PopulationState) -> PopulationState:
    """The pseudo-pure state reachable from ``initial`` by population averaging.

    The ground population is kept and all other populations are replaced by
    their mean, which conserves both the total and the ground population.
    """
    return PopulationState(target_pops(initial.pops))


def is_pseudo_pure(state: PopulationState, atol: float = EQUAL_TOL) -> bool:
    return state.allclose(pseudo_pure_target(state), atol=atol)


def epsilon(state: PopulationState, initial: PopulationState) -> float:
    """Normalised distance of ``state`` from the pseudo-pure target of ``initial``.

    ``||state - rho0|| / ||initial - rho0||`` with ``rho0`` the pseudo-pure
    target of ``initial``. For diagonal matrices the Frobenius norm is the
    2-norm of the population vectors.

    Raises
    ------
    DegenerateInitial
        If ``initial`` is already pseudo-pure.
    """
    if state.dim != initial.dim:
        raise ValueError(f"dimension mismatch: {state.dim} vs {initial.dim}")
    target = target_pops(initial.pops)
    den = float(np.linalg.norm(initial.pops - target))
    scale = max(1.0, float(np.max(np.abs(initial.pops))))
    if den <= EQUAL_TOL * scale:
        raise DegenerateInitial("initial state is already pseudo-pure; epsilon is undefined")
    return float(np.linalg.norm(state.pops - target)) / den
