"""Standard teleportation through a mixed resource, as a Pauli channel.

A resource ``R`` turns teleportation into ``rho -> sum_i p_i s_i rho s_i``
with ``p_i = <Psi^i| R |Psi^i>``. Bell index i pairs with Pauli s_i; the
singlet (index 0) pairs with the identity, so a clean singlet teleports
perfectly. Two-qubit states are teleported with two independent copies of
the resource, giving ``sum_ij p_i p_j (s_i x s_j) rho (s_i x s_j)``.
"""

from __future__ import annotations

import math

import numpy as np

from qfi_teleport.errors import InvalidState
from qfi_teleport.qmath import PAULIS, as_matrix, tensor, validate_density

_R = 1.0 / math.sqrt(2.0)

# Rows are Psi^0 .. Psi^3 in the |00>, |01>, |10>, |11> basis.
BELL_BASIS = np.array(
    [
        [0, _R, -_R, 0],
        [_R, 0, 0, -_R],
        [_R, 0, 0, _R],
        [0, _R, _R, 0],
    ],
    dtype=complex,
)

PAULI_PAIRS = tuple(tensor(PAULIS[i], PAULIS[j]) for i in range(4) for j in range(4))

RENORM_TOL = 1e-12


def _require_density(rho, shape: tuple[int, int], label: str) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != shape:
        raise InvalidState(f"{label}: expected shape {shape}, got {rho.shape}")
    diag = validate_density(rho)
    if not diag.passed:
        raise InvalidState(f"{label} is not a density matrix: {diag.describe()}", diag)
    return rho


def bell_probabilities(rho_res, validate: bool = True) -> np.ndarray:
    """Bell-basis populations of the resource, clamped into [0, 1].

    Small negatives from rounding are zeroed and the vector renormalized if
    its sum drifts by more than 1e-12.
    """
    if validate:
        rho_res = _require_density(rho_res, (4, 4), "resource")
    else:
        rho_res = as_matrix(rho_res)
    p = np.real(np.einsum("ia,ab,ib->i", BELL_BASIS.conj(), rho_res, BELL_BASIS))
    p = np.clip(p, 0.0, 1.0)
    total = p.sum()
    if abs(total - 1.0) > RENORM_TOL:
        p = p / total
    return p


def pauli_superoperator(p, qubits: int = 1) -> np.ndarray:
    """Matrix of the teleportation Pauli channel acting on row-major vec(rho).

    Uses vec(A rho B) = (A kron B^T) vec(rho) with Hermitian, self-inverse
    Paulis, so each term contributes ``s kron conj(s)``.
    """
    p = np.asarray(p, dtype=float)
    if qubits == 1:
        ops = [(p[i], PAULIS[i]) for i in range(4)]
    elif qubits == 2:
        ops = [(p[k // 4] * p[k % 4], s) for k, s in enumerate(PAULI_PAIRS)]
    else:
        raise ValueError(f"qubits must be 1 or 2, got {qubits!r}")
    dim = 4 ** qubits
    sup = np.zeros((dim, dim), dtype=complex)
    for w, s in ops:
        if w:
            sup += w * np.kron(s, s.conj())
    return sup


def apply_superoperator(sup: np.ndarray, rho: np.ndarray) -> np.ndarray:
    n = rho.shape[0]
    return (sup @ rho.reshape(-1)).reshape(n, n)


def pauli_channel_single(p, rho: np.ndarray) -> np.ndarray:
    return sum(pi * s @ rho @ s for pi, s in zip(p, PAULIS))


def pauli_channel_double(p, rho: np.ndarray) -> np.ndarray:
    out = np.zeros((4, 4), dtype=complex)
    for k, s in enumerate(PAULI_PAIRS):
        w = p[k // 4] * p[k % 4]
        if w:
            out += w * (s @ rho @ s)
    return out


def teleport_single(rho_res, probe, validate: bool = True) -> np.ndarray:
    """Teleport a one-qubit state through the two-qubit resource ``rho_res``."""
    if validate:
        probe = _require_density(probe, (2, 2), "probe")
    else:
        probe = as_matrix(probe)
    return pauli_channel_single(bell_probabilities(rho_res, validate), probe)


def teleport_double(rho_res, probe2, validate: bool = True) -> np.ndarray:
    """Teleport a two-qubit state using two independent copies of ``rho_res``."""
    if validate:
        probe2 = _require_density(probe2, (4, 4), "probe")
    else:
        probe2 = as_matrix(probe2)
    return pauli_channel_double(bell_probabilities(rho_res, validate), probe2)
