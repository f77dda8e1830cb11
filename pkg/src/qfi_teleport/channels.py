"""Two-use noisy channels with partial memory.

With probability ``1 - mu`` the two qubits see independent noise (product
Kraus operators), with probability ``mu`` they see the same operation
(correlated Kraus operators)::

    eps(rho) = (1 - mu) sum_ij E_ij rho E_ij^+  +  mu sum_k E_kk rho E_kk^+

Pauli weights are folded into the stored operators; the branch weights
``1 - mu`` and ``mu`` are applied when the two sums are combined.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from qfi_teleport.errors import InvalidState, OutOfRange
from qfi_teleport.qmath import PAULIS, as_matrix, dagger, tensor, validate_density


class ChannelKind(enum.Enum):
    AMPLITUDE_DAMPING = "ad"
    PHASE_DAMPING = "pd"
    DEPOLARIZING = "de"

    @classmethod
    def parse(cls, value) -> "ChannelKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower(), kind.name.lower().replace("_", "")):
                return kind
        raise OutOfRange(f"unknown channel kind {value!r} (expected ad, pd or de)")


class Branch(enum.Enum):
    UNCORRELATED = "uncorrelated"
    CORRELATED = "correlated"


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise OutOfRange(f"{name}={value!r} outside [0, 1]")
    return value


@dataclass(frozen=True)
class ChannelConfig:
    kind: ChannelKind
    D: float
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind.parse(self.kind))
        object.__setattr__(self, "D", _check_unit("D", self.D))
        object.__setattr__(self, "mu", _check_unit("mu", self.mu))


@dataclass(frozen=True)
class KrausSet:
    operators: tuple[np.ndarray, ...]
    branch: Branch

    def __len__(self):
        return len(self.operators)

    def completeness(self) -> np.ndarray:
        return sum(dagger(e) @ e for e in self.operators)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(e @ rho @ dagger(e) for e in self.operators)


def pauli_weights(kind: ChannelKind, D: float) -> dict[int, float]:
    """Single-use Pauli probabilities {index: P_index}.

    Dephasing flips with probability D/2, so each qubit's coherence shrinks
    by 1 - D; that is the scaling behind the closed-form coefficient
    Delta = 1 - (2 - D) D (1 - mu).
    """
    kind = ChannelKind.parse(kind)
    if kind is ChannelKind.PHASE_DAMPING:
        return {0: 1.0 - D / 2.0, 3: D / 2.0}
    if kind is ChannelKind.DEPOLARIZING:
        return {0: 1.0 - D, 1: D / 3.0, 2: D / 3.0, 3: D / 3.0}
    raise OutOfRange(f"{kind} is not a Pauli channel")


def damping_operators(D: float) -> tuple[np.ndarray, np.ndarray]:
    a0 = np.array([[math.sqrt(1.0 - D), 0.0], [0.0, 1.0]], dtype=complex)
    a1 = np.array([[0.0, 0.0], [math.sqrt(D), 0.0]], dtype=complex)
    return a0, a1


def kraus_uncorrelated(kind, D: float) -> KrausSet:
    """Product operators for two independent channel uses.

    Zero-weight operators are kept so the set size depends only on ``kind``.
    """
    kind = ChannelKind.parse(kind)
    D = _check_unit("D", D)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        a = damping_operators(D)
        ops = [tensor(a[i], a[j]) for i in range(2) for j in range(2)]
    else:
        w = pauli_weights(kind, D)
        ops = [
            math.sqrt(w[i] * w[j]) * tensor(PAULIS[i], PAULIS[j]) for i in w for j in w
        ]
    return KrausSet(tuple(ops), Branch.UNCORRELATED)


def kraus_correlated(kind, D: float) -> KrausSet:
    """Operators for the fully correlated branch (same operation on both qubits)."""
    kind = ChannelKind.parse(kind)
    D = _check_unit("D", D)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        e00 = np.diag([math.sqrt(1.0 - D), 1.0, 1.0, 1.0]).astype(complex)
        e11 = np.zeros((4, 4), dtype=complex)
        e11[3, 0] = math.sqrt(D)
        ops = [e00, e11]
    else:
        w = pauli_weights(kind, D)
        ops = [math.sqrt(w[k]) * tensor(PAULIS[k], PAULIS[k]) for k in w]
    return KrausSet(tuple(ops), Branch.CORRELATED)


def kraus_sets(cfg: ChannelConfig) -> tuple[KrausSet, KrausSet]:
    return kraus_uncorrelated(cfg.kind, cfg.D), kraus_correlated(cfg.kind, cfg.D)


def combine(uncorrelated: KrausSet, correlated: KrausSet, mu: float, rho: np.ndarray) -> np.ndarray:
    return (1.0 - mu) * uncorrelated.apply(rho) + mu * correlated.apply(rho)


def apply_memory_channel(rho, cfg: ChannelConfig, validate: bool = True) -> np.ndarray:
    """Send both halves of a two-qubit state through the memory channel.

    Raises:
        InvalidState: if ``validate`` and ``rho`` is not a density matrix.
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise InvalidState(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if validate:
        diag = validate_density(rho)
        if not diag.passed:
            raise InvalidState(f"input is not a density matrix: {diag.describe()}", diag)
    return combine(*kraus_sets(cfg), cfg.mu, rho)


def completeness_residual(uncorrelated: KrausSet, correlated: KrausSet, mu: float) -> float:
    total = (1.0 - mu) * uncorrelated.completeness() + mu * correlated.completeness()
    return float(np.linalg.norm(total - np.eye(total.shape[0]), "fro"))


def verify_cptp(cfg: ChannelConfig) -> float:
    """Frobenius distance of the weighted sum of E^+ E from the identity."""
    return completeness_residual(*kraus_sets(cfg), cfg.mu)
