"""Resource X-states, probe states and single-qubit Bloch vectors.

Basis order is |00>, |01>, |10>, |11> throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qfi_teleport.errors import OutOfRange, Unphysical
from qfi_teleport.qmath import (
    PAULIS,
    SIGMA_0,
    DensityDiagnostics,
    as_matrix,
    tensor,
    validate_density,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ResourceParams:
    """Coefficients of the shared X-state 1/4 (I + sum_i c_i sigma_i x sigma_i).

    The box bound |c_i| <= 1 is checked here; positivity is not, since the
    box admits non-PSD corners. Use :func:`x_state` or :meth:`is_physical`.
    """

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            v = getattr(self, name)
            if not math.isfinite(v) or abs(v) > 1.0:
                raise OutOfRange(f"{name}={v!r} outside [-1, 1]")

    @classmethod
    def parse(cls, text: str) -> "ResourceParams":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise OutOfRange(f"expected three comma-separated coefficients, got {text!r}")
        return cls(*(float(p) for p in parts))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def bell_weights(self) -> tuple[float, float, float, float]:
        """Eigenvalues of the X-state, indexed like the Bell basis."""
        c1, c2, c3 = self.c1, self.c2, self.c3
        return (
            0.25 * (1 - c1 - c2 - c3),
            0.25 * (1 - c1 + c2 + c3),
            0.25 * (1 + c1 - c2 + c3),
            0.25 * (1 + c1 + c2 - c3),
        )

    def is_physical(self, tol: float = 1e-10) -> bool:
        return min(self.bell_weights()) >= -tol


@dataclass(frozen=True)
class ProbeParams:
    """Weight ``theta`` in [0, pi] and phase ``phi`` in [0, 2 pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise OutOfRange(f"theta={self.theta!r} outside [0, pi]")
        if not (0.0 <= self.phi < TWO_PI):
            raise OutOfRange(f"phi={self.phi!r} outside [0, 2 pi)")

    @classmethod
    def wrapped(cls, theta: float, phi: float) -> "ProbeParams":
        """Build with ``phi`` reduced modulo 2 pi."""
        phi = math.fmod(phi, TWO_PI)
        if phi < 0:
            phi += TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        return cls(theta, phi)


@dataclass(frozen=True)
class BlochVector:
    rx: float
    ry: float
    rz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rx, self.ry, self.rz])

    @property
    def norm(self) -> float:
        return math.sqrt(self.rx**2 + self.ry**2 + self.rz**2)


def x_state_with_diagnostics(c: ResourceParams) -> tuple[np.ndarray, DensityDiagnostics]:
    rho = tensor(SIGMA_0, SIGMA_0).astype(complex)
    for ci, s in zip(c.as_tuple(), PAULIS[1:]):
        rho = rho + ci * tensor(s, s)
    rho = 0.25 * rho
    return rho, validate_density(rho)


def x_state(c: ResourceParams) -> np.ndarray:
    """The 4x4 resource density matrix.

    Raises:
        Unphysical: when the coefficients give a matrix that is not PSD.
    """
    rho, diag = x_state_with_diagnostics(c)
    if not diag.passed:
        raise Unphysical(f"resource {c.as_tuple()} is not a valid state: {diag.describe()}", diag)
    return rho


def probe_ket(theta: float, phi: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def probe_single(p: ProbeParams) -> np.ndarray:
    """|psi><psi| for cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    v = probe_ket(p.theta, p.phi)
    return np.outer(v, v.conj())


def probe_double(p: ProbeParams) -> np.ndarray:
    """|psi><psi| for cos(theta/2)|00> + e^{i phi} sin(theta/2)|11>."""
    a, b = probe_ket(p.theta, p.phi)
    v = np.array([a, 0, 0, b], dtype=complex)
    return np.outer(v, v.conj())


def bloch_from_density(rho) -> BlochVector:
    rho = as_matrix(rho)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    # tr(rho sigma_k) written out from the entries
    rx = 2.0 * rho[0, 1].real
    ry = -2.0 * rho[0, 1].imag
    rz = (rho[0, 0] - rho[1, 1]).real
    return BlochVector(float(rx), float(ry), float(rz))


def density_from_bloch(r: BlochVector) -> np.ndarray:
    return 0.5 * (SIGMA_0 + r.rx * PAULIS[1] + r.ry * PAULIS[2] + r.rz * PAULIS[3])
