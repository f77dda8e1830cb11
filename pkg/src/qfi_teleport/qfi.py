"""Numeric quantum Fisher information.

The spectral estimator differentiates the density matrix itself by finite
differences and sums

    F = sum_{i,j: l_i + l_j > cut} 2 |<psi_i| d rho |psi_j>|^2 / (l_i + l_j)

over eigenpairs of rho, which never needs eigenvector derivatives. The
Bloch estimator applies the single-qubit formula to r and dr.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from qfi_teleport.channels import ChannelConfig, apply_memory_channel
from qfi_teleport.errors import BlochOutOfBall, OutOfRange
from qfi_teleport.qmath import as_matrix, dagger, eigh
from qfi_teleport.qstate import (
    TWO_PI,
    BlochVector,
    ProbeParams,
    ResourceParams,
    bloch_from_density,
    probe_ket,
    x_state,
)
from qfi_teleport.teleport import apply_superoperator, bell_probabilities, pauli_superoperator

DEFAULT_STEP = 1e-5
MIN_STEP = 1e-7
MAX_STEP = 1e-3
MODE_CUTOFF = 1e-10
PURE_CUTOFF = 1e-9
BALL_TOL = 1e-8
NEGATIVE_CLAMP = 1e-10


class Param(enum.Enum):
    THETA = "theta"
    PHI = "phi"


class Method(enum.Enum):
    SPECTRAL = "spectral"
    BLOCH = "bloch"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class ParamFamily:
    """A deterministic map (theta, phi) -> density matrix of fixed size."""

    evaluator: Callable[[float, float], np.ndarray]
    dimension: int
    description: str = ""

    def __call__(self, theta: float, phi: float) -> np.ndarray:
        return self.evaluator(theta, phi)

    def at(self, p: ProbeParams) -> np.ndarray:
        return self.evaluator(p.theta, p.phi)


@dataclass
class QfiResult:
    f_theta: float
    f_phi: float
    method: Method
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.f_theta = _clamp(self.f_theta)
        self.f_phi = _clamp(self.f_phi)

    def get(self, which: Param) -> float:
        return self.f_theta if Param(which) is Param.THETA else self.f_phi


def _clamp(value: float) -> float:
    value = float(value)
    if -NEGATIVE_CLAMP <= value < 0.0:
        return 0.0
    return value


def _wrap_phi(phi: float) -> float:
    phi = math.fmod(phi, TWO_PI)
    return phi + TWO_PI if phi < 0 else phi


def _stencil(f: Callable[[float, float], np.ndarray], which: Param, at: ProbeParams, h: float):
    """Derivative of ``f`` along ``which`` and the stencil name used."""
    t, p = at.theta, at.phi
    if which is Param.PHI:
        return (f(t, _wrap_phi(p + h)) - f(t, _wrap_phi(p - h))) / (2 * h), "central"
    if t - h < 0.0:
        return (-3 * f(t, p) + 4 * f(t + h, p) - f(t + 2 * h, p)) / (2 * h), "forward"
    if t + h > math.pi:
        return (3 * f(t, p) - 4 * f(t - h, p) + f(t - 2 * h, p)) / (2 * h), "backward"
    return (f(t + h, p) - f(t - h, p)) / (2 * h), "central"


def _check_step(h: float) -> None:
    if not (MIN_STEP <= h <= MAX_STEP):
        raise OutOfRange(f"step h={h!r} outside [{MIN_STEP}, {MAX_STEP}]")


def spectral_sum(rho: np.ndarray, drho: np.ndarray, cutoff: float = MODE_CUTOFF) -> tuple[float, int]:
    """QFI from a state and its derivative; returns (value, dropped pair count)."""
    dec = eigh(rho).clamped()
    lam = dec.eigenvalues
    v = dec.eigenvectors
    d = dagger(v) @ as_matrix(drho) @ v
    total = 0.0
    dropped = 0
    n = len(lam)
    for i in range(n):
        for j in range(n):
            s = lam[i] + lam[j]
            if s > cutoff:
                total += 2.0 * abs(d[i, j]) ** 2 / s
            else:
                dropped += 1
    return total, dropped


def qfi_spectral(
    family: ParamFamily,
    which: Param,
    at: ProbeParams,
    h: float = DEFAULT_STEP,
    diagnostics: dict | None = None,
) -> float:
    """Spectral QFI of ``family`` with respect to ``which`` at ``at``.

    Theta stencils that would leave [0, pi] switch to one-sided second-order
    differences; phi stencils wrap modulo 2 pi. If ``diagnostics`` is given
    it receives the stencil kind, step and dropped-mode count.
    """
    _check_step(h)
    which = Param(which)
    drho, kind = _stencil(family.evaluator, which, at, h)
    value, dropped = spectral_sum(family.at(at), drho)
    if diagnostics is not None:
        diagnostics.update({"stencil": kind, "step": h, "dropped_modes": dropped})
    return _clamp(value)


def qfi_bloch(r: BlochVector, dr: BlochVector) -> float:
    """Single-qubit QFI from the Bloch vector and its parameter derivative.

    Raises:
        BlochOutOfBall: if |r| exceeds 1 by more than 1e-8.
    """
    ra, da = r.as_array(), dr.as_array()
    rr = float(ra @ ra)
    if math.sqrt(rr) > 1.0 + BALL_TOL:
        raise BlochOutOfBall(f"|r|={math.sqrt(rr):.12g} exceeds 1")
    purity_gap = 1.0 - rr
    value = float(da @ da)
    if purity_gap > PURE_CUTOFF:
        value += float(ra @ da) ** 2 / purity_gap
    return value


def bloch_qfi_of_family(
    family: ParamFamily, which: Param, at: ProbeParams, h: float = DEFAULT_STEP
) -> float:
    if family.dimension != 2:
        raise ValueError("the Bloch formula needs a single-qubit family")
    _check_step(h)

    def r_of(t, p):
        return bloch_from_density(family(t, p)).as_array()

    dr, _ = _stencil(r_of, Param(which), at, h)
    return qfi_bloch(bloch_from_density(family.at(at)), BlochVector(*dr))


@functools.lru_cache(maxsize=4096)
def _teleport_weights(cfg: ChannelConfig, c: ResourceParams) -> tuple[float, ...]:
    resource = apply_memory_channel(x_state(c), cfg)
    return tuple(float(x) for x in bell_probabilities(resource))


def teleport_weights(cfg: ChannelConfig, c: ResourceParams) -> np.ndarray:
    """Bell populations of the noisy resource, i.e. the teleportation Pauli weights.

    Raises:
        Unphysical: if ``c`` does not describe a valid state.
    """
    return np.array(_teleport_weights(cfg, c))


def teleported_family_single(cfg: ChannelConfig, c: ResourceParams) -> ParamFamily:
    sup = pauli_superoperator(teleport_weights(cfg, c), 1)

    def evaluate(theta: float, phi: float) -> np.ndarray:
        v = probe_ket(theta, phi)
        return apply_superoperator(sup, np.outer(v, v.conj()))

    return ParamFamily(evaluate, 2, f"single-qubit teleport via {cfg.kind.value} D={cfg.D} mu={cfg.mu}")


def teleported_family_double(cfg: ChannelConfig, c: ResourceParams) -> ParamFamily:
    sup = pauli_superoperator(teleport_weights(cfg, c), 2)

    def evaluate(theta: float, phi: float) -> np.ndarray:
        a, b = probe_ket(theta, phi)
        v = np.array([a, 0, 0, b], dtype=complex)
        return apply_superoperator(sup, np.outer(v, v.conj()))

    return ParamFamily(evaluate, 4, f"two-qubit teleport via {cfg.kind.value} D={cfg.D} mu={cfg.mu}")


def qfi_teleported(
    cfg: ChannelConfig,
    c: ResourceParams,
    at: ProbeParams,
    qubits: int = 1,
    h: float = DEFAULT_STEP,
    method: Method | str = Method.SPECTRAL,
) -> QfiResult:
    """F_theta and F_phi of the teleported probe, computed numerically.

    For one qubit the spectral result carries the Bloch-formula values and
    their largest deviation in ``diagnostics["bloch_residual"]``.
    """
    method = Method(method)
    if method is Method.ANALYTIC:
        raise ValueError("use analytic.closed_form_qfi for closed forms")
    if qubits not in (1, 2):
        raise OutOfRange(f"qubits={qubits!r} must be 1 or 2")
    family = (teleported_family_single if qubits == 1 else teleported_family_double)(cfg, c)
    if method is Method.BLOCH:
        if qubits != 1:
            raise ValueError("the Bloch formula applies to one qubit only")
        return QfiResult(
            bloch_qfi_of_family(family, Param.THETA, at, h),
            bloch_qfi_of_family(family, Param.PHI, at, h),
            Method.BLOCH,
            {"step": h},
        )

    dt: dict = {}
    dp: dict = {}
    f_theta = qfi_spectral(family, Param.THETA, at, h, dt)
    f_phi = qfi_spectral(family, Param.PHI, at, h, dp)
    diagnostics = {
        "step": h,
        "stencil_theta": dt["stencil"],
        "dropped_modes": max(dt["dropped_modes"], dp["dropped_modes"]),
    }
    if qubits == 1:
        bt = bloch_qfi_of_family(family, Param.THETA, at, h)
        bp = bloch_qfi_of_family(family, Param.PHI, at, h)
        diagnostics.update(
            bloch_f_theta=bt,
            bloch_f_phi=bp,
            bloch_residual=max(abs(bt - f_theta), abs(bp - f_phi)),
        )
    return QfiResult(f_theta, f_phi, Method.SPECTRAL, diagnostics)
