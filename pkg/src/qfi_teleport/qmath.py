"""Small dense complex linear algebra: Kronecker products, Hermitian
eigendecomposition by cyclic Jacobi, and density-matrix diagnostics.

Matrices are plain ``numpy`` complex arrays. Sizes here never exceed 4x4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qfi_teleport.errors import NotHermitian

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
CLAMP_TOL = 1e-12
TIE_TOL = 1e-12
DENSITY_TOL = 1e-10

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def tensor(a, b) -> np.ndarray:
    """Kronecker product with block layout ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermiticity_residual(m: np.ndarray) -> float:
    """Largest elementwise deviation from ``m == m^dagger``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return float("inf")
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_residual(m) <= tol


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def vector(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, i]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)

    def clamped(self, tol: float = CLAMP_TOL) -> "SpectralDecomposition":
        """Eigenvalues in ``[-tol, 0)`` set to zero, for use as probabilities."""
        lam = self.eigenvalues.copy()
        lam[(lam < 0) & (lam >= -tol)] = 0.0
        return SpectralDecomposition(lam, self.eigenvectors)


def _phase_normalize(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    for x in v:
        if abs(x) > tol:
            return v * (abs(x) / x)
    return v


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    # Plain complex scalars: numpy call overhead dominates at n <= 4.
    n = a.shape[0]
    a = [[complex(x) for x in row] for row in a]
    q = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    tol2 = tol * tol
    for _ in range(max_sweeps):
        off = sum(
            (a[i][j].real ** 2 + a[i][j].imag ** 2) for i in range(n) for j in range(n) if i != j
        )
        if off <= tol2:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p][r]
                mag = abs(apr)
                if mag == 0.0:
                    continue
                # A unitary phase makes the (p, r) block real symmetric, then a
                # real symmetric Schur rotation zeroes it.
                ph = apr / mag
                cph = ph.conjugate()
                tau = (a[r][r].real - a[p][p].real) / (2.0 * mag)
                if tau >= 0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for row in a:
                    xp, xr = row[p], row[r]
                    row[p] = c * xp - s * cph * xr
                    row[r] = s * xp + c * cph * xr
                rp, rr = a[p], a[r]
                a[p] = [c * x - s * ph * y for x, y in zip(rp, rr)]
                a[r] = [s * x + c * ph * y for x, y in zip(rp, rr)]
                a[p][r] = a[r][p] = 0j
                for row in q:
                    xp, xr = row[p], row[r]
                    row[p] = c * xp - s * cph * xr
                    row[r] = s * xp + c * cph * xr
    return np.array([a[i][i].real for i in range(n)]), np.array(q, dtype=complex)


def eigh(
    m,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
    hermitian_tol: float = HERMITIAN_TOL,
) -> SpectralDecomposition:
    """Hermitian eigendecomposition by cyclic Jacobi rotations.

    Eigenvalues are returned in descending order. Each eigenvector is
    phase-normalized so its first nonzero entry is real and positive; ties
    in eigenvalue (within 1e-12) are ordered by comparing the normalized
    vectors' entries lexicographically, largest first.

    Raises:
        NotHermitian: if ``m`` deviates from its adjoint by more than
            ``hermitian_tol``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix of shape {m.shape} is not square")
    resid = hermiticity_residual(m)
    if resid > hermitian_tol:
        raise NotHermitian(f"hermiticity residual {resid:.3e} exceeds {hermitian_tol:.1e}")
    herm = 0.5 * (m + dagger(m))
    lam, vecs = _jacobi(herm, tol, max_sweeps)
    n = len(lam)
    for i in range(n):
        vecs[:, i] = _phase_normalize(vecs[:, i])
    order = sorted(range(n), key=lambda i: -lam[i])
    if any(lam[order[k]] - lam[order[k + 1]] <= TIE_TOL for k in range(n - 1)):

        def key(i):
            entries = tuple(x for z in vecs[:, i] for x in (-round(z.real, 12), -round(z.imag, 12)))
            return (-round(float(lam[i]), 12), entries)

        order = sorted(range(n), key=key)
    return SpectralDecomposition(lam[order], vecs[:, order])


@dataclass(frozen=True)
class DensityDiagnostics:
    hermiticity_residual: float
    trace_residual: float
    min_eigenvalue: float
    passed: bool

    def describe(self) -> str:
        return (
            f"hermiticity={self.hermiticity_residual:.3e} "
            f"|tr-1|={self.trace_residual:.3e} min_eig={self.min_eigenvalue:.3e}"
        )


def validate_density(m, tol: float = DENSITY_TOL) -> DensityDiagnostics:
    """Check Hermiticity, unit trace and positivity. Never raises on bad input."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return DensityDiagnostics(float("inf"), float("inf"), float("-inf"), False)
    herm_res = hermiticity_residual(m)
    trace_res = abs(np.trace(m) - 1.0)
    lam = _jacobi(0.5 * (m + dagger(m)), JACOBI_TOL, JACOBI_MAX_SWEEPS)[0]
    min_eig = float(np.min(lam))
    passed = herm_res <= tol and trace_res <= tol and min_eig >= -tol
    return DensityDiagnostics(herm_res, float(trace_res), min_eig, bool(passed))
