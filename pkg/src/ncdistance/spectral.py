"""Dense self-adjoint eigensolver, commutators and operator norms.

Also hosts the four elementary bounds on the norm of a skew tridiagonal
matrix ``B`` with ``B[i, i+1] = b_i`` and ``B[i+1, i] = -conj(b_i)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .graph import DiracOperator

SYMMETRY_TOL = 1e-8


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns


class ChainNormBounds(NamedTuple):
    lower1: float
    lower2: float
    upper1: float
    upper2: float

    @property
    def lower(self) -> float:
        return max(self.lower1, self.lower2)

    @property
    def upper(self) -> float:
        return min(self.upper1, self.upper2)


def _asymmetry(m: np.ndarray, sign: int) -> float:
    return float(np.abs(m - sign * m.conj().T).max(initial=0.0))


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.abs(m).max(initial=0.0)))


def eigh(h) -> SpectralDecomposition:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if _asymmetry(h, 1) > SYMMETRY_TOL * _scale(h):
        raise ValueError("matrix is not Hermitian")
    # LAPACK reads one triangle only; symmetrize so both halves agree
    lam, u = np.linalg.eigh((h + h.conj().T) / 2)
    return SpectralDecomposition(lam, u)


def commutator(D: DiracOperator | np.ndarray, a) -> np.ndarray:
    """``[D, diag(a)]``, i.e. the matrix with entries ``D[p, q] * (a[q] - a[p])``."""
    m = D.matrix if isinstance(D, DiracOperator) else np.asarray(D)
    a = np.asarray(a, dtype=float)
    if a.shape != (m.shape[0],):
        raise ValueError(f"potential of length {a.shape} does not match dimension {m.shape[0]}")
    return m * (a[None, :] - a[:, None])


def hermitian_form(m: np.ndarray) -> np.ndarray:
    """Return ``m`` if Hermitian, ``1j * m`` if skew-Hermitian."""
    m = np.asarray(m)
    tol = SYMMETRY_TOL * _scale(m)
    if _asymmetry(m, 1) <= tol:
        return m
    if _asymmetry(m, -1) <= tol:
        return 1j * m
    raise ValueError("matrix is neither Hermitian nor skew-Hermitian")


def operator_norm(m) -> float:
    """Spectral norm of a Hermitian or skew-Hermitian matrix."""
    h = hermitian_form(m)
    if h.size == 0:
        return 0.0
    lam = eigh(h).eigenvalues
    return float(max(-lam[0], lam[-1], 0.0))


def skew_tridiagonal(b) -> np.ndarray:
    b = np.asarray(b)
    n = len(b) + 1
    m = np.zeros((n, n), dtype=complex if np.iscomplexobj(b) else float)
    k = np.arange(n - 1)
    m[k, k + 1] = b
    m[k + 1, k] = -np.conj(b)
    return m


def chain_norm_bounds(b) -> ChainNormBounds:
    """Two lower and two upper bounds on ``||skew_tridiagonal(b)||``.

    With ``n = len(b) + 1``:

    - ``lower1 = max_i sqrt(|b_i|^2 + |b_{i+1}|^2)``
    - ``lower2 = (2/n) * sum_i |b_i|``
    - ``upper1 = max_i (|b_i| + |b_{i+1}|)``
    - ``upper2 = 2 cos(pi/(n+1)) * max_i |b_i|``

    For a single entry the neighbour-pair bounds degrade to ``|b_1|``.
    """
    x = np.abs(np.asarray(b))
    if x.size == 0:
        raise ValueError("need at least one off-diagonal entry")
    n = x.size + 1
    if x.size == 1:
        lower1 = upper1 = float(x[0])
    else:
        lower1 = float(np.max(np.hypot(x[:-1], x[1:])))
        upper1 = float(np.max(x[:-1] + x[1:]))
    lower2 = 2.0 * float(x.sum()) / n
    upper2 = 2.0 * math.cos(math.pi / (n + 1)) * float(x.max())
    return ChainNormBounds(lower1, lower2, upper1, upper2)
