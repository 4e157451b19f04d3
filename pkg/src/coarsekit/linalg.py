"""Dense complex linear algebra helpers.

Everything operates on plain ``numpy`` arrays of dtype complex128.  The one
project-wide convention that matters: vectorization is column-stacking
(Fortran order), so ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

# Relative threshold below which a singular value counts as zero.
RANK_TOL = 1e-10

HERMITIAN_TOL = 1e-10


def asmatrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro"))


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a*)/2."""
    return (a + a.conj().T) / 2


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return frob(a - a.conj().T) <= tol * max(1.0, frob(a))


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(a).flatten(order="F")


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    if cols is None:
        cols = rows
    v = np.asarray(v)
    if v.size != rows * cols:
        raise DimensionMismatch(f"cannot reshape length {v.size} into {rows}x{cols}")
    return v.reshape(rows, cols, order="F")


class EigenDecomposition(NamedTuple):
    """Eigenvalues ascending, eigenvectors as orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray


def hermitian_eig(a, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotHermitian if ``a`` deviates from its adjoint by more than
    ``tol * ||a||_F``, and NoConvergence if the underlying solver fails.
    """
    m = asmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"square matrix required, got {m.shape}")
    if frob(m - m.conj().T) > tol * max(1.0, frob(m)):
        raise NotHermitian(f"asymmetry {frob(m - m.conj().T):.3e} exceeds tolerance")
    try:
        values, vectors = np.linalg.eigh(hermitize(m))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise NoConvergence(str(exc)) from exc
    return EigenDecomposition(values, vectors)


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``a = u @ diag(s) @ v.conj().T`` with s descending."""
    m = asmatrix(a)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc
    return u, s, vh.conj().T


def pinv(a, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse.

    Singular values below ``rank_tol * s_max`` are treated as exactly zero.
    """
    m = asmatrix(a)
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    return np.linalg.pinv(m, rcond=rank_tol)


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``(a kron b)[i*rb+k, j*cb+l] = a[i,j] * b[k,l]``."""
    return np.kron(asmatrix(a), asmatrix(b))


def kernel_basis(a, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the (right) null space, as columns.

    Returns a ``(cols, k)`` array; ``k`` may be zero.
    """
    m = asmatrix(a)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    cutoff = rank_tol * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vh.conj().T[:, rank:]


def partial_trace(a, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Partial trace of an operator on a bipartite space of shape dA*dB.

    ``keep="A"`` traces out the second factor, ``keep="B"`` the first.
    """
    dA, dB = dims
    m = asmatrix(a)
    if m.shape != (dA * dB, dA * dB):
        raise DimensionMismatch(f"expected {(dA * dB, dA * dB)}, got {m.shape}")
    t = m.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def trace_norm(a, tol: float = HERMITIAN_TOL) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    m = asmatrix(a)
    if not is_hermitian(m, tol):
        raise NotHermitian("trace_norm requires a Hermitian argument")
    return float(np.abs(np.linalg.eigvalsh(hermitize(m))).sum())
