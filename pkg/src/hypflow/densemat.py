"""Dense square matrix arithmetic: validation, determinants, norms, shifts.

Matrices are plain numpy arrays; the helpers here validate them once at the
API boundary so downstream code can assume square shape and finite entries.
All distances and perturbation sizes in this package are measured in the
operator 2-norm (largest singular value).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch


def as_matrix(a) -> np.ndarray:
    """Validate and return a square real matrix as a float64 array copy."""
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_complex_matrix(a) -> np.ndarray:
    """Validate and return a square complex matrix as a complex128 array copy."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _lu_decompose(a: np.ndarray):
    """LU factorization with partial (row) pivoting, in place on a copy.

    Returns (lu, piv, sign) where lu packs L (unit lower) and U, piv is the
    pivot row chosen at each elimination step, and sign is the permutation
    parity (+1 or -1). Works for real and complex input.
    """
    lu = a.copy()
    n = lu.shape[0]
    piv = np.arange(n)
    sign = 1.0
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            piv[[k, p]] = piv[[p, k]]
            sign = -sign
        pivot = lu[k, k]
        if pivot == 0:
            continue
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv, sign


def det(a) -> float | complex:
    """Determinant via LU with partial pivoting; sign tracks row swaps.

    Real input returns a float, complex input a complex number. Singular
    matrices return 0 up to rounding.
    """
    m = np.asarray(a)
    m = as_complex_matrix(m) if np.iscomplexobj(m) else as_matrix(m)
    lu, _, sign = _lu_decompose(m)
    d = sign * np.prod(np.diag(lu))
    if not np.iscomplexobj(m):
        return float(np.real(d))
    return complex(d)


def solve(a, b) -> np.ndarray:
    """Solve a x = b by LU with partial pivoting (b: vector or matrix)."""
    m = np.asarray(a)
    m = as_complex_matrix(m) if np.iscomplexobj(m) else as_matrix(m)
    rhs = np.array(b, dtype=m.dtype)
    if rhs.shape[0] != m.shape[0]:
        raise DimensionMismatch(
            f"rhs has {rhs.shape[0]} rows, matrix is {m.shape[0]}x{m.shape[0]}"
        )
    lu, piv, _ = _lu_decompose(m)
    n = m.shape[0]
    x = rhs[piv].astype(m.dtype, copy=True)
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] -= lu[k, k + 1:] @ x[k + 1:]
        x[k] /= lu[k, k]
    return x


def op_norm2(a) -> float:
    """Operator 2-norm: square root of the largest eigenvalue of A^T A."""
    m = np.asarray(a)
    m = as_complex_matrix(m) if np.iscomplexobj(m) else as_matrix(m)
    if not m.any():
        return 0.0
    # scale out the magnitude so the Gram matrix cannot overflow
    scale = float(np.max(np.abs(m)))
    ms = m / scale
    from .spectral import hermitian_eigs

    gram = ms.conj().T @ ms
    gram = 0.5 * (gram + gram.conj().T)
    eigs = hermitian_eigs(gram)
    return scale * float(np.sqrt(max(eigs[-1], 0.0)))


def shift(a, eps: float) -> np.ndarray:
    """Return A + eps*I."""
    m = as_matrix(a)
    return m + eps * np.eye(m.shape[0])
