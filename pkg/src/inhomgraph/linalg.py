"""Cyclic Jacobi eigensolver and the inverse square root of an SPD matrix."""

from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError

OFF_TOL = 1e-13
MAX_SWEEPS = 100
MIN_EIGENVALUE = 1e-12


def jacobi_eigh(a: np.ndarray, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||a||_F)``. Returns ``(eigenvalues, eigenvectors)`` with
    eigenvectors in the columns.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(a)))
    upper = np.triu_indices(n, k=1)
    for _ in range(max_sweeps):
        # Summing the off-diagonal entries directly avoids cancellation.
        off = math.sqrt(2.0) * float(np.linalg.norm(a[upper]))
        if off < tol * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta**2 would overflow
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def inv_sqrt(s: np.ndarray) -> np.ndarray:
    """Symmetric ``A`` with ``A @ s @ A = I`` for symmetric positive definite ``s``."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {s.shape}")
    if not np.allclose(s, s.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(s).max()))):
        raise ValidationError("matrix is not symmetric")
    vals, vecs = jacobi_eigh(0.5 * (s + s.T))
    if vals.min() <= MIN_EIGENVALUE:
        raise ValidationError(f"matrix is not positive definite (smallest eigenvalue {vals.min():.3e})")
    return (vecs / np.sqrt(vals)) @ vecs.T
