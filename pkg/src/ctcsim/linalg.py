"""Dense complex matrix kernel.

Matrices are plain ``numpy`` complex arrays. Everything here is a pure
function of its arguments; inputs are never modified in place.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, NotHermitianError

TOL_HERM = 1e-10
TOL_EIG = 1e-10
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def check_shape(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d <= 0 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    if math.prod(dims) != size:
        raise DimensionError(
            f"subsystem dimensions {dims} (product {math.prod(dims)}) do not match "
            f"matrix dimension {size}"
        )
    return dims


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*ms) -> np.ndarray:
    out = as_matrix(ms[0])
    for m in ms[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def partial_trace(m, dims: Sequence[int], traced_index: int) -> np.ndarray:
    """Trace out tensor factor ``traced_index`` of a square matrix.

    ``dims`` lists the local dimensions of every factor, most significant
    first. Any factor of an n-partite operator may be traced.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"partial trace needs a square matrix, got {m.shape}")
    dims = check_shape(dims, m.shape[0])
    n = len(dims)
    if not 0 <= traced_index < n:
        raise DimensionError(f"traced_index {traced_index} out of range for {n} factors")
    t = m.reshape(dims + dims)
    t = np.trace(t, axis1=traced_index, axis2=n + traced_index)
    keep = math.prod(dims) // dims[traced_index]
    return t.reshape(keep, keep)


def reduce_to(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced matrix on the factors listed in ``keep`` (in original order)."""
    m = as_matrix(m)
    dims = check_shape(dims, m.shape[0])
    keep = sorted(set(int(k) for k in keep))
    out, cur = m, list(dims)
    for idx in reversed(range(len(dims))):
        if idx not in keep:
            out = partial_trace(out, cur, idx)
            del cur[idx]
    return out


def partial_transpose(m, dims: Sequence[int], index: int) -> np.ndarray:
    """Transpose tensor factor ``index`` of a square matrix."""
    m = as_matrix(m)
    dims = check_shape(dims, m.shape[0])
    n = len(dims)
    if not 0 <= index < n:
        raise DimensionError(f"index {index} out of range for {n} factors")
    axes = list(range(2 * n))
    axes[index], axes[n + index] = axes[n + index], axes[index]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def embed(op, dims: Sequence[int], index: int) -> np.ndarray:
    """``I ⊗ ... ⊗ op ⊗ ... ⊗ I`` with ``op`` acting on factor ``index``."""
    op = as_matrix(op)
    dims = tuple(int(d) for d in dims)
    if op.shape != (dims[index], dims[index]):
        raise DimensionError(f"operator of shape {op.shape} cannot act on a factor of dim {dims[index]}")
    factors = [np.eye(d) for d in dims]
    factors[index] = op
    return kron_all(*factors)


def hermiticity_error(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and hermiticity_error(m) <= tol


def _jacobi_pair(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero ``a[p, q]`` with one complex Jacobi rotation, in place."""
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    app = a[p, p].real
    aqq = a[q, q].real
    theta = (aqq - app) / (2.0 * mag)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    # Phase-fix the pair to a real symmetric block, then rotate it.
    g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = dagger(g) @ a[idx, :]
    v[:, idx] = v[:, idx] @ g
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def eig_hermitian(m, tol_herm: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in
    ascending order and orthonormal eigenvector columns.

    Raises:
        NotHermitianError: if ``max |m - m^dagger|`` exceeds ``tol_herm``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"eigendecomposition needs a square matrix, got {m.shape}")
    dev = hermiticity_error(m)
    if dev > tol_herm:
        raise NotHermitianError(dev, tol_herm)
    n = m.shape[0]
    a = 0.5 * (m + dagger(m))
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(float(np.sum(np.abs(a[off_mask]) ** 2)))
        if off < JACOBI_OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > 1e-300:
                    _jacobi_pair(a, v, p, q)
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigvals_hermitian(m, tol_herm: float = TOL_HERM) -> np.ndarray:
    """Ascending eigenvalues; 2 x 2 matrices use the closed form."""
    m = as_matrix(m)
    if m.shape == (2, 2):
        dev = hermiticity_error(m)
        if dev > tol_herm:
            raise NotHermitianError(dev, tol_herm)
        a, d = m[0, 0].real, m[1, 1].real
        mid, half = 0.5 * (a + d), math.hypot(0.5 * (a - d), abs(m[0, 1]))
        return np.array([mid - half, mid + half])
    return eig_hermitian(m, tol_herm)[0]


def matrix_function(m, fn, tol_herm: float = TOL_HERM) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix spectrally."""
    w, v = eig_hermitian(m, tol_herm)
    return (v * fn(w)) @ dagger(v)


def trace_norm(m, tol_herm: float = TOL_HERM) -> float:
    """Schatten-1 norm of a Hermitian matrix."""
    return float(np.sum(np.abs(eigvals_hermitian(m, tol_herm))))


def max_abs(m) -> float:
    return float(np.max(np.abs(np.asarray(m))))


def vec(m) -> np.ndarray:
    """Column-stacking vectorisation."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


def superoperator(channel, d: int) -> np.ndarray:
    """Liouville matrix ``L`` of a linear map so that ``vec(channel(X)) = L vec(X)``."""
    cols = []
    for j in range(d):
        for i in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = 1.0
            cols.append(vec(channel(e)))
    return np.stack(cols, axis=1)


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of d x d Hermitian matrices over the reals."""
    basis = []
    for i in range(d):
        e = np.zeros((d, d), dtype=np.complex128)
        e[i, i] = 1.0
        basis.append(e)
    r = 1.0 / math.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = e[j, i] = r
            basis.append(e)
            f = np.zeros((d, d), dtype=np.complex128)
            f[i, j] = -1j * r
            f[j, i] = 1j * r
            basis.append(f)
    return basis
