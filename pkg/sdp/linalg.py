"""Dense symmetric matrices, eigendecomposition, PSD projection and the svec convention."""

from functools import lru_cache

import numpy as np

SQRT2 = np.sqrt(2.0)


class SymMatrix:
    """Dense symmetric matrix with read-only storage"""

    def __init__(self, data, symmetrize: bool = False, atol: float = 1e-12):
        data = np.array(data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] == 0:
            raise ValueError(f"symmetric matrix must be square and non-empty, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("symmetric matrix contains a non-finite entry")
        if symmetrize:
            data = 0.5 * (data + data.T)
        else:
            scale = max(1.0, float(np.max(np.abs(data))))
            if np.max(np.abs(data - data.T)) > atol * scale:
                raise ValueError("matrix is not symmetric; pass symmetrize=True to use its symmetric part")
            data = 0.5 * (data + data.T)
        data.setflags(write=False)
        self._data = data

    @classmethod
    def symmetric_part(cls, data) -> "SymMatrix":
        return cls(data, symmetrize=True)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def order(self) -> int:
        return self._data.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __repr__(self):
        return f"SymMatrix(order={self.order})"


def _as_array(M) -> np.ndarray:
    return M.data if isinstance(M, SymMatrix) else np.asarray(M, dtype=np.float64)


def sym_eig(M):
    """Eigenvalues ascending and orthonormal eigenvectors as columns"""
    data = _as_array(M)
    if not np.all(np.isfinite(data)):
        raise ValueError("cannot decompose a matrix with non-finite entries")
    values, vectors = np.linalg.eigh(0.5 * (data + data.T))
    return values, vectors


def project_psd(M) -> SymMatrix:
    """Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped to zero)"""
    return SymMatrix(_project_psd_array(_as_array(M)), symmetrize=True)


def _project_psd_array(data: np.ndarray) -> np.ndarray:
    values, vectors = sym_eig(data)
    if values[0] >= 0:
        return 0.5 * (data + data.T)
    clipped = np.maximum(values, 0.0)
    projected = (vectors * clipped) @ vectors.T
    return 0.5 * (projected + projected.T)


@lru_cache(maxsize=64)
def _tril(order: int):
    rows, cols = np.tril_indices(order)
    scale = np.where(rows == cols, 1.0, SQRT2)
    for array in (rows, cols, scale):
        array.setflags(write=False)
    return rows, cols, scale


def svec_dim(order: int) -> int:
    return order * (order + 1) // 2


def svec_index(row: int, col: int) -> int:
    """Position of entry (row, col) in svec; lower triangle stored row by row"""
    if col > row:
        row, col = col, row
    return row * (row + 1) // 2 + col


def svec(M) -> np.ndarray:
    """Lower triangle with off-diagonals scaled by √2, so <svec A, svec B> = tr(AB)"""
    data = _as_array(M)
    rows, cols, scale = _tril(data.shape[0])
    return data[rows, cols] * scale


def order_from_svec_dim(dim: int) -> int:
    order = int(round((np.sqrt(8 * dim + 1) - 1) / 2))
    if svec_dim(order) != dim:
        raise ValueError(f"{dim} is not a triangular number")
    return order


def smat(vector, order: int = None) -> np.ndarray:
    """Inverse of svec"""
    vector = np.asarray(vector, dtype=np.float64)
    order = order_from_svec_dim(vector.shape[0]) if order is None else order
    rows, cols, scale = _tril(order)
    out = np.zeros((order, order))
    out[rows, cols] = vector / scale
    out[cols, rows] = vector / scale
    return out
