"""Cut-norm instances as two-layer FGL instances.

For B = [A; e_mᵀA] and the network x -> 1ᵀ relu(Bᵀ x), a pattern v in {0,1}^n
has gradient r' = B v = (A v, Σ_i (A v)_i), so

    ||B v||_1 = Σ|r_i| + |Σ r_i| = 2 max(Σ r_i⁺, Σ r_i⁻)

and FGL_∞ is twice the larger of CN(A) and CN(-A).
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np
from pydantic import TypeAdapter, ValidationError

from baselines.brute_force import pattern_slopes
from config import DEFAULT_CUTNORM_CAP
from errors import CapExceededError, MatrixFormatError
from network.models import DenseLayer, Network, ScalarNetwork

logger = logging.getLogger(__name__)

_MATRIX_ADAPTER = TypeAdapter(List[List[float]])


def _as_matrix(A) -> np.ndarray:
    try:
        A = np.array(A, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise MatrixFormatError(f"cut-norm instance is not a rectangular numeric matrix: {e}") from e
    if A.ndim != 2 or A.size == 0:
        raise MatrixFormatError(f"cut-norm instance must be a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise MatrixFormatError("cut-norm instance contains a non-finite entry")
    A.setflags(write=False)
    return A


@dataclass(frozen=True, eq=False)
class CutNormInstance:
    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _as_matrix(self.A))

    @property
    def shape(self):
        return self.A.shape

    @classmethod
    def from_json(cls, data) -> "CutNormInstance":
        try:
            rows = _MATRIX_ADAPTER.validate_json(data)
        except ValidationError as e:
            raise MatrixFormatError(f"matrix document is not a 2-D array of numbers: {e.errors()[0]['msg']}") from e
        if len({len(row) for row in rows}) > 1:
            raise MatrixFormatError("matrix rows have different lengths")
        return cls(rows)

    @classmethod
    def read(cls, path) -> "CutNormInstance":
        path = Path(path)
        try:
            return cls.from_json(path.read_bytes())
        except OSError as e:
            raise MatrixFormatError(f"cannot read matrix file {path}: {e}") from e

    def to_network(self) -> ScalarNetwork:
        return cutnorm_to_network(self.A)

    def cut_norm(self, cap: int = DEFAULT_CUTNORM_CAP) -> float:
        return cut_norm_brute(self.A, cap)

    def two_sided(self, cap: int = DEFAULT_CUTNORM_CAP) -> float:
        return cut_norm_two_sided(self.A, cap)


def cutnorm_to_network(A) -> ScalarNetwork:
    """Input dim m + 1, hidden width n, first weights Bᵀ with B = [A; e_mᵀA], all-ones output row"""
    A = _as_matrix(A)
    B = np.vstack([A, A.sum(axis=0, keepdims=True)])
    n = A.shape[1]
    hidden = DenseLayer(B.T, np.zeros(n))
    output = DenseLayer(np.ones((1, n)), np.zeros(1))
    return ScalarNetwork(Network(B.shape[0], (hidden, output), 0.0, 1.0, "relu"))


def cut_norm_brute(A, cap: int = DEFAULT_CUTNORM_CAP) -> float:
    """max ⟨Ax, y⟩ over x in {0,1}^n, y in {0,1}^m.

    Only the smaller side is enumerated: once one side is fixed, the best
    choice on the other keeps exactly the positive entries.
    """
    A = _as_matrix(A)
    m, n = A.shape
    if m + n > cap:
        raise CapExceededError(f"cut norm of a {m}x{n} matrix exceeds the enumeration cap of {cap}")
    if n > m:
        A = A.T
    side = A.shape[1]
    selections = pattern_slopes(np.arange(1 << side), [side], 0.0, 1.0)[0]
    values = np.maximum(selections @ A.T, 0.0).sum(axis=1)
    return float(np.max(values))


def cut_norm_two_sided(A, cap: int = DEFAULT_CUTNORM_CAP) -> float:
    """max(CN(A), CN(-A)), the quantity the reduction network realizes at half its FGL_∞"""
    A = _as_matrix(A)
    return max(cut_norm_brute(A, cap), cut_norm_brute(-A, cap))
