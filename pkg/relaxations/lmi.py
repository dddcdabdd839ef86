"""Affine symmetric-matrix maps M(z) = M_0 + Σ z_k M_k and their conic form.

Every dual program here reads  minimize c^T z  subject to  M(z) ⪯ 0  with a
subset of the z_k constrained nonnegative.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from errors import LmiShapeError
from sdp import cones
from sdp.linalg import SQRT2, svec_dim, sym_eig
from sdp.program import ConicProgram


@dataclass(frozen=True, eq=False)
class AffineLmi:
    order: int
    constant: sp.csr_matrix
    coefficients: Tuple[sp.csr_matrix, ...]
    nonneg: np.ndarray
    objective: np.ndarray
    names: Tuple[str, ...]

    def __post_init__(self):
        n_vars = len(self.coefficients)
        shape = (self.order, self.order)
        if self.constant.shape != shape or any(M.shape != shape for M in self.coefficients):
            raise LmiShapeError(f"every block of the LMI must be {shape}")
        if self.nonneg.shape != (n_vars,) or self.objective.shape != (n_vars,) or len(self.names) != n_vars:
            raise LmiShapeError(f"variable metadata does not match {n_vars} coefficient matrices")
        for M in (self.constant,) + tuple(self.coefficients):
            if abs(M - M.T).max() > 1e-12 * max(1.0, abs(M).max()):
                raise LmiShapeError("LMI blocks must be symmetric")

    @property
    def n_vars(self) -> int:
        return len(self.coefficients)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.float64)
        if z.shape != (self.n_vars,):
            raise LmiShapeError(f"assignment has shape {z.shape}, LMI has {self.n_vars} variables")
        total = self.constant.toarray()
        for value, M in zip(z, self.coefficients):
            if value:
                total += value * M.toarray()
        return total

    def tightest(self, z, name: str) -> float:
        """Smallest value of variable `name` for which M(z) ⪯ 0, the other variables held at z.

        The variable's coefficient must be -diag(d) with d in {0, 1}. Nonneg
        variables are clipped at zero first. Returns inf when no value works.
        """
        k = self.index(name)
        coefficient = self.coefficients[k].toarray()
        support = -np.diag(coefficient)
        if np.any(coefficient != np.diag(-support)) or not np.all(np.isin(support, (0.0, 1.0))):
            raise LmiShapeError(f"coefficient of {name!r} is not minus a 0/1 diagonal")
        z = np.where(self.nonneg, np.maximum(z, 0.0), np.asarray(z, dtype=np.float64))
        z[k] = 0.0
        rest = self.evaluate(z)
        S, T = support == 1.0, support == 0.0
        schur = rest[np.ix_(S, S)]
        if T.any():
            values, vectors = sym_eig(rest[np.ix_(T, T)])
            if values[-1] >= -1e-12 * max(1.0, float(np.max(np.abs(rest)))):
                return np.inf
            cross = rest[np.ix_(S, T)] @ vectors
            schur = schur - (cross / values) @ cross.T
        return float(sym_eig(schur)[0][-1])


class LmiBuilder:
    """Accumulates symmetric entries per variable; `None` addresses the constant term"""

    def __init__(self, order: int):
        if order <= 0:
            raise LmiShapeError(f"LMI order must be positive, got {order}")
        self.order = order
        self._names: List[str] = []
        self._nonneg: List[bool] = []
        self._objective: List[float] = []
        self._entries = {None: ([], [], [])}

    def variable(self, name: str, nonneg: bool = False, cost: float = 0.0) -> int:
        if name in self._names:
            raise LmiShapeError(f"variable {name!r} declared twice")
        self._names.append(name)
        self._nonneg.append(nonneg)
        self._objective.append(cost)
        index = len(self._names) - 1
        self._entries[index] = ([], [], [])
        return index

    def _check(self, row: int, col: int, shape):
        if row < 0 or col < 0 or row + shape[0] > self.order or col + shape[1] > self.order:
            raise LmiShapeError(f"block of shape {shape} at ({row}, {col}) overflows order {self.order}")

    def add(self, var: Optional[int], row: int, col: int, value: float):
        """Add `value` at (row, col) and at (col, row)"""
        self.add_block(var, row, col, np.array([[value]], dtype=np.float64))

    def add_block(self, var: Optional[int], row: int, col: int, block):
        """Add a dense block at (row, col) and its transpose at (col, row).

        A block sitting on the diagonal (row == col) must itself be symmetric
        and is added once.
        """
        block = np.atleast_2d(np.asarray(block, dtype=np.float64))
        self._check(row, col, block.shape)
        if var not in self._entries:
            raise LmiShapeError(f"unknown variable index {var}")
        rows, cols, vals = self._entries[var]
        r, c = np.nonzero(block)
        if r.size == 0:
            return
        rows.append(r + row)
        cols.append(c + col)
        vals.append(block[r, c])
        if row != col:
            rows.append(c + col)
            cols.append(r + row)
            vals.append(block[r, c])

    def _matrix(self, key) -> sp.csr_matrix:
        rows, cols, vals = self._entries[key]
        if not rows:
            return sp.csr_matrix((self.order, self.order))
        return sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.order, self.order),
        )

    def build(self) -> AffineLmi:
        return AffineLmi(
            order=self.order,
            constant=self._matrix(None),
            coefficients=tuple(self._matrix(k) for k in range(len(self._names))),
            nonneg=np.array(self._nonneg, dtype=bool),
            objective=np.array(self._objective, dtype=np.float64),
            names=tuple(self._names),
        )


def sparse_svec(M: sp.spmatrix) -> sp.csr_matrix:
    """svec of a sparse symmetric matrix as a 1 x svec_dim row"""
    coo = sp.tril(M, format="coo")
    scale = np.where(coo.row == coo.col, 1.0, SQRT2)
    positions = coo.row * (coo.row + 1) // 2 + coo.col
    return sp.csr_matrix(
        (coo.data * scale, (np.zeros_like(positions), positions)),
        shape=(1, svec_dim(M.shape[0])),
    )


def lmi_to_conic(lmi: AffineLmi) -> ConicProgram:
    """Nonneg rows for flagged variables first, then one PSD block holding -M(z)"""
    n = lmi.n_vars
    if n == 0:
        raise LmiShapeError("LMI has no decision variables")
    flagged = np.flatnonzero(lmi.nonneg)
    blocks, rhs, cone_list = [], [], []
    if flagged.size:
        select = sp.csr_matrix((-np.ones(flagged.size), (np.arange(flagged.size), flagged)), shape=(flagged.size, n))
        blocks.append(select)
        rhs.append(np.zeros(flagged.size))
        cone_list.append(cones.nonneg(flagged.size))

    columns = sp.vstack([sparse_svec(M) for M in lmi.coefficients], format="csr").T
    blocks.append(sp.csr_matrix(columns))
    rhs.append(-sparse_svec(lmi.constant).toarray().ravel())
    cone_list.append(cones.psd(lmi.order))

    return ConicProgram(
        c=lmi.objective,
        A=sp.vstack(blocks, format="csc"),
        b=np.concatenate(rhs),
        cones=tuple(cone_list),
    )
