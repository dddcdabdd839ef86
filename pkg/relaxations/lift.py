"""Cube lift: slope vertices {a,b}^n written as ±1 vectors plus a homogenizer τ.

With y = ((b-a) t + (a+b) τ) / 2 and τ = 1, every t in {±1}^n lands on a
vertex of [a,b]^n, and A y = G (t, τ) / 2 for G = [(b-a) A, (a+b) A e_n].
For ReLU slopes G reduces to [A, A e_n]. Flipping (t, τ) to (-t, -τ) leaves
both lifted objectives unchanged, so the constraint τ = 1 can be dropped.
"""

from dataclasses import dataclass

import numpy as np

from errors import RoundingInputError


def lifted_columns(A, slope_min: float = 0.0, slope_max: float = 1.0) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    return np.hstack([(slope_max - slope_min) * A, (slope_min + slope_max) * A.sum(axis=1, keepdims=True)])


@dataclass(frozen=True, eq=False)
class CubeLift:
    """Lifted objective matrix and the bookkeeping to map ±1 points back to slopes.

    `n` is the hidden width (original cube dimension). For ℓ∞ the matrix has
    order n + 1 + m over coordinates (t, τ, s) with s the sign vector dual to
    the ℓ1 norm; for ℓ2 it is the Gram matrix G^T G of order n + 1.
    """

    n: int
    slope_min: float
    slope_max: float
    matrix: np.ndarray
    norm: str

    @classmethod
    def for_linf(cls, A, slope_min: float = 0.0, slope_max: float = 1.0) -> "CubeLift":
        G = lifted_columns(A, slope_min, slope_max)
        m, n1 = G.shape
        B = np.zeros((n1 + m, n1 + m))
        B[n1:, :n1] = G
        return cls(n1 - 1, slope_min, slope_max, B, "linf")

    @classmethod
    def for_l2(cls, A, slope_min: float = 0.0, slope_max: float = 1.0) -> "CubeLift":
        G = lifted_columns(A, slope_min, slope_max)
        return cls(G.shape[1] - 1, slope_min, slope_max, G.T @ G, "l2")

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    @property
    def tau_index(self) -> int:
        return self.n

    def to_vertex(self, signs) -> np.ndarray:
        """Map a ±1 point of the lifted cube to a slope vertex, normalizing τ to +1"""
        signs = np.asarray(signs, dtype=np.float64)
        if signs.shape[-1] < self.n + 1:
            raise RoundingInputError(f"lifted point has {signs.shape[-1]} coordinates, need {self.n + 1}")
        tau = signs[..., self.tau_index:self.tau_index + 1]
        t = signs[..., :self.n] * np.where(tau < 0, -1.0, 1.0)
        return self.slope_min + (self.slope_max - self.slope_min) * (t + 1.0) / 2.0

    def lifted_value(self, signs) -> float:
        """Lifted objective at a ±1 point (sᵀ B z for ℓ∞, zᵀ M̂ z for ℓ2)"""
        z = np.asarray(signs, dtype=np.float64)
        return float(z @ self.matrix @ z)
