"""Cone products over {zero, nonneg, psd} blocks and their Euclidean projections."""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from sdp.linalg import _project_psd_array, smat, svec, svec_dim


class ConeKind(str, Enum):
    ZERO = "zero"
    NONNEG = "nonneg"
    PSD = "psd"


@dataclass(frozen=True)
class ConeBlock:
    """`size` is the row count for zero/nonneg blocks and the matrix order for psd blocks"""

    kind: ConeKind
    size: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ConeKind(self.kind))
        if int(self.size) <= 0:
            raise ValueError(f"cone block size must be positive, got {self.size}")

    @property
    def dim(self) -> int:
        return svec_dim(self.size) if self.kind is ConeKind.PSD else int(self.size)


def zero(size: int) -> ConeBlock:
    return ConeBlock(ConeKind.ZERO, size)


def nonneg(size: int) -> ConeBlock:
    return ConeBlock(ConeKind.NONNEG, size)


def psd(order: int) -> ConeBlock:
    return ConeBlock(ConeKind.PSD, order)


def total_dim(cones: Sequence[ConeBlock]) -> int:
    return sum(cone.dim for cone in cones)


def block_slices(cones: Sequence[ConeBlock]) -> Tuple[slice, ...]:
    slices, start = [], 0
    for cone in cones:
        slices.append(slice(start, start + cone.dim))
        start += cone.dim
    return tuple(slices)


def project(cones: Sequence[ConeBlock], v: np.ndarray, dual: bool = False) -> np.ndarray:
    """Projection onto the cone product, or onto its dual (zero blocks become free)"""
    out = np.empty_like(v)
    for cone, part in zip(cones, block_slices(cones)):
        if cone.kind is ConeKind.ZERO:
            out[part] = v[part] if dual else 0.0
        elif cone.kind is ConeKind.NONNEG:
            out[part] = np.maximum(v[part], 0.0)
        else:
            out[part] = svec(_project_psd_array(smat(v[part], cone.size)))
    return out


def distance(cones: Sequence[ConeBlock], v: np.ndarray, dual: bool = False) -> float:
    if v.size == 0:
        return 0.0
    return float(np.max(np.abs(v - project(cones, v, dual=dual))))
