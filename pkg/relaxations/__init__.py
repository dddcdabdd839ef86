# SDP relaxations and dual LMI programs for FGL upper bounds
from relaxations.dual import (
    dgeolip,
    dgeolip_linf_2layer,
    dgeolip_linf_multilayer,
    lipsdp,
    lipsdp_l2_2layer,
    lipsdp_l2_multilayer,
)
from relaxations.estimate import Direction, FglEstimate, Norm
from relaxations.lift import CubeLift
from relaxations.lmi import AffineLmi, LmiBuilder, lmi_to_conic
from relaxations.primal import build_matrix_A, ngeolip, ngeolip_l2, ngeolip_linf

__all__ = [
    "AffineLmi",
    "CubeLift",
    "Direction",
    "FglEstimate",
    "LmiBuilder",
    "Norm",
    "build_matrix_A",
    "dgeolip",
    "dgeolip_linf_2layer",
    "dgeolip_linf_multilayer",
    "lipsdp",
    "lipsdp_l2_2layer",
    "lipsdp_l2_multilayer",
    "lmi_to_conic",
    "ngeolip",
    "ngeolip_l2",
    "ngeolip_linf",
]
