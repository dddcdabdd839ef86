# Cut-norm hardness reduction as an executable oracle
from reductions.cutnorm import CutNormInstance, cut_norm_brute, cut_norm_two_sided, cutnorm_to_network

__all__ = ["CutNormInstance", "cut_norm_brute", "cut_norm_two_sided", "cutnorm_to_network"]
