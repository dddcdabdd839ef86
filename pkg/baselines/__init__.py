# Reference methods: norm product, brute force, sampling, rounding
from baselines.brute_force import brute_force_fgl
from baselines.norm_product import matrix_norm_product
from baselines.rounding import RoundingOutcome, round_hyperplane, rounding_lower_bound
from baselines.sampling import sample_lower_bound

__all__ = [
    "RoundingOutcome",
    "brute_force_fgl",
    "matrix_norm_product",
    "round_hyperplane",
    "rounding_lower_bound",
    "sample_lower_bound",
]
