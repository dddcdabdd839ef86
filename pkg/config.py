import math
import os
from pathlib import Path

# Network file format
NET_FORMAT = "geolip-net-v1"
ACTIVATION_KINDS = ("relu", "leaky_relu", "generic")

# Corpus Paths
DATA_DIR = Path(os.environ.get("GEOLIP_DATA_DIR", "nets"))
REPORT_DIR = Path("reports")
DATA_PATHS = {
    "example": DATA_DIR / "example_221.json",
    "two_layer": DATA_DIR / "two_layer",
    "three_layer": DATA_DIR / "three_layer",
    "sign_matrices": DATA_DIR / "sign_matrices",
    "manifest": DATA_DIR / "manifest.csv",
}

# Solver defaults
SOLVER_DEFAULTS = {
    "eps_abs": 1e-7,
    "eps_rel": 1e-7,
    "eps_infeasible": 1e-6,
    "max_iters": 100_000,
    "scale": True,
    "rho": 0.1,
    "sigma": 1e-6,
    "alpha": 1.6,
    "adaptive_rho_interval": 25,
    "check_interval": 5,
    "log_interval": 1000,
    "equilibration_passes": 15,
}
RHO_BOUNDS = (1e-6, 1e6)
RHO_UPDATE_RATIO = 3.0

# Method defaults
DEFAULT_BRUTE_CAP = 20
DEFAULT_CUTNORM_CAP = 22
DEFAULT_SAMPLES = 200_000
DEFAULT_ROUNDS = 1000
DEFAULT_SEED = 0
DEFAULT_SCALE = 1.0
DEFAULT_OUTPUT_INDEX = 0
SAMPLE_BOX = (0.0, 1.0)
BRUTE_CHUNK = 1 << 14
SAMPLE_CHUNK = 4096
ROUNDING_DIAG_TOL = 1e-3
N_JOBS = int(os.environ.get("GEOLIP_N_JOBS", "1"))

# Benchmark sweeps: two-layer widths, then depths of BENCH_DEPTH_WIDTH-unit layers
BENCH_WIDTHS = (8, 16, 64, 128, 256)
BENCH_DEPTHS = (3, 7, 8)
BENCH_DEPTH_WIDTH = 64
BENCH_INPUT_DIM = 16
BENCH_OUTPUTS = 10
BENCH_REPORT_INDEX = 8
BENCH_METHODS = ("ngeolip", "dgeolip", "lipsdp", "mp", "brute", "sample")

# Approximation factors and check tolerances
GROTHENDIECK_BOUND = 1.783
L2_APPROX_FACTOR = math.sqrt(math.pi / 2)
DUALITY_RTOL = 1e-3
DUALITY_ATOL = 1e-6
SANDWICH_SLACK = 1e-6

# Methods and norms
NORMS = ("linf", "l2")
METHODS = ("ngeolip", "dgeolip", "lipsdp", "mp", "brute", "sample", "round")
SDP_METHODS = ("ngeolip", "dgeolip", "lipsdp")

# CLI exit codes
EXIT_CODES = {
    "ok": 0,
    "bad_input": 2,
    "method_depth": 3,
    "solver": 4,
    "invariant": 5,
}

LOG_LEVEL = os.environ.get("GEOLIP_LOG_LEVEL", "WARNING")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
