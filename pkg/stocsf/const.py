from typing import Final

DOMAIN = "stocsf"

INTEGRATION_TITLE = "Stochastic Curve Shortening Flow"

# Time-stepping schemes
SCHEME_EULER_MARUYAMA = "euler_maruyama"
SCHEME_HEUN_STRATONOVICH = "heun_stratonovich"
SCHEME_IMEX = "imex"
SCHEME_DETERMINISTIC = "deterministic"

SCHEMES: Final = [
    SCHEME_EULER_MARUYAMA,
    SCHEME_HEUN_STRATONOVICH,
    SCHEME_IMEX,
    SCHEME_DETERMINISTIC,
]

SCHEME_ALIASES: Final = {
    "em": SCHEME_EULER_MARUYAMA,
    "heun": SCHEME_HEUN_STRATONOVICH,
}

# Transport term of the rescaled curvature equation
TRANSPORT_LITERAL = "literal"
TRANSPORT_ARCLENGTH = "arclength"
TRANSPORTS: Final = [TRANSPORT_LITERAL, TRANSPORT_ARCLENGTH]

# Configuration keys (config file keys mirror the command-line flags)
CONF_INITIAL = "initial"
CONF_SIGMA = "sigma"
CONF_GRID = "grid"
CONF_DT = "dt"
CONF_T_END = "t_end"
CONF_SCHEME = "scheme"
CONF_SEED = "seed"
CONF_TRUNC_N = "trunc_n"
CONF_BLOWUP_F_MAX = "blowup_f_max"
CONF_BLOWUP_L_MIN = "blowup_l_min"
CONF_BLOWUP_L_MAX = "blowup_l_max"
CONF_SNAPSHOT_EVERY = "snapshot_every"
CONF_OUTPUT_DIR = "output_dir"
CONF_ENSEMBLE = "ensemble"
CONF_TRANSPORT = "transport"
CONF_WRITE_CURVES = "write_curves"
CONF_WORKERS = "workers"
CONF_STUDY = "study"
CONF_SEEDS = "seeds"
CONF_REFINEMENTS = "refinements"

OUTPUT_DIR_ENV = "STOCSF_OUTPUT_DIR"

DEFAULT_SIGMA = 0.0
DEFAULT_GRID = 128
DEFAULT_DT = 1e-5
DEFAULT_T_END = 0.1
DEFAULT_SCHEME = SCHEME_EULER_MARUYAMA
DEFAULT_SEED = 0
DEFAULT_BLOWUP_F_MAX = 1e3
DEFAULT_BLOWUP_L_MIN = 5e-2
DEFAULT_BLOWUP_L_MAX = 1e3
# flat profiles have f = 0, so only L can trip a threshold; keep the log-normal tails
FLAT_BLOWUP_L_MIN = 1e-8
FLAT_BLOWUP_L_MAX = 1e8
DEFAULT_OUTPUT_DIR = "stocsf_output"
DEFAULT_TRANSPORT = TRANSPORT_LITERAL
DEFAULT_SEEDS = 8
DEFAULT_REFINEMENTS = 4
DEFAULT_REFERENCE_LEVELS = 3

# Grid and geometry limits
MIN_GRID = 8
MIN_LENGTH = 1e-12
ELLIPSE_SAMPLE_POINTS = 1024
RECONSTRUCTION_OVERSAMPLING = 4  # closure defect and curve output use 4N stations

# Embedding constant relating the sup-norm of f to the stopping-time norm
C_EMBED = 1.0

# Explicit schemes warn above this fraction of the parabolic step limit
CFL_SAFETY = 0.25

MAX_SNAPSHOTS = 2000
ENSEMBLE_SUMMARY_POINTS = 50

# The 1-D circle reference steps this many times finer than the PDE
REFERENCE_REFINEMENT = 100

# Brownian path binary dump: magic, int64 seed, uint64 count, then float64 increments
BMPATH_MAGIC = b"BMPATH01"
BMPATH_HEADER_FORMAT = "<8sqQ"
BMPATH_HEADER_SIZE = 24
UINT64_MASK = 0xFFFFFFFFFFFFFFFF

# Exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BLOWUP = 2

# File names inside the output directory
TRAJECTORY_FILE = "trajectory.jsonl"
DIAGNOSTICS_FILE = "diagnostics.csv"
CURVES_DIR = "curves"
ENSEMBLE_MEMBERS_FILE = "ensemble_members.csv"
ENSEMBLE_SUMMARY_FILE = "ensemble_summary.json"
ORDER_FILE = "order_estimate.csv"
CIRCLE_REFERENCE_FILE = "circle_reference.csv"
