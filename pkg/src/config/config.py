# Logging configuration
LOG_DIR = "logs"
LOG_FILE = "gpdd.log"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_LEVEL = "INFO"

# Environment
ENV_PREFIX = "GPDD_"
THREADS_ENV = "GPDD_THREADS"

# Reproducibility
DEFAULT_SEED = 20240601

# Posterior predictive experiments
DEFAULT_TEST_POINTS = 200

# Surrogate tabular data: label noise SD against a signal of variance about 1
SURROGATE_LABEL_NOISE_SD = 4.0

# Scalar minimization (golden section on a log scale)
GOLDEN_BRACKET = (1e-6, 1e6)
GOLDEN_ITERS = 200

# Quadrature cross-check of the log-determinant limit
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 200

# Whitening
WHITEN_TOL = 1e-10

# 95% confidence intervals under the central limit theorem
CI_Z = 1.96

# Leave-k-out enumeration budget (subsets times held-out points)
CV_EXACT_BUDGET = 100_000

# Output
CSV_HEADER = [
    "metric", "kernel", "n", "d", "c", "gamma", "lambda",
    "reps", "mean", "ci_half_width", "seed", "error",
]
CSV_FLOAT_FORMAT = "%.17g"
SVG_HASH_SALT = "gpdd"

# CLI exit codes
EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

# Kernel defaults (params filled in when a config omits them)
KERNEL_DEFAULTS = {
    "linear": {},
    "polynomial": {"offset": 1.0, "degree": 2},
    "exponential": {},
    "gaussian": {},
    "multiquadric": {"offset": 1.0, "power": 0.5},
    "inverse-multiquadric": {"offset": 1.0, "power": 0.5},
    "matern": {"nu": 2.5, "length_scale": None},
}
