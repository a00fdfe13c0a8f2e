# CLI exit codes; these are stable API
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_FRONTIER = 4
EXIT_CHECK_FAILED = 5

DEFAULT_SEED = 42
DEFAULT_BINS = 100

# |X_n - 1/2| <= NEAR_HALF_RADIUS counts as "near one half"
NEAR_HALF_RADIUS = 0.1

# exact-distribution tolerances
NORMALIZATION_TOL = 1e-12
BACKEND_AGREEMENT_TOL = 1e-10
# rational DP is only offered up to this many steps
RATIONAL_MAX_STEPS = 50

# float fallback for detecting theta == 0
THETA_ZERO_TOL = 1e-12

# Monte Carlo vs exact law: allowed deviation in standard errors
ORACLE_SIGMAS = 4.0
ORACLE_MAX_STEPS = 8
# KS distance allowed between p=0 samples and Uniform[0,1]
KS_UNIFORM_THRESHOLD = 0.02

# replicates are reduced in fixed-size blocks, independent of worker count
REDUCTION_BLOCK = 1024

# geometric checkpoints used by the theory command's envelope table
THEORY_ENVELOPE_STEPS = (1, 10, 100, 1000)

# CSV schemas
HISTOGRAM_COLUMNS = ("checkpoint_n", "bin_index", "bin_left", "bin_right", "count")
STATE_COLUMNS = ("n", "y", "b", "prob")
X_LAW_COLUMNS = ("n", "x_num", "x_den", "prob")
CONVERGENCE_COLUMNS = ("n", "mean", "variance", "q90_abs_dev")

# output file names
HISTOGRAM_FILE = "histogram"
SUMMARY_FILE = "summary.json"
X_LAW_FILE = "x_law"
STATES_FILE = "states"
MOMENTS_FILE = "moments.json"
CONVERGENCE_FILE = "convergence"
FIGURE_SUMMARY_FILE = "figure_summary.json"
PLOT_SCRIPT_FILE = "plot_figure.py"

# the three histogram panels: y0 = b0 = 1, alpha = beta = gamma = 1
FIGURE_URN = {"y0": 1, "b0": 1, "alpha": 1, "beta": 1, "gamma": 1}
FIGURE_PANELS = {
    "left": {"p": 0.0, "steps": 2_000, "replicates": 100_000},
    "center": {"p": 0.05, "steps": 2_000, "replicates": 100_000},
    "right": {"p": 0.05, "steps": 20_000_000, "replicates": 1_000},
}
# right panel must beat the center panel's mass near 1/2 by this much
FIGURE_MIN_CONCENTRATION_GAIN = 0.1
