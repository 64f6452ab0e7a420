# Configuration - divkit
# f-divergences, Csiszar index and copulas on finite supports
# ============================================
# ALL configurable values should be HERE, not hardcoded elsewhere!

import os

# ===================
# Tolerances
# ===================
TOL_ALGEBRAIC = 1e-12       # Algebraic identities (duality, affine shift, involution)
TOL_THEOREM = 1e-10         # Theorem checks (DPI, Markov, minimality)
MASS_TOL = 1e-12            # Masses must sum to 1 within this after construction
RENORMALIZE_TOL = 1e-9      # Input sums within this of 1 are renormalized, beyond are rejected
ZERO_DIVERGENCE_TOL = 1e-9  # max|p - q| under which two pmfs count as equal
NEAR_COPY_GAP = 1e-11       # Near copies drawn by the nonnegativity and symmetry suites differ by at most this
FIBER_TOL = 1e-12           # Ratio p/q constant on a fiber within this
INDEPENDENCE_VALUE_TOL = 1e-10  # S_f at or below this counts as zero
INDEPENDENCE_CELL_TOL = 1e-8    # max|J - P_X x P_Y| at or below this counts as independent
COARSEN_TOL = 1e-9          # Candidate copulas: breaks and cell masses must match the atom grid within this

# Pointwise generator comparisons
GRID_ABS_TOL = 1e-12        # Absolute on [GRID_INNER_LO, GRID_INNER_HI]
GRID_REL_TOL = 1e-9         # Relative outside
GRID_INNER_LO = 0.1
GRID_INNER_HI = 10.0

# ===================
# Quadrature (FGM divergences)
# ===================
QUADRATURE_ORDER = 128              # Default node count per axis
QUADRATURE_MIN_ORDER = 16
QUADRATURE_CONVERGENCE_TOL = 1e-5   # Orders n and n/2 must agree within this
QUADRATURE_GRADING = 3              # Corner grading exponent (1 = plain Gauss-Legendre)

# ===================
# Sampler
# ===================
SAMPLER_BLOCK_SIZE = 4096   # Samples per Philox stream; blocks are the unit of parallel work

# ===================
# Property suites
# ===================
DEFAULT_SEED = 20240917     # Used when neither --seed nor DIVKIT_SEED is given
DEFAULT_TRIALS = 1000
CHECK_WORKERS = int(os.getenv("DIVKIT_WORKERS", "4"))
MAX_SUPPORT_SIZE = 6        # Random distributions/joints have at most this many atoms per axis
ZERO_ATOM_PROB = 0.2        # Chance that a random atom is forced to zero mass
REFINEMENTS_PER_JOINT = 5   # Minimality suite: candidates per random joint
REFINEMENT_FACTOR = 3       # Each atom cell is split k x k
FGM_GRID_SIZE = 64          # fgm_grid default: FGM copula discretized on an n x n grid
KS_ALPHA = 1e-3             # Sampler uniformity: KS p-value floor
SAMPLER_CHECK_N = 100_000   # Sampler fidelity sample size

# Generators drawn by the randomized suites
SUITE_GENERATORS = [
    "kl", "kl-star", "tv", "hellinger", "pearson", "neyman",
    "alpha:0.3", "alpha:2", "alpha:-0.5", "lecam", "js",
]

# ===================
# Output
# ===================
OUTPUT_DIR = os.getenv("DIVKIT_OUTPUT_DIR", "outputs")   # Session logs
SESSION_LOGGING = os.getenv("DIVKIT_SESSION_LOG", "1") != "0"
MAX_SESSIONS_SAVED = 100    # How many session logs to keep
INF_TOKEN = "inf"           # JSON has no infinity literal


def default_seed() -> int:
    """Seed used when --seed is absent; DIVKIT_SEED wins over DEFAULT_SEED."""
    raw = os.getenv("DIVKIT_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    return int(raw)
