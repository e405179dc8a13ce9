"""
Constants and fixed numeric values for the Lagrangian configuration toolkit
"""

from fractions import Fraction

# ============================================================================
# SPHERE GEOMETRY
# ============================================================================

# Image of the mean-normalised moment map z on the unit-area sphere
Z_MIN = Fraction(-1, 2)
Z_MAX = Fraction(1, 2)

# Equator configuration (k = 1)
EQUATOR_B = Fraction(1, 2)

# Largest half-width of the symmetric interval carrying even test functions
MAX_FLAT_HALF_WIDTH = Fraction(1, 6)

# ============================================================================
# TOLERANCES
# ============================================================================

ORACLE_AGREEMENT_TOLERANCE = 1e-10  # independent quadrature / eigensolve cross-checks
PROPERTY_TOLERANCE = 1e-12  # randomised algebra-law checks
AXIOM_TOLERANCE = 1e-9  # float-valued axiom comparisons on random profiles
LIMIT_MATCH_TOLERANCE = 1e-6  # calabi_limit candidate matching

# ============================================================================
# NUMERICAL ORACLE
# ============================================================================

# Initial damping for each successive Newton attempt
NEWTON_DAMPING_SCHEDULE = (1.0, 0.5, 0.25, 0.1)
NEWTON_MIN_STEP = 1e-8

# ============================================================================
# INTEGER RELATIONS
# ============================================================================

EXHAUSTIVE_RELATION_MAX_K = 3  # exhaustive search for k <= 3, PSLQ above
PSLQ_WORKING_DPS = 30

# ============================================================================
# FLATS AND PACKING
# ============================================================================

DEFAULT_APPROXIMANTS = 12
MAX_APPROXIMANT_DENOMINATOR = 10**4
BILIPSCHITZ_GRID_SIZE = 10**4

# ============================================================================
# CLI
# ============================================================================

SUBCOMMANDS = (
    "superpotential",
    "estimate",
    "tau-convergence",
    "flat",
    "packing",
    "recurrence",
    "axioms",
    "nonresonance",
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 64

CSV_SWEEP_COLUMNS = ("k", "B", "kind", "value")

# ============================================================================
# RESPONSE KEYS (Standardized)
# ============================================================================

RESPONSE_SUCCESS = "success"
RESPONSE_ERROR = "error"
RESPONSE_TIMESTAMP = "timestamp"
