"""
Configuration settings for the Discrete Valuation Analyzer.
"""

# Application Settings
APP_TITLE = "Discrete Valuation Analyzer"
COMMANDS = ['value', 'unit-element', 'residues', 'analyze', 'check-order']
OUTPUT_FORMATS = ['text', 'json']
DEFAULT_FORMAT = "text"

# Computation Limits
DEFAULT_PRECISION = 64      # Global cap for every order search (exponent of t)
DEFAULT_DEPTH = 12          # Residue-chain depth
DEFAULT_ITERATIONS = 200    # Iteration cap of the value-1 construction loop
DEFAULT_SEED = 0

# Lazy series nest one level per transformation step
RECURSION_LIMIT = 20000

# Order-function check
ORDER_CHECK_DEGREE = 5
ORDER_CHECK_TRIALS = 100
ORDER_CHECK_MAX_TERMS = 4           # Monomials per random polynomial
ORDER_CHECK_MAX_NUMERATOR = 9       # Random coefficients p/q with |p| <= 9
ORDER_CHECK_MAX_DENOMINATOR = 5     # and 1 <= q <= 5

# Variable naming
# Transformed variables are named <prefix>1..<prefix>n with the first prefix
# that collides with neither the source variables nor the field symbols
TARGET_VARIABLE_PREFIXES = "YZWUV"
IMPLICIT_ELEMENT_PREFIX = "W"
RESERVED_PARAMETER = "j"    # Index variable of coefficient rules

# Report Settings
REPORT_SERIES_TERMS = 6     # Nonzero terms shown per final image

# Exit Codes
EXIT_OK = 0
EXIT_EXHAUSTED = 2          # Precision or iteration exhaustion
EXIT_INPUT_ERROR = 3

# Logging
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVEL = "WARNING"
