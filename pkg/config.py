"""
Configuration and constants for the Polymorphism Circuit Workbench
"""

import logging
import os

# ============================================================================
# FUNCTION ALGEBRA CONFIGURATION
# ============================================================================

# Arities of the four operations that witness a non-trivial polymorphism
NAMED_OPERATION_ARITIES = {
    "maj": 3,   # majority
    "aff": 3,   # x xor y xor z
    "and": 2,
    "or": 2,
}

# Order the CLI picks a construction in when several apply (cheapest first)
OPERATION_PREFERENCE = ("and", "or", "aff", "maj")

# Generic polymorphism checks brute force (2^n)^k row selections
MAX_POLYMORPHISM_ARITY = 3

# Dense witnesses have 2^(2^(2^n)) members: 65536 at n=2, hopeless beyond
MAX_DENSE_ARITY = 2

# ============================================================================
# CIRCUIT CONFIGURATION
# ============================================================================

GATE_BASIS = ("and", "or", "not")

# Gate budget for the exhaustive optimal-circuit oracle
DEFAULT_MAX_SIZE = int(os.environ.get("POLYWORK_MAX_SIZE", 8))

# Synthesized circuits stay within SYNTH_GATES_PER_INPUT * n + SYNTH_GATE_OVERHEAD
SYNTH_GATES_PER_INPUT = 5
SYNTH_GATE_OVERHEAD = 2

# Each patched input adds at most PATCH_GATES_PER_POINT * n gates
PATCH_GATES_PER_POINT = 3

# ============================================================================
# TSVND CONFIGURATION
# ============================================================================

# Compiled constraint circuits stay within 6 * |constraints| + 3 gates
TSVND_GATES_PER_CONSTRAINT = 6
TSVND_GATE_OVERHEAD = 3

# Largest n + m the validator will enumerate
MAX_TSVND_ENUMERATION_BITS = 20

# ============================================================================
# SWEEP AND REPORTING CONFIGURATION
# ============================================================================

SWEEP_CHECKS = ("s3", "s4", "s5")
# s4 and s5 run the optimal-circuit oracle on every function; it does not
# finish three-input parity within minutes, so n=3 is opt-in
ORACLE_SWEEP_MAX_ARITY = int(os.environ.get("POLYWORK_ORACLE_SWEEP_MAX_ARITY", 2))
SWEEP_MAX_ARITY = {"s3": 4, "s4": ORACLE_SWEEP_MAX_ARITY, "s5": ORACLE_SWEEP_MAX_ARITY}

REPORT_SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"
LOG_LEVEL = os.environ.get("POLYWORK_LOG_LEVEL", "WARNING")


def synthesis_size_bound(n, outputs=1):
    """Gate budget promised by the polymorphism constructions."""
    return outputs * (SYNTH_GATES_PER_INPUT * n + SYNTH_GATE_OVERHEAD)


def patched_size_bound(n, patch_size):
    """Gate budget promised by the patch construction."""
    return synthesis_size_bound(n) + PATCH_GATES_PER_POINT * n * patch_size


def tsvnd_size_bound(cover_size):
    """Gate budget for a compiled constraint circuit built from a cover."""
    return TSVND_GATES_PER_CONSTRAINT * cover_size + TSVND_GATE_OVERHEAD


def configure_logging(level=None):
    """
    Install the console log format used by the command-line driver.

    Args:
        level: Level name or number; defaults to POLYWORK_LOG_LEVEL

    Returns:
        int: The numeric level that was applied
    """
    if level is None:
        level = LOG_LEVEL
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(format=LOG_FORMAT, level=level, force=True)
    return level
