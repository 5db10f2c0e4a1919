"""
Configuration File
Library-wide constants for horofan
"""

from pathlib import Path

# Logging configuration
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DEFAULT_LOG_LEVEL = "WARNING"
VERBOSE_LOG_LEVEL = "DEBUG"

# Document encoding: integers beyond this bound are written as decimal strings
JSON_SAFE_INTEGER_MAX = 2**53 - 1
JSON_INDENT = 2

# Unstable-cone decision procedure used when none is requested
DEFAULT_UNSTABLE_METHOD = 2

# Root system families the non-toric test can classify
CLASSIFIED_ROOT_FAMILIES = ("A",)

# Golden corpus shipped with the repository
PROJECT_ROOT = Path(__file__).resolve().parent.parent
GOLDEN_DIR = PROJECT_ROOT / "data" / "golden"

# CLI exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
