"""
Configuration settings for the analysis toolkit.
"""
import os
from typing import Dict, Any
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base directory
BASE_DIR = Path(__file__).resolve().parent

# Parallelism
TOEPLITZ_HC_THREADS = int(os.getenv("TOEPLITZ_HC_THREADS", str(min(8, os.cpu_count() or 1))))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Symbol evaluation tolerances
POLE_TOL = float(os.getenv("POLE_TOL", "1e-14"))
RESOLVENT_TOL = float(os.getenv("RESOLVENT_TOL", "1e-8"))
FOURIER_TOL = float(os.getenv("FOURIER_TOL", "1e-10"))
FOURIER_MAX_LOG2 = int(os.getenv("FOURIER_MAX_LOG2", "20"))

# Valence geometry
GRID_N = int(os.getenv("GRID_N", "512"))
CURVE_MESH = float(os.getenv("CURVE_MESH", "1e-3"))
MAX_CURVE_SAMPLES = int(os.getenv("MAX_CURVE_SAMPLES", str(2 ** 22)))
PHASE_MAX_DEPTH = int(os.getenv("PHASE_MAX_DEPTH", "40"))
TRANSVERSALITY_MIN_DEG = float(os.getenv("TRANSVERSALITY_MIN_DEG", "5.0"))
DERIVATIVE_MIN = float(os.getenv("DERIVATIVE_MIN", "1e-8"))

# Condition checks
IAC_SAMPLES = int(os.getenv("IAC_SAMPLES", str(2 ** 14)))

# Example construction
EXAMPLE_RHO = float(os.getenv("EXAMPLE_RHO", "0.995"))

# Reproducibility and output
SEED = int(os.getenv("SEED", "0"))
OUTPUT_DIR = os.getenv("OUTPUT_DIR", os.path.join(BASE_DIR, "results"))


def get_thread_count() -> int:
    """
    Get the worker cap for thread pools, re-reading the environment.

    Returns:
        int: Number of worker threads (at least 1)
    """
    return max(1, int(os.getenv("TOEPLITZ_HC_THREADS", str(TOEPLITZ_HC_THREADS))))


# Function to get all configuration as a dictionary
def get_config() -> Dict[str, Any]:
    """
    Get all configuration settings as a dictionary.

    Returns:
        Dict[str, Any]: Configuration settings
    """
    return {
        "TOEPLITZ_HC_THREADS": get_thread_count(),
        "LOG_LEVEL": LOG_LEVEL,
        "POLE_TOL": POLE_TOL,
        "RESOLVENT_TOL": RESOLVENT_TOL,
        "FOURIER_TOL": FOURIER_TOL,
        "FOURIER_MAX_LOG2": FOURIER_MAX_LOG2,
        "GRID_N": GRID_N,
        "CURVE_MESH": CURVE_MESH,
        "MAX_CURVE_SAMPLES": MAX_CURVE_SAMPLES,
        "PHASE_MAX_DEPTH": PHASE_MAX_DEPTH,
        "TRANSVERSALITY_MIN_DEG": TRANSVERSALITY_MIN_DEG,
        "DERIVATIVE_MIN": DERIVATIVE_MIN,
        "IAC_SAMPLES": IAC_SAMPLES,
        "EXAMPLE_RHO": EXAMPLE_RHO,
        "SEED": SEED,
        "OUTPUT_DIR": OUTPUT_DIR,
    }
