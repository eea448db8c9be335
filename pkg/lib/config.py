"""
Probe Spectroscopy Configuration
Environment-driven settings and numerical tolerances
"""

import os
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def _env_flag(name, default):
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


# Dense engine limits
DENSE_QUBIT_CAP = int(os.getenv("PROBE_DENSE_QUBIT_CAP", "12"))  # 2^12 = 4096 matrix dim

# Performance Settings
PARALLEL_EXECUTION = _env_flag("PROBE_PARALLEL", True)  # Evaluate time grid concurrently
MAX_WORKERS = int(os.getenv("PROBE_MAX_WORKERS", "8"))
CHUNK_SIZE = int(os.getenv("PROBE_CHUNK_SIZE", "64"))    # Time samples per worker task

# Shot emulation
DEFAULT_SHOTS = int(os.getenv("PROBE_DEFAULT_SHOTS", "4096"))
DEFAULT_SEED = int(os.getenv("PROBE_DEFAULT_SEED", "7"))

# Paths
OUTPUT_DIR = os.getenv("PROBE_OUTPUT_DIR", "output")
MODELS_PATH = os.getenv("PROBE_MODELS_PATH", str(REPO_ROOT / "models"))

# Numerical tolerances
DEGENERACY_TOL = 1e-9        # Eigenvalues closer than this are one level
CROSS_CHECK_TOL = 1e-10      # Agreement required between evaluation routes
HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10
SINGULARITY_EPS = 1e-8       # |sin(x/2)| below this uses the series limit

# Spectrum defaults
OMEGA_STEPS_PER_BAND = 2000  # Default step is (pi/tau) / 2000
DIRECT_DFT_LIMIT = 4_000_000 # len(omegas) * len(times) above this uses chirp-z
DFT_CHUNK = 512              # Omegas per block in the direct sum
THRESHOLD_FACTOR = 0.25      # Default threshold is 0.25 * T/pi * min_expected_g
SIDELOBE_FACTOR = 2.0        # Peaks below factor * h / (|dw| T) of a taller peak h are sidelobes
ALIAS_FREE_MARGIN = 1.25     # Reference step keeps 2*bound this factor below Nyquist
