import os

from dotenv import load_dotenv

# Load variables from a local .env file, if one exists
load_dotenv()

# Per-axis torus resolution used when a command does not pass --grid
GRID_SIZE = int(os.getenv("MODULE_FRAMES_GRID", "256"))

# Grid positivity and Cauchy-Schwarz checks accept values down to -POSITIVITY_TOL
POSITIVITY_TOL = float(os.getenv("MODULE_FRAMES_POSITIVITY_TOL", "1e-12"))

# Smallest Gramian eigenvalue still treated as a frame
SINGULAR_TOL = float(os.getenv("MODULE_FRAMES_SINGULAR_TOL", "1e-12"))

# Eigenvalue moduli of a dilation must exceed 1 + EXPANSIVE_MARGIN
EXPANSIVE_MARGIN = float(os.getenv("MODULE_FRAMES_EXPANSIVE_MARGIN", "1e-9"))

# |z| may differ from 1 by this much in torus evaluation
TORUS_TOL = float(os.getenv("MODULE_FRAMES_TORUS_TOL", "1e-9"))

LOG_LEVEL = os.getenv("MODULE_FRAMES_LOG_LEVEL", "WARNING")

SEED = int(os.getenv("MODULE_FRAMES_SEED", "20240501"))

# Orbit enumeration bound for symmetric lifting polynomials
MAX_ORBIT = int(os.getenv("MODULE_FRAMES_MAX_ORBIT", "256"))
