"""config.py

Numeric defaults for every module.

Any constant can be overridden by a git-ignored `config_local.py` next to
this file, e.g.

    RENDER_RES = 1024
    VERIFY_WORKERS = 8

CLI flags (--tol, --max-iter, --res, --seed) override again per run.
"""

from __future__ import annotations


# =========================
# Configuration
# =========================

# Root finding / clustering (relative to max(1, |root|))
ROOT_CLUSTER_TOL = 1e-8
ROOT_RESIDUAL_TOL = 1e-10

# Preimage modulus band around the unit circle
BOUNDARY_BAND_TOL = 1e-7

# Univalence certificate
BOUNDARY_SAMPLES = 4096
INJECTIVITY_SAMPLES = 256
CRITICAL_VALUE_MARGIN = 1e-6

# Singularities
DOUBLE_POINT_GRID = 16384
DOUBLE_POINT_TOL = 1e-6
TANGENCY_ANGLE_TOL = 1e-3
SEPARATION_GUARD_STEPS = 10
FIT_RADII = (1e-2, 5e-3, 2.5e-3, 1e-3, 5e-4, 2.5e-4, 1e-4)
FIT_RESIDUAL_MAX = 0.15
FIT_ROUNDING_MAX = 0.2
CUSP_EXCLUSION_ANGLE = 0.05
MAX_CONTACT_SEEDS = 64

# Dynamics
ANALYSIS_MAX_ITER = 200
RENDER_MAX_ITER = 60
RENDER_RES = 512
SINGULAR_RADIUS = 1e-4
CYCLE_TOL = 1e-9
CHART_GUARD = 1e8
RASTER_CHUNK = 1 << 16

# Droplet graph
ASSOCIATION_RADIUS_PX = 3
MIN_COMPONENT_PIXELS = 4
MAX_TREE_VERTICES = 9

# Theorem harness
VERIFY_RES = 384
VERIFY_WORKERS = 4

# Inputs
MAX_USER_DEGREE = 16
SEED = 0

# Pinch family search
PINCH_Q = 0.5
PINCH_BRACKET = (0.01, 0.5)
PINCH_TOL = 1e-12


try:
    from config_local import *  # noqa: F401,F403
except ImportError:
    pass
