"""Numerical tolerances and search parameters shared by the float-valued modules."""

import os

# operator-norm slack when comparing against 1
NORM_TOL = 1e-6
# slack for algebraic identities such as uvu = u
ALGEBRA_TOL = 1e-9
# imaginary slack when testing positivity of coefficients
POSITIVITY_TOL = 1e-12
# witness consistency of a norm report
WITNESS_TOL = 1e-9

T_RANGE = (-10.0, 10.0)
T_POINTS = 400
GOLDEN_TOL = 1e-4
# starting vectors per norm evaluation inside the golden-section refinement
REFINE_RESTARTS = 8

NORM_RESTARTS = 32
NORM_MAXITER = 10_000
NORM_CONV_TOL = 1e-10
# hermitian_test only decides against NORM_TOL, so its ascent may stop earlier
HERMITIAN_CONV_TOL = 1e-9

# rigidity checks
DIAGONAL_TOL = 1e-4
CONJUGATION_TOL = 1e-6

DEFAULT_SEED = 0


def max_workers():
    """Parallelism cap read from ``GRPDLAB_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("GRPDLAB_THREADS", "1")))
    except ValueError:
        return 1
