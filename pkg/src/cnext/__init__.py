"""C^n extension of smooth functions across interval endpoints and curved boundaries."""

from ._accel import backend
from .diagnostics import (CHUNK_K, CHUNK_TOL, GProfile, PanelSet, SpectrumReport, UnresolvedError,
                          adaptive_chunks, build_F_profile, build_G_profile, count_chunks, dft,
                          interpolate_samples, one_sided_derivative, power_spectrum)
from .extend1d import Extension1DConfig, ReachError, extend_point, extend_profile, extend_values, kappa
from .extend2d import (DegenerateCurveError, ParametricCurve, SampleOutsideDomainError, TubeCoordinates,
                       boundary_mismatch, extend_field, mismatch_steps, mismatch_thresholds, project, tube_project)
from .extension_core import (DegenerateNodesError, ExtensionScheme, IllConditionedError, chebyshev_nodes,
                             chebyshev_T, condition_number, lagrange_weights, make_scheme, moment_rhs,
                             optimal_weights, solve_vandermonde)
from .stabilizers import ShrinkMap, WindowSpec, build_shrink_table, shrink_forward, shrink_psi, window
from .testfns import TEST_FUNCTIONS, TestFunction, bessel_j0, eval_test_function, get_test_function

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
