"""Restarted Arnoldi evaluation of Laplace-transform matrix functions F(A)b."""

from .operators import (
    Graph,
    LinearOperator,
    SparseMatrix,
    convection_diffusion_nd,
    graph_laplacian,
    kron_sum,
    laplacian_nd,
    largest_connected_component,
    read_matrix_market,
    write_matrix_market,
)
from .krylov import KrylovDecomposition, arnoldi, arnoldi_approximation
from .quadrature import QuadratureRule, apply_rule_matrix, build_laplace_rule, gk15
from .restart import (
    ConvergenceRegionError,
    RestartConfig,
    RestartReport,
    TransformFunction,
    bernstein_apply,
    builtin_kernels,
    restarted_laplace,
    stieltjes_restart,
    transform_value,
    two_sided_apply,
)
from .spline import CubicSpline, spline_fit, spline_refine_nodes

__version__ = "0.1.0"
