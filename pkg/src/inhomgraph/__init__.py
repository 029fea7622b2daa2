"""Joint vertex degrees in inhomogeneous random graphs G(n, {p_ij}).

Exact degree laws, a size-biased coupling for degree indicators, normal and
Poisson-process approximation bounds, and a brute-force oracle to check them.
"""

from .coupling import SizeBiasCoupling, couple_vertex_degree, f_minus, f_plus, size_biased_count_graph
from .degree_dist import degree_moments, degree_pmf, poisson_tail_upper_bound, poisson_tv_bound, tail_prob
from .graph_core import (
    EdgeProbabilityMatrix,
    Graph,
    ModelSpec,
    build_kernel,
    degree_statistics,
    load_kernel,
    sample_graph,
    truncate_degrees,
)
from .normal_bound import bound_components, covariance_exact, covariance_sigma0, lambda_vector, mvn_bound
from .poisson_bound import compound_poisson_law, poisson_process_bound

__all__ = [
    "EdgeProbabilityMatrix",
    "Graph",
    "ModelSpec",
    "SizeBiasCoupling",
    "bound_components",
    "build_kernel",
    "compound_poisson_law",
    "couple_vertex_degree",
    "covariance_exact",
    "covariance_sigma0",
    "degree_moments",
    "degree_pmf",
    "degree_statistics",
    "f_minus",
    "f_plus",
    "lambda_vector",
    "load_kernel",
    "mvn_bound",
    "poisson_process_bound",
    "poisson_tail_upper_bound",
    "poisson_tv_bound",
    "sample_graph",
    "size_biased_count_graph",
    "tail_prob",
    "truncate_degrees",
]
