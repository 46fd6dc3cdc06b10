"""Completeness, minimality and basis properties of dilated trigonometric systems.

Submodules:

* :mod:`~dilatedbasis.symbol` - polynomials, root classification, chain decomposition
* :mod:`~dilatedbasis.dilation1d` - single-prime systems in l^2
* :mod:`~dilatedbasis.polydisk` - the multi-prime model in H^2 of the polydisk
* :mod:`~dilatedbasis.torus` - weighted L^2 on the torus
* :mod:`~dilatedbasis.cli` - command-line runner
"""

__version__ = "0.1.0"

from .dilation1d import (
    DilationSystemSpec,
    basis_verdict,
    dual_chain_norms,
    exponent_fit,
    gram_section,
    incompleteness_witness,
    minimality_duals,
)
from .polydisk import (
    biorthogonality_suite,
    coefficient_series,
    dual_functional,
    e_star_symbol,
    gram_section_polydisk,
    h2_verdict,
    partial_sum_norms,
    riesz_basis_verdict,
    shell_sums,
    uniform_e_star,
)
from .symbol import (
    SparseSymbol,
    UnivariatePolynomial,
    build_symbol,
    classify_roots,
    omega_decompose,
    omega_parseval_check,
)
from .torus import (
    LinearForm,
    a2_estimate,
    constant_weight,
    integral_test,
    model_weight,
    qm_projection_norm,
    weight_from_symbol,
    weight_profile_check,
    weighted_partial_sum_norms,
)
