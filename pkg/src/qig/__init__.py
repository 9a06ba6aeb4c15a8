"""Quasi-entropies, monotone quantum Fisher metrics and their inequalities."""

from .classical import f_divergence
from .estimation import cramer_rao_residual, exp_family_evolve, fisher_matrix, scores
from .fisher import MeanKernel, apply_J, apply_J_inverse, fisher_metric, quadratic_cost
from .quasient import generalized_covariance, quasi_entropy, relative_entropy
from .stdfunc import StandardFunction, check_standard, registry, tilde_transform

__all__ = [
    "f_divergence", "cramer_rao_residual", "exp_family_evolve", "fisher_matrix", "scores",
    "MeanKernel", "apply_J", "apply_J_inverse", "fisher_metric", "quadratic_cost",
    "generalized_covariance", "quasi_entropy", "relative_entropy", "StandardFunction",
    "check_standard", "registry", "tilde_transform",
]
__version__ = "0.1.0"
