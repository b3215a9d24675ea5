"""Perturbation bounds for functions of pairs of commuting matrix contractions.

Submodules
----------
bipoly   bivariate analytic polynomials, coefficient shifts, torus sup-norms
matnum   singular values, Schatten norms, polar square-root factorization
funcalc  the polynomial calculus f(T, R) and the difference identities
opineq   row/column blocks and the bilinear transformer sum A_j Q B_j
besov    dyadic bump, Littlewood-Paley blocks, Besov/Holder norms, omega_*
pairs    random commuting contraction pairs and controlled perturbations
suites   randomized experiment suites; ``cli`` is the command-line runner
"""

from .bipoly import BiPolynomial, UniPolynomial, sup_norm_torus
from .funcalc import ContractionPair, apply
from .matnum import schatten_norm, singular_values

__version__ = "0.1.0"

__all__ = [
    "BiPolynomial",
    "UniPolynomial",
    "ContractionPair",
    "apply",
    "schatten_norm",
    "singular_values",
    "sup_norm_torus",
]
