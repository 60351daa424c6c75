"""Crystal combinatorics on Nakajima monomials."""

from .cartan import (
    CartanError, CartanMatrix, FoldingSpec, cartan_type, identity_folding, pairing,
    parse_weight, phi_tilde, positive_roots_type_A, simple_root, validate_cartan,
    validate_folding,
)
from .monomial import (
    CArray, InfinityMonomialCrystal, Monomial, MonomialCrystal, MonomialError, Style,
    nakajima_y_lambda, parse_monomial, shift, y_lambda,
)

__all__ = [
    "CartanError", "CartanMatrix", "FoldingSpec", "cartan_type", "identity_folding", "pairing",
    "parse_weight", "phi_tilde", "positive_roots_type_A", "simple_root", "validate_cartan",
    "validate_folding", "CArray", "InfinityMonomialCrystal", "Monomial", "MonomialCrystal",
    "MonomialError", "Style", "nakajima_y_lambda", "parse_monomial", "shift", "y_lambda",
]

__version__ = "0.1.0"
