"""Class groups of quadratic fields, unramified cubic extensions, and
certificates for triples d, d+1, d+k^2 whose quadratic fields have 3 | h."""

from .arith import FactorBudget, factor, is_probable_prime, squarefree_kernel
from .cubicfields import DepressedCubic, splitting_field_unramified, totally_ramified_at
from .families import make_triple, next_n, validate_k, verify_certificate
from .quadforms import ClassGroup, QForm, fundamental_discriminant, summarize

__version__ = "0.1.0"
