"""(p,q)-eigenvalues of the p-Laplacian on intervals, balls and their disjoint unions."""
from .calculus import (Choice, CombinedEigenPair, GeometricEigenvalues, Selection, combine,
                       enumerate_spectrum, first_eigenvalue_union, sign_variants)
from .core import ComponentDomain, EigenPair, Exponents, GeometricTail, UnionModel, scale_eigenvalue
from .errors import ConfigError, NumericalError, PQSpecError
from .kernel import BACKEND
from .shoot import eigenpair, eigenvalues

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Choice", "CombinedEigenPair", "ComponentDomain", "ConfigError", "EigenPair",
    "Exponents", "GeometricEigenvalues", "GeometricTail", "NumericalError", "PQSpecError",
    "Selection", "UnionModel", "combine", "eigenpair", "eigenvalues", "enumerate_spectrum",
    "first_eigenvalue_union", "scale_eigenvalue", "sign_variants",
]
