"""Moore exponent sets, monomial MRD codes and linear sets of h-pseudoregulus type."""

__version__ = "0.1.0"
