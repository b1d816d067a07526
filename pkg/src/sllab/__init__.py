"""Toolkit for the arctan-eigenvalue equation F(Hess w) = f(x):
counterexample families to the comparison principle, machine checks of the
sub/supersolution inequalities, a quantified comparison criterion, and a
monotone finite-difference solver for the regimes where comparison holds.
"""

__version__ = "0.1.0"

from .family import Family
from .slop import F, Phase, special_phase
from .symmat import OrthMatrix, Spectrum, SymMatrix

__all__ = ["Family", "F", "Phase", "special_phase", "OrthMatrix", "Spectrum",
           "SymMatrix", "__version__"]
