"""Exact stationary states of the open two-species ASEP from qKZ solutions.

Submodules: :mod:`exact` (rationals and Laurent polynomials), :mod:`params`,
:mod:`model` (Markov matrix, R/K/scattering operators), :mod:`hecke`,
:mod:`qkz` (construction of the stationary components), :mod:`qseries`
(q-series and Askey-Wilson polynomials), :mod:`observables`,
:mod:`montecarlo` and :mod:`cli`.
"""

from .exact import LaurentPoly, Q
from .params import ParamPoint, random_params
from .qkz import StateVector, build_state

__version__ = "0.1.0"

__all__ = ["LaurentPoly", "Q", "ParamPoint", "random_params", "StateVector", "build_state", "__version__"]
