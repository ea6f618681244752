"""Spectral tools for symmetric operators and their self-adjoint extensions.

Minimum-uncertainty curves, extension-family envelopes, eigenvalue-counting
checks and lattice sampling, with a seeded verification harness.
"""

__version__ = '0.1.0'

from .errors import (ConvergenceError, DefspecError, DegeneratePairError,
                     IncompleteWindowError, InfeasibleError, InputError,
                     InsufficientWindowError, PoleError,
                     UnsupportedModelError)
from .extension_families import (ExtensionFamily, count_eigenvalues,
                                 extension_through, interlacing_check,
                                 laguerre_family, lattice_family,
                                 momentum_family, spectrum_of)
from .spectral_core import (Bracket, ConstrainedPair, SymTridiagonal, cayley,
                            constrained_min_bracket, eig_sym,
                            eig_sym_tridiagonal, inverse_cayley,
                            tridiagonalize)
from .spectrum import Spectrum
from .uncertainty import (corollary_thresholds, curve_at, envelope_at,
                          global_floor, pair_coefficients)

__all__ = [
    'Bracket', 'ConstrainedPair', 'ConvergenceError', 'DefspecError',
    'DegeneratePairError', 'ExtensionFamily', 'IncompleteWindowError',
    'InfeasibleError', 'InputError', 'InsufficientWindowError', 'PoleError',
    'Spectrum', 'SymTridiagonal', 'UnsupportedModelError', 'cayley',
    'constrained_min_bracket', 'corollary_thresholds', 'count_eigenvalues',
    'curve_at', 'eig_sym', 'eig_sym_tridiagonal', 'envelope_at',
    'extension_through', 'global_floor', 'interlacing_check',
    'inverse_cayley', 'laguerre_family', 'lattice_family', 'momentum_family',
    'pair_coefficients', 'spectrum_of', 'tridiagonalize',
]
