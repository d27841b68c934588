"""Exact arithmetic for totally nonnegative elements of the loop group.

Periodic band matrices and their foldings, whirls and curls with their
exchange maps, factorization into positive generators, loop symmetric
functions and cylindric networks.
"""
from .core_matrix import (ChevE, ChevF, Curl, GeneratorWord, LaurentMatrix, PeriodicBandMatrix, Shift, Torus,
                          Whirl, c_inverse, c_transform, chevalley_e, chevalley_f, curl, fold, folded_det,
                          identity, minor, multiply, multiply_all, shift, torus, unfold, whirl)
from .errors import (BudgetError, EstimationError, InadmissibleError, LoopGroupError, NetworkError,
                     NotTNNError, ShapeError, TruncationError, WindowError)
from .laurent import Series

__version__ = "0.1.0"
