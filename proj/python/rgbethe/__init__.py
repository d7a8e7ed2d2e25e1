"""Richardson-Gaudin solvers (pybind11 front end of the C++ library)."""

from ._rgbethe import *  # noqa: F401,F403
from ._rgbethe import RGError, Realization, ModelVariant  # noqa: F401
