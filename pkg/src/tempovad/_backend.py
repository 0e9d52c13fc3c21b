"""Pick the compiled kernels when available, else the numpy fallback."""
import logging
import os

log = logging.getLogger(__name__)

if os.environ.get("TEMPOVAD_PURE") == "1":
    from . import _kernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _kernels_py as kernels
        BACKEND = "python"
        log.debug("compiled kernels unavailable, using numpy fallback")

voltage_grid = kernels.voltage_grid
simulate_grid = kernels.simulate_grid

__all__ = ["BACKEND", "voltage_grid", "simulate_grid"]
