"""Design and simulation tools for porous-plate air-bearing microgravity platforms."""
from ._validation import DesignInfeasibleError, DomainError, SimulationError

__version__ = "0.1.0"

__all__ = ["DesignInfeasibleError", "DomainError", "SimulationError", "__version__"]
