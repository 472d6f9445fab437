"""Linear Cosserat shell model: geometry, strains, energies, admissibility and a P1 solver."""

from . import admissibility, energy, geometry, shell_tensors, strains
from .energy import MaterialParams, ModelOrder

__version__ = "0.1.0"
