"""Towers of algorithms for Koopman pseudospectra and finite SCI checks."""

__version__ = "0.1.0"

from .errors import (BranchExplosion, DomainViolation, EmptySet, FactorizationImpossible,
                     NotFactorable, NyquistViolation, ResourceLimit, SciTowerError)
from .hyperspace import (CompactSet, EmptyResult, Grid, GridField, hausdorff_distance,
                         make_grid, threshold_sublevel)
from .koopman import (Dictionary, KoopmanMatrix, PseudospectrumRun, ResidualField,
                      assemble_matrix, gamma_base, gamma_stabilized, residual,
                      residual_field, run_tower)

__all__ = [
    "BranchExplosion", "DomainViolation", "EmptySet", "FactorizationImpossible",
    "NotFactorable", "NyquistViolation", "ResourceLimit", "SciTowerError",
    "CompactSet", "EmptyResult", "Grid", "GridField", "hausdorff_distance", "make_grid",
    "threshold_sublevel", "Dictionary", "KoopmanMatrix", "PseudospectrumRun",
    "ResidualField", "assemble_matrix", "gamma_base", "gamma_stabilized", "residual",
    "residual_field", "run_tower",
]
