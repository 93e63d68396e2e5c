"""Bell-CHSH and Mermin correlators for entangled coherent states measured with displacement operators."""
from .correlators import (
    BellSettings,
    Classification,
    CorrelatorValue,
    MerminSettings,
    bell_chsh,
    classify,
    correlator2,
    correlator3,
    mermin3,
)
from .optimize import OptimResult, ScanResult, ScanSpec, maximize, scan
from .states import BipartiteState, DegenerateState, TripartiteState, make_bipartite, make_tripartite
from .weyl import ComplexAmplitude, DisplacementLabel, compose, conjugate_sandwich, vacuum_overlap

__version__ = "0.1.0"
