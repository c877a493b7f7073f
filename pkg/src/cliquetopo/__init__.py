"""Clique complexes of random graphs: density, homology, collapse and filling invariants."""

from .complex import Complex, clique_complex, density_report
from .graph import Graph, max_density_subgraph, sample_gnp
from .homology import betti

__all__ = [
    "Complex",
    "Graph",
    "betti",
    "clique_complex",
    "density_report",
    "max_density_subgraph",
    "sample_gnp",
]
__version__ = "0.1.0"
