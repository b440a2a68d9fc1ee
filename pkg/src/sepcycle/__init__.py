"""Separating cycles and polyhedra for geometric hypergraphs."""
from .cycle2d import build_separating_cycle, construct, solve_construct, validate_separation
from .errors import DegenerateGeometry, DegenerateInput, Infeasible, NoCandidate, ParseError, TooLarge, ValidationError
from .hypergraph import BLUE, RED, Coloring, Hypergraph, bipartition, two_color_exact
from .instances_io import GeomInstance, load_instance, parse_instance, save_instance, serialize_instance

__version__ = "0.1.0"
