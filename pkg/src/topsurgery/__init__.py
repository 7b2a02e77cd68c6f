"""Attracting and repelling topological surgery on combinatorial manifolds."""

from .errors import GeometryError, InputError, PreconditionError, ResourceError, SurgeryError, ValidationError
from .invariants import invariant_report, smith_normal_form
from .manifold import Curve1, LayeredBody, Surface2, make_layered_ball, make_polygon, make_sphere, make_torus, octahedron
from .surgery1d import PolePair1, attract_1d, repel_1d, truncated_1d
from .surgery2d import AnnulusSpec, PolePair2, SurgerySpec2D, attract_2d, repel_2d, truncated_2d
from .surgery3d import rational_surgery_unknot, standard_splitting

__version__ = "0.1.0"
