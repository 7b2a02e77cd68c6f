"""Solid surgery: 1-d and 2-d surgery applied shell by shell to a layered disc or ball.

Every shell is operated on independently with poles at its intersections with a
common axis; the centre then follows its own limit rule (two new points, or a
circle for attracting surgery on a ball).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import mesh
from .errors import InputError, SurgeryError
from .manifold import Curve1, LayeredBody, Surface2, surface_components
from .surgery1d import PolePair1, Reconnection, attract_1d, repel_1d
from .surgery2d import (
    PolePair2,
    SurgerySpec2D,
    attract_2d_traced,
    central_annulus,
    connect_sum,
    refine_for_annulus,
    repel_2d_traced,
)

KINDS = {"two-discs": ("two-points", 2), "two-balls": ("two-points3d", 2), "solid-torus": ("circle", 1)}


@dataclass(frozen=True)
class LayeredTorus:
    """Nested genus-1 layers and the core circle they shrink to."""

    layers: tuple
    core_circle: Curve1
    radii: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))

    @property
    def layer_count(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class SolidResult:
    kind: str
    pieces: tuple
    limit_stratum: str
    limit_points: tuple = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.kind not in KINDS:
            raise InputError(f"unknown solid result kind {self.kind!r}")
        stratum, count = KINDS[self.kind]
        if self.limit_stratum != stratum or len(self.pieces) != count:
            raise InputError(f"inconsistent solid result: {self.kind} needs {count} pieces and {stratum}")


@dataclass(frozen=True)
class CentralDisc:
    """The disc spanning the equator perpendicular to the axis through poles a, b."""

    axis: tuple[int, int] | None = None
    half_width: int = 1


# ------------------------------------------------------------------ helpers

def default_axis(body: LayeredBody) -> tuple[int, int]:
    """Vertical axis: the top and bottom vertices of the outer shell."""
    if not body.layers:
        return (0, 0)
    if body.dimension == 2:
        n = body.layers[-1].n_vertices
        return (0, n // 2)
    return (4, 5)


def _coords(layer):
    return mesh.as_array(layer.coords if isinstance(layer, Curve1) else layer.vertices)


def axis_direction(body: LayeredBody, axis) -> np.ndarray:
    outer = _coords(body.layers[-1])
    a, b = axis
    n = len(outer)
    if not (0 <= a < n and 0 <= b < n) or a == b:
        raise InputError("axis endpoints must be two distinct outer-shell vertices")
    pa, pb = outer[a], outer[b]
    centre = np.asarray(body.center if body.center is not None else (0.0, 0.0, 0.0))
    if np.linalg.norm((pa - centre) + (pb - centre)) > 1e-9 * max(1.0, np.linalg.norm(pa - centre)):
        raise InputError("axis endpoints are not antipodal on the outer shell")
    d = pa - pb
    return d / np.linalg.norm(d)


def shell_poles(body: LayeredBody, k: int, axis) -> tuple[int, int]:
    """Indices of the vertices where the axis meets shell ``k``."""
    pts = _coords(body.layers[k])
    centre = np.asarray(body.center if body.center is not None else (0.0, 0.0, 0.0))
    d = axis_direction(body, axis)
    rel = pts - centre
    r = np.linalg.norm(rel, axis=1)
    out = []
    for sign in (1.0, -1.0):
        hit = np.nonzero(np.abs(rel @ d * sign - r) <= 1e-9 * np.maximum(r, 1.0))[0]
        if len(hit) == 0:
            raise InputError(f"axis does not meet shell {k} in a vertex")
        out.append(int(hit[0]))
    return out[0], out[1]


def shell_depth(body: LayeredBody, k: int, depth: int) -> int:
    """Neighbourhood depth scaled with the shell radius, minimum 1."""
    return max(1, int(round(depth * body.radii[k] / body.radii[-1])))


def _twists(spec) -> int:
    if isinstance(spec, SurgerySpec2D):
        return spec.twists
    if isinstance(spec, (list, tuple)):
        raise InputError("per-shell twists are not supported; one twist applies to every shell")
    if spec is None:
        return 0
    return int(spec)


def _per_layer(k, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except SurgeryError as exc:
        raise type(exc)(f"layer {k}: {exc}") from exc


def _check_body(body: LayeredBody, dimension: int) -> None:
    if not isinstance(body, LayeredBody) or body.dimension != dimension:
        raise InputError(f"expected a layered body of dimension {dimension}")
    if not body.center_present:
        raise InputError("layered body has no centre")


def _perpendicular(d: np.ndarray, dimension: int) -> np.ndarray:
    if dimension == 2:
        return np.array([d[1], -d[0], 0.0])
    trial = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    p = trial - (trial @ d) * d
    return p / np.linalg.norm(p)


def _limit_pair(body: LayeredBody, direction) -> tuple:
    centre = np.asarray(body.center)
    off = 0.5 * (body.radii[0] if body.radii else 1.0) * np.asarray(direction)
    return (tuple(map(float, centre + off)), tuple(map(float, centre - off)))


# -------------------------------------------------------------- operations

def solid_1d(body: LayeredBody, axis=None, mode: str = "attract", depth: int = 1) -> SolidResult:
    """Split-mode 1-d surgery on every circle of a layered disc.

    Attracting poles at the axis ends cut each circle into its two halves on
    either side of the axis; repelling poles cut it into the halves containing
    each pole. The centre becomes two new points.
    """
    _check_body(body, 2)
    if mode not in ("attract", "repel"):
        raise InputError(f"unknown mode {mode!r}")
    axis = default_axis(body) if axis is None else tuple(axis)
    op = attract_1d if mode == "attract" else repel_1d
    pieces: list[list[Curve1]] = [[], []]
    if body.layers:
        d = axis_direction(body, axis)
        side = _perpendicular(d, 2) if mode == "attract" else d
    else:
        side = np.array([1.0, 0.0, 0.0]) if mode == "attract" else np.array([0.0, 1.0, 0.0])
    for k, shell in enumerate(body.layers):
        pa, pb = shell_poles(body, k, axis)
        out = _per_layer(k, op, shell, PolePair1(pa, pb, shell_depth(body, k, depth)), Reconnection.SPLIT)
        parts = [Curve1([out.labels[v] for v in cyc], [tuple(range(len(cyc)))], [out.coords[v] for v in cyc])
                 for cyc in out.cycles]
        if len(parts) != 2:
            raise InputError(f"layer {k}: surgery did not split the shell")
        # piece 0 lies on the positive side of ``side``
        score = [float(np.mean(mesh.as_array(p.coords) @ side)) for p in parts]
        if score[0] < score[1]:
            parts.reverse()
        for i in range(2):
            pieces[i].append(parts[i])
    points = _limit_pair(body, side)
    bodies = [LayeredBody(2, pieces[i], body.radii, points[i]) for i in range(2)]
    return SolidResult("two-discs", bodies, "two-points", points, {"axis": list(axis), "mode": mode})


def solid_2d_attract(body: LayeredBody, axis=None, spec=SurgerySpec2D(), depth: int = 1) -> SolidResult:
    """Drill a tunnel along the axis through every shell: nested tori plus a core circle."""
    _check_body(body, 3)
    twists = _twists(spec)
    axis = default_axis(body) if axis is None else tuple(axis)
    layers, rings = [], []
    for k, shell in enumerate(body.layers):
        pa, pb = shell_poles(body, k, axis)
        out, trace = _per_layer(k, attract_2d_traced, shell, PolePair2(pa, pb, shell_depth(body, k, depth)),
                                SurgerySpec2D(twists), refine_overlap=True)
        layers.append(out)
        rings.append(len(trace.rings[0]))
    n_core = rings[0] if rings else 8
    d = axis_direction(body, axis) if body.layers else np.array([0.0, 0.0, 1.0])
    radius = 0.5 * (body.radii[0] if body.radii else 1.0)
    core = _circle(np.asarray(body.center), d, radius, n_core)
    torus = LayeredTorus(layers, core, body.radii)
    return SolidResult("solid-torus", [torus], "circle", tuple(core.coords),
                       {"axis": list(axis), "twists": twists})


def _circle(centre, normal, radius, n) -> Curve1:
    u = _perpendicular(normal, 3)
    w = np.cross(normal, u)
    t = 2 * np.pi * np.arange(n) / n
    pts = centre + radius * (np.outer(np.cos(t), u) + np.outer(np.sin(t), w))
    return Curve1.from_cycles([tuple(range(n))], [tuple(map(float, p)) for p in pts])


def repel_shell(shell: Surface2, pa: int, pb: int, half_width: int = 1):
    """Equatorial-annulus repelling surgery on one shell, refining it if too coarse."""
    shell = refine_for_annulus(shell, pa, pb, half_width)
    annulus = central_annulus(shell, pa, pb, half_width)
    return repel_2d_traced(shell, annulus)


def solid_2d_repel(body: LayeredBody, disc: CentralDisc | None = None, spec=SurgerySpec2D()) -> SolidResult:
    """Peel an equatorial annulus off every shell: two nested-sphere balls."""
    _check_body(body, 3)
    _twists(spec)
    disc = CentralDisc() if disc is None else disc
    axis = default_axis(body) if disc.axis is None else tuple(disc.axis)
    pieces: list[list[Surface2]] = [[], []]
    for k, shell in enumerate(body.layers):
        pa, pb = shell_poles(body, k, axis)
        out, trace = _per_layer(k, repel_shell, shell, pa, pb, disc.half_width)
        comps = surface_components(out)
        if len(comps) != 2:
            raise InputError(f"layer {k}: annulus does not separate the shell")
        first = trace.vertex_map[pa]
        if first not in comps[0][1]:
            comps.reverse()
        for i in range(2):
            pieces[i].append(comps[i][0])
    d = axis_direction(body, axis) if body.layers else np.array([0.0, 0.0, 1.0])
    points = _limit_pair(body, d)
    bodies = [LayeredBody(3, pieces[i], body.radii, points[i]) for i in range(2)]
    return SolidResult("two-balls", bodies, "two-points3d", points,
                       {"axis": list(axis), "half_width": disc.half_width})


def solid_2d_merge(result: SolidResult) -> LayeredBody:
    """Undo a repelling split: tube each pair of matching shells back together."""
    if result.kind != "two-balls":
        raise InputError("only a two-balls result can be merged")
    top, bottom = result.pieces
    layers = []
    for k, (s1, s2) in enumerate(zip(top.layers, bottom.layers)):
        p1, p2 = mesh.as_array(s1.vertices), mesh.as_array(s2.vertices)
        a = int(np.argmin(np.linalg.norm(p1 - p2.mean(axis=0), axis=1)))
        b = int(np.argmin(np.linalg.norm(p2 - p1.mean(axis=0), axis=1)))
        layers.append(_per_layer(k, connect_sum, s1, s2, a, b))
    centre = tuple((np.asarray(top.center) + np.asarray(bottom.center)) / 2)
    return LayeredBody(3, layers, top.radii, centre)
