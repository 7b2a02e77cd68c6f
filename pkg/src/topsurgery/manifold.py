"""Manifold representations: closed curves, oriented surfaces, layered balls.

All values are frozen dataclasses. Coordinates are carried for export and
frame generation; every topological decision is made on the combinatorics.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import mesh
from .errors import InputError, ResourceError, ValidationError

MAX_SPHERE_LEVEL = 7
DEFAULT_LAYERS = 8

Point = tuple[float, float, float]


def _point(p) -> Point:
    x, y, z = (float(c) for c in p)
    return (x, y, z)


@dataclass(frozen=True)
class Curve1:
    """A closed 1-manifold: disjoint combinatorial cycles.

    ``labels[i]`` names vertex ``i``; labels survive surgery, indices do not.
    ``coords`` is either ``None`` or one point per vertex.
    """

    labels: tuple
    cycles: tuple[tuple[int, ...], ...]
    coords: tuple[Point, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "cycles", tuple(tuple(int(v) for v in c) for c in self.cycles))
        if self.coords is not None:
            object.__setattr__(self, "coords", tuple(_point(p) for p in self.coords))

    @classmethod
    def from_cycles(cls, cycles, coords=None, labels=None) -> "Curve1":
        n = 1 + max((v for c in cycles for v in c), default=-1)
        if coords is not None:
            n = max(n, len(coords))
        return cls(tuple(range(n)) if labels is None else labels, cycles, coords)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    def canonical(self) -> tuple:
        """Label-level cycle structure, independent of indexing and direction."""
        out = []
        for cyc in self.cycles:
            lab = [self.labels[v] for v in cyc]
            keyed = [(_label_key(x), x) for x in lab]
            k = min(range(len(keyed)), key=lambda i: keyed[i][0])
            fwd = lab[k:] + lab[:k]
            bwd = [fwd[0]] + fwd[1:][::-1]
            best = min(fwd, bwd, key=lambda seq: [_label_key(x) for x in seq])
            out.append(tuple(best))
        return tuple(sorted(out, key=lambda c: [_label_key(x) for x in c]))


def _label_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


@dataclass(frozen=True)
class Arcs:
    """Disjoint open vertex paths; the local carrier of truncated 1-d surgery."""

    labels: tuple
    paths: tuple[tuple[int, ...], ...]
    coords: tuple[Point, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "paths", tuple(tuple(int(v) for v in p) for p in self.paths))
        if self.coords is not None:
            object.__setattr__(self, "coords", tuple(_point(p) for p in self.coords))

    def endpoint_labels(self) -> list[tuple]:
        return [(self.labels[p[0]], self.labels[p[-1]]) for p in self.paths]


@dataclass(frozen=True)
class Surface2:
    """An oriented triangle mesh. Edge adjacency is derived on demand."""

    vertices: tuple[Point, ...]
    triangles: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(_point(p) for p in self.vertices))
        object.__setattr__(self, "triangles", tuple(tuple(int(v) for v in t) for t in self.triangles))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        return mesh.edges(self.triangles)

    def neighbours(self) -> list[set[int]]:
        return mesh.neighbours(self.n_vertices, self.triangles)

    def scaled(self, factor: float, centre=(0.0, 0.0, 0.0)) -> "Surface2":
        cx, cy, cz = centre
        return Surface2(
            tuple((cx + factor * x, cy + factor * y, cz + factor * z) for x, y, z in self.vertices),
            self.triangles,
        )


@dataclass(frozen=True)
class LayeredBody:
    """Finite polar layering of D^2 or D^3: N shells at radii k/N plus a centre.

    ``center`` is the centre point, or ``None`` when the centre is absent.
    """

    dimension: int
    layers: tuple
    radii: tuple[float, ...]
    center: Point | None = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if self.center is not None:
            object.__setattr__(self, "center", _point(self.center))

    @property
    def layer_count(self) -> int:
        return len(self.layers)

    @property
    def center_present(self) -> bool:
        return self.center is not None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[str, tuple], ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def names(self) -> set[str]:
        return {name for name, _ in self.violations}

    def offending(self, name: str) -> list[tuple]:
        return [idx for n, idx in self.violations if n == name]

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "violations": [{"invariant": n, "simplices": [list(i) if isinstance(i, tuple) else i for i in idx]}
                           for n, idx in self.violations],
        }


def _report(violations) -> ValidationReport:
    return ValidationReport(tuple((name, tuple(idx)) for name, idx in violations))


def validate_curve(c: Curve1) -> ValidationReport:
    n = c.n_vertices
    violations = []
    if c.coords is not None and len(c.coords) != n:
        violations.append(("coordinate count mismatch", (len(c.coords), n)))
    where: dict[int, list[int]] = defaultdict(list)
    for k, cyc in enumerate(c.cycles):
        if len(cyc) < 3:
            violations.append(("cycle length < 3", (k,)))
        bad = [v for v in cyc if not 0 <= v < n]
        if bad:
            violations.append(("vertex index out of range", tuple(bad)))
        seen = set()
        for v in cyc:
            if v in seen:
                violations.append(("vertex repeated in cycle", (k, v)))
            seen.add(v)
            where[v].append(k)
    for v in sorted(where):
        cycles = sorted(set(where[v]))
        if len(cycles) > 1:
            violations.append(("vertex in two cycles", (v, *cycles)))
    missing = [v for v in range(n) if v not in where]
    if missing:
        violations.append(("vertex in no cycle", tuple(missing)))
    return _report(violations)


def validate_arcs(a: Arcs) -> ValidationReport:
    n = len(a.labels)
    violations = []
    count: dict[int, int] = defaultdict(int)
    for k, path in enumerate(a.paths):
        if len(path) < 2:
            violations.append(("path length < 2", (k,)))
        for v in path:
            if not 0 <= v < n:
                violations.append(("vertex index out of range", (v,)))
            count[v] += 1
    dup = sorted(v for v, k in count.items() if k > 1)
    if dup:
        violations.append(("vertex used twice", tuple(dup)))
    missing = [v for v in range(n) if v not in count]
    if missing:
        violations.append(("vertex in no path", tuple(missing)))
    return _report(violations)


def validate_surface(s: Surface2, allow_boundary: bool = False) -> ValidationReport:
    """Check closedness, orientation coherence, degeneracy and vertex links.

    With ``allow_boundary`` edges used by a single triangle are accepted; the
    local pieces produced by truncated surgery are validated this way.
    """
    n = s.n_vertices
    violations = []
    out_of_range = sorted({v for tri in s.triangles for v in tri if not 0 <= v < n})
    if out_of_range:
        return _report([("vertex index out of range", out_of_range)])
    degenerate = [t for t, (a, b, c) in enumerate(s.triangles) if a == b or b == c or a == c]
    if degenerate:
        violations.append(("degenerate triangle", degenerate))
    good = [tri for t, tri in enumerate(s.triangles) if t not in set(degenerate)]
    emap = mesh.edge_map(good)
    boundary, nonmanifold, flipped = [], [], []
    for e in sorted(emap):
        uses = emap[e]
        if len(uses) == 1:
            boundary.append(e)
        elif len(uses) > 2:
            nonmanifold.append(e)
        elif uses[0][1] == uses[1][1]:
            flipped.append(e)
    if boundary and not allow_boundary:
        violations.append(("boundary edge", boundary))
    if nonmanifold:
        violations.append(("non-manifold edge", nonmanifold))
    if flipped:
        violations.append(("inconsistent orientation", flipped))

    link: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for a, b, c in good:
        link[a].append((b, c))
        link[b].append((c, a))
        link[c].append((a, b))
    isolated = [v for v in range(n) if v not in link]
    if isolated:
        violations.append(("isolated vertex", isolated))
    bad_links = [v for v in sorted(link) if not _link_is_disc(link[v])]
    if bad_links:
        violations.append(("non-manifold vertex", bad_links))
    return _report(violations)


def _link_is_disc(link_edges) -> bool:
    """A vertex link must be one cycle or one path (connected, degree <= 2)."""
    deg: dict[int, int] = defaultdict(int)
    uf_nodes = {}
    for u, v in link_edges:
        deg[u] += 1
        deg[v] += 1
        uf_nodes.setdefault(u, len(uf_nodes))
        uf_nodes.setdefault(v, len(uf_nodes))
    if any(d > 2 for d in deg.values()):
        return False
    uf = mesh.UnionFind(len(uf_nodes))
    for u, v in link_edges:
        uf.union(uf_nodes[u], uf_nodes[v])
    return len({uf.find(i) for i in range(len(uf_nodes))}) == 1


def require_valid_curve(c: Curve1) -> None:
    rep = validate_curve(c)
    if not rep.valid:
        raise ValidationError(f"invalid Curve1: {rep.violations[0][0]}", rep)


def require_valid_surface(s: Surface2, allow_boundary: bool = False) -> None:
    rep = validate_surface(s, allow_boundary)
    if not rep.valid:
        raise ValidationError(f"invalid Surface2: {rep.violations[0][0]}", rep)


# ---------------------------------------------------------------- constructors

_OCTA_VERTICES = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def octahedron() -> Surface2:
    tris = []
    for x in (0, 1):
        for y in (2, 3):
            for z in (4, 5):
                sign = (-1) ** (x + (y - 2) + (z - 4))
                tris.append((x, y, z) if sign > 0 else (x, z, y))
    return Surface2(_OCTA_VERTICES, tris)


def make_sphere(level: int = 0, max_level: int = MAX_SPHERE_LEVEL) -> Surface2:
    """Octahedron refined ``level`` times by 1->4 subdivision, on the unit sphere."""
    if level < 0:
        raise InputError("subdivision level must be >= 0")
    if level > max_level:
        raise ResourceError(f"subdivision level {level} exceeds maximum {max_level}")
    s = octahedron()
    verts, tris = list(s.vertices), list(s.triangles)
    for _ in range(level):
        verts, tris = mesh.subdivide(verts, tris)
        verts = [_unit(p) for p in verts]
    return Surface2(verts, tris)


def _unit(p) -> Point:
    r = math.sqrt(sum(c * c for c in p))
    return tuple(c / r for c in p)


def subdivide_surface(s: Surface2) -> Surface2:
    verts, tris = mesh.subdivide(s.vertices, s.triangles)
    return Surface2(verts, tris)


def make_polygon(n: int, radius: float = 1.0, centre=(0.0, 0.0, 0.0), start: int = 0) -> Curve1:
    """Regular n-gon in the xy-plane; vertex 0 sits at the top (+y)."""
    if n < 3:
        raise InputError("a polygon needs at least 3 vertices")
    cx, cy, cz = centre
    coords = [
        (cx + radius * math.cos(math.pi / 2 + 2 * math.pi * k / n),
         cy + radius * math.sin(math.pi / 2 + 2 * math.pi * k / n), cz)
        for k in range(n)
    ]
    return Curve1(tuple(range(start, start + n)), (tuple(range(n)),), coords)


def disjoint_curves(*curves: Curve1) -> Curve1:
    labels, cycles, coords = [], [], []
    with_coords = all(c.coords is not None for c in curves)
    for c in curves:
        off = len(labels)
        labels.extend(c.labels)
        cycles.extend(tuple(v + off for v in cyc) for cyc in c.cycles)
        if with_coords:
            coords.extend(c.coords)
    if len(set(labels)) != len(labels):
        raise InputError("curve labels must be distinct in a disjoint union")
    return Curve1(labels, cycles, coords if with_coords else None)


def curve_components(c: Curve1) -> list[Curve1]:
    out = []
    for cyc in c.cycles:
        out.append(Curve1(
            [c.labels[v] for v in cyc],
            [tuple(range(len(cyc)))],
            None if c.coords is None else [c.coords[v] for v in cyc],
        ))
    return out


def make_torus(n_major: int = 12, n_minor: int = 8, major: float = 2.0, minor: float = 0.75) -> Surface2:
    """Grid torus around the z-axis; vertex (i, j) has index i * n_minor + j.

    Fixed ``i`` gives a meridian cycle, fixed ``j`` a longitude.
    """
    if n_major < 3 or n_minor < 3:
        raise InputError("torus grid needs at least 3 x 3 vertices")
    verts = []
    for i in range(n_major):
        u = 2 * math.pi * i / n_major
        for j in range(n_minor):
            v = 2 * math.pi * j / n_minor
            rho = major + minor * math.cos(v)
            verts.append((rho * math.cos(u), rho * math.sin(u), minor * math.sin(v)))
    idx = lambda i, j: (i % n_major) * n_minor + (j % n_minor)
    tris = []
    for i in range(n_major):
        for j in range(n_minor):
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return Surface2(verts, tris)


def torus_meridian(n_major: int, n_minor: int, i: int) -> tuple[int, ...]:
    return tuple((i % n_major) * n_minor + j for j in range(n_minor))


def make_disc(n_sides: int = 8, n_rings: int = 2, radius: float = 1.0,
              centre=(0.0, 0.0, 0.0), flip: bool = False) -> Surface2:
    """Flat triangulated disc in a plane z = const, centre vertex 0.

    Normal is +z unless ``flip``.
    """
    cx, cy, cz = centre
    verts = [(cx, cy, cz)]
    for r in range(1, n_rings + 1):
        for k in range(n_sides):
            ang = 2 * math.pi * k / n_sides
            rr = radius * r / n_rings
            verts.append((cx + rr * math.cos(ang), cy + rr * math.sin(ang), cz))
    ring = lambda r, k: 0 if r == 0 else 1 + (r - 1) * n_sides + (k % n_sides)
    tris = []
    for k in range(n_sides):
        tris.append((0, ring(1, k), ring(1, k + 1)))
    for r in range(1, n_rings):
        for k in range(n_sides):
            a, b, c, d = ring(r, k), ring(r + 1, k), ring(r + 1, k + 1), ring(r, k + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    if flip:
        tris = [(a, c, b) for a, b, c in tris]
    return Surface2(verts, tris)


def disjoint_union(*surfaces: Surface2) -> Surface2:
    verts, tris = [], []
    for s in surfaces:
        off = len(verts)
        verts.extend(s.vertices)
        tris.extend(tuple(v + off for v in t) for t in s.triangles)
    return Surface2(verts, tris)


def surface_components(s: Surface2) -> list[tuple[Surface2, list[int]]]:
    """Split into connected pieces; each comes with its new->old vertex list."""
    labels = mesh.vertex_component_labels(s.n_vertices, s.triangles)
    groups: dict[int, list[int]] = defaultdict(list)
    for t, tri in enumerate(s.triangles):
        groups[labels[tri[0]]].append(t)
    out = []
    for root in sorted(groups, key=lambda r: min(s.triangles[groups[r][0]])):
        tris = [s.triangles[t] for t in groups[root]]
        old = sorted({v for tri in tris for v in tri})
        new_of = {o: i for i, o in enumerate(old)}
        out.append((Surface2([s.vertices[o] for o in old],
                             [tuple(new_of[v] for v in tri) for tri in tris]), old))
    out.sort(key=lambda item: item[1][0])
    return out


def make_layered_ball(dimension: int, N: int = DEFAULT_LAYERS, level: int | None = None) -> LayeredBody:
    """Concentric shells at radii k/N, k = 1..N, around a centre at the origin.

    Dimension 2 shells are polygons with 8 * 2**level vertices (default level 1);
    dimension 3 shells are level-``level`` octahedral spheres (default 2).
    ``N = 0`` gives the degenerate centre-only body.
    """
    if dimension not in (2, 3):
        raise InputError("dimension must be 2 or 3")
    if N < 0:
        raise InputError("layer count must be >= 0")
    radii = [k / N for k in range(1, N + 1)]
    if dimension == 2:
        level = 1 if level is None else level
        if level < 0 or level > 12:
            raise ResourceError(f"shell resolution {level} out of range")
        n = 8 * 2 ** level
        layers = [make_polygon(n, r, start=k * n) for k, r in enumerate(radii)]
    else:
        base = make_sphere(2 if level is None else level)
        layers = [base.scaled(r) for r in radii]
    return LayeredBody(dimension, layers, radii, (0.0, 0.0, 0.0))


def validate_layered_body(body: LayeredBody) -> ValidationReport:
    violations = []
    if body.dimension not in (2, 3):
        violations.append(("dimension", (body.dimension,)))
    if len(body.radii) != len(body.layers):
        violations.append(("radius count mismatch", (len(body.radii), len(body.layers))))
    for k in range(1, len(body.radii)):
        if body.radii[k] <= body.radii[k - 1]:
            violations.append(("radii not increasing", (k - 1, k)))
    if body.radii and abs(body.radii[-1] - 1.0) > 1e-12:
        violations.append(("outermost radius != 1", (len(body.radii) - 1,)))
    for k, layer in enumerate(body.layers):
        if body.dimension == 2:
            ok = isinstance(layer, Curve1) and validate_curve(layer).valid and len(layer.cycles) == 1
        else:
            ok = (isinstance(layer, Surface2) and validate_surface(layer).valid
                  and len(set(mesh.vertex_component_labels(layer.n_vertices, layer.triangles))) == 1
                  and mesh.euler_characteristic_raw(layer.triangles) == 2)
        if not ok:
            violations.append(("shell is not a sphere", (k,)))
    points = set()
    for k, layer in enumerate(body.layers):
        coords = layer.coords if isinstance(layer, Curve1) else layer.vertices
        for p in coords or ():
            key = tuple(round(c, 9) for c in p)
            if key in points:
                violations.append(("shells share a vertex", (k,)))
                break
            points.add(key)
    return _report(violations)
