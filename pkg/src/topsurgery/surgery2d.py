"""Both kinds of 2-dimensional surgery on oriented triangle meshes.

Attracting surgery removes two open pole discs and glues in a triangulated
cylinder (a tube); repelling surgery removes an open annulus and caps its two
boundary cycles with discs. Truncated variants act on the local pieces only.

Orientation rule used throughout: a piece glued in induces on each boundary
cycle the same orientation as the piece it replaces, so the result stays
coherently oriented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from . import mesh
from .errors import GeometryError, InputError, PreconditionError
from .manifold import Surface2, disjoint_union, require_valid_surface, validate_surface

MAX_REFINE = 3


class Region(str, Enum):
    FULL = "full"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class PolePair2:
    a: int
    b: int
    ring_depth: int = 1


@dataclass(frozen=True)
class SurgerySpec2D:
    twists: int = 0
    region: Region = Region.FULL

    def __post_init__(self):
        object.__setattr__(self, "twists", int(self.twists))
        object.__setattr__(self, "region", Region(self.region))


@dataclass(frozen=True)
class AnnulusSpec:
    """Two disjoint vertex cycles bounding an annulus.

    ``inside`` optionally names a vertex strictly inside the annulus; it picks
    the side when both complementary regions are annuli (as on a torus).
    """

    cycle_a: tuple[int, ...]
    cycle_b: tuple[int, ...]
    twists: int = 0
    inside: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "cycle_a", tuple(int(v) for v in self.cycle_a))
        object.__setattr__(self, "cycle_b", tuple(int(v) for v in self.cycle_b))


@dataclass(frozen=True)
class TubeTrace:
    """Bookkeeping of one tube attachment, in output vertex indices.

    ``rings[0]`` is the hole cycle around pole a, ``rings[-1]`` the one
    around pole b. ``vertex_map[v]`` maps a (possibly refined) input vertex to
    its output index, or -1 when it was removed.
    """

    rings: tuple[tuple[int, ...], ...]
    vertex_map: tuple[int, ...]
    refined: int
    removed: frozenset
    centre: tuple[float, float, float]
    axis: tuple[float, float, float]

    @property
    def central_annulus(self) -> AnnulusSpec:
        L = len(self.rings) - 1
        return AnnulusSpec(self.rings[1], self.rings[L - 1], inside=self.rings[L // 2][0])


@dataclass(frozen=True)
class CapTrace:
    vertex_map: tuple[int, ...]
    caps: tuple[int, int]
    cycles: tuple[tuple[int, ...], tuple[int, ...]]


# ------------------------------------------------------------------ discs

@dataclass
class _Disc:
    triangles: list[int]
    boundary: tuple[int, ...]
    vertices: set[int] = field(default_factory=set)


def _pole_disc(triangles, adj, centre: int, depth: int) -> _Disc:
    tri_ids = mesh.disc_triangles(triangles, adj, centre, depth)
    sub = [triangles[t] for t in tri_ids]
    cycles = mesh.boundary_cycles(sub)
    if (cycles is None or len(cycles) != 1 or mesh.euler_characteristic_raw(sub) != 1
            or len(mesh.triangle_components(sub)) != 1):
        raise GeometryError(f"the depth-{depth} neighbourhood of vertex {centre} is not a disc")
    return _Disc(tri_ids, cycles[0], {v for tri in sub for v in tri})


def pole_disc(s: Surface2, v: int, depth: int = 1) -> tuple[list[int], tuple[int, ...]]:
    """Triangles and oriented boundary cycle of the k-ring disc around ``v``."""
    disc = _pole_disc(s.triangles, s.neighbours(), v, depth)
    return disc.triangles, disc.boundary


def far_pole_pair(s: Surface2, ring_depth: int = 1) -> PolePair2:
    """Two vertices far apart in graph distance (double BFS sweep)."""
    adj = s.neighbours()

    def farthest(src):
        d = mesh.bfs_distances(adj, [src])
        best = max(x for x in d if x != float("inf"))
        return min(v for v, x in enumerate(d) if x == best)

    u = farthest(0)
    return PolePair2(u, farthest(u), ring_depth)


# ------------------------------------------------------------------ tubes

def _split_hole_edges(verts, tris, dmap, cycle: list[int], count: int) -> list[int]:
    """Insert ``count`` midpoints into a hole cycle, splitting the adjacent triangles."""
    cycle = list(cycle)
    while count > 0:
        n = len(cycle)
        k = min(count, n)
        positions = sorted({(i * n) // k for i in range(k)}, reverse=True)
        for i in positions:
            u, v = cycle[i], cycle[(i + 1) % n]
            m = len(verts)
            verts.append(tuple((np.asarray(verts[u]) + np.asarray(verts[v])) / 2.0))
            t = dmap.pop((u, v), None)
            if t is not None:
                tri = tris[t]
                r = tri.index(u)
                w = tri[(r + 2) % 3]
                tris[t] = (u, m, w)
                tris.append((m, v, w))
                t2 = len(tris) - 1
                dmap.update({(u, m): t, (m, w): t, (w, u): t, (m, v): t2, (v, w): t2, (w, m): t2})
            cycle.insert(i + 1, m)
        count -= len(positions)
    return cycle


def _best_alignment(verts, alpha, beta) -> int:
    n = len(alpha)
    A = mesh.as_array([verts[v] for v in alpha])
    B = mesh.as_array([verts[v] for v in beta])
    best, best_cost = 0, None
    for c in range(n):
        idx = [(c - i) % n for i in range(n)]
        cost = float(((A - B[idx]) ** 2).sum())
        if best_cost is None or cost < best_cost - 1e-12:
            best, best_cost = c, cost
    return best


def _build_tube(verts, tris, alpha, beta, twists: int) -> list[list[int]]:
    """Glue a cylinder between hole cycles ``alpha`` and ``beta`` (equal length).

    Hole cycles are oriented as the surrounding surface sees them. Ring j has
    its vertices rotated by ``2*pi*twists*j/L`` about the tube axis; a whole
    number of turns leaves the boundary identification unchanged.
    """
    n = len(alpha)
    L = max(4, n // 2)
    c = (_best_alignment(verts, alpha, beta) + twists * n) % n
    ring0 = list(alpha)
    ringL = [beta[(c - i) % n] for i in range(n)]
    A = mesh.as_array([verts[v] for v in ring0])
    B = mesh.as_array([verts[v] for v in ringL])
    ca, cb = A.mean(axis=0), B.mean(axis=0)
    rings = [ring0]
    for j in range(1, L):
        f = j / L
        P = mesh.rotate_about_axis((1 - f) * A + f * B, ca, cb - ca, 2 * math.pi * twists * f)
        start = len(verts)
        verts.extend(tuple(p) for p in P)
        rings.append(list(range(start, start + n)))
    rings.append(ringL)
    for j in range(L):
        lo, hi = rings[j], rings[j + 1]
        for i in range(n):
            i1 = (i + 1) % n
            tris.append((lo[i1], lo[i], hi[i]))
            tris.append((lo[i1], hi[i], hi[i1]))
    return rings


def _equalize_and_tube(verts, tris, keep_dmap, alpha, beta, twists):
    alpha, beta = list(alpha), list(beta)
    if len(alpha) < len(beta):
        alpha = _split_hole_edges(verts, tris, keep_dmap, alpha, len(beta) - len(alpha))
    elif len(beta) < len(alpha):
        beta = _split_hole_edges(verts, tris, keep_dmap, beta, len(alpha) - len(beta))
    if len(alpha) != len(beta):
        raise GeometryError("failed to re-mesh hole boundaries to a common length")
    return _build_tube(verts, tris, alpha, beta, twists)


def _finish(verts, tris, rings, removed, refined, allow_boundary=False):
    new_verts, new_tris, old_to_new = mesh.compact(verts, tris)
    out = Surface2(new_verts, new_tris)
    rep = validate_surface(out, allow_boundary)
    if not rep.valid:
        raise GeometryError(f"surgery produced an invalid mesh: {rep.violations[0][0]}")
    new_rings = tuple(tuple(old_to_new[v] for v in r) for r in rings)
    A = mesh.as_array([new_verts[v] for v in new_rings[0]]).mean(axis=0)
    B = mesh.as_array([new_verts[v] for v in new_rings[-1]]).mean(axis=0)
    trace = TubeTrace(new_rings, tuple(old_to_new), refined, frozenset(removed),
                      tuple(float(x) for x in (A + B) / 2), tuple(float(x) for x in B - A))
    return out, trace


def _attach_tube(s: Surface2, a: int, b: int, depth: int, twists: int, refine_overlap: bool):
    verts, tris = list(s.vertices), list(s.triangles)
    refined = 0
    while True:
        adj = mesh.neighbours(len(verts), tris)
        disc_a = _pole_disc(tris, adj, a, depth)
        disc_b = _pole_disc(tris, adj, b, depth)
        if not disc_a.vertices & disc_b.vertices:
            break
        if not refine_overlap or refined >= MAX_REFINE:
            raise InputError("pole disc neighbourhoods overlap")
        verts, tris = mesh.subdivide(verts, tris)
        refined += 1
    drop = set(disc_a.triangles) | set(disc_b.triangles)
    keep = [tri for t, tri in enumerate(tris) if t not in drop]
    removed = (disc_a.vertices - set(disc_a.boundary)) | (disc_b.vertices - set(disc_b.boundary))
    dmap = mesh.directed_edge_index(keep)
    alpha = disc_a.boundary[::-1]
    beta = disc_b.boundary[::-1]
    rings = _equalize_and_tube(verts, keep, dmap, alpha, beta, twists)
    return _finish(verts, keep, rings, removed, refined)


def _check_poles2(s: Surface2, poles: PolePair2) -> None:
    for v in (poles.a, poles.b):
        if not 0 <= v < s.n_vertices:
            raise InputError(f"pole index {v} out of range")
    if poles.a == poles.b:
        raise InputError("poles coincide")
    if poles.ring_depth < 1:
        raise InputError("ring_depth must be >= 1")


def _n_components(s: Surface2) -> int:
    return len(set(mesh.vertex_component_labels(s.n_vertices, s.triangles)))


def attract_2d_traced(s: Surface2, poles: PolePair2, spec: SurgerySpec2D = SurgerySpec2D(),
                      refine_overlap: bool = False) -> tuple[Surface2, TubeTrace]:
    require_valid_surface(s)
    _check_poles2(s, poles)
    if _n_components(s) != 1:
        raise PreconditionError("attracting surgery expects a connected surface")
    if spec.region is Region.TRUNCATED:
        adj = s.neighbours()
        discs = [_pole_disc(s.triangles, adj, v, poles.ring_depth) for v in (poles.a, poles.b)]
        if discs[0].vertices & discs[1].vertices:
            raise InputError("pole disc neighbourhoods overlap")
        local = [_submesh(s, d.triangles) for d in discs]
        return truncated_attract_traced(local[0], local[1], spec.twists)
    return _attach_tube(s, poles.a, poles.b, poles.ring_depth, spec.twists, refine_overlap)


def attract_2d(s: Surface2, poles: PolePair2, spec: SurgerySpec2D = SurgerySpec2D(),
               refine_overlap: bool = False) -> Surface2:
    """Remove the two pole discs and glue in a twisted cylinder.

    If ``refine_overlap`` is set and the closed discs intersect, the mesh is
    1->4 subdivided (pole indices are kept) until they are disjoint.
    With ``spec.region == "truncated"`` only the local annulus is returned.
    """
    return attract_2d_traced(s, poles, spec, refine_overlap)[0]


def connect_sum_traced(s1: Surface2, s2: Surface2, a: int, b: int, ring_depth: int = 1,
                       twists: int = 0, refine_overlap: bool = False):
    """Tube from vertex ``a`` of ``s1`` to vertex ``b`` of ``s2`` (merging them)."""
    require_valid_surface(s1)
    require_valid_surface(s2)
    union = disjoint_union(s1, s2)
    return _attach_tube(union, a, s1.n_vertices + b, ring_depth, twists, refine_overlap)


def connect_sum(s1: Surface2, s2: Surface2, a: int, b: int, ring_depth: int = 1,
                twists: int = 0, refine_overlap: bool = False) -> Surface2:
    return connect_sum_traced(s1, s2, a, b, ring_depth, twists, refine_overlap)[0]


def _submesh(s: Surface2, tri_ids) -> Surface2:
    tris = [s.triangles[t] for t in sorted(tri_ids)]
    verts, tris, _ = mesh.compact(list(s.vertices), tris)
    return Surface2(verts, tris)


# ----------------------------------------------------------------- annuli

def _check_cycle(s_tris_edges, cycle, n_vertices) -> None:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise InputError("annulus boundary must be a simple cycle of length >= 3")
    for v in cycle:
        if not 0 <= v < n_vertices:
            raise InputError(f"vertex {v} out of range")
    missing = mesh.cycle_edges(cycle) - s_tris_edges
    if missing:
        raise InputError(f"cycle uses non-edges {sorted(missing)[:3]}")


def _annulus_region(s: Surface2, annulus: AnnulusSpec) -> list[int]:
    all_edges = set(mesh.edge_map(s.triangles))
    for cyc in (annulus.cycle_a, annulus.cycle_b):
        _check_cycle(all_edges, cyc, s.n_vertices)
    if set(annulus.cycle_a) & set(annulus.cycle_b):
        raise InputError("annulus boundary cycles must be disjoint")
    cut = mesh.cycle_edges(annulus.cycle_a) | mesh.cycle_edges(annulus.cycle_b)
    on_cycles = set(annulus.cycle_a) | set(annulus.cycle_b)
    candidates = []
    for group in mesh.triangle_components(s.triangles, blocked=cut):
        sub = [s.triangles[t] for t in group]
        bd = {mesh.undirected(u, v) for u, v in mesh.boundary_directed_edges(sub)}
        cycles = mesh.boundary_cycles(sub)
        if bd == cut and cycles is not None and len(cycles) == 2 and mesh.euler_characteristic_raw(sub) == 0:
            candidates.append(group)
    if annulus.inside is not None:
        if annulus.inside in on_cycles:
            raise InputError("the inside vertex lies on a boundary cycle")
        candidates = [g for g in candidates if any(annulus.inside in s.triangles[t] for t in g)]
    if not candidates:
        raise InputError("the region between the cycles is not an annulus")
    return min(candidates, key=lambda g: (len(g), g[0]))


def _cap_cycles(verts, keep, region_tris, cycles):
    """Cap each cycle with a fan disc oriented like the removed region."""
    dmap = mesh.directed_edge_index(region_tris)
    centres = []
    for cyc in cycles:
        centre = len(verts)
        verts.append(tuple(mesh.as_array([verts[v] for v in cyc]).mean(axis=0)))
        centres.append(centre)
        n = len(cyc)
        for i in range(n):
            u, v = cyc[i], cyc[(i + 1) % n]
            keep.append((u, v, centre) if (u, v) in dmap else (v, u, centre))
    return centres


def _repel(s: Surface2, annulus: AnnulusSpec, allow_boundary: bool) -> tuple[Surface2, CapTrace]:
    region = set(_annulus_region(s, annulus))
    verts = list(s.vertices)
    keep = [tri for t, tri in enumerate(s.triangles) if t not in region]
    region_tris = [s.triangles[t] for t in sorted(region)]
    cycles = (annulus.cycle_a, annulus.cycle_b)
    centres = _cap_cycles(verts, keep, region_tris, cycles)
    new_verts, new_tris, old_to_new = mesh.compact(verts, keep)
    out = Surface2(new_verts, new_tris)
    rep = validate_surface(out, allow_boundary)
    if not rep.valid:
        raise GeometryError(f"capping produced an invalid mesh: {rep.violations[0][0]}")
    trace = CapTrace(tuple(old_to_new[: s.n_vertices]), (old_to_new[centres[0]], old_to_new[centres[1]]),
                     tuple(tuple(old_to_new[v] for v in c) for c in cycles))
    return out, trace


def repel_2d_traced(s: Surface2, annulus: AnnulusSpec) -> tuple[Surface2, CapTrace]:
    require_valid_surface(s)
    return _repel(s, annulus, allow_boundary=False)


def repel_2d(s: Surface2, annulus: AnnulusSpec) -> Surface2:
    """Remove the open annulus and cap both boundary cycles with discs.

    The twist count of ``annulus`` does not change the combinatorics.
    """
    return repel_2d_traced(s, annulus)[0]


def central_annulus(s: Surface2, a: int, b: int, half_width: int = 1, twists: int = 0) -> AnnulusSpec:
    """Annulus around the combinatorial equator between poles ``a`` and ``b``.

    Its cycles are the boundaries of the pole discs of depth D//2 - half_width,
    D being the graph distance from ``a`` to ``b``.
    """
    adj = s.neighbours()
    da = mesh.bfs_distances(adj, [a])
    D = da[b]
    if D == float("inf"):
        raise InputError("poles lie on different components")
    depth = int(D) // 2 - half_width
    if depth < 1:
        raise GeometryError("mesh too coarse for a central annulus between these poles")
    disc_a = _pole_disc(s.triangles, adj, a, depth)
    disc_b = _pole_disc(s.triangles, adj, b, depth)
    if disc_a.vertices & disc_b.vertices:
        raise GeometryError("pole discs meet; no annulus between them")
    inside = min(v for v, d in enumerate(da) if d == int(D) // 2)
    return AnnulusSpec(disc_a.boundary, disc_b.boundary, twists, inside)


def refine_for_annulus(s: Surface2, a: int, b: int, half_width: int = 1) -> Surface2:
    """Subdivide until ``central_annulus`` fits; pole indices are preserved."""
    for _ in range(MAX_REFINE + 1):
        try:
            central_annulus(s, a, b, half_width)
            return s
        except GeometryError:
            verts, tris = mesh.subdivide(s.vertices, s.triangles)
            s = Surface2(verts, tris)
    raise GeometryError("could not refine the mesh to host a central annulus")


# -------------------------------------------------------------- truncated

def _as_two_discs(local) -> tuple[Surface2, Surface2]:
    if isinstance(local, Surface2):
        from .manifold import surface_components
        parts = [p for p, _ in surface_components(local)]
    else:
        parts = list(local)
    if len(parts) != 2:
        raise InputError("truncated attracting surgery takes exactly two discs")
    for d in parts:
        require_valid_surface(d, allow_boundary=True)
        cycles = mesh.boundary_cycles(d.triangles)
        if (cycles is None or len(cycles) != 1 or mesh.euler_characteristic_raw(d.triangles) != 1
                or _n_components(d) != 1):
            raise InputError("local input is not a pair of discs")
    return parts[0], parts[1]


def truncated_attract_traced(disc_a: Surface2, disc_b: Surface2, twists: int = 0):
    disc_a, disc_b = _as_two_discs((disc_a, disc_b))
    union = disjoint_union(disc_a, disc_b)
    verts = list(union.vertices)
    n_a = disc_a.n_vertices
    alpha = mesh.boundary_cycles(disc_a.triangles)[0][::-1]
    beta = tuple(v + n_a for v in mesh.boundary_cycles(disc_b.triangles)[0])[::-1]
    tris: list = []
    rings = _equalize_and_tube(verts, tris, {}, alpha, beta, twists)
    removed = set(range(union.n_vertices)) - set(alpha) - set(beta)
    return _finish(verts, tris, rings, removed, 0, allow_boundary=True)


def truncated_2d(kind: str, local_input, twists: int = 0, cycles=None) -> Surface2:
    """Surgery restricted to the local region.

    ``attract``: ``local_input`` is two disc meshes (a pair, or one mesh with
    two disc components); the result is the cylinder glued along their
    boundaries. ``repel``: ``local_input`` is an annulus mesh; the region
    between ``cycles`` (default: its two boundary cycles) is replaced by caps.
    """
    if kind == "attract":
        return truncated_attract_traced(*_as_two_discs(local_input), twists)[0]
    if kind == "repel":
        s = local_input
        require_valid_surface(s, allow_boundary=True)
        if cycles is None:
            bd = mesh.boundary_cycles(s.triangles)
            if bd is None or len(bd) != 2 or mesh.euler_characteristic_raw(s.triangles) != 0:
                raise InputError("local input is not an annulus")
            spec = AnnulusSpec(bd[0], bd[1], twists)
        elif isinstance(cycles, AnnulusSpec):
            spec = cycles
        else:
            spec = AnnulusSpec(cycles[0], cycles[1], twists)
        return _repel(s, spec, allow_boundary=True)[0]
    raise InputError(f"unknown truncated surgery kind {kind!r}")
