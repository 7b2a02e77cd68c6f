"""Time-parameterized frame sequences for the surgery processes.

Frames are sampled uniformly on [0, 1]. The middle sample (index T // 2) is the
singular recoupling instant: its geometry is the pinched object and fails
manifold validation on purpose. Pre-singular frames carry the input
combinatorics, post-singular frames the static output's. The last frame is
identical to the static output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mesh
from .errors import GeometryError, InputError
from .manifold import Curve1, Surface2, validate_curve, validate_surface
from .surgery1d import PolePair1, Reconnection, attract_1d, complementary_poles, repel_1d
from .surgery2d import (
    PolePair2,
    SurgerySpec2D,
    attract_2d_traced,
    central_annulus,
    repel_2d_traced,
)
from .surgery3d import TruncatedScene3

PRE, SINGULAR, POST = "pre", "singular", "post"


@dataclass(frozen=True)
class Frame:
    time: float
    geometry: object
    phase: str
    curve: tuple | None = None


@dataclass(frozen=True)
class FrameSequence:
    frames: tuple
    singular_index: int
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        marked = [i for i, f in enumerate(self.frames) if f.phase == SINGULAR]
        if marked != [self.singular_index]:
            raise InputError("a frame sequence needs exactly one singular frame")

    @property
    def times(self) -> list[float]:
        return [f.time for f in self.frames]

    @property
    def phases(self) -> list[str]:
        return [f.phase for f in self.frames]

    def invalid_frames(self) -> list[int]:
        """Indices of non-singular frames that fail their validator."""
        bad = []
        for i, f in enumerate(self.frames):
            if f.phase != SINGULAR and not validate_frame(f.geometry).valid:
                bad.append(i)
        return bad


def validate_frame(g):
    return validate_curve(g) if isinstance(g, Curve1) else validate_surface(g)


def _schedule(T: int, minimum: int = 3):
    if T < minimum:
        raise InputError(f"frame count must be >= {minimum}")
    mid = T // 2
    out = []
    for i in range(T):
        t = i / (T - 1)
        if i < mid:
            out.append((t, PRE, i / mid))
        elif i == mid:
            out.append((t, SINGULAR, 1.0))
        else:
            out.append((t, POST, (i - mid) / (T - 1 - mid)))
    return mid, out


def _lerp(start: np.ndarray, end: np.ndarray, u: float) -> np.ndarray:
    return (1.0 - u) * start + u * end


def _pts(a: np.ndarray) -> list[tuple[float, float, float]]:
    return [tuple(float(x) for x in p) for p in a]


def _start_positions(n_out: int, vertex_map, pinched: np.ndarray, rest) -> np.ndarray:
    """Post-frame start: survivors at their pinched positions, new vertices at ``rest``."""
    start = np.tile(np.asarray(rest, dtype=float), (n_out, 1))
    for old, new in enumerate(vertex_map[:len(pinched)]):
        if new >= 0:
            start[new] = pinched[old]
    return start


def _merge_vertex(n: int, keep: int, drop: int):
    """Reindex map identifying ``drop`` with ``keep``, removing ``drop``."""
    new = []
    k = 0
    for v in range(n):
        if v == drop:
            new.append(None)
        else:
            new.append(k)
            k += 1
    new[drop] = new[keep]
    return new


# ---------------------------------------------------------------- 1-d

def _cycle_distance(c: Curve1, src: int) -> dict[int, int]:
    for cyc in c.cycles:
        if src in cyc:
            n = len(cyc)
            i0 = cyc.index(src)
            return {v: min((i - i0) % n, (i0 - i) % n) for i, v in enumerate(cyc)}
    return {}


def _pull(X: np.ndarray, dist: dict, h: int, target: np.ndarray, pole: np.ndarray, s: float) -> None:
    for v, d in dist.items():
        if d <= h:
            X[v] += s * (1.0 - d / (h + 1)) * (target - pole)


def frames_1d(c: Curve1, poles: PolePair1, mode: str = "attract", rec=Reconnection.SPLIT,
              T: int = 9) -> FrameSequence:
    """Pole segments approach (attract) or the complementary segments do (repel)."""
    mid, sched = _schedule(T)
    if c.coords is None:
        raise InputError("frame generation needs vertex coordinates")
    rec = Reconnection(rec)
    if mode == "attract":
        static = attract_1d(c, poles, rec)
        active = poles
    elif mode == "repel":
        static = repel_1d(c, poles, rec)
        active = complementary_poles(c, poles)
    else:
        raise InputError(f"unknown mode {mode!r}")
    X0 = mesh.as_array(c.coords)
    h = active.neighbourhood_size
    Pa, Pb = X0[active.a], X0[active.b]
    M = (Pa + Pb) / 2
    da, db = _cycle_distance(c, active.a), _cycle_distance(c, active.b)
    if mode == "repel":
        oa, ob = _cycle_distance(c, poles.a), _cycle_distance(c, poles.b)
        Qa, Qb = X0[poles.a], X0[poles.b]
        Mq = (Qa + Qb) / 2

    def deformed(s):
        X = X0.copy()
        _pull(X, da, h, M, Pa, s)
        _pull(X, db, h, M, Pb, s)
        if mode == "repel":
            _pull(X, oa, h, Qa + 0.5 * (Qa - Mq), Qa, s)
            _pull(X, ob, h, Qb + 0.5 * (Qb - Mq), Qb, s)
        return X

    removed = {v for dist in (da, db) for v, d in dist.items() if d < h}
    survivors = [v for v in range(c.n_vertices) if v not in removed]
    if len(survivors) != static.n_vertices:
        raise GeometryError("could not match output vertices to the input")
    vmap = [-1] * c.n_vertices
    for new, old in enumerate(survivors):
        vmap[old] = new
    pinched = deformed(1.0)
    start = _start_positions(static.n_vertices, vmap, pinched, M)
    end = mesh.as_array(static.coords)

    frames = []
    for t, phase, s in sched:
        if phase == PRE:
            g = Curve1(c.labels, c.cycles, _pts(deformed(s)))
        elif phase == SINGULAR:
            g = _pinched_curve(c, active.a, active.b, pinched)
        else:
            g = Curve1(static.labels, static.cycles, _pts(end if s == 1.0 else _lerp(start, end, s)))
        frames.append(Frame(t, g, phase))
    meta = {"kind": "1d", "mode": mode, "rec": rec.value, "poles": [poles.a, poles.b],
            "active_poles": [active.a, active.b]}
    return FrameSequence(frames, mid, meta)


def _pinched_curve(c: Curve1, a: int, b: int, X: np.ndarray) -> Curve1:
    new = _merge_vertex(c.n_vertices, a, b)
    keep = [v for v in range(c.n_vertices) if v != b]
    cycles = [tuple(new[v] for v in cyc) for cyc in c.cycles]
    return Curve1([c.labels[v] for v in keep], cycles, _pts(X[keep]))


# ---------------------------------------------------------------- 2-d

def _pinched_surface(s_vertices: np.ndarray, triangles, a: int, b: int) -> Surface2:
    n = len(s_vertices)
    new = _merge_vertex(n, a, b)
    keep = [v for v in range(n) if v != b]
    tris = [tuple(new[v] for v in tri) for tri in triangles]
    return Surface2(_pts(s_vertices[keep]), tris)


def ring_angle(points: np.ndarray, origin, axis, reference: np.ndarray) -> float:
    """Mean signed rotation angle of ``points`` relative to ``reference`` about a line."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    angles = []
    for p, q in zip(points, reference):
        u = q - origin
        v = p - origin
        u = u - (u @ k) * k
        v = v - (v @ k) * k
        if np.linalg.norm(u) < 1e-12 or np.linalg.norm(v) < 1e-12:
            continue
        angles.append(math.atan2(float(np.cross(u, v) @ k), float(u @ v)))
    return float(np.mean(angles)) if angles else 0.0


def frames_2d(s: Surface2, poles: PolePair2, spec: SurgerySpec2D = SurgerySpec2D(), mode: str = "attract",
              T: int = 9, half_width: int = 1) -> FrameSequence:
    """Attract: pole discs approach with twist 2*pi*t*s. Repel: the equator necks to a pinch."""
    mid, sched = _schedule(T)
    X0 = mesh.as_array(s.vertices)
    Pa, Pb = X0[poles.a], X0[poles.b]
    C = (Pa + Pb) / 2
    axis = Pb - Pa
    if np.linalg.norm(axis) == 0:
        raise InputError("pole positions coincide")
    adj = s.neighbours()
    da = mesh.bfs_distances(adj, [poles.a])
    db = mesh.bfs_distances(adj, [poles.b])
    frames = []
    meta = {"kind": "2d", "mode": mode, "poles": [poles.a, poles.b], "twists": spec.twists}

    if mode == "attract":
        static, trace = attract_2d_traced(s, poles, spec)
        depth = poles.ring_depth
        disc_a = [v for v in range(s.n_vertices) if da[v] <= depth]
        disc_b = [v for v in range(s.n_vertices) if db[v] <= depth]

        def deformed(sv):
            X = X0.copy()
            for v in disc_a:
                X[v] += sv * (1.0 - da[v] / (depth + 1)) * (C - Pa)
            for v in disc_b:
                X[v] += sv * (1.0 - db[v] / (depth + 1)) * (C - Pb)
            angle = 2 * math.pi * spec.twists * sv
            X[disc_a] = mesh.rotate_about_axis(X[disc_a], X[poles.a], axis, angle)
            return X

        pinched = deformed(1.0)
        start = _start_positions(static.n_vertices, trace.vertex_map, pinched, C)
        meta["twist_angles"] = []
        meta["ring"] = [v for v in disc_a if da[v] == depth]
        for t, phase, sv in sched:
            if phase == PRE:
                g = Surface2(_pts(deformed(sv)), s.triangles)
            elif phase == SINGULAR:
                g = _pinched_surface(pinched, s.triangles, poles.a, poles.b)
            else:
                end = mesh.as_array(static.vertices)
                g = static if sv == 1.0 else Surface2(_pts(_lerp(start, end, sv)), static.triangles)
            meta["twist_angles"].append(2 * math.pi * spec.twists * (sv if phase != POST else 1.0))
            frames.append(Frame(t, g, phase))
        return FrameSequence(frames, mid, meta)

    if mode != "repel":
        raise InputError(f"unknown mode {mode!r}")
    annulus = central_annulus(s, poles.a, poles.b, half_width, spec.twists)
    static, trace = repel_2d_traced(s, annulus)
    D = da[poles.b]
    d = axis / np.linalg.norm(axis)
    g_weight = np.array([max(0.0, 1.0 - abs(da[v] - db[v]) / D) for v in range(s.n_vertices)])

    def necked(sv):
        rel = X0 - C
        ax = np.outer(rel @ d, d)
        rad = rel - ax
        return C + ax * (1.0 + 0.5 * sv) + rad * (1.0 - sv * g_weight)[:, None]

    pinched = necked(1.0)
    start = _start_positions(static.n_vertices, trace.vertex_map, pinched, C)
    # the two caps are identified at the singular instant
    c1, c2 = trace.caps
    meta["equator"] = [v for v in range(s.n_vertices) if da[v] == db[v]]
    for t, phase, sv in sched:
        if phase == PRE:
            g = Surface2(_pts(necked(sv)), s.triangles)
        elif phase == SINGULAR:
            g = _pinched_surface(start, static.triangles, c1, c2)
        else:
            end = mesh.as_array(static.vertices)
            g = static if sv == 1.0 else Surface2(_pts(_lerp(start, end, sv)), static.triangles)
        frames.append(Frame(t, g, phase))
    return FrameSequence(frames, mid, meta)


# ------------------------------------------------------- truncated 3-d

def uv_sphere(n_lon: int = 12, n_lat: int = 7) -> Surface2:
    """Unit UV sphere: vertex 0 is the bottom pole, 1 the top pole, then rings bottom to top."""
    verts = [(0.0, 0.0, -1.0), (0.0, 0.0, 1.0)]
    for r in range(n_lat):
        phi = math.pi * (r + 1) / (n_lat + 1)
        for j in range(n_lon):
            th = 2 * math.pi * j / n_lon
            verts.append((math.sin(phi) * math.cos(th), math.sin(phi) * math.sin(th), -math.cos(phi)))

    def idx(r, j):
        return 2 + r * n_lon + j % n_lon

    tris = []
    for j in range(n_lon):
        tris.append((0, idx(0, j + 1), idx(0, j)))
        tris.append((1, idx(n_lat - 1, j), idx(n_lat - 1, j + 1)))
    for r in range(n_lat - 1):
        for j in range(n_lon):
            tris.append((idx(r, j), idx(r, j + 1), idx(r + 1, j + 1)))
            tris.append((idx(r, j), idx(r + 1, j + 1), idx(r + 1, j)))
    return Surface2(verts, tris)


def axial_winding(points) -> float:
    """Total turning of a polyline about the z axis, in turns (points on the axis are skipped)."""
    P = mesh.as_array(points)
    keep = np.hypot(P[:, 0], P[:, 1]) > 1e-9
    ang = np.unwrap(np.arctan2(P[keep, 1], P[keep, 0]))
    return float((ang[-1] - ang[0]) / (2 * math.pi)) if len(ang) else 0.0


def frames_truncated_3d(scene: TruncatedScene3, T: int = 9, n_lon: int = 12, n_lat: int = 7) -> FrameSequence:
    """Cylinder with a (p, 1) curve thickens to a ball, untwists, and its ends merge into a tunnel.

    The tracked curve is the mesh column at longitude 0: a helix winding p
    times at the start, closed at the end through the matching tube column
    so that it bounds a meridian disc of the resulting solid torus.
    """
    p, q = scene.parallel_curve.m, scene.parallel_curve.l
    if q != 1:
        raise InputError("only (p, 1) parallel curves are supported by the truncated 3-d frames")
    mid, sched = _schedule(T, minimum=5)
    base = uv_sphere(n_lon, n_lat)
    ball = mesh.as_array(base.vertices)
    ring_of = np.full(len(ball), -1)
    for r in range(n_lat):
        ring_of[2 + r * n_lon: 2 + (r + 1) * n_lon] = r
    # cylinder of radius 0.45 and half-height 1.5 with its poles just beyond the ends
    cyl = ball.copy()
    for v in range(2, len(ball)):
        r = ring_of[v]
        norm = np.hypot(ball[v, 0], ball[v, 1])
        cyl[v, :2] = ball[v, :2] / norm * 0.45
        cyl[v, 2] = -1.5 + 3.0 * r / (n_lat - 1)
    cyl[0, 2], cyl[1, 2] = -1.7, 1.7
    column = [0] + [2 + r * n_lon for r in range(n_lat)] + [1]
    bottom, top = 0, 1
    C = np.zeros(3)
    adj = base.neighbours()
    dbot = mesh.bfs_distances(adj, [bottom])
    dtop = mesh.bfs_distances(adj, [top])

    def shape(s):
        thick = min(1.0, s / 0.4)
        later = max(0.0, (s - 0.4) / 0.6)
        X = _lerp(cyl, ball, thick)
        twist = 1.0 - later
        for v in range(2, len(X)):
            psi = 2 * math.pi * p * ring_of[v] / (n_lat - 1) * twist
            X[v] = mesh.rotate_about_axis(X[v:v + 1], C, (0, 0, 1), psi)[0]
        for dist, pole in ((dbot, bottom), (dtop, top)):
            P = X[pole].copy()
            for v in range(len(X)):
                if dist[v] <= 1:
                    X[v] += later * (1.0 - dist[v] / 2) * (C - P)
        return X

    static, trace = attract_2d_traced(base, PolePair2(bottom, top, 1))
    pinched = shape(1.0)
    start = _start_positions(static.n_vertices, trace.vertex_map, pinched, C)
    end = mesh.as_array(static.vertices)
    loop = _tube_loop(trace, [trace.vertex_map[v] for v in column[1:-1]])

    frames = []
    for t, phase, s in sched:
        if phase == PRE:
            X = shape(s)
            g = Surface2(_pts(X), base.triangles)
            curve = tuple(_pts(X[column]))
        elif phase == SINGULAR:
            g = _pinched_surface(pinched, base.triangles, bottom, top)
            curve = tuple(_pts(pinched[column[:-1]]))
        else:
            Y = end if s == 1.0 else _lerp(start, end, s)
            g = static if s == 1.0 else Surface2(_pts(Y), static.triangles)
            curve = tuple(_pts(Y[loop]))
        frames.append(Frame(t, g, phase, curve))
    meta = {"kind": "truncated3d", "p": p, "q": q, "mode": scene.mode,
            "curve_closed": [False] * mid + [True] * (T - mid)}
    return FrameSequence(frames, mid, meta)


def _tube_loop(trace, outer: list[int]) -> list[int]:
    """Outer column bottom -> top followed by the tube column back down."""
    first = trace.rings[0]
    if outer[0] not in first:
        raise GeometryError("tracked column does not start on the tube boundary")
    i = first.index(outer[0])
    tube = [trace.rings[j][i] for j in range(len(trace.rings))]
    if tube[-1] != outer[-1]:
        raise GeometryError("tube column does not close the tracked curve")
    return outer + tube[-2:0:-1]


def core_linking(points, radius: float) -> int:
    """Signed crossings of a closed polyline with the disc of ``radius`` in the plane z = 0."""
    P = mesh.as_array(points)
    total = 0
    for i in range(len(P)):
        a, b = P[i], P[(i + 1) % len(P)]
        if (a[2] < 0) != (b[2] < 0):
            f = a[2] / (a[2] - b[2])
            x = a + f * (b - a)
            if math.hypot(x[0], x[1]) < radius:
                total += 1 if b[2] > a[2] else -1
    return total


# -------------------------------------------------------- cross-section

def pole_plane(pa, pb, tilt: float = 0.1234) -> tuple[np.ndarray, np.ndarray]:
    """A plane through both pole positions, turned by ``tilt`` about their axis."""
    pa, pb = np.asarray(pa, dtype=float), np.asarray(pb, dtype=float)
    d = pb - pa
    d = d / np.linalg.norm(d)
    trial = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = trial - (trial @ d) * d
    u /= np.linalg.norm(u)
    w = np.cross(d, u)
    return pa, math.cos(tilt) * u + math.sin(tilt) * w


def section_surface(s: Surface2, point, normal) -> Curve1:
    """Intersection polygons of a mesh with a plane. Vertices on the plane count as positive."""
    X = mesh.as_array(s.vertices)
    h = (X - np.asarray(point)) @ np.asarray(normal)
    pos = h >= 0
    emap = mesh.edge_map(s.triangles)
    crossing = sorted(e for e in emap if pos[e[0]] != pos[e[1]])
    index = {e: i for i, e in enumerate(crossing)}
    coords = []
    for u, v in crossing:
        f = h[u] / (h[u] - h[v])
        coords.append(tuple(float(x) for x in X[u] + f * (X[v] - X[u])))
    links: list[list[int]] = [[] for _ in crossing]
    for tri in s.triangles:
        cut = [index[mesh.undirected(a, b)] for a, b in mesh.triangle_edges(tri)
               if mesh.undirected(a, b) in index]
        if len(cut) == 2:
            links[cut[0]].append(cut[1])
            links[cut[1]].append(cut[0])
    return Curve1([f"{u}-{v}" for u, v in crossing], _trace_cycles(links), coords)


def _trace_cycles(links) -> list[tuple[int, ...]]:
    remaining = [set(l) for l in links]
    cycles = []
    for start in range(len(links)):
        while remaining[start]:
            cyc, cur = [start], start
            nxt = min(remaining[cur])
            while True:
                remaining[cur].discard(nxt)
                remaining[nxt].discard(cur)
                if nxt == start:
                    break
                cyc.append(nxt)
                cur = nxt
                if not remaining[cur]:
                    break
                nxt = min(remaining[cur])
            cycles.append(tuple(cyc))
    return cycles


def cross_section(fs: FrameSequence, plane=None) -> FrameSequence:
    """Slice every frame of a 2-d sequence by a plane through both poles."""
    if fs.meta.get("kind") != "2d":
        raise InputError("cross sections are defined for 2-d frame sequences")
    X0 = mesh.as_array(fs.frames[0].geometry.vertices)
    pa, pb = X0[fs.meta["poles"][0]], X0[fs.meta["poles"][1]]
    if plane is None:
        point, normal = pole_plane(pa, pb)
    else:
        point, normal = (np.asarray(x, dtype=float) for x in plane)
        normal = normal / np.linalg.norm(normal)
        scale = max(1.0, float(np.linalg.norm(pb - pa)))
        for p in (pa, pb):
            if abs(float((p - point) @ normal)) > 1e-9 * scale:
                raise InputError("the section plane must contain both poles")
    frames = [Frame(f.time, section_surface(f.geometry, point, normal), f.phase) for f in fs.frames]
    meta = dict(fs.meta, kind="1d-section", plane=[list(map(float, point)), list(map(float, normal))])
    return FrameSequence(frames, fs.singular_index, meta)


def section_poles(section: Curve1, pa, pb, h: int = 1) -> PolePair1:
    """Section vertices closest to the two pole positions."""
    X = mesh.as_array(section.coords)
    a = int(np.argmin(np.linalg.norm(X - np.asarray(pa), axis=1)))
    b = int(np.argmin(np.linalg.norm(X - np.asarray(pb), axis=1)))
    return PolePair1(a, b, h)
