"""Combinatorial helpers on indexed triangle lists.

Everything here works on plain sequences (vertex coordinates, triangle index
triples) so the surgery modules can build meshes incrementally before they
freeze them into :class:`~topsurgery.manifold.Surface2` values.
"""

from __future__ import annotations

from collections import defaultdict, deque
from typing import Iterable, Sequence

import numpy as np


def undirected(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def triangle_edges(tri):
    a, b, c = tri
    return ((a, b), (b, c), (c, a))


def edge_map(triangles: Sequence[Sequence[int]]) -> dict[tuple[int, int], list[tuple[int, tuple[int, int]]]]:
    """Undirected edge -> list of (triangle index, directed edge as it occurs)."""
    out: dict[tuple[int, int], list] = defaultdict(list)
    for t, tri in enumerate(triangles):
        for u, v in triangle_edges(tri):
            out[undirected(u, v)].append((t, (u, v)))
    return out


def edges(triangles) -> list[tuple[int, int]]:
    return sorted(edge_map(triangles))


def directed_edge_index(triangles) -> dict[tuple[int, int], int]:
    out = {}
    for t, tri in enumerate(triangles):
        for e in triangle_edges(tri):
            out[e] = t
    return out


def neighbours(n_vertices: int, triangles) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(n_vertices)]
    for tri in triangles:
        for u, v in triangle_edges(tri):
            adj[u].add(v)
            adj[v].add(u)
    return adj


def bfs_distances(adj: Sequence[Iterable[int]], sources: Iterable[int]) -> list[float]:
    dist = [float("inf")] * len(adj)
    queue = deque()
    for s in sources:
        dist[s] = 0
        queue.append(s)
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if dist[w] > dist[u] + 1:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def vertex_component_labels(n_vertices: int, triangles) -> list[int]:
    uf = UnionFind(n_vertices)
    for a, b, c in triangles:
        uf.union(a, b)
        uf.union(b, c)
    return [uf.find(v) for v in range(n_vertices)]


def triangle_components(triangles, subset=None, blocked=frozenset()) -> list[list[int]]:
    """Group triangles connected across edges that are not in ``blocked``.

    Components are returned sorted by their lowest triangle index.
    """
    idx = sorted(range(len(triangles)) if subset is None else subset)
    members = set(idx)
    uf = UnionFind(len(triangles))
    first: dict[tuple[int, int], int] = {}
    for t in idx:
        for u, v in triangle_edges(triangles[t]):
            e = undirected(u, v)
            if e in blocked:
                continue
            if e in first:
                uf.union(first[e], t)
            else:
                first[e] = t
    groups: dict[int, list[int]] = defaultdict(list)
    for t in idx:
        if t in members:
            groups[uf.find(t)].append(t)
    return sorted(groups.values(), key=lambda g: g[0])


def boundary_directed_edges(triangles) -> list[tuple[int, int]]:
    """Directed edges (u, v) whose reverse does not occur and that occur once."""
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for tri in triangles:
        for e in triangle_edges(tri):
            counts[e] += 1
    out = []
    for (u, v), k in counts.items():
        if k == 1 and (v, u) not in counts:
            out.append((u, v))
    return sorted(out)


def boundary_cycles(triangles) -> list[tuple[int, ...]] | None:
    """Oriented boundary cycles, following each boundary edge as it occurs.

    Each cycle starts at its smallest vertex. Returns ``None`` when the
    boundary is not a disjoint union of simple cycles (a vertex with two
    outgoing boundary edges).
    """
    succ: dict[int, int] = {}
    for u, v in boundary_directed_edges(triangles):
        if u in succ:
            return None
        succ[u] = v
    if len(set(succ.values())) != len(succ):
        return None
    cycles = []
    seen: set[int] = set()
    for start in sorted(succ):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        v = succ[start]
        while v != start:
            if v in seen or v not in succ:
                return None
            cyc.append(v)
            seen.add(v)
            v = succ[v]
        cycles.append(tuple(cyc))
    return cycles


def cycle_edges(cycle: Sequence[int]) -> set[tuple[int, int]]:
    n = len(cycle)
    return {undirected(cycle[i], cycle[(i + 1) % n]) for i in range(n)}


def rotate_to_min(cycle: Sequence[int]) -> tuple[int, ...]:
    k = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[k:]) + tuple(cycle[:k])


def euler_characteristic_raw(triangles) -> int:
    verts = {v for tri in triangles for v in tri}
    return len(verts) - len(edge_map(triangles)) + len(triangles)


def compact(vertices, triangles):
    """Drop unreferenced vertices, preserving order.

    Returns ``(vertices, triangles, old_to_new)`` where ``old_to_new[v]`` is
    -1 for dropped vertices.
    """
    used = sorted({v for tri in triangles for v in tri})
    old_to_new = [-1] * len(vertices)
    for new, old in enumerate(used):
        old_to_new[old] = new
    new_vertices = [vertices[v] for v in used]
    new_triangles = [tuple(old_to_new[v] for v in tri) for tri in triangles]
    return new_vertices, new_triangles, old_to_new


def subdivide(vertices, triangles):
    """1 -> 4 midpoint subdivision. Existing vertex indices are kept."""
    verts = [tuple(map(float, p)) for p in vertices]
    mid: dict[tuple[int, int], int] = {}

    def midpoint(u, v):
        e = undirected(u, v)
        if e not in mid:
            pu, pv = verts[u], verts[v]
            verts.append(tuple((x + y) / 2.0 for x, y in zip(pu, pv)))
            mid[e] = len(verts) - 1
        return mid[e]

    tris = []
    for a, b, c in triangles:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        tris.extend([(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)])
    return verts, tris


def disc_triangles(triangles, adj, centre: int, depth: int) -> list[int]:
    """Triangles incident to a vertex within graph distance ``depth - 1``."""
    dist = bfs_distances(adj, [centre])
    return [t for t, tri in enumerate(triangles) if min(dist[v] for v in tri) <= depth - 1]


def as_array(points) -> np.ndarray:
    return np.asarray(points, dtype=float).reshape(-1, 3)


def rotate_about_axis(points: np.ndarray, origin, direction, angle: float) -> np.ndarray:
    """Rodrigues rotation of row-vector points about a line."""
    k = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(k)
    if norm == 0 or angle == 0:
        return np.array(points, dtype=float)
    k = k / norm
    p = np.asarray(points, dtype=float) - origin
    cos, sin = np.cos(angle), np.sin(angle)
    rotated = p * cos + np.cross(k, p) * sin + np.outer(p @ k, k) * (1 - cos)
    return rotated + origin
