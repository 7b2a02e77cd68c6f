"""Attracting, repelling and truncated surgery on closed curves and arcs.

A pole neighbourhood of half-width h around vertex x is the closed segment
x-h .. x+h. Surgery removes its open interior (the 2h-1 vertices strictly
inside) and keeps the two boundary points, then joins the four boundary
points of the two neighbourhoods by exactly two new edges.

Reconnection modes, for boundary points a-, a+ (before/after pole a in
cycle order) and likewise b-, b+:

* ``split``: a+ -- b- and a- -- b+. Two poles on one cycle give two cycles.
* ``cross``: a+ -- b+ and a- -- b-. Two poles on one cycle give one cycle.

Poles on two different cycles merge them into one under either mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import GeometryError, InputError
from .manifold import Arcs, Curve1, require_valid_curve, validate_arcs


class Reconnection(str, Enum):
    SPLIT = "split"
    CROSS = "cross"


@dataclass(frozen=True)
class PolePair1:
    a: int
    b: int
    neighbourhood_size: int = 1


def _locate(c: Curve1) -> dict[int, tuple[int, int]]:
    return {v: (k, i) for k, cyc in enumerate(c.cycles) for i, v in enumerate(cyc)}


def _check_poles(n: int, poles: PolePair1) -> None:
    for v in (poles.a, poles.b):
        if not 0 <= v < n:
            raise InputError(f"pole index {v} out of range 0..{n - 1}")
    if poles.a == poles.b:
        raise InputError("poles coincide")
    if poles.neighbourhood_size < 1:
        raise InputError("neighbourhood_size must be >= 1")


def _rotated(cyc, start_pos):
    return list(cyc[start_pos:]) + list(cyc[:start_pos])


def _rebuild(c: Curve1, keep_cycles, new_cycles) -> Curve1:
    """Assemble a curve from untouched cycles plus new label-level cycles."""
    survivors = sorted({v for cyc in list(keep_cycles) + list(new_cycles) for v in cyc})
    new_index = {old: i for i, old in enumerate(survivors)}
    cycles = [tuple(new_index[v] for v in cyc) for cyc in keep_cycles]
    cycles += [tuple(new_index[v] for v in cyc) for cyc in new_cycles]
    for cyc in cycles:
        if len(cyc) < 3:
            raise GeometryError("reconnection would create a cycle with fewer than 3 vertices")
    labels = [c.labels[v] for v in survivors]
    coords = None if c.coords is None else [c.coords[v] for v in survivors]
    return Curve1(labels, cycles, coords)


def attract_1d(c: Curve1, poles: PolePair1, rec: Reconnection | str = Reconnection.SPLIT) -> Curve1:
    """Remove both pole neighbourhoods and recouple the four boundary points.

    Vertex labels and coordinates of surviving vertices are carried over.
    """
    rec = Reconnection(rec)
    require_valid_curve(c)
    _check_poles(c.n_vertices, poles)
    h = poles.neighbourhood_size
    where = _locate(c)
    (ka, ia), (kb, ib) = where[poles.a], where[poles.b]
    untouched = [cyc for k, cyc in enumerate(c.cycles) if k not in (ka, kb)]

    if ka == kb:
        cyc = _rotated(c.cycles[ka], ia)
        n = len(cyc)
        j = (ib - ia) % n
        if not (2 * h < j < n - 2 * h):
            raise GeometryError("pole neighbourhoods overlap")
        first = cyc[h:j - h + 1]          # a+ .. b-
        second = cyc[j + h:n - h + 1]     # b+ .. a-
        if rec is Reconnection.SPLIT:
            new = [first, second]
        else:
            new = [first + second[::-1]]
    else:
        ca, cb = _rotated(c.cycles[ka], ia), _rotated(c.cycles[kb], ib)
        for cyc in (ca, cb):
            if 2 * h + 1 > len(cyc):
                raise GeometryError("pole neighbourhood covers its whole cycle")
        path_a = ca[h:len(ca) - h + 1]    # a+ .. a-
        path_b = cb[h:len(cb) - h + 1]    # b+ .. b-
        if rec is Reconnection.SPLIT:
            new = [path_a + path_b]       # a- -- b+, b- -- a+
        else:
            new = [path_a + path_b[::-1]]  # a- -- b-, b+ -- a+
    return _rebuild(c, untouched, new)


def _arc_midpoint(cyc, start, length, labels_key):
    """Position (in ``cyc``) of the midpoint of the open arc start+1 .. start+length-1."""
    n = len(cyc)
    if length % 2 == 0:
        return (start + length // 2) % n
    lo, hi = (start + (length - 1) // 2) % n, (start + (length + 1) // 2) % n
    return lo if labels_key(cyc[lo]) <= labels_key(cyc[hi]) else hi


def complementary_poles(c: Curve1, poles: PolePair1) -> PolePair1:
    """Induced poles for repelling surgery: midpoints of the pole-free arcs.

    Poles on one cycle: the two arcs between them. Poles on two cycles: the
    vertex opposite each pole on its own cycle. Ties go to the lower vertex
    index. The complementary neighbourhoods must avoid the poles.
    """
    require_valid_curve(c)
    _check_poles(c.n_vertices, poles)
    h = poles.neighbourhood_size
    where = _locate(c)
    (ka, ia), (kb, ib) = where[poles.a], where[poles.b]
    key = lambda v: v
    if ka == kb:
        cyc = c.cycles[ka]
        n = len(cyc)
        j = (ib - ia) % n
        m1 = _arc_midpoint(cyc, ia, j, key)
        m2 = _arc_midpoint(cyc, ib, n - j, key)
        for m, lo, length in ((m1, ia, j), (m2, ib, n - j)):
            off = (m - lo) % n
            if not (h < off < length - h):
                raise GeometryError("cycle too short to host complementary segments")
        pair = PolePair1(cyc[m1], cyc[m2], h)
    else:
        mids = []
        for k, i in ((ka, ia), (kb, ib)):
            cyc = c.cycles[k]
            n = len(cyc)
            m = _arc_midpoint(cyc, i, n, key)
            off = (m - i) % n
            if not (h < off < n - h):
                raise GeometryError("cycle too short to host complementary segments")
            mids.append(cyc[m])
        pair = PolePair1(mids[0], mids[1], h)
    return pair


def repel_1d(c: Curve1, poles: PolePair1, rec: Reconnection | str = Reconnection.SPLIT) -> Curve1:
    """Recouple the complementary segments that close in between repelling poles."""
    induced = complementary_poles(c, poles)
    try:
        return attract_1d(c, induced, rec)
    except GeometryError as exc:
        raise GeometryError(f"cycle too short to host complementary segments ({exc})") from exc


def truncated_1d(arcs: Arcs, poles: PolePair1, rec: Reconnection | str = Reconnection.CROSS) -> Arcs:
    """Local 1-d surgery on two disjoint arcs, one pole in the interior of each.

    With both arcs read in the same direction, ``cross`` joins the left part
    of each arc to the right part of the other (endpoints are exchanged, the
    crossover pattern) and ``split`` joins the two left parts and the two
    right parts (each output path turns back on itself).
    """
    rec = Reconnection(rec)
    rep = validate_arcs(arcs)
    if not rep.valid:
        raise InputError(f"invalid arcs: {rep.violations[0][0]}")
    if len(arcs.paths) != 2:
        raise InputError("truncated 1-d surgery takes exactly two arcs")
    n = len(arcs.labels)
    _check_poles(n, poles)
    h = poles.neighbourhood_size
    where = {v: (k, i) for k, p in enumerate(arcs.paths) for i, v in enumerate(p)}
    (ka, ia), (kb, ib) = where[poles.a], where[poles.b]
    if ka == kb:
        raise InputError("poles must lie on different arcs")
    pieces = []
    for k, i in ((ka, ia), (kb, ib)):
        path = arcs.paths[k]
        if i == 0 or i == len(path) - 1:
            raise InputError("pole at an arc endpoint")
        if i - h < 1 or i + h > len(path) - 2:
            raise GeometryError("pole neighbourhood spans the entire arc")
        pieces.append((list(path[:i - h + 1]), list(path[i + h:])))
    (a_left, a_right), (b_left, b_right) = pieces
    if rec is Reconnection.CROSS:
        new = [a_left + b_right, b_left + a_right]
    else:
        new = [a_left + b_left[::-1], a_right[::-1] + b_right]
    survivors = sorted(v for p in new for v in p)
    idx = {old: i for i, old in enumerate(survivors)}
    return Arcs(
        [arcs.labels[v] for v in survivors],
        [tuple(idx[v] for v in p) for p in new],
        None if arcs.coords is None else [arcs.coords[v] for v in survivors],
    )
