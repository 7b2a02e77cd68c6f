"""Homeomorphism certificates: components, Euler characteristic, genus, H_1.

Integer linear algebra is exact (Python ints). ``smith_normal_form`` returns
the unimodular transforms and is meant for small matrices; boundary maps of
meshes go through ``invariant_factors``, a sparse unit-pivot eliminator that
hands any non-unit remainder to ``smith_normal_form``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import mesh
from .errors import PreconditionError
from .manifold import Curve1, Surface2, require_valid_curve, require_valid_surface


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ValueError("entries do not match the declared shape")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(self.rows, other.cols,
                         [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.entries])

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [list(c) for c in zip(*self.entries)] if self.rows else [])

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def det(self) -> int:
        """Fraction-free Bareiss determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def as_int_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_i >= 2 and d_i | d_{i+1}."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if self.free_rank < 0 or any(d < 2 for d in t):
            raise ValueError("free rank must be >= 0 and torsion coefficients >= 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_invariant_factors(cls, factors: Iterable[int], generators: int) -> "AbelianGroup":
        """Cokernel of a relation matrix with the given nonzero invariant factors."""
        factors = [abs(d) for d in factors if d != 0]
        return cls(generators - len(factors), tuple(sorted(d for d in factors if d > 1)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = ([f"Z^{self.free_rank}"] if self.free_rank > 1 else ["Z"] * self.free_rank)
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


# ---------------------------------------------------------- Smith normal form

def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, L, R)`` with ``L @ m @ R == D`` and L, R unimodular.

    D is diagonal with non-negative entries d_1 | d_2 | ... . At each stage the
    pivot is the entry of smallest absolute value in the remaining block,
    ties broken by lowest (row, column).
    """
    m = as_int_matrix(m)
    r, c = m.rows, m.cols
    a = m.tolist()
    left = [[int(i == j) for j in range(r)] for i in range(r)]
    right = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        if k:
            for row in a:
                row[dst] += k * row[src]
            for row in right:
                row[dst] += k * row[src]

    for t in range(min(r, c)):
        while True:
            pivot = None
            for i in range(t, r):
                for j in range(t, c):
                    v = a[i][j]
                    if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            for i in range(t + 1, r):
                add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, c):
                add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, r)) or any(a[t][j] for j in range(t + 1, c)):
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if pivot is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    return IntMatrix(r, c, a), IntMatrix(r, r, left), IntMatrix(c, c, right)


def is_smith_form(d: IntMatrix) -> bool:
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j and d[i, j]:
                return False
    diag = d.diagonal()
    if any(x < 0 for x in diag):
        return False
    for x, y in zip(diag, diag[1:]):
        if x == 0 and y != 0:
            return False
        if x and y % x:
            return False
    return True


def invariant_factors(m, shape: tuple[int, int] | None = None) -> list[int]:
    """Nonzero Smith diagonal entries of an integer matrix.

    ``m`` is an IntMatrix, a dense row list, or a sparse mapping
    ``row -> {col: value}`` (then ``shape`` is required).
    """
    if isinstance(m, dict):
        rows = {i: {j: v for j, v in row.items() if v} for i, row in m.items()}
        n_rows, n_cols = shape
    else:
        m = as_int_matrix(m)
        n_rows, n_cols = m.rows, m.cols
        rows = {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(m.entries)}
    rows = {i: r for i, r in rows.items() if r}
    cols: dict[int, set[int]] = defaultdict(set)
    for i, row in rows.items():
        for j in row:
            cols[j].add(i)

    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols):
            if j not in cols:
                continue
            cands = [i for i in cols[j] if abs(rows[i][j]) == 1]
            if not cands:
                continue
            piv = min(cands, key=lambda i: (len(rows[i]), i))
            prow = rows.pop(piv)
            pval = prow[j]
            for k in prow:
                cols[k].discard(piv)
            for i in sorted(cols[j]):
                row = rows[i]
                factor = row[j] * pval
                for k, v in prow.items():
                    nv = row.get(k, 0) - factor * v
                    if nv:
                        if k not in row:
                            cols[k].add(i)
                        row[k] = nv
                    elif k in row:
                        del row[k]
                        cols[k].discard(i)
                if not row:
                    del rows[i]
            for k in prow:
                if k in cols and not cols[k]:
                    del cols[k]
            cols.pop(j, None)
            units += 1
            progress = True

    factors = [1] * units
    if rows:
        ri = sorted(rows)
        cj = sorted(cols)
        cidx = {j: n for n, j in enumerate(cj)}
        dense = [[0] * len(cj) for _ in ri]
        for a, i in enumerate(ri):
            for j, v in rows[i].items():
                dense[a][cidx[j]] = v
        d, _, _ = smith_normal_form(IntMatrix(len(ri), len(cj), dense))
        factors += [x for x in d.diagonal() if x]
    return factors


def h1_from_presentation(m) -> AbelianGroup:
    """Abelian group presented by relation rows over generator columns."""
    m = as_int_matrix(m)
    return AbelianGroup.from_invariant_factors(invariant_factors(m), m.cols)


# ----------------------------------------------------------- chain complexes

def _boundary_maps(n_vertices: int, edge_list, triangles):
    eidx = {e: k for k, e in enumerate(edge_list)}
    d1 = defaultdict(dict)  # rows: vertices, cols: edges
    for k, (u, v) in enumerate(edge_list):
        d1[u][k] = d1[u].get(k, 0) - 1
        d1[v][k] = d1[v].get(k, 0) + 1
    d2 = defaultdict(dict)  # rows: edges, cols: triangles
    for t, tri in enumerate(triangles):
        for u, v in mesh.triangle_edges(tri):
            k = eidx[mesh.undirected(u, v)]
            sign = 1 if u < v else -1
            d2[k][t] = d2[k].get(t, 0) + sign
    return dict(d1), dict(d2)


def chain_h1(n_vertices: int, edge_list, triangles=()) -> AbelianGroup:
    """H_1 of a 2-complex, computed as ker d1 / im d2 through Smith forms."""
    d1, d2 = _boundary_maps(n_vertices, edge_list, triangles)
    rank1 = len(invariant_factors(d1, (n_vertices, len(edge_list))))
    f2 = invariant_factors(d2, (len(edge_list), len(triangles)))
    free = len(edge_list) - rank1 - len(f2)
    return AbelianGroup(free, tuple(sorted(d for d in f2 if d > 1)))


def _curve_edges(c: Curve1) -> list[tuple[int, int]]:
    out = set()
    for cyc in c.cycles:
        out |= mesh.cycle_edges(cyc)
    return sorted(out)


def components(x, allow_boundary: bool = False) -> int:
    if isinstance(x, Curve1):
        require_valid_curve(x)
        uf = mesh.UnionFind(x.n_vertices)
        for u, v in _curve_edges(x):
            uf.union(u, v)
        return len({uf.find(v) for v in range(x.n_vertices)})
    require_valid_surface(x, allow_boundary)
    return len(set(mesh.vertex_component_labels(x.n_vertices, x.triangles)))


def euler_characteristic(x, allow_boundary: bool = False) -> int:
    if isinstance(x, Curve1):
        require_valid_curve(x)
        return x.n_vertices - len(_curve_edges(x))
    require_valid_surface(x, allow_boundary)
    return x.n_vertices - len(x.edges()) + len(x.triangles)


def genus(s: Surface2) -> int:
    if components(s) != 1:
        raise PreconditionError("genus is defined for connected surfaces only")
    chi = euler_characteristic(s)
    return (2 - chi) // 2


def is_orientable(s: Surface2) -> bool:
    """Whether the triangles can be coherently re-oriented (BFS over flips)."""
    emap = mesh.edge_map(s.triangles)
    flip = [None] * len(s.triangles)
    adj = defaultdict(list)
    for uses in emap.values():
        if len(uses) == 2:
            (t1, e1), (t2, e2) = uses
            adj[t1].append((t2, e1 == e2))
            adj[t2].append((t1, e1 == e2))
    for start in range(len(s.triangles)):
        if flip[start] is not None:
            continue
        flip[start] = False
        stack = [start]
        while stack:
            t = stack.pop()
            for u, same in adj[t]:
                want = flip[t] ^ same
                if flip[u] is None:
                    flip[u] = want
                    stack.append(u)
                elif flip[u] != want:
                    return False
    return True


def homology_h1_surface(s: Surface2) -> AbelianGroup:
    if components(s) != 1:
        raise PreconditionError("H_1 certificate expects a connected closed surface")
    return chain_h1(s.n_vertices, s.edges(), s.triangles)


def homology_h1(x, allow_boundary: bool = False) -> AbelianGroup:
    """H_1 without the connectivity precondition (direct sum over components)."""
    if isinstance(x, Curve1):
        require_valid_curve(x)
        return chain_h1(x.n_vertices, _curve_edges(x))
    require_valid_surface(x, allow_boundary)
    return chain_h1(x.n_vertices, x.edges(), x.triangles)


def invariant_report(x, allow_boundary: bool = False) -> dict:
    """JSON-ready certificate: components, euler_characteristic, orientable,
    genus (connected closed surfaces only) and h1."""
    comps = components(x, allow_boundary)
    report = {
        "components": comps,
        "euler_characteristic": euler_characteristic(x, allow_boundary),
        "orientable": True if isinstance(x, Curve1) else is_orientable(x),
        "h1": homology_h1(x, allow_boundary).to_dict(),
    }
    if isinstance(x, Surface2) and comps == 1 and not mesh.boundary_directed_edges(x.triangles):
        report["genus"] = genus(x)
    return report
