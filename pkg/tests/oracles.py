"""Independent reference computations used to cross-check the package.

None of these call into topsurgery's own reduction code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

import numpy as np


def naive_invariant_factors(rows) -> list[int]:
    """Nonzero invariant factors by plain Euclidean row/column elimination.

    Pivots are taken in natural order (first nonzero entry of the remaining
    block), not by size; any remainder left in the pivot row or column is
    swapped into the pivot and the step repeats. The divisibility chain is
    restored afterwards with gcd/lcm swaps on the diagonal.
    """
    A = [[int(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    cols = [dict() for _ in range(n)]  # column -> {row: value}, kept in sync with A
    for i in range(m):
        for j in range(n):
            if A[i][j]:
                cols[j][i] = A[i][j]

    def set_(i, j, x):
        A[i][j] = x
        if x:
            cols[j][i] = x
        else:
            cols[j].pop(i, None)

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        for col in cols:
            a, b = col.pop(i, 0), col.pop(k, 0)
            if b:
                col[i] = b
            if a:
                col[k] = a

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        cols[j], cols[k] = cols[k], cols[j]

    diag = []
    t = 0
    while t < min(m, n):
        start = next(((i, j) for j in range(t, n) for i in sorted(cols[j]) if i >= t), None)
        if start is None:
            break
        swap_rows(t, start[0])
        swap_cols(t, start[1])
        while True:
            p = A[t][t]
            for k in [k for k in cols[t] if k > t]:
                q = A[k][t] // p
                for j, x in enumerate(A[t]):
                    if x:
                        set_(k, j, A[k][j] - q * x)
            for k in [k for k in range(t + 1, n) if A[t][k]]:
                q = A[t][k] // p
                for i, x in list(cols[t].items()):
                    set_(i, k, A[i][k] - q * x)
            left_col = [k for k in cols[t] if k > t]
            left_row = [k for k in range(t + 1, n) if A[t][k]]
            if left_col:
                swap_rows(t, left_col[0])
            elif left_row:
                swap_cols(t, left_row[0])
            else:
                break
        diag.append(abs(A[t][t]))
        t += 1
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a, b = diag[i], diag[j]
                g = gcd(a, b)
                if (a, b) != (g, a * b // g):
                    diag[i], diag[j] = g, a * b // g
                    changed = True
    return diag


def determinant(rows) -> int:
    n = len(rows)
    M = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            for j in range(c, n):
                M[i][j] -= f * M[c][j]
    return int(det)


def determinantal_divisors(rows) -> list[int]:
    """Invariant factors as ratios of gcds of k x k minors (small matrices only)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    d = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for I in itertools.combinations(range(m), k):
            for J in itertools.combinations(range(n), k):
                g = gcd(g, determinant([[rows[i][j] for j in J] for i in I]))
        if g == 0:
            break
        d.append(g)
    return [d[k] // d[k - 1] for k in range(1, len(d))]


def _solve_integral(M: list[list[int]], v: list[int]) -> bool:
    """True when v lies in the integer column span of square nonsingular M."""
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(v[i])] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[p] = A[p], A[c]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return all((A[i][n] / A[i][i]).denominator == 1 for i in range(n))


def brute_cokernel(relations: list[list[int]]) -> tuple[int, int]:
    """(order, exponent) of Z^n / (row span of a square nonsingular relation matrix).

    Elements are enumerated as box points modulo the relation lattice.
    """
    n = len(relations)
    cols = [list(x) for x in zip(*relations)]  # relation vectors as columns
    order = abs(determinant(relations))
    reps: list[tuple[int, ...]] = []
    for pt in itertools.product(range(order), repeat=n):
        if not any(_solve_integral(cols, [a - b for a, b in zip(pt, r)]) for r in reps):
            reps.append(pt)
    exponent = 1
    for r in reps:
        k = 1
        while not _solve_integral(cols, [k * x for x in r]):
            k += 1
        exponent = exponent * k // gcd(exponent, k)
    return len(reps), exponent


def lens_relations(p: int, q: int) -> list[list[int]]:
    """Mayer-Vietoris relations for H1 of the p/q filling of the unknot complement.

    Generators: g1 (core of the complement solid torus), g2 (core of the new
    solid torus). The new meridian lands on the curve with p longitudes of the
    complement; its longitude r, s is completed to a basis with p*s - q*r = 1.
    """
    # extended Euclid for p*s - q*r = 1
    old_r, r_, old_s, s_ = p, q, 1, 0
    old_t, t_ = 0, 1
    while r_:
        k = old_r // r_
        old_r, r_ = r_, old_r - k * r_
        old_s, s_ = s_, old_s - k * s_
        old_t, t_ = t_, old_t - k * t_
    sign = 1 if old_r == 1 else -1
    s = old_s * sign
    # new meridian gives p*g1 = 0; new longitude gives s*g1 - g2 = 0
    return [[p, 0], [s, -1]]


def rank_mod(rows: np.ndarray, prime: int | None) -> int:
    """Rank over Q (prime None) or over GF(prime), by elimination."""
    if prime is None:
        return int(np.linalg.matrix_rank(rows.astype(float))) if rows.size else 0
    A = np.array(rows, dtype=np.int64) % prime
    m, n = A.shape
    r = 0
    for c in range(n):
        piv = np.nonzero(A[r:, c])[0]
        if len(piv) == 0:
            continue
        i = r + piv[0]
        A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, prime)
        A[r] = (A[r] * inv) % prime
        nz = np.nonzero(A[:, c])[0]
        nz = nz[nz != r]
        A[nz] = (A[nz] - np.outer(A[nz, c], A[r])) % prime
        r += 1
        if r == m:
            break
    return r


def boundary_matrices(n_vertices: int, triangles):
    """Dense d1 (V x E) and d2 (E x F) with edges oriented low -> high."""
    edges = sorted({tuple(sorted((t[i], t[(i + 1) % 3]))) for t in triangles for i in range(3)})
    index = {e: k for k, e in enumerate(edges)}
    d1 = np.zeros((n_vertices, len(edges)), dtype=np.int64)
    for k, (u, v) in enumerate(edges):
        d1[u, k] -= 1
        d1[v, k] += 1
    d2 = np.zeros((len(edges), len(triangles)), dtype=np.int64)
    for f, t in enumerate(triangles):
        for i in range(3):
            u, v = t[i], t[(i + 1) % 3]
            d2[index[tuple(sorted((u, v)))], f] += 1 if u < v else -1
    return d1, d2


def surface_h1(n_vertices: int, triangles, primes=(2, 3, 5, 7)) -> tuple[int, bool]:
    """(free rank of H1, torsion-free for the listed primes) from dense ranks."""
    d1, d2 = boundary_matrices(n_vertices, triangles)
    r1 = rank_mod(d1, None)
    r2 = rank_mod(d2, None)
    free = d1.shape[1] - r1 - r2
    torsion_free = all(rank_mod(d2, p) == r2 for p in primes)
    return free, torsion_free


def euler_characteristic(triangles) -> int:
    verts = {v for t in triangles for v in t}
    edges = {tuple(sorted((t[i], t[(i + 1) % 3]))) for t in triangles for i in range(3)}
    return len(verts) - len(edges) + len(triangles)


def component_count(n_vertices: int, triangles) -> int:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in triangles:
        for i in range(3):
            a, b = find(t[i]), find(t[(i + 1) % 3])
            parent[a] = b
    return len({find(v) for v in range(n_vertices)})


def snf_h1(n_vertices: int, triangles) -> tuple[int, list[int]]:
    """(free rank, torsion) of H1 from the naive Smith reduction of both boundary maps."""
    d1, d2 = boundary_matrices(n_vertices, triangles)
    f1 = naive_invariant_factors(d1.tolist())
    f2 = naive_invariant_factors(d2.tolist())
    return d1.shape[1] - len(f1) - len(f2), [x for x in f2 if x > 1]
