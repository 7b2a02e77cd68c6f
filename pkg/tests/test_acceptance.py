"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the summary section lists
every criterion) or standalone with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import json
import math
import os
import random
import sys
from contextlib import redirect_stderr, redirect_stdout
from math import gcd

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracles
from topsurgery import dynamics
from topsurgery.cli import run_cli
from topsurgery.mesh import bfs_distances
from topsurgery.invariants import (
    as_int_matrix,
    components,
    h1_from_presentation,
    invariant_report,
    is_smith_form,
    smith_normal_form,
)
from topsurgery.manifold import (
    Curve1,
    disjoint_curves,
    make_layered_ball,
    make_polygon,
    make_sphere,
    make_torus,
    surface_components,
    torus_meridian,
)
from topsurgery.solid import solid_1d, solid_2d_attract, solid_2d_repel
from topsurgery.surgery1d import PolePair1, attract_1d, repel_1d
from topsurgery.surgery2d import (
    AnnulusSpec,
    PolePair2,
    SurgerySpec2D,
    attract_2d,
    central_annulus,
    far_pole_pair,
    refine_for_annulus,
    repel_2d,
)
from topsurgery.surgery3d import (
    THETA,
    GluingMatrix,
    TorusCurve,
    dual_coordinates,
    glue_apply,
    lens_presentation,
    rational_surgery_unknot,
    standard_splitting,
    truncate,
)

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def _report_bytes(s) -> str:
    return json.dumps(invariant_report(s), sort_keys=True)


# ---------------------------------------------------------------- 1

@pytest.mark.acceptance(1, "1-d component laws (split 2, cross 1, merge 1) on 50 random cases")
def test_criterion_01_one_dimensional_components():
    rng = random.Random(101)
    for _ in range(50):
        h = rng.randint(1, 3)
        n = rng.randint(4 * h + 6, 40)
        c = make_polygon(n)
        a = rng.randrange(n)
        j = rng.randint(2 * h + 2, n - 2 * h - 2)
        poles = PolePair1(a, (a + j) % n, h)
        assert components(attract_1d(c, poles, "split")) == 2
        assert components(attract_1d(c, poles, "cross")) == 1
        # merging two cycles
        m = rng.randint(2 * h + 3, 30)
        two = disjoint_curves(make_polygon(n), make_polygon(m, centre=(3.0, 0.0, 0.0), start=n))
        pole_b = n + rng.randrange(m)
        for rec in ("split", "cross"):
            assert components(attract_1d(two, PolePair1(a, pole_b, h), rec)) == 1


# ---------------------------------------------------------------- 2

@pytest.mark.acceptance(2, "2-d genus law: k attracts give genus k, chi 2-2k, H1 = Z^2k (oracle-checked)")
def test_criterion_02_genus_law():
    for level in range(4):
        s = make_sphere(level)
        for k in range(1, 5):
            s = attract_2d(s, far_pole_pair(s), refine_overlap=True)
            rep = invariant_report(s)
            assert rep["genus"] == k
            assert rep["euler_characteristic"] == 2 - 2 * k
            assert rep["h1"] == {"free_rank": 2 * k, "torsion": []}
            assert oracles.euler_characteristic(s.triangles) == 2 - 2 * k
            assert oracles.snf_h1(s.n_vertices, s.triangles) == (2 * k, [])


# ---------------------------------------------------------------- 3

@pytest.mark.acceptance(3, "twist invisibility: reports identical for t in -3..3")
def test_criterion_03_twist_invisibility():
    s = make_sphere(2)
    poles = far_pole_pair(s)
    reports = {_report_bytes(attract_2d(s, poles, SurgerySpec2D(t))) for t in range(-3, 4)}
    assert len(reports) == 1


# ---------------------------------------------------------------- 4

@pytest.mark.acceptance(4, "repelling split law: 20 sphere annuli give 2 spheres; torus gives 1 sphere")
def test_criterion_04_repelling_split():
    rng = random.Random(404)
    for _ in range(20):
        s = make_sphere(rng.choice([2, 3]))
        a = rng.randrange(s.n_vertices)
        dist = bfs_distances(s.neighbours(), [a])
        far = max(dist)
        b = rng.choice([v for v, d in enumerate(dist) if d == far])
        w = rng.randint(1, max(1, int(far) // 2 - 1))
        out = repel_2d(s, central_annulus(s, a, b, half_width=w))
        parts = surface_components(out)
        assert len(parts) == 2
        assert all(invariant_report(p)["genus"] == 0 for p, _ in parts)
    t = make_torus(12, 8)
    annulus = AnnulusSpec(torus_meridian(12, 8, 0), torus_meridian(12, 8, 2), inside=torus_meridian(12, 8, 1)[0])
    out = repel_2d(t, annulus)
    rep = invariant_report(out)
    assert rep["components"] == 1 and rep["euler_characteristic"] == 2 and rep["genus"] == 0


# ---------------------------------------------------------------- 5

def _vertical_poles(layer):
    """Top and bottom vertex: z for sphere shells, y for circles in the plane."""
    if isinstance(layer, Curve1):
        height = np.asarray(layer.coords)[:, 1]
    else:
        height = np.asarray(layer.vertices)[:, 2]
    return int(np.argmax(height)), int(np.argmin(height))


@pytest.mark.acceptance(5, "solid fiberwise consistency for N in {1,2,4,8}; limit strata circle / two points")
def test_criterion_05_solid_fiberwise():
    for N in (1, 2, 4, 8):
        ball = make_layered_ball(3, N)
        res = solid_2d_attract(ball)
        assert res.limit_stratum == "circle" and len(res.pieces) == 1
        torus = res.pieces[0]
        assert torus.core_circle.n_vertices > 0 and len(torus.core_circle.cycles) == 1
        for k, shell in enumerate(ball.layers):
            alone = attract_2d(shell, PolePair2(*_vertical_poles(shell)), refine_overlap=True)
            assert invariant_report(torus.layers[k]) == invariant_report(alone)

        res = solid_2d_repel(ball)
        assert res.limit_stratum in ("two-points", "two-points3d") and len(res.limit_points) == 2
        assert len(res.pieces) == 2
        for k, shell in enumerate(ball.layers):
            a, b = _vertical_poles(shell)
            fine = refine_for_annulus(shell, a, b)
            alone = repel_2d(fine, central_annulus(fine, a, b))
            expected = sorted(_report_bytes(p) for p, _ in surface_components(alone))
            got = sorted(_report_bytes(piece.layers[k]) for piece in res.pieces)
            assert got == expected

        disc = make_layered_ball(2, N)
        res = solid_1d(disc)
        assert res.limit_stratum == "two-points" and len(res.limit_points) == 2 and len(res.pieces) == 2
        for k, shell in enumerate(disc.layers):
            a, b = _vertical_poles(shell)
            alone = attract_1d(shell, PolePair1(a, b, 1), "split")
            expected = sorted(sorted(alone.labels[v] for v in cyc) for cyc in alone.cycles)
            got = sorted(sorted(piece.layers[k].labels) for piece in res.pieces)
            assert got == expected


# ---------------------------------------------------------------- 6

@pytest.mark.acceptance(6, "lens-space homology: H1(L(p,q)) = Z/p for 2<=p<=50, brute force for p<=12")
def test_criterion_06_lens_homology():
    for p in range(2, 51):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            m = lens_presentation(p, q)
            D, L, R = smith_normal_form(m)
            assert L @ as_int_matrix(m) @ R == D
            group = h1_from_presentation(m)
            assert group.free_rank == 0 and list(group.torsion) == [p]
            assert rational_surgery_unknot(p, q).h1 == group
            if p <= 12:
                assert oracles.brute_cokernel(oracles.lens_relations(p, q)) == (p, p)


# ---------------------------------------------------------------- 7

@pytest.mark.acceptance(7, "Smith normal form on 500 random matrices matches the naive oracle")
def test_criterion_07_smith_oracle():
    rng = random.Random(707)
    for _ in range(500):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        D, L, R = smith_normal_form(M)
        assert L @ as_int_matrix(M) @ R == D
        assert is_smith_form(D)
        assert abs(L.det()) == 1 and abs(R.det()) == 1
        assert [x for x in D.diagonal() if x] == oracles.naive_invariant_factors(M)


# ---------------------------------------------------------------- 8

@pytest.mark.acceptance(8, "gluing algebra: theta(1,0)=(0,1); phi(1,0)=(4,3) read dually as (3,4)")
def test_criterion_08_gluing_algebra():
    meridian_v2 = TorusCurve(1, 0, "V2")
    image = glue_apply(standard_splitting().gluing, meridian_v2)
    assert (image.m, image.l, image.side.value) == (0, 1, "V1")
    assert THETA.det == -1
    phi = GluingMatrix.with_first_column(4, 3)
    knot = glue_apply(phi, TorusCurve(1, 0, "V2"))
    assert (knot.m, knot.l) == (4, 3) and knot.side.value == "V1"
    dual = dual_coordinates(knot)
    assert (dual.m, dual.l, dual.side.value) == (3, 4, "V2")


# ---------------------------------------------------------------- 9

def _closed_winding(points) -> float:
    P = np.asarray(list(points) + [points[0]])
    ang = np.unwrap(np.arctan2(P[:, 1], P[:, 0]))
    return (ang[-1] - ang[0]) / (2 * math.pi)


@pytest.mark.acceptance(9, "frame endpoint fidelity for every generator; truncated 3-d ends genus 1, winding 0")
def test_criterion_09_frame_endpoints():
    c = make_polygon(12)
    for mode, static in (("attract", attract_1d), ("repel", repel_1d)):
        fs = dynamics.frames_1d(c, PolePair1(0, 6), mode, "split", 9)
        assert fs.frames[0].geometry == c
        assert fs.frames[-1].geometry.canonical() == static(c, PolePair1(0, 6), "split").canonical()
        assert invariant_report(fs.frames[-1].geometry) == invariant_report(static(c, PolePair1(0, 6), "split"))
        assert fs.phases.count("singular") == 1 and fs.invalid_frames() == []

    s = make_sphere(2)
    poles = far_pole_pair(s)
    fs = dynamics.frames_2d(s, poles, SurgerySpec2D(1), "attract", 9)
    assert fs.frames[0].geometry == s
    assert invariant_report(fs.frames[-1].geometry) == invariant_report(attract_2d(s, poles, SurgerySpec2D(1)))
    assert fs.phases.count("singular") == 1 and fs.invalid_frames() == []
    fs = dynamics.frames_2d(s, poles, SurgerySpec2D(0), "repel", 9)
    assert fs.frames[0].geometry == s
    assert invariant_report(fs.frames[-1].geometry) == invariant_report(repel_2d(s, central_annulus(s, poles.a, poles.b)))
    assert fs.phases.count("singular") == 1 and fs.invalid_frames() == []

    scene = truncate(standard_splitting(), TorusCurve(2, 1))
    fs = dynamics.frames_truncated_3d(scene, 9)
    assert fs.phases.count("singular") == 1 and fs.invalid_frames() == []
    final = fs.frames[-1]
    assert invariant_report(final.geometry)["genus"] == 1
    first = np.asarray(fs.frames[0].curve)
    off_axis = first[np.hypot(first[:, 0], first[:, 1]) > 1e-9]
    turns = np.unwrap(np.arctan2(off_axis[:, 1], off_axis[:, 0]))
    assert round((turns[-1] - turns[0]) / (2 * math.pi), 9) == 2
    assert abs(_closed_winding(final.curve)) < 1e-9


# ---------------------------------------------------------------- 10

@pytest.mark.acceptance(10, "cross-section law: same singular index and component counts as 1-d frames")
def test_criterion_10_cross_section():
    s = make_sphere(2)
    poles = far_pole_pair(s)
    pa, pb = s.vertices[poles.a], s.vertices[poles.b]
    for mode in ("attract", "repel"):
        fs = dynamics.frames_2d(s, poles, SurgerySpec2D(0), mode, 9)
        cs = dynamics.cross_section(fs)
        assert cs.singular_index == fs.singular_index
        assert cs.phases == fs.phases
        section0 = cs.frames[0].geometry
        assert len(section0.cycles) == 1
        f1 = dynamics.frames_1d(section0, dynamics.section_poles(section0, pa, pb), mode, "split", 9)
        assert f1.singular_index == cs.singular_index
        for a, b in zip(cs.frames, f1.frames):
            if a.phase != "singular":
                assert components(a.geometry) == components(b.geometry), (mode, a.time)


# ---------------------------------------------------------------- 11

def run_captured(argv) -> tuple[int, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run_cli(argv)
    return code, out.getvalue()


def golden_cases(tmp: str) -> dict[str, list[str]]:
    torus = os.path.join(tmp, "torus.json")
    run_captured(["make", "--kind", "torus", "--out", torus])
    return {
        "make_octahedron": ["make", "--kind", "octahedron"],
        "validate_torus": ["validate", "--input", torus],
        "invariants_torus": ["invariants", "--input", torus],
        "surgery1d_split": ["surgery1d", "--poles", "0,6", "--rec", "split"],
        "surgery1d_truncated": ["surgery1d", "--truncated", "--poles", "2,7"],
        "surgery2d_attract": ["surgery2d", "--poles", "1,0", "--twists", "2"],
        "surgery2d_repel": ["surgery2d", "--mode", "repel", "--poles", "1,0"],
        "solidsurgery_1d": ["solidsurgery", "--dim", "1", "--layers", "2"],
        "solidsurgery_2d_repel": ["solidsurgery", "--dim", "2", "--mode", "repel", "--layers", "1"],
        "surgery3d": ["surgery3d", "--p", "5", "--q", "2", "--classify", "5,3", "--truncate"],
        "frames_2d": ["frames", "--op", "2d:attract", "--count", "5", "--out", os.path.join(tmp, "frames")],
    }


@pytest.mark.acceptance(11, "CLI determinism: golden files for every subcommand, repeated runs identical")
def test_criterion_11_cli_golden(tmp_path):
    regen = os.environ.get("TOPSURGERY_REGEN_GOLDEN") == "1"
    for name, argv in golden_cases(str(tmp_path)).items():
        code1, out1 = run_captured(argv)
        code2, out2 = run_captured(argv)
        assert code1 == code2 == 0, name
        assert out1 == out2, name
        if name == "frames_2d":
            with open(os.path.join(tmp_path, "frames", "sequence.json")) as fh:
                out1 += fh.read()
        path = os.path.join(GOLDEN, f"{name}.json")
        if regen:
            with open(path, "w") as fh:
                fh.write(out1)
        with open(path) as fh:
            assert fh.read() == out1, name


def main() -> int:
    tests = [(n, f) for n, f in sorted(globals().items()) if n.startswith("test_criterion_")]
    failures = 0
    import tempfile

    for name, fn in tests:
        number, title = fn.pytestmark[0].args
        try:
            if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    fn(d)
            else:
                fn()
            status = "PASS"
        except Exception as exc:  # report and keep going
            status = f"FAIL ({type(exc).__name__}: {exc})"
            failures += 1
        print(f"[{status}] criterion {number:2d}: {title}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
