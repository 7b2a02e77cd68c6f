import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topsurgery.dynamics import (
    Frame,
    FrameSequence,
    axial_winding,
    core_linking,
    cross_section,
    frames_1d,
    frames_2d,
    frames_truncated_3d,
    ring_angle,
    section_poles,
    validate_frame,
)
from topsurgery.errors import InputError
from topsurgery.invariants import components, genus, invariant_report
from topsurgery.manifold import make_polygon, make_sphere
from topsurgery.surgery1d import PolePair1, attract_1d, repel_1d
from topsurgery.surgery2d import PolePair2, SurgerySpec2D, attract_2d, far_pole_pair
from topsurgery.surgery3d import TorusCurve, standard_splitting, truncate

SPHERE = make_sphere(2)
POLES = far_pole_pair(SPHERE)


def test_hexagon_frames():
    c = make_polygon(6)
    fs = frames_1d(c, PolePair1(0, 3), "attract", "cross", T=5)
    assert fs.frames[0].geometry == c
    assert fs.frames[-1].geometry.canonical() == attract_1d(c, PolePair1(0, 3), "cross").canonical()
    assert fs.phases.count("singular") == 1 and fs.singular_index == 2
    assert fs.times == [0.0, 0.25, 0.5, 0.75, 1.0]


@pytest.mark.parametrize("T", [0, 1, 2])
def test_too_few_frames(T):
    with pytest.raises(InputError):
        frames_1d(make_polygon(8), PolePair1(0, 4), T=T)
    with pytest.raises(InputError):
        frames_2d(SPHERE, POLES, T=T)


@given(st.integers(3, 15), st.sampled_from(["attract", "repel"]), st.sampled_from(["split", "cross"]))
@settings(max_examples=20)
def test_frames_1d_properties(T, mode, rec):
    c = make_polygon(16)
    poles = PolePair1(0, 8)
    fs = frames_1d(c, poles, mode, rec, T)
    op = attract_1d if mode == "attract" else repel_1d
    assert fs.frames[-1].geometry == op(c, poles, rec)
    assert fs.invalid_frames() == []
    assert not validate_frame(fs.frames[fs.singular_index].geometry).valid
    if mode == "attract":
        gaps = [np.linalg.norm(np.subtract(f.geometry.coords[0], f.geometry.coords[8]))
                for f in fs.frames[:fs.singular_index]]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_attract_twist_angles():
    fs = frames_2d(SPHERE, POLES, SurgerySpec2D(twists=1), "attract", T=9)
    X0 = np.array(fs.frames[0].geometry.vertices)
    ring = fs.meta["ring"]
    axis = X0[POLES.b] - X0[POLES.a]
    angles = [ring_angle(np.array(f.geometry.vertices)[ring], X0[POLES.a], axis, X0[ring])
              for f in fs.frames[:fs.singular_index]]
    unwrapped = np.unwrap(angles)
    assert all(b > a for a, b in zip(unwrapped, unwrapped[1:]))
    step = unwrapped[1] - unwrapped[0]
    assert unwrapped[0] + step * fs.singular_index == pytest.approx(2 * math.pi, abs=1e-6)
    tw = fs.meta["twist_angles"]
    assert all(b >= a for a, b in zip(tw, tw[1:]))
    assert tw[fs.singular_index] == pytest.approx(2 * math.pi)


def test_attract_endpoint():
    fs = frames_2d(SPHERE, POLES, SurgerySpec2D(twists=1), "attract", T=9)
    assert invariant_report(fs.frames[-1].geometry) == invariant_report(attract_2d(SPHERE, POLES))
    assert fs.invalid_frames() == []


def test_repel_neck_radius():
    fs = frames_2d(SPHERE, POLES, mode="repel", T=9)
    X0 = np.array(fs.frames[0].geometry.vertices)
    C = (X0[POLES.a] + X0[POLES.b]) / 2
    d = X0[POLES.b] - X0[POLES.a]
    d = d / np.linalg.norm(d)
    eq = fs.meta["equator"]
    radii = []
    for f in fs.frames[:fs.singular_index]:
        rel = np.array(f.geometry.vertices)[eq] - C
        radii.append(float(np.mean(np.linalg.norm(rel - np.outer(rel @ d, d), axis=1))))
    assert all(b < a for a, b in zip(radii, radii[1:]))
    assert components(fs.frames[-1].geometry) == 2


def test_truncated_3d_pipeline():
    scene = truncate(standard_splitting(), TorusCurve(2, 1))
    fs = frames_truncated_3d(scene, T=9)
    assert genus(fs.frames[-1].geometry) == 1
    assert axial_winding(fs.frames[0].curve) == pytest.approx(2.0)
    assert axial_winding(fs.frames[-1].curve) == pytest.approx(0.0, abs=1e-9)
    assert abs(core_linking(fs.frames[-1].curve, 0.6)) == 1
    assert fs.invalid_frames() == []


def test_truncated_3d_errors():
    s = standard_splitting()
    with pytest.raises(InputError):
        frames_truncated_3d(truncate(s, TorusCurve(3, 2)))
    with pytest.raises(InputError):
        frames_truncated_3d(truncate(s, TorusCurve(2, 1)), T=4)


def test_cross_section_attract():
    fs = frames_2d(SPHERE, POLES, mode="attract", T=9)
    sec = cross_section(fs)
    assert sec.singular_index == fs.singular_index
    assert sec.phases == fs.phases
    first = sec.frames[0].geometry
    assert components(first) == 1
    X0 = np.array(SPHERE.vertices)
    poles = section_poles(first, X0[POLES.a], X0[POLES.b])
    expected = components(attract_1d(first, poles, "split"))
    assert components(sec.frames[-1].geometry) == expected


def test_cross_section_plane_must_hold_poles():
    fs = frames_2d(SPHERE, POLES, mode="attract", T=5)
    with pytest.raises(InputError):
        cross_section(fs, plane=((0.0, 0.0, 0.5), (0.0, 0.0, 1.0)))
    with pytest.raises(InputError):
        cross_section(frames_1d(make_polygon(8), PolePair1(0, 4), "attract", "split", 5))


def test_exactly_one_singular():
    f = Frame(0.0, make_polygon(3), "pre")
    s = Frame(0.5, make_polygon(3), "singular")
    with pytest.raises(InputError):
        FrameSequence((f, s, s), 1)
    with pytest.raises(InputError):
        FrameSequence((f, f), 0)
