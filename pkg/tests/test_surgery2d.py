import pytest
from hypothesis import given, settings, strategies as st

from topsurgery.errors import InputError
from topsurgery.invariants import components, euler_characteristic, genus, invariant_report
from topsurgery.manifold import (
    disjoint_union,
    make_disc,
    make_sphere,
    make_torus,
    octahedron,
    surface_components,
    torus_meridian,
    validate_surface,
)
from topsurgery.surgery2d import (
    AnnulusSpec,
    PolePair2,
    SurgerySpec2D,
    attract_2d,
    attract_2d_traced,
    central_annulus,
    connect_sum_traced,
    far_pole_pair,
    repel_2d,
    truncated_2d,
    truncated_attract_traced,
)

SPHERE = make_sphere(2)
TORUS = make_torus(12, 8)


def _genera(s):
    return sorted(genus(p) for p, _ in surface_components(s))


def test_sphere_to_torus():
    out = attract_2d(SPHERE, far_pole_pair(SPHERE))
    assert validate_surface(out).valid
    assert genus(out) == 1 and euler_characteristic(out) == 0


def test_torus_to_genus_two():
    out = attract_2d(TORUS, far_pole_pair(TORUS))
    assert genus(out) == 2


def test_twist_keeps_report():
    poles = far_pole_pair(SPHERE)
    base = invariant_report(attract_2d(SPHERE, poles))
    out = attract_2d(SPHERE, poles, SurgerySpec2D(twists=3))
    assert invariant_report(out) == base
    assert base["h1"]["free_rank"] == 2


def test_overlapping_discs_rejected():
    with pytest.raises(InputError):
        attract_2d(octahedron(), PolePair2(4, 5))
    out = attract_2d(octahedron(), PolePair2(4, 5), refine_overlap=True)
    assert genus(out) == 1


def test_disconnected_rejected():
    with pytest.raises(InputError):
        attract_2d(disjoint_union(octahedron(), octahedron()), PolePair2(0, 7))


@given(st.sampled_from(["sphere", "torus"]), st.integers(-3, 3), st.integers(1, 2))
@settings(max_examples=12)
def test_attract_laws(kind, t, depth):
    s = SPHERE if kind == "sphere" else TORUS
    out = attract_2d(s, far_pole_pair(s, depth), SurgerySpec2D(twists=t))
    assert validate_surface(out).valid
    assert euler_characteristic(out) == euler_characteristic(s) - 2
    assert genus(out) == genus(s) + 1


def test_equatorial_repel_two_spheres():
    p = far_pole_pair(SPHERE)
    out = repel_2d(SPHERE, central_annulus(SPHERE, p.a, p.b))
    assert validate_surface(out).valid
    assert components(out) == 2
    assert [euler_characteristic(q) for q, _ in surface_components(out)] == [2, 2]


def test_torus_essential_annulus_one_sphere():
    ann = AnnulusSpec(torus_meridian(12, 8, 0), torus_meridian(12, 8, 3), inside=torus_meridian(12, 8, 1)[0])
    out = repel_2d(TORUS, ann)
    assert components(out) == 1 and euler_characteristic(out) == 2


def test_genus_two_separating_annulus():
    a = make_torus(12, 8)
    b = make_torus(12, 8, major=2.0)
    joined, trace = connect_sum_traced(a, b, 0, 0)
    assert genus(joined) == 2
    out = repel_2d(joined, trace.central_annulus)
    assert components(out) == 2
    assert _genera(out) == [1, 1]


def test_separating_repel_laws():
    for s in (SPHERE, make_sphere(3)):
        p = far_pole_pair(s)
        out = repel_2d(s, central_annulus(s, p.a, p.b))
        assert components(out) == components(s) + 1
        assert sum(euler_characteristic(q) for q, _ in surface_components(out)) == euler_characteristic(s) + 2


@given(st.integers(-3, 3))
@settings(max_examples=7)
def test_attract_then_repel_restores(t):
    p = far_pole_pair(SPHERE)
    torus, trace = attract_2d_traced(SPHERE, p, SurgerySpec2D(twists=t))
    back = repel_2d(torus, trace.central_annulus)
    assert invariant_report(back) == invariant_report(SPHERE)


def test_non_annulus_rejected():
    s = SPHERE
    p = far_pole_pair(s)
    ann = central_annulus(s, p.a, p.b)
    with pytest.raises(InputError):
        repel_2d(s, AnnulusSpec(ann.cycle_a, ann.cycle_a))
    with pytest.raises(InputError):
        repel_2d(s, AnnulusSpec((0, 1, 2, 3), ann.cycle_b))


def _two_discs():
    return make_disc(8, 2), make_disc(8, 2, centre=(0.0, 0.0, 2.0), flip=True)


def test_truncated_attract_annulus():
    out = truncated_2d("attract", _two_discs())
    assert validate_surface(out, allow_boundary=True).valid
    assert euler_characteristic(out, allow_boundary=True) == 0
    assert components(out, allow_boundary=True) == 1


def test_truncated_repel_two_discs():
    annulus = truncated_2d("attract", _two_discs())
    out = truncated_2d("repel", annulus)
    assert components(out, allow_boundary=True) == 2
    assert euler_characteristic(out, allow_boundary=True) == 2


def test_truncated_compose():
    cyl, trace = truncated_attract_traced(*_two_discs(), twists=1)
    out = truncated_2d("repel", cyl, cycles=trace.central_annulus)
    parts = [p for p, _ in surface_components(out)]
    assert len(parts) == 2
    for p in parts:
        assert invariant_report(p, allow_boundary=True) == invariant_report(make_disc(), allow_boundary=True)


def test_truncated_wrong_input():
    with pytest.raises(InputError):
        truncated_2d("attract", [make_disc()])
    with pytest.raises(InputError):
        truncated_2d("repel", make_disc())
    with pytest.raises(InputError):
        truncated_2d("sideways", _two_discs())
