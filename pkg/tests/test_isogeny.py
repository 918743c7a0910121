"""Degree-2 maps: the rational formulas, duals, and kernel behaviour."""

import random

import pytest

from cglhash import Curve, KernelError, Point, find_initial_curve, make_field_context, velu2, verify_two_map
from cglhash.curve import INFINITY, enumerate_points

import oracles


# One fully hand-checked map, integer coefficients reduced mod p.  Domain
# y^2 = x^3 - 4x has 2-torsion at x = 0, 2, -2; quotienting by (-2, 0)
# lands on y^2 = x^3 - 44x + 112, and the kernel of the dual sits at x = 4.
@pytest.mark.parametrize("p", [23, 10007])
def test_worked_example(p):
    ctx = make_field_context(p)
    domain = Curve(ctx.elem(-4 % p), ctx.zero)
    iso = velu2(domain, ctx.elem(-2 % p))
    assert (iso.codomain.a, iso.codomain.b) == (ctx.elem(-44 % p), ctx.elem(112 % p))
    assert iso.dual_kernel_x == ctx.elem(4)

    dual = iso.dual()
    assert (dual.codomain.a, dual.codomain.b) == (ctx.elem(-64 % p), ctx.zero)
    assert dual.codomain.j_invariant() == domain.j_invariant()

    # (0, 0) is 2-torsion but not the kernel: it must land on the dual kernel
    img = iso.apply(Point(ctx.zero, ctx.zero))
    assert img == Point(ctx.elem(4), ctx.zero)

    # kernel of the composed map = the full 2-torsion of the domain
    killed = {ctx.elem(0), ctx.elem(2), ctx.elem(-2 % p)}
    for x in killed:
        assert dual.apply(iso.apply(Point(x, ctx.zero))).is_infinity
    assert verify_two_map(iso)


def test_kernel_must_be_two_torsion():
    ctx = make_field_context(23)
    curve = Curve(ctx.one, ctx.zero)
    with pytest.raises(KernelError):
        velu2(curve, ctx.elem(5))


def test_apply_rejects_foreign_points():
    ctx = make_field_context(23)
    curve = Curve(ctx.one, ctx.zero)
    iso = velu2(curve, ctx.zero)
    with pytest.raises(ValueError):
        iso.apply(Point(ctx.elem(3), ctx.elem(1)))


def test_map_is_a_group_homomorphism():
    ctx = make_field_context(23)
    curve = find_initial_curve(23)
    iso = velu2(curve, curve.two_torsion_roots()[1])
    pts = enumerate_points(curve)
    rng = random.Random(0x15)
    for _ in range(40):
        P, Q = rng.choice(pts), rng.choice(pts)
        assert iso.apply(curve.add(P, Q)) == iso.codomain.add(iso.apply(P), iso.apply(Q))
    assert iso.apply(INFINITY).is_infinity


def test_kernel_is_exactly_two_points():
    ctx = make_field_context(23)
    curve = find_initial_curve(23)
    root = curve.two_torsion_roots()[0]
    iso = velu2(curve, root)
    killed = [pt for pt in enumerate_points(curve) if iso.apply(pt).is_infinity]
    assert killed == [pt for pt in [INFINITY, Point(root, ctx.zero)] if pt in killed]
    assert len(killed) == 2


def test_image_points_satisfy_codomain_equation():
    rng = random.Random(0x33)
    for p in (23, 31, 43):
        curve = find_initial_curve(p)
        pts = enumerate_points(curve)
        for root in curve.two_torsion_roots():
            iso = velu2(curve, root)
            for _ in range(25):
                img = iso.apply(rng.choice(pts))
                assert img.is_infinity or iso.codomain.contains(img)


@pytest.mark.parametrize("p", [23, 31, 41, 43, 47])
def test_codomain_matches_factored_cubic_oracle(p):
    """Walk randomly; every step's codomain must equal the oracle's."""
    v = oracles.field_v(p)
    curve = find_initial_curve(p)
    rng = random.Random(p * 7 + 1)
    forbidden = curve.two_torsion_roots()[0]
    for _ in range(30):
        allowed = [r for r in curve.two_torsion_roots() if r != forbidden]
        root = rng.choice(allowed)
        iso = velu2(curve, root)
        a, b, dual = oracles.isogeny_step(
            p, v, (curve.a.c0, curve.a.c1), (curve.b.c0, curve.b.c1), (root.c0, root.c1)
        )
        assert (iso.codomain.a.c0, iso.codomain.a.c1) == a
        assert (iso.codomain.b.c0, iso.codomain.b.c1) == b
        assert (iso.dual_kernel_x.c0, iso.dual_kernel_x.c1) == dual
        curve, forbidden = iso.codomain, iso.dual_kernel_x


def test_dual_of_dual_returns_home():
    # applying the dual construction twice cycles back to the starting j
    curve = find_initial_curve(47)
    for root in curve.two_torsion_roots():
        iso = velu2(curve, root)
        dual = iso.dual()
        assert dual.codomain.j_invariant() == curve.j_invariant()
        assert dual.dual().codomain.j_invariant() == iso.codomain.j_invariant()


def test_verify_two_map_random_model_sweep():
    rng = random.Random(0x77)
    for p in (23, 41, 61):
        curve = find_initial_curve(p)
        seen = 0
        while seen < 10:
            root = rng.choice(curve.two_torsion_roots())
            iso = velu2(curve, root)
            assert verify_two_map(iso)
            curve = iso.codomain
            seen += 1
