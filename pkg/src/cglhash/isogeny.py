"""Degree-2 isogenies between Weierstrass curves, in Velu normal form.

For a 2-torsion root x0 of y^2 = x^3 + a*x + b, the quotient by
{O, (x0, 0)} is

    y^2 = x^3 + A*x + B,   A = -(15*x0^2 + 4*a),   B = 8*b - 14*x0^3,

with the rational map

    (x, y) |-> (x + t/(x - x0), y - y*t/(x - x0)^2),   t = 3*x0^2 + a.

The other two 2-torsion points of the domain share one image point
(X, 0) on the codomain; its x-coordinate generates the dual isogeny's
kernel, which is what lets a walk refuse to backtrack.
"""

from __future__ import annotations

import random

from .curve import INFINITY, Curve, Point, enumerate_points
from .errors import KernelError
from .field import FieldElement

_EXHAUSTIVE_LIMIT = 150


class Isogeny2:
    """A separable degree-2 isogeny with its kernel and dual-kernel data."""

    __slots__ = ("domain", "codomain", "kernel_x", "dual_kernel_x", "_t")

    def __init__(self, domain: Curve, codomain: Curve, kernel_x: FieldElement,
                 dual_kernel_x: FieldElement):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "kernel_x", kernel_x)
        object.__setattr__(self, "dual_kernel_x", dual_kernel_x)
        object.__setattr__(self, "_t", 3 * kernel_x * kernel_x + domain.a)

    def __setattr__(self, name, value):
        raise AttributeError("Isogeny2 is immutable")

    def apply(self, pt: Point) -> Point:
        """Image of a domain point; the kernel {O, (x0, 0)} maps to O."""
        if pt.is_infinity:
            return INFINITY
        if not self.domain.contains(pt):
            raise ValueError("point is not on the domain curve")
        if pt.x == self.kernel_x:
            return INFINITY
        d = pt.x - self.kernel_x
        shift = self._t / d
        image = Point(pt.x + shift, pt.y - pt.y * shift / d)
        assert self.codomain.contains(image)
        return image

    def dual(self) -> "Isogeny2":
        """The dual isogeny, generated on the codomain by dual_kernel_x."""
        return velu2(self.codomain, self.dual_kernel_x)

    def __repr__(self):
        return (f"Isogeny2(kernel_x={self.kernel_x}: {self.domain!r} -> {self.codomain!r})")


def velu2(domain: Curve, kernel_x: FieldElement) -> Isogeny2:
    """Quotient of `domain` by the order-2 subgroup at x = kernel_x.

    Raises KernelError if kernel_x is not a 2-torsion root, and
    RationalityError (from root-finding) if the domain's 2-torsion is not
    fully rational over F_{p^2}.
    """
    if domain.rhs(kernel_x):
        raise KernelError(f"x = {kernel_x} is not a 2-torsion root of {domain!r}")
    x0 = kernel_x
    a, b = domain.a, domain.b
    big_a = -(15 * x0 * x0 + 4 * a)
    big_b = 8 * b - 14 * x0 * x0 * x0
    codomain = Curve(big_a, big_b)  # raises InvalidCurveError on a degenerate image

    others = [r for r in domain.two_torsion_roots() if r != x0]
    assert len(others) == 2  # roots are distinct whenever the discriminant is nonzero
    t = 3 * x0 * x0 + a
    img2 = others[0] + t / (others[0] - x0)
    img3 = others[1] + t / (others[1] - x0)
    # Both remaining 2-torsion points collapse onto the dual generator (X, 0).
    assert img2 == img3 and not codomain.rhs(img2)
    if domain.ctx.u == 0:
        # Walks and graph builds ask for the codomain's torsion next; one of
        # its roots is already in hand, so pre-split the cubic cheaply.
        codomain.seed_two_torsion_from(img2)
    return Isogeny2(domain, codomain, x0, img2)


def verify_two_map(iso: Isogeny2, rng_seed: int = 0x2D0) -> bool:
    """Check ker(dual(iso) o iso) is exactly {O} plus the 2-torsion.

    For p <= 150 the kernel is recomputed by enumerating every point of the
    domain over F_{p^2}.  For larger p: the composite is separable of degree
    4, so finding all four 2-torsion points (plus O) in its kernel already
    pins the kernel down exactly; random non-torsion points are then spot
    checked to not be killed.
    """
    composed = iso.dual()
    if composed.domain != iso.codomain:
        return False
    domain = iso.domain
    torsion = {Point(r, domain.ctx.zero) for r in domain.two_torsion_roots()}

    def killed(pt: Point) -> bool:
        return composed.apply(iso.apply(pt)).is_infinity

    if not all(killed(pt) for pt in torsion) or not killed(INFINITY):
        return False

    if domain.ctx.p <= _EXHAUSTIVE_LIMIT:
        expected = torsion | {INFINITY}
        for pt in enumerate_points(domain):
            if killed(pt) != (pt in expected):
                return False
        return True

    rng = random.Random(rng_seed)
    checked = 0
    while checked < 64:
        x = domain.ctx.random_element(rng)
        fx = domain.rhs(x)
        if not fx or not fx.is_square():
            continue  # no affine point with this x (or it is 2-torsion)
        # A point (x, y) with y != 0 exists.  Its image can only reach O a
        # step later by landing on the dual kernel point, and that image has
        # y = 0 forced by the curve equation, so x alone decides membership.
        ximg = x + iso._t / (x - iso.kernel_x)
        if ximg == composed.kernel_x:
            return False
        checked += 1
    return True
