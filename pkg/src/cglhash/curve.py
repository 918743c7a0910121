"""Short-Weierstrass curves y^2 = x^3 + a*x + b over F_{p^2}.

Everything here is exact: the chord/tangent group law, j-invariants,
2-torsion roots, and the supersingularity test via the x^(p-1) coefficient
of f(x)^((p-1)/2) (computed with truncated polynomial powering, with a
numpy fast lane for the moduli produced by make_field_context).
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidCurveError, RationalityError
from .field import (
    FieldContext,
    FieldElement,
    cubic_roots,
    make_field_context,
    sqrt_element,
)

# int64 convolutions stay overflow-free while p^3 + p^2 < 2^63.
_NUMPY_SS_LIMIT = 1_000_000


class Point:
    """Affine point (x, y) or the point at infinity (x is None)."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


INFINITY = Point(None, None)


class Curve:
    """A nonsingular curve y^2 = x^3 + a*x + b; rejects vanishing discriminant."""

    __slots__ = ("a", "b", "ctx", "_roots")

    def __init__(self, a: FieldElement, b: FieldElement):
        if a.ctx != b.ctx:
            raise ValueError("curve coefficients from different field contexts")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "ctx", a.ctx)
        object.__setattr__(self, "_roots", None)
        if not self.discriminant():
            raise InvalidCurveError(f"singular cubic: discriminant of {self!r} is zero")

    def __setattr__(self, name, value):
        raise AttributeError("Curve is immutable")

    # -- invariants --------------------------------------------------------------

    def discriminant(self) -> FieldElement:
        return discriminant(self.a, self.b)

    def j_invariant(self) -> FieldElement:
        a3 = self.a * self.a * self.a * 4
        return 1728 * a3 / (a3 + 27 * self.b * self.b)

    # -- membership and group law -------------------------------------------------

    def rhs(self, x: FieldElement) -> FieldElement:
        return x * x * x + self.a * x + self.b

    def contains(self, pt: Point) -> bool:
        if pt.is_infinity:
            return True
        return pt.y * pt.y == self.rhs(pt.x)

    def add(self, pt1: Point, pt2: Point) -> Point:
        """Chord/tangent addition (third intersection, reflected)."""
        if not (self.contains(pt1) and self.contains(pt2)):
            raise ValueError("point addition requires points on the curve")
        if pt1.is_infinity:
            return pt2
        if pt2.is_infinity:
            return pt1
        if pt1.x == pt2.x:
            if pt1.y == -pt2.y:  # covers the 2-torsion doubling case y = 0
                return INFINITY
            s = (3 * pt1.x * pt1.x + self.a) / (2 * pt1.y)
        else:
            s = (pt2.y - pt1.y) / (pt2.x - pt1.x)
        x3 = s * s - pt1.x - pt2.x
        y3 = s * (pt1.x - x3) - pt1.y
        return Point(x3, y3)

    def neg(self, pt: Point) -> Point:
        if pt.is_infinity:
            return pt
        return Point(pt.x, -pt.y)

    def mul(self, m: int, pt: Point) -> Point:
        """Scalar multiple [m]P by double-and-add; negative m allowed."""
        if not self.contains(pt):
            raise ValueError("scalar multiplication requires a point on the curve")
        if m < 0:
            return self.mul(-m, self.neg(pt))
        acc = INFINITY
        addend = pt
        while m:
            if m & 1:
                acc = self.add(acc, addend)
            addend = self.add(addend, addend)
            m >>= 1
        return acc

    def two_torsion_roots(self):
        """The three x-coordinates of the nontrivial 2-torsion, canonically sorted.

        Cached on the instance; raises RationalityError when the cubic does
        not split over F_{p^2}.
        """
        if self._roots is None:
            object.__setattr__(self, "_roots", tuple(cubic_roots(self.a, self.b)))
        return list(self._roots)

    def seed_two_torsion_from(self, known_root: FieldElement) -> bool:
        """Fill the 2-torsion cache from one known root (deflate + quadratic).

        Much cheaper than refactoring the cubic; returns False (leaving the
        cache empty, so the general path can report the failure) when the
        remaining quadratic does not split over F_{p^2}.
        """
        if self._roots is not None:
            return True
        if self.rhs(known_root):
            raise ValueError(f"x = {known_root} is not a root of {self!r}")
        # x^3 + a x + b = (x - r)(x^2 + r x + (r^2 + a))
        disc = -3 * known_root * known_root - 4 * self.a
        root = sqrt_element(disc)
        if root is None:
            return False
        half = self.ctx.elem(2).inv()
        other1 = (-known_root + root) * half
        other2 = (-known_root - root) * half
        roots = sorted({known_root, other1, other2})
        if len(roots) != 3:
            return False
        assert not self.rhs(other1) and not self.rhs(other2)
        object.__setattr__(self, "_roots", tuple(roots))
        return True

    # -- identity ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.ctx == other.ctx

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"y^2 = x^3 + ({self.a})x + ({self.b}) over F_{self.ctx.p}^2"


# ---------------------------------------------------------------------------
# Spec-level operations as plain functions.
# ---------------------------------------------------------------------------


def discriminant(a: FieldElement, b: FieldElement) -> FieldElement:
    return -16 * (4 * a * a * a + 27 * b * b)


def j_invariant(curve: Curve) -> FieldElement:
    return curve.j_invariant()


def point_add(curve: Curve, pt1: Point, pt2: Point) -> Point:
    return curve.add(pt1, pt2)


def scalar_mul(curve: Curve, m: int, pt: Point) -> Point:
    return curve.mul(m, pt)


def two_torsion_roots(curve: Curve):
    return curve.two_torsion_roots()


def _ss_exponent_numpy(curve: Curve) -> bool:
    """Coefficient test via int64 convolutions (requires modulus z^2 - s form)."""
    ctx = curve.ctx
    p = ctx.p
    s = (-ctx.v) % p  # z^2 = s
    cap = p  # degrees 0 .. p-1 survive truncation

    def mul(f, g):
        f0, f1 = f
        g0, g1 = g
        t00 = np.convolve(f0, g0)[:cap] % p
        if f1 is None and g1 is None:
            return t00, None
        z0 = np.zeros(1, dtype=np.int64)
        f1z = z0 if f1 is None else f1
        g1z = z0 if g1 is None else g1
        t11 = np.convolve(f1z, g1z)[:cap] % p
        t01 = np.convolve(f0, g1z)[:cap] % p
        t10 = np.convolve(f1z, g0)[:cap] % p
        c0 = (t00 + s * t11) % p
        c1 = (t01 + t10) % p
        if not c1.any():
            return c0, None
        return c0, c1

    base0 = np.array([curve.b.c0, curve.a.c0, 0, 1], dtype=np.int64)
    base1 = np.array([curve.b.c1, curve.a.c1, 0, 0], dtype=np.int64)
    base = (base0, base1 if base1.any() else None)
    acc = (np.ones(1, dtype=np.int64), None)
    e = (p - 1) // 2
    while e:
        if e & 1:
            acc = mul(acc, base)
        e >>= 1
        if e:
            base = mul(base, base)
    r0, r1 = acc
    c0 = int(r0[p - 1]) if len(r0) > p - 1 else 0
    c1 = 0 if r1 is None else (int(r1[p - 1]) if len(r1) > p - 1 else 0)
    return c0 == 0 and c1 == 0


def _ss_exponent_generic(curve: Curve) -> bool:
    """Portable truncated powering with FieldElement coefficients (small p only)."""
    ctx = curve.ctx
    p = ctx.p
    zero = ctx.zero

    def mul(f, g):
        out = [zero] * min(len(f) + len(g) - 1, p)
        for i, fi in enumerate(f):
            if not fi:
                continue
            for j, gj in enumerate(g):
                if i + j >= p:
                    break
                out[i + j] = out[i + j] + fi * gj
        return out

    base = [curve.b, curve.a, zero, ctx.one]
    acc = [ctx.one]
    e = (p - 1) // 2
    while e:
        if e & 1:
            acc = mul(acc, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return len(acc) <= p - 1 or not acc[p - 1]


def is_supersingular(curve: Curve) -> bool:
    """True iff the x^(p-1) coefficient of (x^3+ax+b)^((p-1)/2) vanishes."""
    ctx = curve.ctx
    if ctx.u == 0 and ctx.p <= _NUMPY_SS_LIMIT:
        return _ss_exponent_numpy(curve)
    return _ss_exponent_generic(curve)


def supersingular_count(p: int) -> int:
    """Number of supersingular j-invariants in characteristic p (p >= 5)."""
    adjust = {1: 0, 5: 1, 7: 1, 11: 2}
    return p // 12 + adjust[p % 12]


def curve_from_j(j: FieldElement) -> Curve:
    """A fixed representative curve with the given j-invariant."""
    ctx = j.ctx
    if j == 0:
        return Curve(ctx.zero, ctx.elem(-1))  # y^2 = x^3 - 1
    if j == 1728:
        return Curve(ctx.one, ctx.zero)  # y^2 = x^3 + x
    k = j / (1728 - j)
    return Curve(3 * k, 2 * k)


def find_initial_curve(p: int) -> Curve:
    """Deterministic supersingular starting curve for the walk over F_{p^2}.

    p = 3 (mod 4): y^2 = x^3 + x (j = 1728).  Else p = 2 (mod 3):
    y^2 = x^3 - 1 (j = 0).  Else (p = 1 mod 12) the first supersingular
    curve in the lexicographic (a, b) scan over F_p coefficients.
    """
    ctx = make_field_context(p)
    if p % 4 == 3:
        # CM by Z[i]: supersingular exactly when p is inert, i.e. p = 3 mod 4.
        # Proven, so usable at any prime size without the Hasse-exponent test.
        curve = Curve(ctx.one, ctx.zero)
    elif p % 3 == 2:
        # same argument with Z[w], w a primitive cube root of unity
        curve = Curve(ctx.zero, ctx.elem(-1))
    else:
        curve = None
        for a in range(p):
            for b in range(p):
                ea, eb = ctx.elem(a), ctx.elem(b)
                if not discriminant(ea, eb):
                    continue
                cand = Curve(ea, eb)
                if is_supersingular(cand):
                    curve = cand
                    break
            if curve is not None:
                break
        if curve is None:  # cannot happen: every characteristic has one
            raise RuntimeError(f"no supersingular curve found over F_{p}")
    if p <= _NUMPY_SS_LIMIT:
        assert is_supersingular(curve), "initial curve failed the supersingularity test"
    return curve


def enumerate_points(curve: Curve, limit: int = 400):
    """Every point of the curve over F_{p^2} (table of squares; p <= limit).

    Quadratic in p, intended for exhaustive small-prime verification.
    """
    ctx = curve.ctx
    if ctx.p > limit:
        raise ValueError(f"point enumeration limited to p <= {limit}")
    sqrt_table = {}
    for y in ctx.elements():
        sqrt_table.setdefault(y * y, []).append(y)
    points = [INFINITY]
    for x in ctx.elements():
        for y in sqrt_table.get(curve.rhs(x), ()):
            points.append(Point(x, y))
    return points
