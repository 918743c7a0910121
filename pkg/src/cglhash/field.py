"""Exact arithmetic in F_{p^2} and root-finding for 2-torsion cubics.

The quadratic extension is modelled as F_p[z]/(z^2 + u*z + v).  For odd
primes p >= 5 the modulus is chosen deterministically:

    p = 3 (mod 4)  ->  z^2 + 1
    otherwise      ->  z^2 - d,  d the smallest quadratic non-residue mod p

so that two runs (or two machines) always agree on element encodings.
Elements are written c0 + c1*z and ordered lexicographically on (c0, c1);
that order is what makes walk steps and graph exports reproducible.
"""

from __future__ import annotations

import random
from functools import lru_cache

from sympy import isprime

from .errors import RationalityError

# Primes above this would make the exhaustive root scan (p^2 candidates)
# unreasonable; the factorization path has no such limit.
SCAN_LIMIT = 1499


def _legendre(a: int, p: int) -> int:
    """Euler criterion: 1 for residues, p-1 for non-residues, 0 for 0."""
    return pow(a % p, (p - 1) // 2, p)


class FieldContext:
    """A concrete model of F_{p^2} = F_p[z]/(z^2 + u*z + v)."""

    __slots__ = ("p", "u", "v", "_zero", "_one")

    def __init__(self, p: int, u: int, v: int):
        if not isinstance(p, int) or p <= 3 or not isprime(p):
            raise ValueError(f"field characteristic must be a prime >= 5, got {p!r}")
        u %= p
        v %= p
        # z^2 + u*z + v must be irreducible over F_p: its discriminant
        # u^2 - 4v has to be a non-residue.
        if _legendre(u * u - 4 * v, p) != p - 1:
            raise ValueError(f"z^2 + {u}z + {v} is reducible over F_{p}")
        self.p = p
        self.u = u
        self.v = v
        self._zero = FieldElement(self, 0, 0)
        self._one = FieldElement(self, 1, 0)

    # -- element construction -------------------------------------------------

    def elem(self, c0: int, c1: int = 0) -> "FieldElement":
        return FieldElement(self, c0 % self.p, c1 % self.p)

    @property
    def zero(self) -> "FieldElement":
        return self._zero

    @property
    def one(self) -> "FieldElement":
        return self._one

    def random_element(self, rng: random.Random) -> "FieldElement":
        return FieldElement(self, rng.randrange(self.p), rng.randrange(self.p))

    def elements(self):
        """Iterate the whole field in canonical (c0, c1) order.  p^2 items."""
        for c0 in range(self.p):
            for c1 in range(self.p):
                yield FieldElement(self, c0, c1)

    # -- identity --------------------------------------------------------------

    def modulus_str(self) -> str:
        if self.u == 0 and self.v == 1:
            return "z^2+1"
        if self.u == 0:
            return f"z^2-{self.p - self.v}"
        return f"z^2+{self.u}z+{self.v}"

    def __eq__(self, other):
        return (
            isinstance(other, FieldContext)
            and (self.p, self.u, self.v) == (other.p, other.u, other.v)
        )

    def __hash__(self):
        return hash((self.p, self.u, self.v))

    def __repr__(self):
        return f"FieldContext(p={self.p}, modulus={self.modulus_str()})"


@lru_cache(maxsize=None)
def make_field_context(p: int) -> FieldContext:
    """Deterministic F_{p^2} model for a prime p >= 5 (see module docstring).

    Cached so that repeated calls share one context object (and element
    comparisons between independently obtained values stay cheap).
    """
    if not isinstance(p, int) or p <= 3 or not isprime(p):
        raise ValueError(f"field characteristic must be a prime >= 5, got {p!r}")
    if p % 4 == 3:
        return FieldContext(p, 0, 1)  # z^2 = -1
    d = 2
    while _legendre(d, p) != p - 1:
        d += 1
    return FieldContext(p, 0, p - d)  # z^2 = d


class FieldElement:
    """Immutable element c0 + c1*z of a FieldContext, with operator support."""

    __slots__ = ("ctx", "c0", "c1")

    def __init__(self, ctx: FieldContext, c0: int, c1: int):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # -- coercion and checks ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("elements belong to different field contexts")
            return other
        if isinstance(other, int):
            return self.ctx.elem(other)
        return None

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElement(self.ctx, (self.c0 + o.c0) % p, (self.c1 + o.c1) % p)

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, (-self.c0) % p, (-self.c1) % p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElement(self.ctx, (self.c0 - o.c0) % p, (self.c1 - o.c1) % p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        p = ctx.p
        a0, a1, b0, b1 = self.c0, self.c1, o.c0, o.c1
        # (a0 + a1 z)(b0 + b1 z) with z^2 = -(u z + v)
        cross = a1 * b1
        c0 = (a0 * b0 - ctx.v * cross) % p
        c1 = (a0 * b1 + a1 * b0 - ctx.u * cross) % p
        return FieldElement(ctx, c0, c1)

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        """Multiplicative inverse via the conjugate: (a+bz)((a-ub)-bz) = N in F_p."""
        if self.c0 == 0 and self.c1 == 0:
            raise ZeroDivisionError("inverse of zero in F_{p^2}")
        ctx = self.ctx
        p = ctx.p
        a, b = self.c0, self.c1
        n = (a * a - ctx.u * a * b + ctx.v * b * b) % p  # norm, nonzero by irreducibility
        ninv = pow(n, p - 2, p)
        return FieldElement(ctx, (a - ctx.u * b) * ninv % p, (-b) * ninv % p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inv()
        e = abs(e)
        result = self.ctx.one
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparisons (canonical lexicographic order) ---------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.elem(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (
            self.c0 == other.c0
            and self.c1 == other.c1
            and (self.ctx is other.ctx or self.ctx == other.ctx)
        )

    def __hash__(self):
        return hash((self.c0, self.c1, self.ctx.p, self.ctx.u, self.ctx.v))

    def _cmp_key(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return (self.c0, self.c1), (o.c0, o.c1)

    def __lt__(self, other):
        keys = self._cmp_key(other)
        return NotImplemented if keys is None else keys[0] < keys[1]

    def __le__(self, other):
        keys = self._cmp_key(other)
        return NotImplemented if keys is None else keys[0] <= keys[1]

    def __gt__(self, other):
        keys = self._cmp_key(other)
        return NotImplemented if keys is None else keys[0] > keys[1]

    def __ge__(self, other):
        keys = self._cmp_key(other)
        return NotImplemented if keys is None else keys[0] >= keys[1]

    # -- predicates and rendering ----------------------------------------------

    def __bool__(self):
        return self.c0 != 0 or self.c1 != 0

    def is_fp(self) -> bool:
        """True when the element lies in the prime subfield."""
        return self.c1 == 0

    def norm(self) -> int:
        """The norm down to F_p (product with the Frobenius conjugate), as an int."""
        ctx = self.ctx
        a, b = self.c0, self.c1
        return (a * a - ctx.u * a * b + ctx.v * b * b) % ctx.p

    def is_square(self) -> bool:
        """Whether x is a square in F_{p^2} (zero counts as a square).

        x^((q-1)/2) = norm(x)^((p-1)/2), so the Euler test collapses to a
        Legendre symbol of the norm.
        """
        if not self:
            return True
        return _legendre(self.norm(), self.ctx.p) == 1

    def __str__(self):
        if self.c1 == 0:
            return str(self.c0)
        return f"{self.c0}+{self.c1}*z"

    __repr__ = __str__


def canonical_compare(x: FieldElement, y: FieldElement) -> int:
    """Total order used everywhere roots must be ranked: lex on (c0, c1)."""
    kx, ky = (x.c0, x.c1), (y.c0, y.c1)
    if kx < ky:
        return -1
    return 0 if kx == ky else 1


def _sqrt_fp(n: int, p: int):
    """Tonelli-Shanks square root in F_p, or None for a non-residue."""
    n %= p
    if n == 0:
        return 0
    if _legendre(n, p) != 1:
        return None
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _legendre(z, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_element(x: FieldElement):
    """A square root of x in F_{p^2}, or None when x is a non-square.

    Requires a modulus of the form z^2 - s (which make_field_context always
    produces); computed by descending to F_p via the norm, so the cost is a
    handful of integer exponentiations.
    """
    ctx = x.ctx
    if ctx.u != 0:
        raise ValueError("sqrt_element requires a modulus of the form z^2 - s")
    p = ctx.p
    s = (-ctx.v) % p
    a, b = x.c0, x.c1
    if b == 0:
        if a == 0:
            return ctx.zero
        y = _sqrt_fp(a, p)
        if y is not None:
            return ctx.elem(y)
        # a and s are both non-residues, so a/s is one; (t*z)^2 = t^2 s = a.
        t = _sqrt_fp(a * pow(s, p - 2, p) % p, p)
        assert t is not None
        return ctx.elem(0, t)
    r = _sqrt_fp((a * a - s * b * b) % p, p)  # sqrt of the norm
    if r is None:
        return None
    inv2 = pow(2, p - 2, p)
    # (c + d z)^2 = x needs c^2 = (a +- r)/2 with the residue sign choice.
    for signed in (r, p - r):
        c = _sqrt_fp((a + signed) * inv2 % p, p)
        if c:
            d = b * pow(2 * c % p, p - 2, p) % p
            cand = FieldElement(ctx, c, d)
            if cand * cand == x:
                return cand
    return None


# ---------------------------------------------------------------------------
# Dense polynomial helpers over F_{p^2} (coefficient lists, low degree first).
# Only used on tiny degrees, so schoolbook everything.
# ---------------------------------------------------------------------------


def _ptrim(f):
    while f and not f[-1]:
        f.pop()
    return f


def _pdeg(f):
    return len(f) - 1


def _padd(f, g):
    n = max(len(f), len(g))
    ctx = (f or g)[0].ctx
    z = ctx.zero
    return _ptrim([(f[i] if i < len(f) else z) + (g[i] if i < len(g) else z) for i in range(n)])


def _psub(f, g):
    n = max(len(f), len(g))
    ctx = (f or g)[0].ctx
    z = ctx.zero
    return _ptrim([(f[i] if i < len(f) else z) - (g[i] if i < len(g) else z) for i in range(n)])


def _pmul(f, g):
    if not f or not g:
        return []
    ctx = f[0].ctx
    out = [ctx.zero] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if not fi:
            continue
        for j, gj in enumerate(g):
            out[i + j] = out[i + j] + fi * gj
    return _ptrim(out)


def _pmonic(f):
    if not f:
        return f
    lead = f[-1]
    if lead == f[-1].ctx.one:
        return list(f)
    linv = lead.inv()
    return [c * linv for c in f]


def _pdivmod(f, g):
    """Quotient and remainder of f by nonzero g."""
    g = _ptrim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    ctx = g[0].ctx
    r = _ptrim(list(f))
    if len(r) < len(g):
        return [], r
    q = [ctx.zero] * (len(r) - len(g) + 1)
    ginv = g[-1].inv()
    while len(r) >= len(g):
        if not r[-1]:
            r.pop()
            continue
        shift = len(r) - len(g)
        c = r[-1] * ginv
        q[shift] = c
        for i, gi in enumerate(g[:-1]):
            r[shift + i] = r[shift + i] - c * gi
        r.pop()
    return _ptrim(q), _ptrim(r)


def _pgcd(f, g):
    f, g = list(f), list(g)
    while g:
        f, g = g, _pdivmod(f, g)[1]
    return _pmonic(f)


def _ppowmod(base, e: int, mod):
    """base^e reduced mod the monic polynomial `mod`."""
    ctx = mod[0].ctx
    result = [ctx.one]
    base = _pdivmod(base, mod)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base), mod)[1]
        e >>= 1
        if e:
            base = _pdivmod(_pmul(base, base), mod)[1]
    return result


def _edf_roots(g, rng: random.Random):
    """All roots of monic g, which splits into distinct linear factors.

    Cantor-Zassenhaus equal-degree splitting: gcd((x+d)^((q-1)/2) - 1, g)
    is a proper factor with probability about 1/2 per random shift d.
    """
    d = _pdeg(g)
    if d <= 0:
        return []
    if d == 1:
        return [-g[0]]
    ctx = g[0].ctx
    q = ctx.p * ctx.p
    half = (q - 1) // 2
    one = ctx.one
    while True:
        delta = ctx.random_element(rng)
        h = _ppowmod([delta, one], half, g)
        w = _pgcd(_psub(h, [one]), g)
        k = _pdeg(w)
        if 0 < k < d:
            rest = _pdivmod(g, w)[0]
            return _edf_roots(w, rng) + _edf_roots(_pmonic(rest), rng)


def _roots_by_factorization(a: FieldElement, b: FieldElement):
    ctx = a.ctx
    f = [b, a, ctx.zero, ctx.one]  # x^3 + a x + b
    x = [ctx.zero, ctx.one]
    q = ctx.p * ctx.p
    xq = _ppowmod(x, q, f)
    # gcd(x^q - x, f): product of the distinct linear factors over F_{p^2}
    g = _pgcd(_psub(xq, x), f)
    if _pdeg(g) < 1:
        return []
    # Seeded per call: reproducible timing, and the output is sorted anyway.
    rng = random.Random(0xC6E5)
    return _edf_roots(g, rng)


def _roots_by_scan(a: FieldElement, b: FieldElement):
    ctx = a.ctx
    if ctx.p > SCAN_LIMIT:
        raise ValueError(f"exhaustive scan limited to p <= {SCAN_LIMIT}, got p = {ctx.p}")
    roots = []
    for x in ctx.elements():
        if not (x * x * x + a * x + b):
            roots.append(x)
    return roots


def cubic_roots(a: FieldElement, b: FieldElement, ctx: FieldContext = None, method: str = "auto"):
    """The three distinct roots of x^3 + a*x + b over F_{p^2}, in canonical order.

    `method` is "factor" (default for "auto": deterministic-seeded
    equal-degree factorization, fine at any prime size), or "scan"
    (exhaustive field sweep, the slow reference path for small p).

    Raises RationalityError when the cubic has fewer than 3 distinct roots
    in F_{p^2} -- either a repeated root (singular curve) or a root living
    in a higher extension.
    """
    if ctx is None:
        ctx = a.ctx
    if a.ctx != ctx or b.ctx != ctx:
        raise ValueError("coefficients do not belong to the given field context")
    if method in ("auto", "factor"):
        roots = _roots_by_factorization(a, b)
    elif method == "scan":
        roots = _roots_by_scan(a, b)
    else:
        raise ValueError(f"unknown root-finding method {method!r}")
    roots.sort()
    if len(roots) != 3:
        raise RationalityError(
            f"x^3 + ({a})x + ({b}) has {len(roots)} distinct roots over F_{ctx.p}^2, expected 3"
        )
    return roots
