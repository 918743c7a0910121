"""A short tour of the quadratic extension F_p^2 the walks live in."""

import random

from cglhash import cubic_roots, make_field_context

for p in (23, 41):
    ctx = make_field_context(p)
    print(f"p = {p}: F_p^2 = F_p[z]/({ctx.modulus_str()})")

ctx = make_field_context(23)
x = ctx.elem(7, 2)       # 7 + 2z
y = ctx.elem(0, 1)       # z itself
print(f"\n({x}) * ({y}) = {x * y}   [z^2 = -1 here]")
print(f"({x})^-1 = {x.inv()},  check: {x * x.inv()}")
print(f"norm({x}) = {x.norm()}  -> square? {x.is_square()}")

# elements are ordered lexicographically on (c0, c1); the walk uses this
# order to give the two allowed isogeny kernels a stable 0/1 labelling
rng = random.Random(4)
sample = sorted(ctx.random_element(rng) for _ in range(5))
print("\nfive random elements, canonically sorted:")
for el in sample:
    print("  ", el)

# 2-torsion polynomials of supersingular curves split completely
roots = cubic_roots(ctx.one, ctx.zero)  # x^3 + x
print(f"\nroots of x^3 + x over F_23^2: {[str(r) for r in roots]}")
