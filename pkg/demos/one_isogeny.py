"""One degree-2 isogeny, in full detail, with integer-friendly numbers.

The running example: E: y^2 = x^3 - 4x, whose 2-torsion sits at
x = 0, 2, -2.  Quotienting by the subgroup generated by (-2, 0) gives
E': y^2 = x^3 - 44x + 112, and the isogeny back (the dual) has its
kernel at x = 4 on E'.
"""

from cglhash import Curve, Point, make_field_context, velu2, verify_two_map

p = 23
ctx = make_field_context(p)

domain = Curve(ctx.elem(-4 % p), ctx.zero)
print(f"E : y^2 = x^3 - 4x over F_{p}^2,  j = {domain.j_invariant()}")
print("2-torsion roots:", [str(r) for r in domain.two_torsion_roots()])

iso = velu2(domain, ctx.elem(-2 % p))
print(f"\nquotient by x0 = -2: E' : y^2 = x^3 + ({iso.codomain.a})x + ({iso.codomain.b})")
print(f"j(E') = {iso.codomain.j_invariant()}")
print(f"kernel of the dual on E': x = {iso.dual_kernel_x}")

# the other two 2-torsion points are NOT killed; they land on the dual kernel
for x0 in (0, 2):
    img = iso.apply(Point(ctx.elem(x0), ctx.zero))
    print(f"phi((x={x0}, y=0)) = (x={img.x}, y={img.y})")

dual = iso.dual()
print(f"\ndual codomain: y^2 = x^3 + ({dual.codomain.a})x + ({dual.codomain.b}),"
      f"  j = {dual.codomain.j_invariant()} (back home)")

# composing both maps kills exactly the 2-torsion of E -- that is [2] up to
# isomorphism, which is what makes the edge/dual-edge picture consistent
killed = [x for x in (0, 2, -2 % p)
          if dual.apply(iso.apply(Point(ctx.elem(x), ctx.zero))).is_infinity]
print(f"2-torsion x-values killed by the composition: {killed}")

print("\nfull independent verification:", verify_two_map(iso))
