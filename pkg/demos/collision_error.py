"""How much does the skewed hash distribution cost in collision terms?

A uniform oracle over the n supersingular values collides with chance 1/n.
The walk's limit distribution overweights ordinary vertices, so its
collision chance sits slightly above that -- by an amount with an exact
closed form in p that decays like c/p^2.
"""

from cglhash import closed_form_collision, ideal_collision, ideal_deviation, nearest_prime_in_class, to_sigfigs

print(f"{'p':>6} {'p mod 12':>9} {'collision':>12} {'ideal 1/n':>10} {'excess':>12} {'~':>10}")
for p in (13, 23, 41, 43, 47, 61, 101, 103, 107, 109, 499, 997):
    dev = ideal_deviation(p)
    print(f"{p:>6} {p % 12:>9} {str(closed_form_collision(p)):>12} "
          f"{str(ideal_collision(p)):>10} {str(dev):>12} {to_sigfigs(dev, 2):>10}")

print("\nresidue class 1 mod 12 is exactly uniform (excess 0); the other")
print("classes shrink like 64/p^2, 36/p^2, 100/p^2.\n")

center = 2**255
print("at 256-bit primes (nearest prime to 2^255 in each class):")
for residue in (5, 7, 11):
    p = nearest_prime_in_class(center, residue)
    offset = p - center
    print(f"  class {residue:>2}: p = 2^255{offset:+d},  excess = {to_sigfigs(ideal_deviation(p), 3)}")

print("\nfor comparison, a 256-bit uniform hash has collision chance ~8.7e-78;")
print("an excess of ~1e-152 is far below anything observable.")
