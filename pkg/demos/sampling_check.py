"""Empirical sanity: sample many random walks, compare with the exact law."""

import time

from cglhash import empirical_distribution

for p in (23, 47):
    t0 = time.time()
    res = empirical_distribution(p, samples=200_000, bit_length=256, seed=2024)
    print(f"p = {p}: {res.samples} walks of {res.bit_length} bits "
          f"({time.time() - t0:.1f}s)")
    for j, freq in sorted(res.distribution.items(), key=lambda kv: str(kv[0])):
        print(f"  j = {j}: observed {float(freq):.4f}  expected {float(res.expected[j]):.4f}")
    print(f"  L1 distance {float(res.l1_distance):.5f},  "
          f"chi-square p-value {res.p_value:.3f}\n")
