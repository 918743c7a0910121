"""Hash actual bytes: small prime first, then a real 256-bit prime."""

import time

from cglhash import bits_from_bytes, hash_bytes, init_state, nearest_prime_in_class, step

message = b"attack at dawn"

# --- small prime: watch the walk happen -----------------------------------
p = 10007
state = init_state(p)
print(f"p = {p}, start j = {state.current.j_invariant()}")
bits = bits_from_bytes(message)
print(f"message {message!r} -> {len(bits)} bits, first byte walks "
      f"{bits[:8]} (most significant bit first)")

for bit in bits[:8]:
    state = step(state, bit)
    print(f"  bit {bit} -> j = {state.current.j_invariant()}")

print("final hash:", hash_bytes(p, message))

# one flipped bit sends the walk somewhere else entirely
tampered = bytes([message[0] ^ 0x01]) + message[1:]
print("tampered  :", hash_bytes(p, tampered))

# --- cryptographic size ----------------------------------------------------
big = nearest_prime_in_class(2**255, 7)
print(f"\n256-bit prime (7 mod 12): {big}")
t0 = time.time()
digest = hash_bytes(big, message)
print(f"hash ({len(bits)} curve steps, {time.time() - t0:.2f}s):")
print(" ", digest)
