"""The bit-driven non-backtracking walk and the hash built on it.

Each state is a curve plus one forbidden 2-torsion root (the kernel of the
dual of the isogeny just taken).  A step sorts the other two roots
canonically, picks by the input bit (0 -> smaller), moves through the
degree-2 isogeny, and forbids the new dual kernel.  The hash of a bit
string is the j-invariant of the final curve.

For bulk hashing there is a compiled transition table: the reachable
(curve, forbidden root) states of a given prime form a small finite
automaton, which is behaviourally identical to `step` (and tested to be).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curve import Curve, find_initial_curve
from .field import FieldElement
from .isogeny import velu2

# A single hash call switches to the compiled table above this many bits.
AUTOMATON_THRESHOLD = 4096


@dataclass(frozen=True)
class HashState:
    current: Curve
    forbidden_x: FieldElement
    steps_taken: int


def init_state(p: int) -> HashState:
    """Walk start: the canonical initial curve, forbidding its smallest root."""
    curve = find_initial_curve(p)
    return HashState(curve, min(curve.two_torsion_roots()), 0)


def step(state: HashState, bit: int) -> HashState:
    """Advance one edge; bit 0 takes the smaller allowed kernel root."""
    if bit not in (0, 1):
        raise ValueError(f"walk bit must be 0 or 1, got {bit!r}")
    roots = state.current.two_torsion_roots()  # canonically sorted
    allowed = [r for r in roots if r != state.forbidden_x]
    assert len(allowed) == 2, "forbidden root is not a 2-torsion root of the current curve"
    iso = velu2(state.current, allowed[bit])
    return HashState(iso.codomain, iso.dual_kernel_x, state.steps_taken + 1)


def bits_from_bytes(data: bytes):
    """Byte string to walk bits, most-significant bit of each byte first."""
    out = []
    for byte in data:
        for k in range(7, -1, -1):
            out.append((byte >> k) & 1)
    return out


def hash_bits(p: int, bits) -> FieldElement:
    """Hash a bit sequence: fold `step` from the initial state, return final j.

    The empty input hashes to the initial curve's j-invariant.
    """
    bits = list(bits)
    if len(bits) >= AUTOMATON_THRESHOLD:
        return compile_walk(p).final_j(bits)
    state = init_state(p)
    for bit in bits:
        state = step(state, bit)
    return state.current.j_invariant()


def hash_bytes(p: int, data: bytes) -> FieldElement:
    return hash_bits(p, bits_from_bytes(data))


class WalkAutomaton:
    """Compiled transition table over the reachable (curve, forbidden) states."""

    def __init__(self, p, start, next0, next1, state_js, node_js):
        self.p = p
        self.start = start
        self.next0 = next0  # list[int], successor on bit 0
        self.next1 = next1
        self.state_js = state_js  # list[int]: state -> index into node_js
        self.node_js = node_js  # list[FieldElement], discovery order

    @property
    def num_states(self) -> int:
        return len(self.next0)

    def final_j(self, bits) -> FieldElement:
        s = self.start
        n0, n1 = self.next0, self.next1
        for bit in bits:
            s = n1[s] if bit else n0[s]
        return self.node_js[self.state_js[s]]

    def arrays(self):
        """(next0, next1, state_js) as numpy arrays for vectorised walking."""
        return (
            np.asarray(self.next0, dtype=np.int64),
            np.asarray(self.next1, dtype=np.int64),
            np.asarray(self.state_js, dtype=np.int64),
        )


@lru_cache(maxsize=32)
def compile_walk(p: int, max_states: int = 500_000) -> WalkAutomaton:
    """Explore every (curve, forbidden root) state reachable from init_state(p)."""
    start = init_state(p)

    def key(curve: Curve, forbidden: FieldElement):
        return (curve.a.c0, curve.a.c1, curve.b.c0, curve.b.c1, forbidden.c0, forbidden.c1)

    index = {}
    frontier = [(start.current, start.forbidden_x)]
    index[key(*frontier[0])] = 0
    next0, next1, state_js = [], [], []
    node_js, node_index = [], {}

    pos = 0
    while pos < len(frontier):
        curve, forbidden = frontier[pos]
        j = curve.j_invariant()
        if j not in node_index:
            node_index[j] = len(node_js)
            node_js.append(j)
        state_js.append(node_index[j])
        successors = []
        allowed = [r for r in curve.two_torsion_roots() if r != forbidden]
        assert len(allowed) == 2
        for root in allowed:
            iso = velu2(curve, root)
            k = key(iso.codomain, iso.dual_kernel_x)
            if k not in index:
                if len(index) >= max_states:
                    raise RuntimeError(f"walk automaton for p={p} exceeds {max_states} states")
                index[k] = len(frontier)
                frontier.append((iso.codomain, iso.dual_kernel_x))
            successors.append(index[k])
        next0.append(successors[0])
        next1.append(successors[1])
        pos += 1

    return WalkAutomaton(p, 0, next0, next1, state_js, node_js)
