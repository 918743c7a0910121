"""Exact stationary analysis of the non-backtracking walk.

The walk is Markov on pair states (current node, previous node).  The
transition matrix is built from the graph at the j-level: arriving at v
from u forbids exactly one of v's out-kernels, namely the dual of the
arrival edge, and that dual always points back to u — so a column of the
matrix is "v's out-edge targets minus one copy of u, weight 1/2 each".

Everything downstream is exact rational arithmetic: the stationary vector
comes from a nullspace solve of (M - I) (Gaussian elimination over Q, with
a certified modular fast path for larger chains), is independently
confirmed by floating-point power iteration, and feeds the collision
probability and its deviation from the ideal 1/n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cgl import compile_walk
from .curve import supersingular_count
from .errors import AmbiguousStationaryError, GraphIntegrityError
from .graph import Census, IsogenyGraph, dual_pair_census

HALF = Fraction(1, 2)

# Dense rational elimination is fine up to this many pair states; above it
# the certified modular route is much faster.
_DENSE_LIMIT = 64
_MOD_PRIME = 2_147_483_629  # < 2^31, keeps numpy int64 row operations exact


class Distribution:
    """An exact probability distribution over hashable labels."""

    def __init__(self, mass: dict, *, _checked: bool = False):
        self._mass = {k: Fraction(v) for k, v in mass.items()}
        if not _checked:
            if any(v < 0 for v in self._mass.values()):
                raise ValueError("negative probability mass")
            total = sum(self._mass.values(), Fraction(0))
            if total != 1:
                raise ValueError(f"mass sums to {total}, not 1")

    def __getitem__(self, label) -> Fraction:
        return self._mass.get(label, Fraction(0))

    def labels(self):
        return list(self._mass)

    def items(self):
        return list(self._mass.items())

    def as_dict(self) -> dict:
        return dict(self._mass)

    def l1_distance(self, other: "Distribution") -> Fraction:
        keys = set(self._mass) | set(other._mass)
        return sum((abs(self[k] - other[k]) for k in keys), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        keys = set(self._mass) | set(other._mass)
        return all(self[k] == other[k] for k in keys)

    def __len__(self):
        return len(self._mass)

    def __repr__(self):
        inner = ", ".join(f"{k}: {v}" for k, v in self._mass.items())
        return f"Distribution({inner})"


class PairMatrix:
    """Left-stochastic transition matrix of the (current, previous) chain."""

    def __init__(self, graph: IsogenyGraph, states, columns):
        self.graph = graph
        self.states = states  # list of (current_index, previous_index)
        self.state_index = {s: k for k, s in enumerate(states)}
        self.columns = columns  # per state: dict target_state_pos -> Fraction

    @property
    def dimension(self) -> int:
        return len(self.states)

    def label(self, pos: int):
        cur, prev = self.states[pos]
        return (self.graph.nodes[cur].j, self.graph.nodes[prev].j)

    def labels(self):
        return [self.label(k) for k in range(self.dimension)]

    def entry(self, row: int, col: int) -> Fraction:
        return self.columns[col].get(row, Fraction(0))

    def as_dense(self):
        m = self.dimension
        return [[self.entry(r, c) for c in range(m)] for r in range(m)]

    def to_numpy(self) -> np.ndarray:
        m = self.dimension
        out = np.zeros((m, m))
        for c, col in enumerate(self.columns):
            for r, val in col.items():
                out[r, c] = float(val)
        return out

    def apply_exact(self, vector):
        """M @ vector with Fractions (vector indexed by state position)."""
        out = [Fraction(0)] * self.dimension
        for c, col in enumerate(self.columns):
            vc = vector[c]
            if vc:
                for r, val in col.items():
                    out[r] += val * vc
        return out

    def __repr__(self):
        return f"PairMatrix(p={self.graph.p}, dimension={self.dimension})"


def build_pair_matrix(graph: IsogenyGraph) -> PairMatrix:
    """Derive the pair-state chain from the graph's edge structure.

    A state (v, u) exists for every edge u -> v.  Its successors: drop one
    out-edge of v pointing back to u (the arrival edge's dual), then each of
    the two remaining out-edges w gets probability 1/2 towards state (w, v).
    Parallel arrival edges collapse to the same column, which is exactly the
    aggregation that makes the pair chain well defined.
    """
    out_targets = [
        [edge.to_index for edge in graph.out_edges(i)] for i in range(graph.num_nodes)
    ]
    states = sorted({(e.to_index, e.from_index) for e in graph.edges})
    index = {s: k for k, s in enumerate(states)}

    columns = []
    for cur, prev in states:
        targets = list(out_targets[cur])
        if prev not in targets:
            raise GraphIntegrityError(
                f"no return edge from {graph.nodes[cur].j} to {graph.nodes[prev].j}:"
                " arrival edge has no dual"
            )
        targets.remove(prev)  # the forbidden kernel is the dual of the arrival edge
        column: dict = {}
        for w in targets:
            key = index.get((w, cur))
            if key is None:
                raise GraphIntegrityError("successor pair state missing from edge set")
            column[key] = column.get(key, Fraction(0)) + HALF
        assert sum(column.values()) == 1
        columns.append(column)
    return PairMatrix(graph, states, columns)


# ---------------------------------------------------------------------------
# Stationary vector: exact nullspace of (M - I), plus float confirmation.
# ---------------------------------------------------------------------------


def _nullspace_dense(matrix):
    """Basis of the nullspace of a square Fraction matrix (Gaussian elimination)."""
    m = len(matrix)
    rows = [row[:] for row in matrix]
    pivot_of_col = {}
    row_i = 0
    for col in range(m):
        pivot = next((r for r in range(row_i, m) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[row_i], rows[pivot] = rows[pivot], rows[row_i]
        inv = 1 / rows[row_i][col]
        rows[row_i] = [x * inv for x in rows[row_i]]
        for r in range(m):
            if r != row_i and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[row_i])]
        pivot_of_col[col] = row_i
        row_i += 1
        if row_i == m:
            break
    free_cols = [c for c in range(m) if c not in pivot_of_col]
    basis = []
    for free in free_cols:
        vec = [Fraction(0)] * m
        vec[free] = Fraction(1)
        for col, r in pivot_of_col.items():
            vec[col] = -rows[r][free]
        basis.append(vec)
    return basis


def _stationary_modular(pm: PairMatrix):
    """Nullspace of (M - I) modulo a word-size prime, with rational lift.

    Returns (dimension_mod_q, vector or None).  When the modular nullity is
    1 the rational nullity is also 1 (rank can only drop modulo q), and a
    successfully lifted and exactly verified vector is unconditionally
    correct; any failure simply falls back to the dense rational path.
    """
    q = _MOD_PRIME
    m = pm.dimension
    mat = np.zeros((m, m), dtype=np.int64)
    for c, col in enumerate(pm.columns):
        for r, val in col.items():
            mat[r, c] = val.numerator * pow(val.denominator, q - 2, q) % q
        mat[c, c] = (mat[c, c] - 1) % q
    # Row-reduce mod q.
    pivot_of_col = {}
    row_i = 0
    for col in range(m):
        nz = np.nonzero(mat[row_i:, col])[0]
        if len(nz) == 0:
            continue
        pivot = row_i + int(nz[0])
        if pivot != row_i:
            mat[[row_i, pivot]] = mat[[pivot, row_i]]
        inv = pow(int(mat[row_i, col]), q - 2, q)
        mat[row_i] = mat[row_i] * inv % q
        hits = np.nonzero(mat[:, col])[0]
        for r in hits:
            if r != row_i:
                mat[r] = (mat[r] - mat[r, col] * mat[row_i]) % q
        pivot_of_col[col] = row_i
        row_i += 1
        if row_i == m:
            break
    free_cols = [c for c in range(m) if c not in pivot_of_col]
    if len(free_cols) != 1:
        return len(free_cols), None
    free = free_cols[0]
    residues = [0] * m
    residues[free] = 1
    for col, r in pivot_of_col.items():
        residues[col] = int((-mat[r, free]) % q)
    vec = []
    for res in residues:
        lifted = _rational_reconstruct(res, q)
        if lifted is None:
            return 1, None
        vec.append(lifted)
    return 1, vec


def _rational_reconstruct(res: int, q: int):
    """Small fraction num/den congruent to res mod q (half-extended Euclid)."""
    bound = int(q**0.5) // 2
    r0, r1 = q, res % q
    t0, t1 = 0, 1
    while r1 > bound:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        t0, t1 = t1, t0 - quo * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    return Fraction(r1, t1)


def _power_iteration(pm: PairMatrix, tol: float = 1e-13, max_iter: int = 100_000):
    """Float fixed point of the lazy operator (M + I)/2 from the uniform start."""
    mat = pm.to_numpy()
    vec = np.full(pm.dimension, 1.0 / pm.dimension)
    for iteration in range(max_iter):
        nxt = 0.5 * (mat @ vec + vec)
        delta = float(np.abs(nxt - vec).sum())
        vec = nxt
        if delta < tol:
            return vec, iteration + 1
    raise RuntimeError(f"power iteration did not converge within {max_iter} steps")


def stationary_distribution(pm: PairMatrix, confirm: bool = True) -> Distribution:
    """The unique stationary vector of the pair chain, exactly.

    Solves (M - I) x = 0 over the rationals and normalises.  Raises
    AmbiguousStationaryError (carrying the eigenspace dimension) if the
    fixed space is not one-dimensional.  With confirm=True the result is
    also checked against floating-point power iteration.
    """
    m = pm.dimension
    vector = None
    if m > _DENSE_LIMIT:
        # Fast path.  Nullity 1 mod q forces rational nullity exactly 1, and
        # the lifted vector is accepted only with an exact fixed-point
        # certificate — any failure just falls back to the rational solve.
        _dim_mod, cand = _stationary_modular(pm)
        if cand is not None:
            total = sum(cand, Fraction(0))
            if total:
                cand = [v / total for v in cand]
                if all(v >= 0 for v in cand) and pm.apply_exact(cand) == cand:
                    vector = cand
    if vector is None:
        mi = pm.as_dense()
        for k in range(m):
            mi[k][k] -= 1
        basis = _nullspace_dense(mi)
        if len(basis) != 1:
            raise AmbiguousStationaryError(len(basis))
        vector = basis[0]
        total = sum(vector, Fraction(0))
        if total == 0:
            raise AmbiguousStationaryError(1)
        vector = [v / total for v in vector]
        if any(v < 0 for v in vector):
            raise GraphIntegrityError("stationary candidate has negative entries")
        if pm.apply_exact(vector) != vector:
            raise GraphIntegrityError("stationary candidate is not a fixed point")

    if confirm:
        approx, _steps = _power_iteration(pm)
        exact = np.array([float(v) for v in vector])
        drift = float(np.abs(approx - exact).sum())
        if drift > 1e-9:
            raise GraphIntegrityError(
                f"power iteration disagrees with the exact solve (L1 = {drift:.2e})"
            )
    return Distribution(dict(zip(pm.labels(), vector)), _checked=True)


def node_marginals(dist: Distribution) -> Distribution:
    """Collapse a pair-state distribution onto its current node."""
    mass: dict = {}
    for (cur, _prev), value in dist.items():
        mass[cur] = mass.get(cur, Fraction(0)) + value
    return Distribution(mass, _checked=True)


# ---------------------------------------------------------------------------
# Closed-form targets.
# ---------------------------------------------------------------------------


def theoretical_node_distribution(graph: IsogenyGraph) -> Distribution:
    """Limiting node weights: 6 / ((p-1)/2) ordinary, 3 at j=1728, 2 at j=0."""
    hp = Fraction(graph.p - 1, 2)
    mass = {}
    for node in graph.nodes:
        if node.is_j0:
            mass[node.j] = 2 / hp
        elif node.is_j1728:
            mass[node.j] = 3 / hp
        else:
            mass[node.j] = 6 / hp
    return Distribution(mass)


def theoretical_pair_distribution(graph: IsogenyGraph, census: Census = None) -> Distribution:
    """Limiting pair weights from the dual-pair census.

    (j1728, j1728) carries 1/((p-1)/2); every other valid pair carries
    2 * dual_pairs / ((p-1)/2).  A single-node graph is fully aggregated
    into one state of mass 1.
    """
    if census is None:
        census = dual_pair_census(graph)
    hp = Fraction(graph.p - 1, 2)
    if graph.num_nodes == 1:
        j = graph.nodes[0].j
        return Distribution({(j, j): Fraction(1)})
    mass = {}
    for (u, v) in {(e.to_index, e.from_index) for e in graph.edges}:
        nu = graph.nodes[u]
        label = (nu.j, graph.nodes[v].j)
        if u == v and nu.is_j1728:
            mass[label] = 1 / hp
        else:
            mass[label] = 2 * census.dual_pairs[(min(u, v), max(u, v))] / hp
    return Distribution(mass)


def collision_probability(dist: Distribution) -> Fraction:
    """Chance two independent stationary draws agree: sum of squared masses."""
    return sum((v * v for _k, v in dist.items()), Fraction(0))


def closed_form_collision(p: int) -> Fraction:
    """The stationary collision probability as a function of p alone."""
    r = p % 12
    if r == 1:
        return Fraction(12, p - 1)  # uniform over (p-1)/12 nodes
    if r == 5:
        return Fraction(12 * p - 44, (p - 1) ** 2)
    if r == 7:
        return Fraction(12 * p - 48, (p - 1) ** 2)
    if r == 11:
        return Fraction(12 * p - 80, (p - 1) ** 2)
    raise ValueError(f"p = {p} is not an admissible prime")


def ideal_collision(p: int) -> Fraction:
    """Collision chance of a uniform oracle over the same node set: 1/n."""
    return Fraction(1, supersingular_count(p))


def ideal_deviation(p: int) -> Fraction:
    """How far the stationary collision chance sits above the uniform 1/n.

    Evaluated as the exact difference and cross-checked against the expanded
    rational closed forms per residue class.
    """
    dev = closed_form_collision(p) - ideal_collision(p)
    r = p % 12
    if r == 1:
        assert dev == 0
    elif r == 5:
        assert dev == Fraction(64 * p - 320, p**3 + 5 * p**2 - 13 * p + 7)
    elif r == 7:
        assert dev == Fraction(36 * p - 252, p**3 + 3 * p**2 - 9 * p + 5)
    else:
        assert dev == Fraction(100 * p - 1052, p**3 + 11 * p**2 - 25 * p + 13)
    return dev


def to_sigfigs(value: Fraction, digits: int = 3) -> str:
    """Round an exact fraction to scientific notation, integer arithmetic only."""
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    num, den = abs(value).numerator, abs(value).denominator
    exponent = len(str(num)) - len(str(den))
    # Fix up so that 10^exponent <= |value| < 10^(exponent+1).
    if num * 10 ** max(0, -exponent) < den * 10 ** max(0, exponent):
        exponent -= 1
    shift = digits - 1 - exponent
    scaled_num = num * 10 ** max(0, shift)
    scaled_den = den * 10 ** max(0, -shift)
    mantissa = (2 * scaled_num + scaled_den) // (2 * scaled_den)  # round half up
    if len(str(mantissa)) > digits:  # rounding overflowed, e.g. 999.6 -> 1000
        mantissa //= 10
        exponent += 1
    text = str(mantissa)
    if digits > 1:
        text = f"{text[0]}.{text[1:]}"
    return f"{sign}{text}e{exponent:+03d}"


def nearest_prime_in_class(center: int, residue: int, modulus: int = 12) -> int:
    """The prime closest to `center` in the given residue class."""
    from sympy import isprime

    offset = (residue - center) % modulus
    candidates = []
    k = 0
    while True:
        for t in (offset + k * modulus, offset - (k + 1) * modulus):
            n = center + t
            if n > 2 and isprime(n):
                candidates.append(n)
        if candidates:
            # One more ring to be sure nothing closer sits on the other side.
            best = min(candidates, key=lambda n: abs(n - center))
            others = [
                center + t
                for t in (offset + (k + 1) * modulus, offset - (k + 2) * modulus)
            ]
            for n in others:
                if abs(n - center) < abs(best - center) and n > 2 and isprime(n):
                    best = n
            return best
        k += 1


# ---------------------------------------------------------------------------
# Empirical sampling and kernel-level consistency.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalResult:
    distribution: Distribution  # observed endpoint frequencies (exact counts/N)
    expected: Distribution  # theoretical node weights
    l1_distance: Fraction
    chi_square: float
    p_value: float
    samples: int
    bit_length: int
    seed: int


def empirical_distribution(p: int, samples: int, bit_length: int, seed: int) -> EmpiricalResult:
    """Hash `samples` random bit strings and compare endpoint frequencies
    with the theoretical node distribution (exact L1 plus a chi-square read).
    """
    from scipy import stats

    from .graph import build_graph

    auto = compile_walk(p)
    next0, next1, state_js = auto.arrays()
    rng = np.random.default_rng(seed)
    states = np.zeros(samples, dtype=np.int64)
    for _step in range(bit_length):
        bits = rng.integers(0, 2, size=samples, dtype=np.int64)
        states = np.where(bits == 1, next1[states], next0[states])
    counts = np.bincount(state_js[states], minlength=len(auto.node_js))

    expected = theoretical_node_distribution(build_graph(p))
    observed = Distribution(
        {j: Fraction(int(c), samples) for j, c in zip(auto.node_js, counts)},
        _checked=True,
    )
    l1 = observed.l1_distance(expected)
    exp_counts = np.array([float(expected[j]) * samples for j in auto.node_js])
    chi2, p_value = stats.chisquare(counts, exp_counts)
    return EmpiricalResult(
        distribution=observed,
        expected=expected,
        l1_distance=l1,
        chi_square=float(chi2),
        p_value=float(p_value),
        samples=samples,
        bit_length=bit_length,
        seed=seed,
    )


def verify_pair_aggregation(graph: IsogenyGraph, pm: PairMatrix) -> bool:
    """Check the j-level matrix against the concrete kernel-level walk.

    Every reachable (curve, forbidden root) state projects to a pair state
    (j of current, j of the dual step's codomain); its two bit successors
    must land exactly where that pair state's matrix column says.  Also
    requires every matrix state to be realised by some concrete state.
    """
    label_index = {pm.label(k): k for k in range(pm.dimension)}

    from .cgl import init_state
    from .isogeny import velu2

    start = init_state(graph.p)
    concrete = [(start.current, start.forbidden_x)]
    index = {(start.current.a, start.current.b, start.forbidden_x): 0}
    pos = 0
    covered = set()
    while pos < len(concrete):
        curve, forbidden = concrete[pos]
        cur_j = curve.j_invariant()
        prev_j = velu2(curve, forbidden).codomain.j_invariant()
        label = (cur_j, prev_j)
        if label not in label_index:
            return False
        covered.add(label)
        column = pm.columns[label_index[label]]
        successors = {}
        allowed = [r for r in curve.two_torsion_roots() if r != forbidden]
        if len(allowed) != 2:
            return False
        for root in allowed:
            iso = velu2(curve, root)
            key = (iso.codomain.a, iso.codomain.b, iso.dual_kernel_x)
            if key not in index:
                index[key] = len(concrete)
                concrete.append((iso.codomain, iso.dual_kernel_x))
            nxt_label = (iso.codomain.j_invariant(), cur_j)
            k = label_index.get(nxt_label)
            if k is None:
                return False
            successors[k] = successors.get(k, Fraction(0)) + HALF
        if successors != column:
            return False
        pos += 1
    return covered == set(pm.labels())
