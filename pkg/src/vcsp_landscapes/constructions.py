"""Instance generators: the star of gadgets, its long flip schedule, and
small baseline families (unary, random trees, random stars).

Variables of the star instance are indexed with the centre at 0 and the
``i``-th variable of gadget ``k`` at ``4*(k-1) + i``, so an assignment
literal reads centre first and then gadget 1, gadget 2, ... left to right.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core import VcspInstance, merge
from .graphparams import EliminationTree

# Recorded in generated files so corpora can be regenerated bit-for-bit.
PRNG_VERSION = "numpy-pcg64/seedsequence/v1"

FlipSchedule = list[int]

# (scope in gadget-local labels, multiple of 11**(k-1)); label 0 is the centre
_GADGET_UNARIES = {1: 1, 2: 1, 3: 3, 4: 1}
_GADGET_BINARIES = {
    (0, 1): -2,
    (0, 2): -4,
    (0, 3): -4,
    (0, 4): -2,
    (1, 2): 2,
    (3, 4): -2,
}
_CENTRE_UNARY = 11


@dataclass(frozen=True)
class StarIndexMap:
    """Bijection between gadget labels ``(i, k)`` and variable indices."""

    n: int

    @property
    def num_vars(self) -> int:
        return 4 * self.n + 1

    def index(self, i: int, k: int) -> int:
        if not (1 <= i <= 4 and 1 <= k <= self.n):
            raise ValueError(f"no variable ({i},{k}) in a star of {self.n} gadgets")
        return 4 * (k - 1) + i

    def label(self, v: int) -> int | tuple[int, int]:
        """``0`` for the centre, otherwise ``(i, k)``."""
        if not 0 <= v < self.num_vars:
            raise ValueError(f"variable {v} out of range")
        if v == 0:
            return 0
        k, r = divmod(v - 1, 4)
        return (r + 1, k + 1)

    def gadget_vars(self, k: int) -> list[int]:
        return [self.index(i, k) for i in range(1, 5)]


def _gadget_constraints(k: int, centre_unary: bool) -> dict[tuple[int, ...], int]:
    scale = 11 ** (k - 1)
    idx = StarIndexMap(k).index

    def var(label: int) -> int:
        return 0 if label == 0 else idx(label, k)

    cons: dict[tuple[int, ...], int] = {}
    if centre_unary:
        cons[(0,)] = _CENTRE_UNARY * scale
    for label, m in _GADGET_UNARIES.items():
        cons[(var(label),)] = m * scale
    for (a, b), m in _GADGET_BINARIES.items():
        cons[(var(a), var(b))] = m * scale
    return cons


def gadget(k: int, num_vars: int | None = None) -> VcspInstance:
    """The five-variable gadget ``k`` on the centre and its own four variables.

    The instance is sized to ``4k + 1`` variables (or ``num_vars``) so its
    indices agree with the star layout; other variables are unconstrained.
    """
    if k < 1:
        raise ValueError("gadget index k must be >= 1")
    if num_vars is None:
        num_vars = 4 * k + 1
    return VcspInstance(num_vars, _gadget_constraints(k, centre_unary=True))


def _star(n: int) -> VcspInstance:
    # n == 0 is the single centre variable with unit weight
    num_vars = 4 * n + 1
    parts = [VcspInstance(num_vars, _gadget_constraints(k, centre_unary=False)) for k in range(1, n + 1)]
    parts.append(VcspInstance(num_vars, {(0,): 11**n}))
    return merge(parts)


def star_of_gadgets(n: int) -> VcspInstance:
    """Gadgets 1..n glued at the centre, whose unary weight is ``11**n``."""
    if n < 1:
        raise ValueError("star_of_gadgets needs n >= 1")
    return _star(n)


def prescribed_ascent(n: int) -> FlipSchedule:
    """The flip sequence of length ``10 * 2**n - 9`` for ``star_of_gadgets(n)``.

    Built bottom-up: the schedule for ``k`` gadgets wraps two copies of the
    schedule for ``k - 1`` with the three-flip runs of gadget ``k``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    sched: list[int] = [0]
    for k in range(1, n + 1):
        v1, v2, v3, v4 = (4 * (k - 1) + i for i in range(1, 5))
        sched = [v4, v3, v2] + sched + [v1, 0, v4] + sched + [v3, v2, v1]
    return sched


def prescribed_length(n: int) -> int:
    return 10 * 2**n - 9


def star_elimination_tree(n: int) -> EliminationTree:
    """Height-3 elimination tree of the star: centre, then (1,k) and (3,k),
    then (2,k) under (1,k) and (4,k) under (3,k)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = StarIndexMap(n).index
    parent: dict[int, int | None] = {0: None}
    for k in range(1, n + 1):
        parent[idx(1, k)] = 0
        parent[idx(3, k)] = 0
        parent[idx(2, k)] = idx(1, k)
        parent[idx(4, k)] = idx(3, k)
    return EliminationTree(parent)


# -- baseline families -----------------------------------------------------


def unary_instance(weights: Sequence[int]) -> VcspInstance:
    if any(w == 0 for w in weights):
        raise ValueError("unary weights must be nonzero")
    return VcspInstance(len(weights), {(v,): w for v, w in enumerate(weights)})


def _rng(seed: int, stream: str) -> np.random.Generator:
    # one child stream per generator family so families never share draws
    tag = int.from_bytes(stream.encode(), "little")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed) & (2**64 - 1), tag])))


def _nonzero_weights(rng: np.random.Generator, count: int, bound: int) -> list[int]:
    draws = rng.integers(1, 2 * bound, size=count, endpoint=True)
    # map 1..2B onto -B..-1, 1..B
    return [int(d) - bound - 1 if d <= bound else int(d) - bound for d in draws]


def _check_generator_args(n: int, weight_bound: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if weight_bound < 1:
        raise ValueError("weight_bound must be >= 1")


def random_unary_instance(n: int, seed: int, weight_bound: int) -> VcspInstance:
    _check_generator_args(n, weight_bound)
    return unary_instance(_nonzero_weights(_rng(seed, "unary"), n, weight_bound))


def _prufer_tree_edges(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Edges of a uniformly random labelled tree on ``n`` vertices."""
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [int(s) for s in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for s in seq:
        degree[s] += 1
    edges = []
    for s in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, s))
        degree[leaf] -= 1
        degree[s] -= 1
    u, v = (x for x in range(n) if degree[x] == 1)
    edges.append((u, v))
    return edges


def _weighted(n: int, edges: list[tuple[int, int]], rng: np.random.Generator, bound: int) -> VcspInstance:
    unaries = _nonzero_weights(rng, n, bound)
    binaries = _nonzero_weights(rng, len(edges), bound)
    cons: dict[tuple[int, ...], int] = {(v,): w for v, w in enumerate(unaries)}
    cons.update(zip(edges, binaries))
    return VcspInstance(n, cons)


def random_tree_instance(n: int, seed: int, weight_bound: int) -> VcspInstance:
    """Random tree-structured instance on ``n`` variables.

    The constraint graph is a uniform labelled tree (Prüfer sequence);
    every variable and edge carries a weight drawn uniformly from
    ``[-weight_bound, weight_bound]`` without zero.
    """
    _check_generator_args(n, weight_bound)
    rng = _rng(seed, "tree")
    return _weighted(n, _prufer_tree_edges(n, rng), rng, weight_bound)


def random_star_instance(n: int, seed: int, weight_bound: int) -> VcspInstance:
    """Random instance on ``n`` variables whose constraint graph is a star
    centred at variable 0 with ``n - 1`` leaves."""
    _check_generator_args(n, weight_bound)
    rng = _rng(seed, "star")
    return _weighted(n, [(0, v) for v in range(1, n)], rng, weight_bound)


@dataclass(frozen=True)
class RecursionCheck:
    """Outcome of fixing gadget ``k`` of the ``k``-gadget star to a background."""

    k: int
    background: str
    centre_weight: int
    shape_matches: bool
    constant_offset: int


def recursion_identity(k: int, background: str) -> RecursionCheck:
    """Fix gadget ``k`` of ``star_of_gadgets(k)`` to ``background`` (a
    4-character literal for ``(1,k)..(4,k)``) and compare the induced
    instance on the remaining variables with the ``k - 1`` gadget star.

    Only non-constant scopes are compared; the difference in constant terms
    is reported separately since it does not affect the landscape's shape.
    """
    from .core import induced_subproblem, parse_assignment

    if k < 1:
        raise ValueError("k must be >= 1")
    bits = parse_assignment(background, 4)
    star = _star(k)
    fixed = StarIndexMap(k).gadget_vars(k)
    induced = induced_subproblem(star, set(range(4 * k - 3)), dict(zip(fixed, bits)))
    target = _star(k - 1)
    shape = {s: w for s, w in induced.constraints.items() if s}
    return RecursionCheck(
        k=k,
        background=background,
        centre_weight=induced.weight(0),
        shape_matches=shape == {s: w for s, w in target.constraints.items() if s},
        constant_offset=induced.constant - target.constant,
    )
