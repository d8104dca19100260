"""Constraint graphs and their structural parameters.

Treedepth is computed exactly by memoised vertex-removal search over
bitmask-encoded vertex subsets, one connected component at a time.  The
feedback vertex set number is found by iterative deepening over deletion
sets after stripping vertices that lie on no cycle.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from .core import VcspInstance

TREEDEPTH_CAP = 16
FVS_BUDGET = 2_000_000


class CapExceededError(RuntimeError):
    """An exact computation was refused because the input is too large."""


class StructureError(ValueError):
    """A parent map does not describe a rooted forest over the graph's vertices."""


class FvsBudgetExceeded(RuntimeError):
    def __init__(self, message: str, upper_bound: frozenset[int]):
        super().__init__(f"{message}; best upper bound {len(upper_bound)} via {sorted(upper_bound)}")
        self.upper_bound = upper_bound


@dataclass(frozen=True)
class ConstraintGraph:
    """Simple undirected graph; vertices keep their variable indices."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    _adj: Mapping[int, frozenset[int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge {(u, v)} has an endpoint outside the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", MappingProxyType({v: frozenset(n) for v, n in adj.items()}))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]]) -> ConstraintGraph:
        return cls(frozenset(range(num_vertices)), frozenset(tuple(sorted(e)) for e in edges))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def delete_vertices(self, removed: Iterable[int]) -> ConstraintGraph:
        """Induced subgraph on the remaining vertices."""
        removed = set(removed)
        keep = self.vertices - removed
        return ConstraintGraph(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def induced(self, keep: Iterable[int]) -> ConstraintGraph:
        return self.delete_vertices(self.vertices - set(keep))

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for s in sorted(self.vertices):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out


def extract_graph(inst: VcspInstance) -> ConstraintGraph:
    """One vertex per variable, one edge per binary scope."""
    return ConstraintGraph.from_edges(inst.num_vars, inst.binary_scopes())


def degrees(g: ConstraintGraph) -> dict[int, int]:
    return {v: len(g.neighbors(v)) for v in sorted(g.vertices)}


def is_forest(g: ConstraintGraph) -> bool:
    # acyclic iff |E| = |V| - #components
    return g.num_edges == g.num_vertices - len(g.components())


# -- elimination trees -------------------------------------------------------


@dataclass(frozen=True)
class EliminationTree:
    """Rooted forest given by a parent map (roots map to ``None``).

    A connected graph always gets a single root; a disconnected one may
    use one tree per component.
    """

    parent: Mapping[int, int | None]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parent", MappingProxyType(dict(self.parent)))

    @property
    def roots(self) -> tuple[int, ...]:
        return tuple(sorted(v for v, p in self.parent.items() if p is None))

    @property
    def root(self) -> int:
        roots = self.roots
        if len(roots) != 1:
            raise StructureError(f"elimination forest has {len(roots)} roots")
        return roots[0]

    def ancestors(self, v: int) -> list[int]:
        out = []
        p = self.parent[v]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def depth(self, v: int) -> int:
        """Number of vertices on the path from ``v`` up to its root."""
        return 1 + len(self.ancestors(v))

    def height(self) -> int:
        return max((self.depth(v) for v in self.parent), default=0)


@dataclass(frozen=True)
class TreeCheck:
    height: int | None
    violating_edge: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.violating_edge is None


def validate_elimination_tree(g: ConstraintGraph, t: EliminationTree) -> TreeCheck:
    """Check that every edge joins an ancestor/descendant pair of ``t``.

    Raises :class:`StructureError` if ``t`` does not span exactly the
    vertices of ``g`` or its parent map contains a cycle.  An edge whose
    endpoints are unrelated is reported in the returned check.
    """
    if set(t.parent) != set(g.vertices):
        raise StructureError("elimination tree does not span the graph's vertices")
    for v, p in t.parent.items():
        if p is not None and p not in t.parent:
            raise StructureError(f"parent {p} of {v} is not a vertex")
    # cycle detection: walking up from any vertex must terminate
    depth: dict[int, int] = {}
    for v in t.parent:
        path = []
        u: int | None = v
        on_path: set[int] = set()
        while u is not None and u not in depth:
            if u in on_path:
                raise StructureError(f"parent map has a cycle through {u}")
            on_path.add(u)
            path.append(u)
            u = t.parent[u]
        base = 0 if u is None else depth[u]
        for w in reversed(path):
            base += 1
            depth[w] = base
    if len(g.components()) == 1 and len(t.roots) > 1:
        raise StructureError("connected graph needs a single-rooted elimination tree")
    for u, v in sorted(g.edges):
        if v not in t.ancestors(u) and u not in t.ancestors(v):
            return TreeCheck(None, (u, v))
    return TreeCheck(max(depth.values(), default=0))


# -- treedepth -------------------------------------------------------------


def _bit_components(mask: int, adj: list[int]) -> list[int]:
    comps = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = adj[b.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def treedepth_exact(g: ConstraintGraph, cap: int = TREEDEPTH_CAP) -> tuple[int, EliminationTree]:
    """Exact treedepth with an optimal elimination tree.

    Each connected component may have at most ``cap`` vertices; the
    search is exponential in component size.
    """
    comps = g.components()
    too_big = [c for c in comps if len(c) > cap]
    if too_big:
        raise CapExceededError(
            f"component of {max(len(c) for c in too_big)} vertices exceeds exact treedepth cap {cap}; "
            "validate an explicit elimination tree for an upper bound instead"
        )
    parent: dict[int, int | None] = {}
    best = 0
    for comp in comps:
        labels = sorted(comp)
        pos = {v: i for i, v in enumerate(labels)}
        adj = [0] * len(labels)
        for v in labels:
            for w in g.neighbors(v):
                adj[pos[v]] |= 1 << pos[w]
        memo: dict[int, tuple[int, int]] = {}

        def td(mask: int) -> int:
            """Treedepth of the connected vertex subset ``mask``."""
            if mask & (mask - 1) == 0:
                return 1
            hit = memo.get(mask)
            if hit is not None:
                return hit[0]
            best_depth, best_root = len(labels) + 1, -1
            rest = mask
            while rest:
                b = rest & -rest
                rest ^= b
                sub = max(td(c) for c in _bit_components(mask & ~b, adj))
                if sub + 1 < best_depth:
                    best_depth, best_root = sub + 1, b.bit_length() - 1
                    if sub == 1:
                        break
            memo[mask] = (best_depth, best_root)
            return best_depth

        def build(mask: int, up: int | None) -> None:
            if mask & (mask - 1) == 0:
                parent[labels[mask.bit_length() - 1]] = up
                return
            root = memo[mask][1]
            parent[labels[root]] = up
            for c in _bit_components(mask & ~(1 << root), adj):
                build(c, labels[root])

        full = (1 << len(labels)) - 1
        best = max(best, td(full))
        build(full, None)
    return best, EliminationTree(parent)


# -- feedback vertex sets --------------------------------------------------


def _two_core(g: ConstraintGraph) -> ConstraintGraph:
    deg = {v: len(g.neighbors(v)) for v in g.vertices}
    alive = set(g.vertices)
    queue = [v for v, d in deg.items() if d <= 1]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.neighbors(v):
            if w in alive:
                deg[w] -= 1
                if deg[w] <= 1:
                    queue.append(w)
    return g.induced(alive)


def _greedy_fvs(g: ConstraintGraph) -> frozenset[int]:
    chosen: set[int] = set()
    core = _two_core(g)
    while core.num_vertices:
        v = max(sorted(core.vertices), key=lambda u: len(core.neighbors(u)))
        chosen.add(v)
        core = _two_core(core.delete_vertices([v]))
    return frozenset(chosen)


def fvsn(g: ConstraintGraph, budget: int = FVS_BUDGET) -> tuple[int, frozenset[int]]:
    """Minimum feedback vertex set: its size and a witness.

    Vertices outside the 2-core never lie on a cycle, so the search runs
    on the 2-core, component by component, trying deletion sets of size
    0, 1, 2, ... in lexicographic order.  ``budget`` bounds the number of
    candidate sets examined overall.
    """
    witness: set[int] = set()
    examined = 0
    for comp in _two_core(g).components():
        sub = _two_core(g.induced(comp))
        if sub.num_vertices == 0:
            continue
        verts = sorted(sub.vertices)
        found = None
        for k in range(1, len(verts) + 1):
            for cand in itertools.combinations(verts, k):
                examined += 1
                if examined > budget:
                    raise FvsBudgetExceeded(
                        f"feedback vertex set search exceeded budget of {budget} candidate sets",
                        frozenset(witness) | _greedy_fvs(g.delete_vertices(witness)),
                    )
                if is_forest(sub.delete_vertices(cand)):
                    found = cand
                    break
            if found is not None:
                break
        witness.update(found)
    return len(witness), frozenset(witness)
