"""Binary Boolean VCSP instances and the fitness function they represent.

An instance maps scopes (sorted tuples of at most two variable indices) to
nonzero integer weights.  The fitness of an assignment ``x`` is

    f(x) = sum over scopes S of w(S) * prod_{u in S} x_u

where the empty scope contributes its weight unconditionally.  Weights are
plain Python ints, so nothing ever wraps around no matter how large the
construction grows.
"""

from __future__ import annotations

import operator
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from types import MappingProxyType

Scope = tuple[int, ...]
Assignment = tuple[int, ...]

class DimensionError(ValueError):
    """An assignment does not match the number of variables of an instance."""


class InstanceParseError(ValueError):
    """Raised for malformed instance text."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def canonical_scope(variables: Iterable[int]) -> Scope:
    """Return the sorted, duplicate-checked tuple form of a scope."""
    scope = tuple(sorted(operator.index(v) for v in variables))
    if len(scope) > 2:
        raise ValueError(f"scope {scope} has arity {len(scope)}; only arity <= 2 is supported")
    if len(scope) == 2 and scope[0] == scope[1]:
        raise ValueError(f"scope {scope} repeats a variable")
    if scope and scope[0] < 0:
        raise ValueError(f"scope {scope} has a negative variable index")
    return scope


def _scope_key(scope: Scope) -> tuple[int, Scope]:
    return (len(scope), scope)


@dataclass(frozen=True, eq=False)
class VcspInstance:
    """An immutable binary Boolean VCSP instance.

    ``constraints`` may be a mapping or an iterable of ``(scope, weight)``
    pairs.  Scopes are canonicalised on construction; two entries that
    canonicalise to the same scope are rejected rather than summed (use
    :func:`merge` for additive combination).  Zero weights are rejected.
    """

    num_vars: int
    constraints: Mapping[Scope, int]

    def __post_init__(self) -> None:
        num_vars = operator.index(self.num_vars)
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        items = self.constraints.items() if isinstance(self.constraints, Mapping) else self.constraints
        table: dict[Scope, int] = {}
        for raw_scope, raw_weight in items:
            scope = canonical_scope(raw_scope)
            if isinstance(raw_weight, bool):
                raise TypeError("weights must be integers, not bool")
            weight = operator.index(raw_weight)
            if weight == 0:
                raise ValueError(f"scope {scope} has zero weight")
            if scope in table:
                raise ValueError(f"duplicate scope {scope}")
            if scope and scope[-1] >= num_vars:
                raise ValueError(f"scope {scope} references a variable >= num_vars={num_vars}")
            table[scope] = weight
        ordered = dict(sorted(table.items(), key=lambda kv: _scope_key(kv[0])))
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "constraints", MappingProxyType(ordered))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VcspInstance):
            return NotImplemented
        return self.num_vars == other.num_vars and dict(self.constraints) == dict(other.constraints)

    def __hash__(self) -> int:
        return hash((self.num_vars, frozenset(self.constraints.items())))

    def __repr__(self) -> str:
        return f"VcspInstance(num_vars={self.num_vars}, scopes={len(self.constraints)})"

    def __len__(self) -> int:
        return len(self.constraints)

    def weight(self, *variables: int) -> int:
        """Weight of the scope over ``variables``; 0 when the scope is absent."""
        return self.constraints.get(canonical_scope(variables), 0)

    @property
    def constant(self) -> int:
        return self.constraints.get((), 0)

    @cached_property
    def unary_weights(self) -> tuple[int, ...]:
        weights = [0] * self.num_vars
        for scope, w in self.constraints.items():
            if len(scope) == 1:
                weights[scope[0]] = w
        return tuple(weights)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per variable, the ``(neighbour, binary weight)`` pairs touching it."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vars)]
        for scope, w in self.constraints.items():
            if len(scope) == 2:
                u, v = scope
                adj[u].append((v, w))
                adj[v].append((u, w))
        return tuple(tuple(a) for a in adj)

    def binary_scopes(self) -> list[Scope]:
        return [s for s in self.constraints if len(s) == 2]

    def without_constant(self) -> VcspInstance:
        return VcspInstance(self.num_vars, {s: w for s, w in self.constraints.items() if s})


@dataclass(frozen=True)
class TabularBinaryConstraint:
    """A binary constraint given by its value table.

    ``a``, ``b``, ``c``, ``d`` are the values on ``(x_u, x_v)`` equal to
    00, 10, 01 and 11 respectively.
    """

    u: int
    v: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise ValueError("a tabular binary constraint needs two distinct variables")

    def value(self, xu: int, xv: int) -> int:
        return ((self.a, self.c), (self.b, self.d))[xu][xv]


# -- assignments -----------------------------------------------------------


def zeros(num_vars: int) -> Assignment:
    return (0,) * num_vars


def ones(num_vars: int) -> Assignment:
    return (1,) * num_vars


def parse_assignment(literal: str, num_vars: int | None = None) -> Assignment:
    """Parse a ``0``/``1`` string, index 0 leftmost."""
    literal = literal.strip()
    if any(ch not in "01" for ch in literal):
        raise ValueError(f"assignment literal {literal!r} may only contain 0 and 1")
    if num_vars is not None and len(literal) != num_vars:
        raise DimensionError(f"assignment literal has length {len(literal)}, expected {num_vars}")
    return tuple(int(ch) for ch in literal)


def format_assignment(x: Iterable[int]) -> str:
    return "".join("1" if b else "0" for b in x)


def flip(x: Assignment, v: int) -> Assignment:
    return x[:v] + (1 - x[v],) + x[v + 1 :]


def assignment_to_int(x: Iterable[int]) -> int:
    """Encode ``x`` as the integer whose bit ``v`` is ``x_v``."""
    code = 0
    for v, bit in enumerate(x):
        if bit:
            code |= 1 << v
    return code


def int_to_assignment(code: int, num_vars: int) -> Assignment:
    return tuple((code >> v) & 1 for v in range(num_vars))


def _check_length(inst: VcspInstance, x: Assignment) -> None:
    if len(x) != inst.num_vars:
        raise DimensionError(f"assignment has length {len(x)}, instance has {inst.num_vars} variables")


# -- fitness ---------------------------------------------------------------


def evaluate(inst: VcspInstance, x: Assignment) -> int:
    """Fitness of ``x`` under ``inst``."""
    _check_length(inst, x)
    total = 0
    for scope, w in inst.constraints.items():
        if all(x[u] for u in scope):
            total += w
    return total


def local_field(inst: VcspInstance, x: Assignment, v: int) -> int:
    """Gain from setting ``x_v`` to 1 rather than 0, all else fixed."""
    field = inst.unary_weights[v]
    for u, w in inst.adjacency[v]:
        if x[u]:
            field += w
    return field


def delta_flip(inst: VcspInstance, x: Assignment, v: int) -> int:
    """``evaluate(flip(x, v)) - evaluate(x)``, touching only scopes containing ``v``."""
    _check_length(inst, x)
    v = operator.index(v)
    if not 0 <= v < inst.num_vars:
        raise IndexError(f"variable {v} out of range for {inst.num_vars} variables")
    field = local_field(inst, x, v)
    return -field if x[v] else field


def improving_flips(inst: VcspInstance, x: Assignment) -> list[tuple[int, int]]:
    """All ``(variable, delta)`` pairs with positive delta, in index order."""
    _check_length(inst, x)
    out = []
    for v in range(inst.num_vars):
        d = delta_flip(inst, x, v)
        if d > 0:
            out.append((v, d))
    return out


def is_local_peak(inst: VcspInstance, x: Assignment) -> bool:
    _check_length(inst, x)
    return all(delta_flip(inst, x, v) <= 0 for v in range(inst.num_vars))


# -- instance algebra ------------------------------------------------------


def induced_subproblem(
    inst: VcspInstance,
    kept: Iterable[int],
    background: Mapping[int, int],
) -> VcspInstance:
    """Fix every variable outside ``kept`` to its ``background`` value.

    Variables keep their original indices: the result has the same
    ``num_vars`` but no scope mentions an eliminated variable, so their
    values in any assignment passed to the result are irrelevant.

    Contributions of eliminated variables fold into unary weights of kept
    neighbours and into the constant term.  Any induced weight that comes
    out as zero, the constant included, is dropped.
    """
    kept_set = {operator.index(v) for v in kept}
    for v in kept_set:
        if not 0 <= v < inst.num_vars:
            raise ValueError(f"kept variable {v} out of range")
    bg = {operator.index(k): int(b) for k, b in background.items()}
    overlap = kept_set & bg.keys()
    if overlap:
        raise ValueError(f"variables {sorted(overlap)} are both kept and in the background")
    missing = set(range(inst.num_vars)) - kept_set - bg.keys()
    if missing:
        raise ValueError(f"background does not assign eliminated variables {sorted(missing)}")
    extra = bg.keys() - set(range(inst.num_vars))
    if extra:
        raise ValueError(f"background assigns unknown variables {sorted(extra)}")
    if any(b not in (0, 1) for b in bg.values()):
        raise ValueError("background values must be 0 or 1")

    acc: dict[Scope, int] = {}
    for scope, w in inst.constraints.items():
        inside = tuple(u for u in scope if u in kept_set)
        if all(bg[u] for u in scope if u not in kept_set):
            acc[inside] = acc.get(inside, 0) + w
    return VcspInstance(inst.num_vars, {s: w for s, w in acc.items() if w != 0})


def from_tabular(t: TabularBinaryConstraint, num_vars: int | None = None) -> VcspInstance:
    """Rewrite a tabular binary constraint as constant, unary and AND terms."""
    if num_vars is None:
        num_vars = max(t.u, t.v) + 1
    terms = {
        (): t.a,
        (t.u,): t.b - t.a,
        (t.v,): t.c - t.a,
        (t.u, t.v): t.a + t.d - t.b - t.c,
    }
    return VcspInstance(num_vars, {s: w for s, w in terms.items() if w != 0})


def merge(insts: Iterable[VcspInstance]) -> VcspInstance:
    """Scope-wise sum of weights; scopes summing to zero disappear."""
    insts = list(insts)
    if not insts:
        raise ValueError("merge needs at least one instance")
    num_vars = insts[0].num_vars
    if any(i.num_vars != num_vars for i in insts):
        raise ValueError("cannot merge instances with different num_vars")
    acc: dict[Scope, int] = {}
    for inst in insts:
        for scope, w in inst.constraints.items():
            acc[scope] = acc.get(scope, 0) + w
    return VcspInstance(num_vars, {s: w for s, w in acc.items() if w != 0})


def negate(inst: VcspInstance) -> VcspInstance:
    return VcspInstance(inst.num_vars, {s: -w for s, w in inst.constraints.items()})


# -- text format -----------------------------------------------------------


def parse_instance(text: str) -> VcspInstance:
    """Parse the line-oriented ``vcsp`` text format.

    ::

        # comment
        vcsp 5
        w 11 0
        w -2 0 1
    """
    num_vars: int | None = None
    seen: dict[Scope, int] = {}
    weights: dict[Scope, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if num_vars is None:
            if fields[0] != "vcsp" or len(fields) != 2:
                raise InstanceParseError("expected header 'vcsp <num_vars>'", lineno)
            try:
                num_vars = int(fields[1])
            except ValueError:
                raise InstanceParseError(f"bad variable count {fields[1]!r}", lineno) from None
            if num_vars < 0:
                raise InstanceParseError("variable count must be non-negative", lineno)
            continue
        if fields[0] != "w" or not 2 <= len(fields) <= 4:
            raise InstanceParseError("expected 'w <weight> [<v1> [<v2>]]'", lineno)
        try:
            weight = int(fields[1])
            variables = [int(f) for f in fields[2:]]
        except ValueError:
            raise InstanceParseError(f"non-integer field in {line!r}", lineno) from None
        if weight == 0:
            raise InstanceParseError("zero weight", lineno)
        try:
            scope = canonical_scope(variables)
        except ValueError as exc:
            raise InstanceParseError(str(exc), lineno) from None
        if scope and scope[-1] >= num_vars:
            raise InstanceParseError(f"variable {scope[-1]} >= num_vars={num_vars}", lineno)
        if scope in seen:
            raise InstanceParseError(f"duplicate scope {scope} (first on line {seen[scope]})", lineno)
        seen[scope] = lineno
        weights[scope] = weight
    if num_vars is None:
        raise InstanceParseError("missing 'vcsp <num_vars>' header")
    return VcspInstance(num_vars, weights)


def format_instance(inst: VcspInstance, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"vcsp {inst.num_vars}")
    for scope, w in inst.constraints.items():
        lines.append(" ".join(["w", str(w), *map(str, scope)]))
    return "\n".join(lines) + "\n"


def read_instance(path: str | Path) -> VcspInstance:
    return parse_instance(Path(path).read_text())


def write_instance(inst: VcspInstance, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_instance(inst, comments))
