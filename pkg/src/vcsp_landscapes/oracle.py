"""Exhaustive landscape analysis for small instances.

Assignments are encoded as integers whose bit ``v`` is ``x_v``, so the
neighbours of ``x`` are ``x ^ (1 << v)``.  The improvement DAG is never
materialised: after the fitness table is filled, assignments are visited
in decreasing fitness order and edges are regenerated on the fly.
"""

from __future__ import annotations

import io
import logging
import math
import os
from dataclasses import dataclass

import numba
import numpy as np

from .core import Assignment, VcspInstance, _check_length, assignment_to_int, format_assignment, int_to_assignment
from .graphparams import extract_graph, is_forest
from .search import PEAK, Trajectory

log = logging.getLogger(__name__)

DEFAULT_CAP = 24
CAP_ENV = "VCSP_ORACLE_CAP"
FAMILIES = ("tree", "star", "unary")


class OracleCapError(RuntimeError):
    """The instance has more variables than the enumeration cap allows."""

    def __init__(self, num_vars: int, cap: int):
        super().__init__(
            f"refusing to enumerate 2^{num_vars} assignments: cap is {cap} variables; "
            f"rerun with a cap of at least {num_vars} (--cap or {CAP_ENV})"
        )
        self.num_vars = num_vars
        self.cap = cap


def default_cap() -> int:
    value = os.environ.get(CAP_ENV)
    return int(value) if value else DEFAULT_CAP


def fitness_table(inst: VcspInstance, exact: bool | None = None) -> np.ndarray:
    """Fitness of every assignment, indexed by its integer code.

    Uses int64 unless the weights could overflow 63 bits (or ``exact`` is
    true), in which case an object array of Python ints is built.
    """
    n = inst.num_vars
    if exact is None:
        exact = sum(abs(w) for w in inst.constraints.values()) >= 2**62
    codes = np.arange(1 << n, dtype=np.int64)
    bits = [((codes >> v) & 1) for v in range(n)]
    if exact:
        bits = [b.astype(object) for b in bits]
        table = np.zeros(1 << n, dtype=object)
    else:
        table = np.zeros(1 << n, dtype=np.int64)
    for scope, w in inst.constraints.items():
        if len(scope) == 0:
            table += w
        elif len(scope) == 1:
            table += w * bits[scope[0]]
        else:
            table += w * (bits[scope[0]] & bits[scope[1]])
    return table


@numba.njit(cache=True)
def _sweep(key, order, num_vars):  # pragma: no cover - compiled
    size = key.shape[0]
    longest = np.zeros(size, np.int64)
    shortest = np.zeros(size, np.int64)
    steepest = np.zeros(size, np.int64)
    succ = np.full(size, -1, np.int64)
    for i in range(size):
        x = order[i]
        kx = key[x]
        best_long = -1
        best_short = -1
        best_key = kx
        best_y = -1
        for v in range(num_vars):
            y = x ^ (1 << v)
            ky = key[y]
            if ky > kx:
                if longest[y] + 1 > best_long:
                    best_long = longest[y] + 1
                if best_short < 0 or shortest[y] + 1 < best_short:
                    best_short = shortest[y] + 1
                if ky > best_key:
                    best_key = ky
                    best_y = y
        if best_y >= 0:
            longest[x] = best_long
            shortest[x] = best_short
            steepest[x] = steepest[best_y] + 1
            succ[x] = best_y
    return longest, shortest, steepest, succ


@dataclass
class LandscapeCensus:
    """Everything the oracle knows about one landscape.

    ``key`` is an int64 array ordering assignments exactly as fitness does
    (the fitness itself on the fast path, a dense rank otherwise).  The
    per-assignment arrays give the longest and shortest ascent to any peak,
    and the length of the steepest ascent (lowest-index tie breaking).
    """

    instance: VcspInstance
    fitness: np.ndarray
    key: np.ndarray
    longest: np.ndarray
    shortest: np.ndarray
    steepest: np.ndarray
    steepest_next: np.ndarray

    @property
    def num_vars(self) -> int:
        return self.instance.num_vars

    @property
    def peaks(self) -> np.ndarray:
        return np.flatnonzero(self.steepest_next < 0)

    def peak_assignments(self) -> list[Assignment]:
        return [int_to_assignment(int(c), self.num_vars) for c in self.peaks]

    def code(self, x: Assignment | int) -> int:
        if isinstance(x, (int, np.integer)):
            return int(x)
        _check_length(self.instance, tuple(x))
        return assignment_to_int(x)

    def fitness_of(self, x: Assignment | int) -> int:
        return int(self.fitness[self.code(x)])

    def is_peak(self, x: Assignment | int) -> bool:
        return bool(self.steepest_next[self.code(x)] < 0)

    def improving_neighbors(self, x: Assignment | int) -> list[int]:
        c = self.code(x)
        return [v for v in range(self.num_vars) if self.key[c ^ (1 << v)] > self.key[c]]

    def to_csv(self, starts: list[Assignment]) -> str:
        buf = io.StringIO()
        buf.write("start,longest,shortest\n")
        for s in starts:
            c = self.code(s)
            buf.write(f"{format_assignment(s)},{int(self.longest[c])},{int(self.shortest[c])}\n")
        return buf.getvalue()


def census(inst: VcspInstance, cap: int | None = None, exact: bool | None = None) -> LandscapeCensus:
    """Enumerate the whole landscape of ``inst``."""
    if cap is None:
        cap = default_cap()
    if inst.num_vars > cap:
        raise OracleCapError(inst.num_vars, cap)
    table = fitness_table(inst, exact=exact)
    if table.dtype == object:
        _, key = np.unique(table, return_inverse=True)
        key = key.astype(np.int64).reshape(-1)
    else:
        key = table
    order = np.argsort(-key, kind="stable")
    longest, shortest, steepest, succ = _sweep(key, order, inst.num_vars)
    return LandscapeCensus(inst, table, key, longest, shortest, steepest, succ)


def _walk(c: LandscapeCensus, start: Assignment | int, lengths: np.ndarray) -> tuple[int, Trajectory]:
    code = c.code(start)
    total = int(lengths[code])
    traj = Trajectory(int_to_assignment(code, c.num_vars), c.fitness_of(code), terminal=PEAK)
    remaining = total
    while remaining:
        for v in range(c.num_vars):
            y = code ^ (1 << v)
            if c.key[y] > c.key[code] and lengths[y] == remaining - 1:
                break
        else:  # pragma: no cover - census arrays are consistent
            raise AssertionError("no successor consistent with the DP table")
        code = y
        remaining -= 1
        traj.steps.append((v, c.fitness_of(code)))
    return total, traj


def longest_ascent_from(c: LandscapeCensus, start: Assignment | int) -> tuple[int, Trajectory]:
    """Length of the longest ascent from ``start`` and one witness."""
    return _walk(c, start, c.longest)


def shortest_ascent_from(c: LandscapeCensus, start: Assignment | int) -> tuple[int, Trajectory]:
    """Length of the shortest ascent from ``start`` to any peak and one witness."""
    return _walk(c, start, c.shortest)


def steepest_ascent_from(c: LandscapeCensus, start: Assignment | int) -> tuple[int, Trajectory]:
    code = c.code(start)
    traj = Trajectory(int_to_assignment(code, c.num_vars), c.fitness_of(code), terminal=PEAK)
    while c.steepest_next[code] >= 0:
        nxt = int(c.steepest_next[code])
        traj.steps.append(((nxt ^ code).bit_length() - 1, c.fitness_of(nxt)))
        code = nxt
    return len(traj), traj


@dataclass
class BoundReport:
    family: str
    num_vars: int
    bound: int
    observed: int
    ok: bool
    detail: str = ""
    witness: Trajectory | None = None
    steepest_observed: int | None = None
    steepest_bound: int | None = None

    @property
    def longest_ok(self) -> bool:
        return self.observed <= self.bound if self.family != "unary" else self.ok

    @property
    def steepest_ok(self) -> bool:
        return self.steepest_observed is None or self.steepest_observed <= self.steepest_bound


def _is_star(inst: VcspInstance) -> bool:
    # every edge touches one common vertex
    edges = inst.binary_scopes()
    if not edges:
        return True
    common = set(edges[0])
    for e in edges[1:]:
        common &= set(e)
    return bool(common)


def check_bound(c: LandscapeCensus, family: str) -> BoundReport:
    """Compare the census against the known ascent bound for ``family``.

    * ``tree``: every ascent has length at most ``C(n+1, 2)``.
    * ``star``: every ascent has length at most ``n**2 / 4`` and every
      steepest ascent at most ``2(n - 1)``.
    * ``unary``: every ascent from ``x`` has length equal to the Hamming
      distance from ``x`` to the unique peak.

    A violation is returned (and logged as an error) with a witness.
    """
    inst = c.instance
    n = inst.num_vars
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family == "tree" and not is_forest(extract_graph(inst)):
        raise ValueError("instance is not tree-structured")
    if family == "star" and not _is_star(inst):
        raise ValueError("instance's constraint graph is not a star")
    if family == "unary" and inst.binary_scopes():
        raise ValueError("instance has binary constraints")

    worst = int(c.longest.argmax())
    observed = int(c.longest[worst])
    if family == "tree":
        report = BoundReport(family, n, math.comb(n + 1, 2), observed, observed <= math.comb(n + 1, 2))
    elif family == "star":
        bound = n * n // 4
        steep_worst = int(c.steepest.argmax())
        steep = int(c.steepest[steep_worst])
        steep_ok = steep <= 2 * (n - 1)
        report = BoundReport(family, n, bound, observed, observed <= bound and steep_ok)
        report.steepest_observed = steep
        report.steepest_bound = 2 * (n - 1)
        report.detail = f"longest max {observed} (bound {bound}); steepest max {steep} (bound {2 * (n - 1)})"
        if observed <= bound and not steep_ok:
            report.witness = steepest_ascent_from(c, steep_worst)[1]
    else:
        peaks = c.peaks
        if len(peaks) != 1:
            return BoundReport(family, n, 1, len(peaks), False, f"{len(peaks)} peaks in a unary landscape")
        codes = np.arange(1 << n, dtype=np.int64) ^ int(peaks[0])
        hamming = np.zeros(1 << n, dtype=np.int64)
        for v in range(n):
            hamming += (codes >> v) & 1
        bad = np.flatnonzero((c.longest != hamming) | (c.shortest != hamming))
        report = BoundReport(family, n, n, observed, len(bad) == 0)
        if len(bad):
            worst = int(bad[0])
            report.detail = f"start {format_assignment(int_to_assignment(worst, n))} has ascents off the Hamming distance"
    if not report.ok:
        if report.witness is None:
            report.witness = longest_ascent_from(c, worst)[1]
        log.error("ascent bound violated for %s family: %s", family, report)
    return report
