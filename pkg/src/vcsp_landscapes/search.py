"""Strict local search: steepest, first-improvement, random-improvement and
replay of a fixed flip schedule, plus independent trajectory validation."""

from __future__ import annotations

import io
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from .core import Assignment, VcspInstance, _check_length, evaluate, flip, format_assignment, is_local_peak

DEFAULT_STEP_LIMIT = 2**26

PEAK = "peak"
STEP_LIMIT = "step-limit"

POLICIES = ("steepest", "first", "random", "replay")


class InvalidAscentError(ValueError):
    """A replayed flip did not strictly improve fitness, or the schedule
    stopped short of a local peak."""

    def __init__(self, message: str, step: int, variable: int | None = None, delta: int | None = None):
        super().__init__(message)
        self.step = step
        self.variable = variable
        self.delta = delta


@dataclass(frozen=True)
class SearchPolicy:
    kind: str = "steepest"
    seed: int | None = None
    schedule: tuple[int, ...] | None = None
    step_limit: int = DEFAULT_STEP_LIMIT

    def __post_init__(self) -> None:
        if self.kind not in POLICIES:
            raise ValueError(f"unknown policy {self.kind!r}; expected one of {POLICIES}")
        if self.kind == "replay" and self.schedule is None:
            raise ValueError("replay policy needs a schedule")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random policy needs a seed")
        if self.step_limit < 0:
            raise ValueError("step_limit must be non-negative")
        if self.schedule is not None:
            object.__setattr__(self, "schedule", tuple(int(v) for v in self.schedule))


@dataclass
class Trajectory:
    """A start assignment and the flips applied to it.

    ``steps`` holds ``(variable, fitness after the flip)`` pairs.
    """

    start: Assignment
    start_fitness: int
    steps: list[tuple[int, int]] = field(default_factory=list)
    terminal: str = PEAK

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def flips(self) -> list[int]:
        return [v for v, _ in self.steps]

    @property
    def final_fitness(self) -> int:
        return self.steps[-1][1] if self.steps else self.start_fitness

    def fitness_sequence(self) -> list[int]:
        return [self.start_fitness] + [f for _, f in self.steps]

    def assignments(self) -> Iterator[Assignment]:
        x = self.start
        yield x
        for v, _ in self.steps:
            x = flip(x, v)
            yield x

    def final_assignment(self) -> Assignment:
        x = list(self.start)
        for v, _ in self.steps:
            x[v] ^= 1
        return tuple(x)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("step,variable,fitness\n")
        buf.write(f"0,-,{self.start_fitness}\n")
        for t, (v, f) in enumerate(self.steps, start=1):
            buf.write(f"{t},{v},{f}\n")
        return buf.getvalue()


def trajectory_from_flips(inst: VcspInstance, start: Assignment, flips: Sequence[int], terminal: str = PEAK) -> Trajectory:
    """Build a trajectory by full re-evaluation, with no improvement checks."""
    x = tuple(start)
    traj = Trajectory(x, evaluate(inst, x), terminal=terminal)
    for v in flips:
        x = flip(x, v)
        traj.steps.append((v, evaluate(inst, x)))
    return traj


def ascend(inst: VcspInstance, start: Assignment, policy: SearchPolicy = SearchPolicy()) -> Trajectory:
    """Run strict local search from ``start`` until a peak or the step limit.

    Steepest ascent breaks ties by lowest variable index.  Fitness is
    tracked incrementally through per-variable local fields and audited
    against a full evaluation at the end.
    """
    start = tuple(start)
    _check_length(inst, start)
    n = inst.num_vars
    adjacency = inst.adjacency
    x = list(start)
    # field[v] = fitness gain of setting x_v to 1 rather than 0
    fields = list(inst.unary_weights)
    for v in range(n):
        if x[v]:
            for u, w in adjacency[v]:
                fields[u] += w
    fitness = evaluate(inst, start)
    traj = Trajectory(start, fitness)
    steps = traj.steps

    def apply(v: int) -> None:
        nonlocal fitness
        fitness += fields[v] if x[v] == 0 else -fields[v]
        x[v] ^= 1
        sign = 1 if x[v] else -1
        for u, w in adjacency[v]:
            fields[u] += sign * w
        steps.append((v, fitness))

    def gain(v: int) -> int:
        return -fields[v] if x[v] else fields[v]

    limit = policy.step_limit
    if policy.kind == "replay":
        schedule = policy.schedule
        bad = [v for v in schedule if not 0 <= v < n]
        if bad:
            raise ValueError(f"schedule addresses variables outside 0..{n - 1}: {bad[:5]}")
        for i, v in enumerate(schedule, start=1):
            if len(steps) >= limit:
                traj.terminal = STEP_LIMIT
                break
            d = gain(v)
            if d <= 0:
                raise InvalidAscentError(
                    f"step {i}: flipping variable {v} changes fitness by {d}, not an improvement",
                    step=i,
                    variable=v,
                    delta=d,
                )
            apply(v)
        else:
            if any(gain(v) > 0 for v in range(n)):
                raise InvalidAscentError(
                    f"schedule ended after {len(schedule)} steps at a non-peak assignment",
                    step=len(schedule),
                )
    else:
        rng = np.random.default_rng(policy.seed) if policy.kind == "random" else None
        while True:
            if policy.kind == "steepest":
                best_v, best_d = -1, 0
                for v in range(n):
                    d = gain(v)
                    if d > best_d:
                        best_v, best_d = v, d
                choice = best_v
            elif policy.kind == "first":
                choice = next((v for v in range(n) if gain(v) > 0), -1)
            else:
                cands = [v for v in range(n) if gain(v) > 0]
                choice = cands[int(rng.integers(len(cands)))] if cands else -1
            if choice < 0:
                break
            if len(steps) >= limit:
                traj.terminal = STEP_LIMIT
                break
            apply(choice)

    if evaluate(inst, tuple(x)) != fitness:
        raise RuntimeError("incremental fitness drifted from full evaluation")
    return traj


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    length: int
    message: str = "ok"
    step: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(inst: VcspInstance, t: Trajectory) -> ValidationReport:
    """Re-check a trajectory from scratch using full evaluations only.

    Reports the first step whose recorded fitness is wrong, whose fitness
    does not strictly increase, or whose variable is invalid, and checks
    that a trajectory flagged as ending at a peak really does.
    """
    if len(t.start) != inst.num_vars:
        return ValidationReport(False, len(t), "start assignment has the wrong length", 0)
    x = tuple(t.start)
    prev = evaluate(inst, x)
    if prev != t.start_fitness:
        return ValidationReport(False, len(t), f"start fitness recorded {t.start_fitness}, actual {prev}", 0)
    for i, (v, recorded) in enumerate(t.steps, start=1):
        if not 0 <= v < inst.num_vars:
            return ValidationReport(False, len(t), f"step {i} flips unknown variable {v}", i)
        x = flip(x, v)
        f = evaluate(inst, x)
        if f != recorded:
            return ValidationReport(False, len(t), f"step {i} fitness recorded {recorded}, actual {f}", i)
        if f <= prev:
            return ValidationReport(False, len(t), f"step {i} (variable {v}) does not improve: {prev} -> {f}", i)
        prev = f
    if t.terminal == PEAK and not is_local_peak(inst, x):
        return ValidationReport(False, len(t), f"final assignment {format_assignment(x)} is not a local peak", len(t))
    return ValidationReport(True, len(t))
