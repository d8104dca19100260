"""End-to-end reproduction of the exponential ascent on the star of gadgets."""

from __future__ import annotations

from dataclasses import dataclass, field

from .constructions import prescribed_ascent, prescribed_length, star_of_gadgets
from .core import VcspInstance, format_assignment, is_local_peak, zeros
from .search import InvalidAscentError, SearchPolicy, ascend, validate


@dataclass
class AscentCheckRow:
    n: int
    expected_length: int
    length: int | None = None
    final_fitness: int | None = None
    final_assignment: str | None = None
    peak: bool = False
    passed: bool = False
    message: str = ""
    fitness_trace: list[int] = field(default_factory=list)


def check_prescribed_ascent(n: int, inst: VcspInstance | None = None, keep_trace: bool = False) -> AscentCheckRow:
    """Replay the prescribed schedule on the ``n``-gadget star and audit it.

    ``inst`` substitutes another instance of the same size, which is how
    the negative control (a tampered weight) is exercised.
    """
    row = AscentCheckRow(n, prescribed_length(n))
    if inst is None:
        inst = star_of_gadgets(n)
    if inst.num_vars != 4 * n + 1:
        row.message = f"instance has {inst.num_vars} variables, expected {4 * n + 1}"
        return row
    sched = prescribed_ascent(n)
    try:
        traj = ascend(inst, zeros(inst.num_vars), SearchPolicy("replay", schedule=sched))
    except InvalidAscentError as exc:
        row.message = str(exc)
        return row
    report = validate(inst, traj)
    final = traj.final_assignment()
    row.length = len(traj)
    row.final_fitness = traj.final_fitness
    row.final_assignment = format_assignment(final)
    row.peak = is_local_peak(inst, final)
    if keep_trace:
        row.fitness_trace = traj.fitness_sequence()
    target = "1" + "0" * (4 * n)
    problems = []
    if not report.ok:
        problems.append(report.message)
    if row.length != row.expected_length:
        problems.append(f"length {row.length} != {row.expected_length}")
    if row.final_assignment != target:
        problems.append(f"ended at {row.final_assignment}, expected {target}")
    if not row.peak:
        problems.append("final assignment is not a local peak")
    row.passed = not problems
    row.message = "; ".join(problems) or "ok"
    return row
