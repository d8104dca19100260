from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import strategies as st

from vcsp_landscapes.core import VcspInstance


def brute_fitness(inst: VcspInstance, x) -> int:
    # independent of core.evaluate: expands each term as a product
    total = 0
    for scope, w in inst.constraints.items():
        term = w
        for u in scope:
            term *= x[u]
        total += term
    return total


def improvement_dag(inst: VcspInstance) -> nx.DiGraph:
    """Explicit improvement DAG built with networkx, for cross-checking the oracle."""
    n = inst.num_vars
    g = nx.DiGraph()
    fit = {x: brute_fitness(inst, x) for x in itertools.product((0, 1), repeat=n)}
    g.add_nodes_from(fit)
    for x, fx in fit.items():
        for v in range(n):
            y = x[:v] + (1 - x[v],) + x[v + 1 :]
            if fit[y] > fx:
                g.add_edge(x, y)
    return g


def dag_longest_from(g: nx.DiGraph, start) -> int:
    best = {}
    for node in reversed(list(nx.topological_sort(g))):
        best[node] = max((best[s] + 1 for s in g.successors(node)), default=0)
    return best[start]


def dag_shortest_from(g: nx.DiGraph, start) -> int:
    lengths = nx.single_source_shortest_path_length(g, start)
    return min(d for node, d in lengths.items() if g.out_degree(node) == 0)


@st.composite
def instances(draw, max_vars: int = 6, max_weight: int = 20, constant: bool = True):
    n = draw(st.integers(1, max_vars))
    scopes = [()] if constant else []
    scopes += [(v,) for v in range(n)]
    scopes += list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(scopes), unique=True, max_size=len(scopes)))
    weight = st.integers(-max_weight, max_weight).filter(lambda w: w != 0)
    return VcspInstance(n, {s: draw(weight) for s in chosen})


@st.composite
def instance_and_assignment(draw, max_vars: int = 6):
    inst = draw(instances(max_vars=max_vars))
    x = tuple(draw(st.lists(st.integers(0, 1), min_size=inst.num_vars, max_size=inst.num_vars)))
    return inst, x


@pytest.fixture
def c1():
    from vcsp_landscapes.constructions import star_of_gadgets

    return star_of_gadgets(1)


# One summary line per acceptance criterion, printed after the run.
_ACCEPTANCE: list[tuple[str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and rep.when == "call":
        _ACCEPTANCE.append((marker.args[0], "PASS" if rep.passed else "FAIL", call.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, status, seconds in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{status}  {label}  ({seconds:.2f} s)")
