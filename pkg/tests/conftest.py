import itertools
import sys

import pytest

from exactcat import PrimeField, Quiver, Representation, e_all, e_split
from exactcat.workspace import canonical_workspace_path, load_workspace

F2 = PrimeField(2)
F3 = PrimeField(3)
A2 = Quiver.linear(2)


def rep(dims, maps, quiver=A2, field=F2):
    return Representation.build(quiver, field, dims, maps)


S1 = rep([1, 0], [[]])
S2 = rep([0, 1], [[]])
P1 = rep([1, 1], [[[1]]])
S1S2 = rep([1, 1], [[[0]]])
P1S1 = rep([2, 1], [[[1, 0]]])
CORPUS = [S1, S2, P1, S1S2, P1S1]


def all_representations(quiver, field, max_total):
    """Every representation with total dimension <= max_total, maps enumerated exhaustively."""
    p = field.p
    n = quiver.vertex_count
    for dims in itertools.product(range(max_total + 1), repeat=n):
        if sum(dims) > max_total:
            continue
        sizes = [dims[t] * dims[s] for s, t in quiver.arrows]
        for entries in itertools.product(range(p), repeat=sum(sizes)):
            grids, k = [], 0
            for size, (s, t) in zip(sizes, quiver.arrows):
                flat = entries[k : k + size]
                k += size
                grids.append([list(flat[r * dims[s] : (r + 1) * dims[s]]) for r in range(dims[t])])
            yield Representation.build(quiver, field, dims, grids)


@pytest.fixture(scope="session")
def corpus():
    return list(CORPUS)


@pytest.fixture(scope="session")
def E_all():
    return e_all(A2, F2)


@pytest.fixture(scope="session")
def E_split():
    return e_split(A2, F2)


@pytest.fixture(scope="session")
def workspace_path():
    return canonical_workspace_path()


@pytest.fixture(scope="session")
def workspace(workspace_path):
    return load_workspace(workspace_path)


@pytest.fixture(scope="session")
def broken(workspace):
    return workspace.structure("custom:broken")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
