import pytest

from tpatch.lattice import LatticePolytope, build_complex

E1_POINTS = [(0, 0), (1, 0), (0, 1), (1, -1)]
A, B, C, D = range(4)


def quad_polytope():
    # hull of A, B, C, D
    return LatticePolytope(2, E1_POINTS, [((1, 0), 0), ((1, 1), 0), ((-1, 0), -1), ((-1, -1), -1)])


@pytest.fixture(scope="session")
def e1():
    return build_complex(E1_POINTS, [(A, B, C), (A, B, D)], quad_polytope())


@pytest.fixture(scope="session")
def t1():
    P = LatticePolytope.standard_simplex(2, 1)
    return build_complex([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)], P)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
