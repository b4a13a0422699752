import pytest

from hexperc import DiskDomain, build_lattice_approximation


@pytest.fixture(scope="session")
def disk7():
    """Seven-hexagon flower: 30 sides, 6 interior vertices, 128 colorings."""
    return build_lattice_approximation(DiskDomain(0j, 1.0), 0.35)


@pytest.fixture(scope="session")
def disk13():
    """Thirteen-hexagon disk: 54 sides, 12 interior vertices, 8192 colorings."""
    return build_lattice_approximation(DiskDomain(0j, 1.0), 0.24)


@pytest.fixture(scope="session")
def marks7(disk7):
    a = disk7.nearest_midpoint(1 + 0j, on_boundary=True)
    b = disk7.nearest_midpoint(-1 + 0j, on_boundary=True)
    return a, b


@pytest.fixture(scope="session")
def marks13(disk13):
    a = disk13.nearest_midpoint(1 + 0j, on_boundary=True)
    b = disk13.nearest_midpoint(-1 + 0j, on_boundary=True)
    return a, b


def interior_midpoints(dom):
    return [dom.midpoint(s) for s in range(dom.tables.n_sides)
            if not dom.tables.side_boundary[s]]


def all_colorings(dom):
    from hexperc import Coloring

    for value in range(1 << dom.n_cells):
        yield Coloring.from_packed(value, dom.n_cells)
