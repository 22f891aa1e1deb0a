from hypothesis import HealthCheck, settings, strategies as st

from k3lat.lattice import make_lattice

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def int_matrices(rows: int, cols: int, lo: int = -6, hi: int = 6):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def even_gram(draw, max_rank: int = 6, max_det: int = 500, entry: int = 4):
    """A nondegenerate even Gram matrix with ``0 < |det| <= max_det``."""
    n = draw(st.integers(1, max_rank))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2 * draw(st.integers(-entry, entry))
        for j in range(i):
            g[i][j] = g[j][i] = draw(st.integers(-entry, entry))
    lat = make_lattice(g, allow_degenerate=True)
    from hypothesis import assume
    assume(lat.det != 0 and abs(lat.det) <= max_det)
    return lat


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
