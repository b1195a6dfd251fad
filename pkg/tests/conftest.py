import pytest

from rainbowcycles.graph import build_colored_graph


@pytest.fixture
def k4_factorized():
    """K4 with its unique 1-factorization coloring: three perfect matchings."""
    return build_colored_graph(
        4,
        [(0, 1, 0), (2, 3, 0), (0, 2, 1), (1, 3, 1), (0, 3, 2), (1, 2, 2)],
    )


@pytest.fixture
def rainbow_triangle():
    return build_colored_graph(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)])
