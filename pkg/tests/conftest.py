from __future__ import annotations

import pytest

from galeforge import verify
from galeforge.diagram import make_diagram


@pytest.fixture(scope="session")
def d0():
    """Triangle with one interior white: the smallest t-diagram."""
    return make_diagram(0, [(0, 0), (4, 0), (0, 4)], [(1, 1)])


@pytest.fixture(scope="session")
def built():
    """``built(d)`` -> tuple of (tree, diagram, correspondence), cached per session."""
    return verify.built


@pytest.fixture(scope="session")
def x2(built):
    return built(2)[0][1]
