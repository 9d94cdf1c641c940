import numpy as np
import pytest

from algebra import CStarAlgebra
from modules import HilbertModule


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def algebra():
    """M_2(C) ⊕ C"""
    return CStarAlgebra((2, 1))


@pytest.fixture
def module(algebra):
    return HilbertModule(algebra, 4)


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "reports"
    path.mkdir()
    return path
