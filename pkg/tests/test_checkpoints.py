import pytest

from src.core.errors import ConfigurationError
from src.utils.checkpoints import decades, geometric_checkpoints


def test_geometric_grid():
    assert geometric_checkpoints(10000) == [10, 32, 100, 316, 1000, 3162, 10000]
    assert geometric_checkpoints(2000) == [10, 32, 100, 316, 1000, 2000]


def test_short_horizons():
    assert geometric_checkpoints(10) == [10]
    assert geometric_checkpoints(5) == [5]
    assert geometric_checkpoints(1) == [1]


def test_invalid_horizon():
    with pytest.raises(ConfigurationError):
        geometric_checkpoints(0)


def test_decades():
    assert decades([10, 32, 100, 316, 1000, 3162, 10000]) == [10, 100, 1000, 10000]
    assert decades([10, 32, 100, 200]) == [10, 100, 200]
    assert decades([]) == []
