"""Keyed PRNG streams: determinism and purpose separation."""
import numpy as np

from dqnn.rng import stream


def test_same_key_same_stream():
    a = stream(42, "init").uniform(size=10)
    b = stream(42, "init").uniform(size=10)
    np.testing.assert_array_equal(a, b)


def test_different_purposes_decorrelated():
    a = stream(42, "init").uniform(size=10)
    b = stream(42, "batch-shuffle").uniform(size=10)
    assert not np.allclose(a, b)


def test_different_seeds_decorrelated():
    a = stream(1, "init").uniform(size=10)
    b = stream(2, "init").uniform(size=10)
    assert not np.allclose(a, b)
