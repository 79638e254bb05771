"""Tests for the retrieval benchmark."""

import pytest

from storegate.bench import run_bench
from storegate.errors import ConfigError


def test_single_sample():
    """Test k=1, m=1 gives a one-sample report."""
    report = run_bench(1, 1)
    assert report.objects == 1 and report.retrieves == 1
    assert report.median_ns == report.p99_ns
    assert report.total_s >= 0


def test_keyed_latency_does_not_grow_with_store_size():
    """Test that doubling the object count keeps the median keyed latency within 2x."""
    small = min(run_bench(5_000, 20_000, "keyed", seed=s).median_ns for s in range(3))
    large = min(run_bench(10_000, 20_000, "keyed", seed=s).median_ns for s in range(3))
    assert large < 2 * max(small, 1)


def test_bad_arguments():
    """Test that empty runs and unknown flavors are refused."""
    with pytest.raises(ConfigError):
        run_bench(0, 1)
    with pytest.raises(ConfigError):
        run_bench(1, 1, "sideways")
