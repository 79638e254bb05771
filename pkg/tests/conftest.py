"""Shared fixtures."""

import pytest

from storegate.converters import converters
from storegate.store import EventStore


@pytest.fixture(autouse=True)
def reset_decode_counts():
    """Start every test with zeroed converter decode counters."""
    converters.reset_counts()
    yield
    converters.reset_counts()


@pytest.fixture
def store():
    return EventStore()


class CountingLoader:
    """Loader that returns a fixed object and counts its calls."""

    def __init__(self, obj, fail_times: int = 0):
        self.obj = obj
        self.calls = 0
        self.fail_times = fail_times

    def __call__(self):
        self.calls += 1
        if self.calls <= self.fail_times:
            raise OSError("storage unavailable")
        return self.obj


@pytest.fixture
def counting_loader():
    return CountingLoader
