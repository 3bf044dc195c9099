import pytest

from antsreview import Environment


@pytest.fixture
def env() -> Environment:
    return Environment()
