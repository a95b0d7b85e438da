import pytest

from symdenjoy.config import BuildConfig, build_system


@pytest.fixture(scope="session")
def default_system():
    """m = 2, tau = golden, B = 256, unit-mass geometric schedule."""
    return build_system(BuildConfig())


@pytest.fixture(scope="session")
def m3_system():
    return build_system(BuildConfig(m=3))


@pytest.fixture(scope="session")
def m5_system():
    return build_system(BuildConfig(m=5))
