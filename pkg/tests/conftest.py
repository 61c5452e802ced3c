import pytest

from instanton_lab import io, y5


@pytest.fixture(scope="session")
def space():
    return io.load_space("@space")


@pytest.fixture(scope="session")
def B(space):
    return y5.intersection_form(space)


@pytest.fixture(scope="session")
def nets():
    return {n: io.load_net(f"@net_n{n}") for n in (2, 3, 4, 5)}
