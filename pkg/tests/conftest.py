import numpy as np
import pytest

from fdrelay.channels import ChannelSet, GeometryConfig
from fdrelay.link_model import SystemParams
from fdrelay.oracle import is_bounded

ACCEPTANCE_LINES = []


@pytest.fixture
def ref_params():
    return SystemParams(ps=1.0, sigma_r2=1e-12, sigma_d2=1e-12, eta=0.8, t_block=1.0)


@pytest.fixture
def ref_channels():
    return ChannelSet.from_geometry(GeometryConfig())


def crandn(rng, n):
    return (rng.normal(size=n) + 1j * rng.normal(size=n)) / np.sqrt(2)


def generic_instance(rng, n=None, max_tries=1000):
    """Random bounded-regime instance with unstructured complex channels."""
    for _ in range(max_tries):
        n_relay = n or int(rng.integers(1, 5))
        m = int(rng.integers(1, 4))
        params = SystemParams(
            ps=10 ** rng.uniform(-2, 2),
            sigma_r2=10 ** rng.uniform(-13, -11),
            sigma_d2=10 ** rng.uniform(-13, -11),
            eta=rng.uniform(0.05, 1.0),
            t_block=rng.uniform(0.1, 2.0),
        )
        ch = ChannelSet(
            h=crandn(rng, m) * 10 ** (rng.uniform(-80, -40) / 20),
            g=crandn(rng, n_relay) * 10 ** (rng.uniform(-80, -40) / 20),
            f=crandn(rng, n_relay) * 10 ** (rng.uniform(-30, 0) / 20),
        )
        if is_bounded(params, ch):
            return params, ch
    raise RuntimeError("could not draw a bounded instance")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
