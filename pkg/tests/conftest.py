import numpy as np
import pytest
import scipy.sparse as sp

from opinion_game.dynamics import centralities
from opinion_game.graph import Network, build_network, load_karate


def random_network(rng, n=None, max_n=8, density=0.5, z0=None) -> Network:
    """Valid random network: each row splits mass below one over w0, theta and W."""
    n = int(rng.integers(2, max_n + 1)) if n is None else n
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    total = rng.uniform(0.5, 0.999, size=n)
    parts = rng.dirichlet(np.ones(3), size=n) * total[:, None]
    w0, theta, rowmass = parts[:, 0], parts[:, 1], parts[:, 2]
    weights = rng.random((n, n)) * mask
    sums = weights.sum(axis=1)
    weights = np.divide(weights * rowmass[:, None], sums[:, None], out=np.zeros_like(weights), where=sums[:, None] > 0)
    if z0 is None:
        z0 = rng.uniform(-1.0, 1.0, size=n)
    return Network(sp.csr_matrix(weights), w0, theta, np.broadcast_to(z0, (n,)).copy())


@pytest.fixture(scope="session")
def karate_raw():
    return load_karate()


@pytest.fixture(scope="session")
def karate_half(karate_raw):
    """Karate with w0 = 0.5, theta = 0.1, z0 = 0."""
    net = build_network(karate_raw, 0.5, 0.1, 0.0)
    return net, centralities(net)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Record one verdict line per acceptance criterion and assert it."""

    def report(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
