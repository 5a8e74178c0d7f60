import numpy as np
import pytest

from hst_cellfree.se_cf import LinkStatistics


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def make_stats(beta, sin_az=None, eps=None, N=2, M=1, p=1.0, sigma2=1.0, d_H=0.5):
    beta = np.atleast_2d(np.asarray(beta, dtype=float))
    K = beta.shape[0]
    sin_az = np.zeros_like(beta) if sin_az is None else np.atleast_2d(np.asarray(sin_az, float))
    eps = np.zeros_like(beta) if eps is None else np.atleast_2d(np.asarray(eps, float))
    return LinkStatistics(beta=beta, sin_az=sin_az, eps=eps, n_antennas=N, d_H=d_H,
                          num_subcarriers=M, tx_power_w=np.full(K, p), noise_power_w=sigma2)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", None) != "call":
                continue
            lines += [v for k, v in rep.user_properties if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
