import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nakajima.monomial import Monomial

settings.register_profile("repo", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def monomials(labels, kmin=-3, kmax=4, max_factors=6, nonneg=False):
    lo = 0 if nonneg else kmin
    key = st.tuples(st.sampled_from(list(labels)), st.integers(lo, kmax))
    exp = st.integers(-3, 3).filter(bool)
    return st.dictionaries(key, exp, max_size=max_factors).map(Monomial)


def random_monomials(labels, count, seed=0, kmin=-3, kmax=4):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        exps = {}
        for _ in range(rng.randint(0, 6)):
            exps[(rng.choice(labels), rng.randint(kmin, kmax))] = rng.choice([-3, -2, -1, 1, 2, 3])
        out.append(Monomial(exps))
    return out


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
