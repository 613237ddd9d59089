import pytest

from sdof.infotheory import optimize_theorem6
from shared.parallel import THREADS_ENV


@pytest.fixture(scope="session")
def theorem6_optimum():
    return optimize_theorem6(2000)


@pytest.fixture
def single_thread(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "1")


@pytest.fixture
def many_threads(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "4")
