import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stabilab import load  # noqa: E402


@pytest.fixture(scope="session")
def defn():
    return load()


@pytest.fixture(scope="session")
def code(defn):
    return defn.code()


@pytest.fixture(scope="session")
def ft_sched(defn):
    return defn.schedule("ft")


@pytest.fixture(scope="session")
def t1_sched(defn):
    return defn.schedule("table1")
