import os

import pytest

from curvezeta.config import config
from curvezeta.inputs import load_input, parse_input

LOCAL_DIR = os.path.dirname(__file__)


@pytest.fixture()
def testdir():
    return LOCAL_DIR


@pytest.fixture()
def datafile(testdir):
    def path(name: str) -> str:
        return os.path.join(testdir, "data", name)

    return path


@pytest.fixture()
def loaded(datafile):
    def load(name: str, **kwargs):
        with open(datafile(name), encoding="utf-8") as f:
            return load_input(parse_input(f.read()), **kwargs)

    return load


@pytest.fixture(autouse=True)
def reset_config():
    config(reload=True)
