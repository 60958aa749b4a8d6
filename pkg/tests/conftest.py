import functools
import sys

import pytest

from stoneproofs.formula_core import Cnf
from stoneproofs.regrti_builder import build_regrti
from stoneproofs.regwrtl_builder import build_regwrtl
from stoneproofs.stone_gen import family_from_spec, generate_stone


@functools.lru_cache(maxsize=None)
def stone(spec, m):
    return generate_stone(family_from_spec(spec), m)


@functools.lru_cache(maxsize=None)
def regwrtl(spec, m):
    return build_regwrtl(stone(spec, m))


@functools.lru_cache(maxsize=None)
def regrti(spec, m):
    return build_regrti(stone(spec, m))


@pytest.fixture
def get_stone():
    return stone


@pytest.fixture
def get_regwrtl():
    return regwrtl


@pytest.fixture
def get_regrti():
    return regrti


@pytest.fixture
def xyz():
    # x=1, y=2, z=3: {x,y}, {~x,z}, {~y}, {~z}
    return Cnf([[1, 2], [-1, 3], [-2], [-3]], 3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
