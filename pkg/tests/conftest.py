import json
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from galimp import context_from_csv, parse_observations, parse_symbolic_table

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


def read_data(name: str) -> str:
    with open(data_path(name), encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def symbolic_table():
    return parse_symbolic_table(read_data("symbolic_table.csv"))


@pytest.fixture(scope="session")
def demo_context():
    return context_from_csv(read_data("context_golden.csv"))


@pytest.fixture(scope="session")
def wordproc_context():
    return context_from_csv(read_data("context_wordproc.csv"))


@pytest.fixture(scope="session")
def demo_usage():
    from golden_values import POPULATION

    return parse_observations(read_data("observations.csv"), POPULATION)


@pytest.fixture(scope="session")
def pair_usage():
    return parse_observations(read_data("observations_pair.csv"), 768)


@pytest.fixture(scope="session")
def grid_oracle():
    return json.loads(read_data("grid_oracle.json"))
