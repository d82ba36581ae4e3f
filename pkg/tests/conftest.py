import pathlib

import pytest

from spunnormal.gluing import parse_gluing_json

DATA = pathlib.Path(__file__).parent / "data"


def load_fixture(name):
    return parse_gluing_json((DATA / name).read_text())


def optional_fixture_path(name):
    """Path to a data file that may legitimately be absent in this checkout."""
    p = DATA / name
    return p if p.exists() else None


@pytest.fixture
def fig8():
    return load_fixture("fig8.json")


@pytest.fixture
def toy_n1():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return load_fixture("toy_n1.json")
