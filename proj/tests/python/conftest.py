import os
import pathlib

import pytest


@pytest.fixture(scope="session")
def data_dir():
    return pathlib.Path(os.environ.get("BVDYN_TEST_DATA", pathlib.Path(__file__).resolve().parents[1] / "data"))


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("BVDYN_CLI")
    if not path:
        pytest.skip("BVDYN_CLI is not set")
    return path


@pytest.fixture(scope="session")
def schemas_dir():
    return pathlib.Path(
        os.environ.get("BVDYN_SCHEMAS", pathlib.Path(__file__).resolve().parents[2] / "tools" / "schemas"))
