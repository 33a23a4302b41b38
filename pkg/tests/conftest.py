import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden_dir() -> pathlib.Path:
    return DATA_DIR
