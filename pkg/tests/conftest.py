import json
import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def load_fixture():
    def _load(name: str):
        with open(FIXTURES / name, "r", encoding="utf-8") as fh:
            return json.load(fh)

    return _load
