from pathlib import Path

import numpy as np
import pytest

from zetagaps.zeros import OrdinateTable, load_table

DATA = Path(__file__).resolve().parent.parent / "data" / "zeros_1e5.zgc"


@pytest.fixture(scope="session")
def ref_table() -> OrdinateTable:
    if not DATA.exists():
        pytest.skip("reference zeros not generated (see tools/make_reference_zeros.py)")
    return load_table(DATA)


@pytest.fixture(scope="session")
def ref_path() -> Path:
    return DATA


@pytest.fixture
def make_table():
    def build(values, **kw):
        return OrdinateTable(np.asarray(values, dtype=float), **kw)
    return build


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
