import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

DATASET_A = [(1, 1), (2, 0), (3, 1), (4, 1)]
DATASET_B = [(1, 1), (2, 1), (2, 0), (3, 0)]

# Small integer times make ties (including failure/censoring ties) common.
observations = st.tuples(
    st.one_of(st.integers(1, 6).map(float), st.floats(0.1, 10.0, allow_nan=False)),
    st.integers(0, 1),
)
datasets = st.lists(observations, min_size=1, max_size=30)

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def write_csv(path, rows, header="time,status"):
    path.write_text(header + "\n" + "".join(f"{t},{s}\n" for t, s in rows))
    return path
