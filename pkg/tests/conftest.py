"""Shared fixtures: reference benchmark values and one-time table runs.

The REF_* dictionaries freeze the published benchmark error tables that
the default configuration is meant to reproduce.  The expensive table
runs are session-scoped so the experiment and acceptance tests share
them; each is timed for the runtime criteria.
"""

from __future__ import annotations

import time

import pytest

from fracback import (
    ExperimentConfig,
    paper_problem,
    run_table1,
    run_table2,
    run_table3,
)

# Reference error values for the benchmark problem, one column per alpha,
# rows in the order of the default level sweeps (t = 1e-2 .. 1e-9 for
# table 1; eta = 1e-3 .. 1e-9 for tables 2 and 3).
REF_T1 = {
    0.2: [2.3039, 1.9435, 1.4666, 1.0448, 7.1524e-1, 4.7622e-1, 3.1115e-1, 2.0078e-1],
    0.4: [1.8539, 9.1668e-1, 3.9416e-1, 1.6173e-1, 6.5167e-2, 2.6068e-2, 1.0398e-2, 4.1427e-3],
    0.6: [9.3104e-1, 2.6341e-1, 6.7753e-2, 1.7109e-2, 7.0172e-3, 1.8928e-3, 4.8508e-4, 1.2216e-4],
    0.8: [3.8800e-1, 7.1923e-2, 1.5789e-2, 2.8933e-3, 4.7172e-4, 7.0156e-5, 1.05642e-5, 1.60185e-6],
}
REF_T2 = {
    0.2: [3.8624e-1, 1.2858e-1, 4.1342e-2, 1.5766e-2, 6.0274e-3, 2.1209e-3, 6.9930e-4],
    0.4: [4.9101e-1, 1.6186e-1, 5.1862e-2, 2.1299e-2, 8.0740e-3, 2.7968e-3, 9.1513e-4],
    0.6: [5.0883e-1, 1.6842e-1, 5.3918e-2, 2.3100e-2, 8.6432e-3, 2.9553e-3, 9.6132e-4],
    0.8: [4.7844e-1, 1.6200e-1, 5.2174e-2, 2.3234e-2, 8.5687e-3, 2.8931e-3, 9.3612e-4],
}
REF_T3 = {
    0.2: [3.8253e-1, 1.2820e-1, 4.1301e-2, 1.5764e-2, 6.0271e-3, 2.1209e-3, 6.9930e-4],
    0.4: [4.8690e-1, 1.6142e-1, 5.1817e-2, 2.1297e-2, 8.0737e-3, 2.7968e-3, 9.1513e-4],
    0.6: [5.0410e-1, 1.6792e-1, 5.3867e-2, 2.3098e-2, 8.6428e-3, 2.9553e-3, 9.6132e-4],
    0.8: [4.7320e-1, 1.6147e-1, 5.2116e-2, 2.3234e-2, 8.5687e-3, 2.8931e-3, 9.3612e-4],
}

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def default_config() -> ExperimentConfig:
    return ExperimentConfig()


@pytest.fixture(scope="session")
def benchmark_problem(default_config):
    return paper_problem(default_config)


@pytest.fixture(scope="session")
def table1_run(default_config):
    """(ErrorTable, wall seconds) for the default table-1 sweep."""
    start = time.perf_counter()
    table = run_table1(default_config, threads=1)
    return table, time.perf_counter() - start


@pytest.fixture(scope="session")
def table2_run(default_config):
    start = time.perf_counter()
    table = run_table2(default_config, threads=1)
    return table, time.perf_counter() - start


@pytest.fixture(scope="session")
def table3_run(default_config):
    start = time.perf_counter()
    table = run_table3(default_config, threads=1)
    return table, time.perf_counter() - start
