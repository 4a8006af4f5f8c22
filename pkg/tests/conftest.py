from __future__ import annotations

import pytest

from fbwocp import FocpProblem

ACCEPTANCE_LINES: list[str] = []


def problem_one() -> FocpProblem:
    return FocpProblem(
        weight_a=[1.0], weight_b=[1.0], weight_c=[1.0],
        alpha=[[1, 0], [0, 1]], beta=[[-1, 1], [0, -2]], gamma=[1, 0],
        forcing=([0.0], [0.0]), x0=[1, 1], name="problem1",
    )


def problem_two() -> FocpProblem:
    return FocpProblem(
        weight_a=[1.0], weight_b=[1.0], weight_c=[1.0],
        alpha=[[1, 0], [1, 1]], beta=[[0, 1], [-1, 0]], gamma=[0, 1],
        forcing=([0.0], [0.0]), x0=[1, 0], name="problem2",
    )


@pytest.fixture
def p1():
    return problem_one()


@pytest.fixture
def p2():
    return problem_two()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
