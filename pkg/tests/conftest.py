from __future__ import annotations

import os

import numpy as np
import pytest


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240611, help="seed for randomised tests")
    parser.addoption(
        "--long-running",
        action="store_true",
        default=False,
        help="also run the large cases (or set GREENSEQ_LONG_RUNNING=1)",
    )


def long_running_enabled(config) -> bool:
    return config.getoption("--long-running") or os.environ.get("GREENSEQ_LONG_RUNNING") == "1"


def pytest_collection_modifyitems(config, items):
    if long_running_enabled(config):
        return
    skip = pytest.mark.skip(reason="needs --long-running")
    for item in items:
        if "long_running" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)


def pytest_report_header(config):
    from greenseq._accel import backend

    return [f"greenseq seed: {config.getoption('--seed')}", f"greenseq kernels: {backend()}"]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and rep.failed and "seed" in item.fixturenames:
        rep.sections.append(("seed", f"rerun with --seed {item.config.getoption('--seed')}"))


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, passed: bool, detail: str) -> None:
        prev = ACCEPTANCE.get(number)
        if prev is not None:
            passed = passed and prev[0]
            detail = f"{prev[1]}; {detail}"
        ACCEPTANCE[number] = (passed, detail)
        with request.config.pluginmanager.get_plugin("capturemanager").global_and_fixture_disabled():
            print(f"\n[criterion {number}] {'PASS' if passed else 'FAIL'}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
