from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False,
                     help="run the long acceptance checks (large groups)")


def pytest_configure(config):
    config.addinivalue_line("markers", "extended: long runs, enabled with --extended")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="needs --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int(k.split()[0].rstrip("abcdefg")), k)):
        ok, desc, detail = RESULTS[key]
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {desc}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
