from __future__ import annotations

import pytest

from ffmoments.lfam import build_family, empirical_m_mu


@pytest.fixture(scope="session")
def fam34():
    return build_family(3, 4)


@pytest.fixture(scope="session")
def fam53():
    return build_family(5, 3)


@pytest.fixture(scope="session")
def fam33():
    return build_family(3, 3)


@pytest.fixture(scope="session")
def mono34(fam34):
    return empirical_m_mu(fam34)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FFMOMENTS_CACHE_DIR", str(tmp_path / "cache"))


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
