from __future__ import annotations

from pathlib import Path

import pytest

from xtest import parse_test_definition

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def causal_links_path() -> Path:
    return FIXTURES / "causal_links.xml"


@pytest.fixture(scope="session")
def os_test_path() -> Path:
    return FIXTURES / "os_test.xml"


@pytest.fixture(scope="session")
def balanced_window_path() -> Path:
    return FIXTURES / "balanced_window.xml"


@pytest.fixture(scope="session")
def causal_links():
    return parse_test_definition((FIXTURES / "causal_links.xml").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def os_test():
    return parse_test_definition((FIXTURES / "os_test.xml").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def balanced_window():
    return parse_test_definition((FIXTURES / "balanced_window.xml").read_text(encoding="utf-8"))
