import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CORPUS = Path(__file__).parent / "corpus"


def corpus_files():
    return sorted(CORPUS.glob("*.kb"))


def expected_verdict(path: Path) -> str:
    m = re.search(r"#\s*expect:\s*(SAT|UNSAT)", path.read_text())
    assert m, f"{path.name} has no '# expect:' header"
    return m.group(1)


@pytest.fixture(params=corpus_files(), ids=lambda p: p.stem)
def corpus_kb(request):
    return request.param


# criterion number -> (title, "PASS"/"FAIL", detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n} {status}: {title}" + (f" ({detail})" if detail else ""))
