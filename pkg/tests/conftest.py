import pytest

from nilfibre.diagram import build_diagram

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE = {}


def grid(t):
    """Rows of a tableau as space separated tokens, '.' for an empty box."""
    depth = max(t.height(r) for r in range(1, t.k + 1))
    rows = []
    for s in range(1, depth + 1):
        rows.append(" ".join(t.cell(r, s).token() if t.height(r) >= s else "." for r in range(1, t.k + 1)))
    return "\n".join(rows)


def norm(text):
    return "\n".join(" ".join(ln.split()) for ln in text.strip().splitlines())


def pairs_by_label(d):
    return {p.label(): p for p in d.pairs}


@pytest.fixture
def diagram():
    return build_diagram


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
