import pytest

# criterion number -> list of (ok, detail); filled by test_acceptance
ACCEPTANCE = {}


def record(n, ok, detail=""):
    ACCEPTANCE.setdefault(n, []).append((bool(ok), detail))
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        runs = ACCEPTANCE[n]
        ok = all(r for r, _ in runs)
        fails = [d for r, d in runs if not r]
        detail = f"{len(runs)} checks" if ok else "; ".join(fails[:3])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
