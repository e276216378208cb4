import time

import pytest

# criterion number -> (ok, seconds, note); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture
def criterion():
    def record(num, fn, note=""):
        t0 = time.perf_counter()
        ok = False
        try:
            ok = bool(fn())
            return ok
        finally:
            prev = ACCEPTANCE.get(num)
            dt = time.perf_counter() - t0
            if prev is not None:
                ok = ok and prev[0]
                dt += prev[1]
                note = "; ".join(x for x in (prev[2], note) if x)
            ACCEPTANCE[num] = (ok, dt, note)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, dt, note = ACCEPTANCE[num]
        line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  ({dt:.1f}s)"
        if note:
            line += f"  {note}"
        terminalreporter.write_line(line)
