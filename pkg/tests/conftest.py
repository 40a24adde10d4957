import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 13):
        if number in results:
            ok, text = results[number]
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}")
        else:
            terminalreporter.write_line(f"FAIL criterion {number}: not run")
