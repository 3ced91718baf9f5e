import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # stdout from passing tests is captured, so replay the one-line-per-
    # criterion report where it is always visible
    mod = (sys.modules.get("test_acceptance")
           or sys.modules.get("tests.test_acceptance"))
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance criteria", sep="-")
        for line in lines:
            terminalreporter.write_line(line)
