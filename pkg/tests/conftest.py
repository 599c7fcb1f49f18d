def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, report_line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(report_line(num))
