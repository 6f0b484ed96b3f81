"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

_results = {}
_details = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    detail = dict(report.user_properties).get("detail")
    if detail:
        _details[report.nodeid] = detail
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(report.nodeid, "PASS")
        _results[report.nodeid] = "FAIL" if report.outcome != "passed" or prev == "FAIL" \
            else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, verdict in sorted(_results.items(), key=lambda kv: kv[0].split("::")[-1]):
        name = nodeid.split("::")[-1]
        detail = _details.get(nodeid)
        terminalreporter.write_line(f"{verdict}  {name}" + (f"  [{detail}]" if detail else ""))
