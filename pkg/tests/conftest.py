import re
from collections import OrderedDict

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_AC = re.compile(r"test_acceptance\.py::test_ac(\d+)_")
_results: "OrderedDict[int, list[tuple[str, str]]]" = OrderedDict()


def pytest_runtest_logreport(report):
    m = _AC.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::", 1)[1]
        _results.setdefault(int(m.group(1)), []).append((name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for ac in sorted(_results):
        outcomes = _results[ac]
        failed = [name for name, outcome in outcomes if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"AC{ac:<2} {status}  ({len(outcomes) - len(failed)}/{len(outcomes)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        tr.write_line(line)
