"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

_outcomes: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            entry = _outcomes.setdefault(number, {"title": title, "ids": set(), "failed": False, "seen": 0})
            entry["ids"].add(item.nodeid)


def pytest_runtest_logreport(report):
    for entry in _outcomes.values():
        if report.nodeid in entry["ids"]:
            if report.failed:
                entry["failed"] = True
            if report.when == "call":
                entry["seen"] += 1
            elif report.skipped:
                entry["failed"] = True


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        entry = _outcomes[number]
        if entry["failed"]:
            status = "FAIL"
        elif entry["seen"] == len(entry["ids"]):
            status = "PASS"
        else:
            status = "NOT RUN"
        terminalreporter.write_line(f"{status}  AC{number}  {entry['title']}")
