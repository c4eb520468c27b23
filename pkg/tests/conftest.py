import pytest

_outcomes = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when == "teardown":
        return
    if rep.when == "setup" and rep.passed:
        return
    crit = marker.args[0]
    detail = dict(item.user_properties).get("detail", "")
    entry = _outcomes.setdefault(crit, {"ok": True, "details": []})
    entry["ok"] = entry["ok"] and rep.passed
    if detail:
        entry["details"].append(detail)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_outcomes):
        entry = _outcomes[crit]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {crit:2d}: {status}  {'; '.join(entry['details'])}")
