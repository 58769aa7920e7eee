"""Prints one PASS/FAIL line per acceptance criterion after the run."""


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in name or rep.when != "call":
                continue
            label = name.split("::")[-1][len("test_criterion_"):]
            detail = dict(rep.user_properties).get("detail", "")
            rows.append((label, "PASS" if outcome == "passed" else "FAIL", detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, detail in sorted(rows):
        terminalreporter.write_line(f"{verdict} criterion {label}: {detail}")
