import re

CRITERIA = {
    1: "horocycle invariance",
    2: "conjugation identity and closed-form iterates",
    3: "convergence rate n|g^n(z0) - alpha| -> 1/|c|",
    4: "algebraic lemma suite",
    5: "complex non-stability witness",
    6: "translation witness",
    7: "real interval lemmas and backward dynamics",
    8: "real non-stability witness",
    9: "CLI golden outputs and SVG validity",
}

_outcomes = {}
_PATTERN = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    failed = report.failed or (report.when == "call" and report.outcome != "passed")
    if report.when == "call" or failed:
        _outcomes[k] = _outcomes.get(k, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k, name in CRITERIA.items():
        if k in _outcomes:
            verdict = "PASS" if _outcomes[k] else "FAIL"
        else:
            verdict = "NOT RUN"
        terminalreporter.write_line(f"criterion {k} ({name}): {verdict}")
