import re

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion, independent of
    # pytest's capture settings
    if report.when != "call":
        return
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    verdict = "PASS" if report.passed else "FAIL"
    print(f"\nacceptance criterion {int(m.group(1))}: {verdict}")
