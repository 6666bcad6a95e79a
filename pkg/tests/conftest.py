_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(name): acceptance criterion; one pass/fail line is "
        "printed per marked test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _CRITERIA[item.nodeid] = m.args[0]


def pytest_runtest_logreport(report):
    # emitted outside per-test capture so the line survives piping
    if report.when != "call":
        return
    name = _CRITERIA.get(report.nodeid)
    if name is not None:
        print(f"\n{name}: {'PASS' if report.passed else 'FAIL'}",
              end="", flush=True)
