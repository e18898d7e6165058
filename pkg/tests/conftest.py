from hypothesis import settings

# fixed example sequence so repeated runs of the suite are identical
settings.register_profile("repo", derandomize=True)
settings.load_profile("repo")

RESULTS = {}


def record(number, title, passed):
    RESULTS[number] = (title, passed)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        title, passed = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {title}")
