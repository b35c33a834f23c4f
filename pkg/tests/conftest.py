import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from htype_means.group import build_htype  # noqa: E402

ADMISSIBLE = [(1, 1), (2, 2), (2, 3)]


@pytest.fixture(params=ADMISSIBLE, ids=lambda p: f"n{p[0]}m{p[1]}")
def group(request):
    return build_htype(*request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
