import pytest

from ringkepler.model import ModelParams

# (s2, c1, c2) combinations used across the suite
ACCEPTANCE_S2 = (0, 1, 2)
ACCEPTANCE_C = ((0.0, 0.0), (1.0, 1.0), (0.3, 0.7), (2.0, 0.5))
ACCEPTANCE_PARAMS = [ModelParams(s2, c1, c2) for s2 in ACCEPTANCE_S2 for c1, c2 in ACCEPTANCE_C]

SAMPLE_PARAMS = [ModelParams(0), ModelParams(1, 0.3, 0.7), ModelParams(2, 2.0, 0.5), ModelParams(-1, 1.0, 0.0)]


def param_id(p):
    return f"s2={p.s2},c1={p.c1:g},c2={p.c2:g}"


@pytest.fixture(params=SAMPLE_PARAMS, ids=param_id)
def params(request):
    return request.param


# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
