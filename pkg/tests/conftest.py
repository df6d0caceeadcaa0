import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scaler.metrics import MeasuredCurve  # noqa: E402
from scaler.params import builtin_space  # noqa: E402

SCHEDULE = (1, 2, 4, 6, 8)

# worked-example response times and their published scores; the ideal
# 6-node entry is the exact 8/6
WORKED = {
    "ideal": ([8, 4, 2, 8 / 6, 1], 1.00),
    "scenario1": ([10, 11, 6, 4, 3], 0.85),
    "scenario2": ([10, 6.87, 5, 3.75, 3.2], 0.83),
    "scenario3": ([8, 5.5, 4, 3, 2.9], 0.61),
    "scenario4": ([8, 7, 6, 5.8, 5.7], 0.31),
    "scenario5": ([9.5, 5, 8, 5.5, 6], 0.16),
    "scenario6": ([8, 7, 7.2, 6, 7.2], -0.56),
    "scenario7": ([8, 8, 8, 8, 8], 0.00),
}


def curve(times, nodes=SCHEDULE):
    return MeasuredCurve(tuple(nodes), tuple(times))


@pytest.fixture
def scenario1():
    return curve(WORKED["scenario1"][0])


@pytest.fixture(scope="session")
def space9():
    return builtin_space("spark9")


# -- acceptance summary ---------------------------------------------------

_acceptance: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion from the build contract")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _acceptance.setdefault(marker.args[0], []).append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_acceptance, key=lambda s: int(s.split()[0].lstrip("AC"))):
        outcomes = _acceptance[label]
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"{status}  {label}  ({len(outcomes)} checks)")
