import pytest

from grassecant.fields import FloatField, PrimeField
from grassecant.rank import RankBackendConfig

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def exact_cfg():
    return RankBackendConfig(mode="exact", seed=11)


@pytest.fixture
def float_cfg():
    return RankBackendConfig(mode="float", seed=11)


@pytest.fixture
def gf():
    return PrimeField(2**31 - 1)


@pytest.fixture
def rf():
    return FloatField()


@pytest.fixture
def acceptance():
    """Record a criterion outcome; summarised at the end of the run."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
