import pytest

from qpgsim import presets
from qpgsim.dispersion import get_material


@pytest.fixture(scope="session")
def ln_o():
    return get_material(presets.LN_WAVEGUIDE, "o")


@pytest.fixture(scope="session")
def ln_e():
    return get_material(presets.LN_WAVEGUIDE, "e")


@pytest.fixture(scope="session")
def qpg():
    return presets.qpg_spec()


@pytest.fixture(scope="session")
def pdc():
    return presets.pdc_spec()


# --- acceptance summary ---------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    entry = _ACCEPTANCE.setdefault(props["criterion"], [])
    entry.append((props.get("part", report.nodeid.split("::")[-1]), report.passed, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[crit]
        ok = all(p for _, p, _ in parts)
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}")
        for name, passed, detail in parts:
            terminalreporter.write_line(f"    [{'pass' if passed else 'FAIL'}] {name}: {detail}")
