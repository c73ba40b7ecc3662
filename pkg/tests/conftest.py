import numpy as np
import pytest
from hypothesis import strategies as st

from cmcorr import ConfusionMatrix

SKEWED_CM = ConfusionMatrix([[993, 3], [3, 1]])
HOLLOW3 = ConfusionMatrix([[0, 5, 5], [5, 0, 5], [5, 5, 0]])
DIAG3 = ConfusionMatrix([[10, 0, 0], [0, 20, 0], [0, 0, 30]])
BIN = ConfusionMatrix([[50, 10], [5, 35]])

# pcc of the two class-1 indicator sequences of BIN (oracle path, frozen)
BIN_MCC = 0.6975184488828853


@st.composite
def confusion_matrices(draw, min_k=2, max_k=5, max_entry=60):
    k = draw(st.integers(min_k, max_k))
    flat = draw(st.lists(st.integers(0, max_entry), min_size=k * k, max_size=k * k))
    if not any(flat):
        flat[0] = 1
    return ConfusionMatrix(np.array(flat).reshape(k, k).tolist())


@st.composite
def positive_margin_matrices(draw, min_k=2, max_k=5, max_entry=60):
    """Every row and column sum positive and below N (all per-class variances nonzero)."""
    k = draw(st.integers(min_k, max_k))
    diag = draw(st.lists(st.integers(0, max_entry), min_size=k, max_size=k))
    off = draw(st.lists(st.integers(1, max_entry), min_size=k * k, max_size=k * k))
    arr = np.array(off).reshape(k, k)
    np.fill_diagonal(arr, diag)
    return ConfusionMatrix(arr.tolist())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE.append((name, status, f"{report.duration:.2f}s"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(row):
        tag = row[0].split("_")[2]
        digits = "".join(ch for ch in tag if ch.isdigit())
        return int(digits), tag

    for name, status, took in sorted(_ACCEPTANCE, key=order):
        terminalreporter.write_line(f"{status}  {name}  ({took})")
