import warnings

import pytest
from hypothesis import strategies as st

from vankampen.complexes import build_K, build_Z
from vankampen.obstruction import coboundary_matrix
from vankampen.words import Word, parse_word

letters = st.tuples(st.sampled_from("ab"), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(lambda ls: Word(tuple(ls)))


def K_of(text):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_K(parse_word(text))


@pytest.fixture(scope="session")
def Z():
    return build_Z()


@pytest.fixture(scope="session")
def K_ab():
    return K_of("[a,b]")


@pytest.fixture(scope="session")
def cob_Z(Z):
    return coboundary_matrix(Z)


@pytest.fixture(scope="session")
def cob_K_ab(K_ab):
    return coboundary_matrix(K_ab)


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" in report.nodeid and (report.when == "call" or report.failed):
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    import test_acceptance

    terminalreporter.section("acceptance criteria")
    for label, fn in test_acceptance.CRITERIA:
        outcome = _acceptance.get(fn.__name__)
        if outcome is not None:
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
