from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

import pytest
from hypothesis import strategies as st
from sympy import Matrix

from sl3skein.cluster_core import ExchangeMatrix, initial_seed, mutate_seed
from sl3skein.qlaurent import QLaurent
from sl3skein.qtorus import SkewForm, TorusElement
from sl3skein.skein_presented import load_builtin
from sl3skein.surface import surface_seed

PROPERTY_CASES = 1000

# -- coefficient and torus strategies ---------------------------------------------

exps = st.integers(min_value=-8, max_value=8)
coeffs = st.integers(min_value=-5, max_value=5)

laurents = st.dictionaries(exps, coeffs, max_size=4).map(QLaurent)
nonzero_laurents = laurents.filter(bool)

FORMS = [
    SkewForm([[0, 1], [-1, 0]]),
    SkewForm([[0, 2, -1], [-2, 0, 3], [1, -3, 0]]),
    SkewForm([[0, 1, 0, -2], [-1, 0, 1, 1], [0, -1, 0, 3], [2, -1, -3, 0]]),
]

vectors = {f.n: st.tuples(*[st.integers(-3, 3)] * f.n) for f in FORMS}


@st.composite
def torus_elements(draw, form: SkewForm, max_terms: int = 3):
    terms = draw(st.lists(st.tuples(vectors[form.n], laurents), max_size=max_terms))
    return TorusElement(form, terms)


forms = st.sampled_from(FORMS)


# -- small compatible seeds ---------------------------------------------------------

def compatible_seed(b):
    """A seed for an invertible skew-symmetric integer matrix b, with Pi = m (b^T)^-1."""
    n = len(b)
    inv = Matrix(b).T.inv()
    den = lcm(*(Fraction(str(v)).denominator for v in inv))
    pi = [[int(inv[i, j] * den) for j in range(n)] for i in range(n)]
    B = ExchangeMatrix(tuple(tuple(2 * v for v in row) for row in b), frozenset())
    return initial_seed([f"x{i}" for i in range(n)], B, SkewForm(pi))


SMALL_TYPES = {
    "A2": [[0, 1], [-1, 0]],
    "A4": [[0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1], [0, 0, -1, 0]],
    "A2xA2": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
}


@lru_cache(maxsize=None)
def small_seed(kind: str):
    return compatible_seed(SMALL_TYPES[kind])


@lru_cache(maxsize=None)
def builtin_seed(name: str, signs: str | None = None):
    dec = load_builtin(name)
    if signs:
        dec = dec.with_signs(dict(zip(dec.triangulation.triangle_order, signs)))
    return surface_seed(dec)


def walk(seed, word):
    for k in word:
        seed = mutate_seed(seed, k)
    return seed


@pytest.fixture(scope="session")
def annulus():
    from sl3skein.suites import annulus_loop

    return annulus_loop()


# -- acceptance report -----------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}
OUTCOMES: dict[str, str] = {}


@pytest.fixture
def criterion():
    def record(number: int, passed: bool, text: str) -> None:
        ACCEPTANCE[number] = (passed, text)

    return record


def pytest_collection_modifyitems(config, items):
    # acceptance runs last so it can reuse the outcomes of the property suites
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        OUTCOMES[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, text = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {text}")
