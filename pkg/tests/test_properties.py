"""Randomized laws, each checked on at least a thousand generated cases."""

from functools import lru_cache

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sl3skein.cluster_core import (
    enumerate_clusters,
    mutate_seed,
    permute_seed,
    q_commutation,
    same_seed,
)
from sl3skein.qtorus import TorusElement, exact_left_divide, monomial

from conftest import (
    PROPERTY_CASES,
    builtin_seed,
    forms,
    laurents,
    nonzero_laurents,
    small_seed,
    torus_elements,
    vectors,
)

cases = settings(max_examples=PROPERTY_CASES, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow])

SEED_SOURCES = {
    "A2": lambda: small_seed("A2"),
    "A4": lambda: small_seed("A4"),
    "A2xA2": lambda: small_seed("A2xA2"),
    "triangle": lambda: builtin_seed("triangle"),
    "quadrilateral": lambda: builtin_seed("quadrilateral"),
    "pentagon": lambda: builtin_seed("pentagon"),
}


@lru_cache(maxsize=None)
def reached(source: str, word: tuple[int, ...]):
    seed = SEED_SOURCES[source]()
    if not word:
        return seed
    return mutate_seed(reached(source, word[:-1]), word[-1])


@st.composite
def seeds(draw, sources=tuple(SEED_SOURCES), max_len=2):
    source = draw(st.sampled_from(sources))
    unfrozen = SEED_SOURCES[source]().B.unfrozen
    word = draw(st.lists(st.sampled_from(unfrozen), max_size=max_len))
    return reached(source, tuple(word))


# -- mutation -----------------------------------------------------------------------

@cases
@given(seeds(), st.data())
def test_mutation_is_an_involution(seed, data):
    k = data.draw(st.sampled_from(seed.B.unfrozen))
    assert same_seed(mutate_seed(mutate_seed(seed, k), k), seed)


@cases
@given(seeds(), st.data())
def test_relabeling_commutes_with_mutation(seed, data):
    sigma = data.draw(st.permutations(range(seed.n)))
    k = data.draw(st.sampled_from(seed.B.unfrozen))
    assert same_seed(permute_seed(mutate_seed(seed, k), sigma),
                     mutate_seed(permute_seed(seed, sigma), sigma[k]))


# -- the quantum torus ------------------------------------------------------------

@cases
@given(st.data())
def test_q_commutation_law(data):
    form = data.draw(forms)
    a, b = data.draw(vectors[form.n]), data.draw(vectors[form.n])
    c, d = data.draw(nonzero_laurents), data.draw(nonzero_laurents)
    x, y = monomial(form, a, c), monomial(form, b, d)
    s = form.pair(a, b)
    assert x * y == (y * x).qshift(2 * s)
    assert q_commutation(monomial(form, a), monomial(form, b)) == 2 * s


@cases
@given(st.data())
def test_exact_left_divide_round_trip(data):
    form = data.draw(forms)
    g = data.draw(torus_elements(form).filter(bool))
    h = data.draw(torus_elements(form))
    assert exact_left_divide(g * h, g) == h


@cases
@given(st.data())
def test_bar_is_a_ring_anti_involution(data):
    form = data.draw(forms)
    x, y = data.draw(torus_elements(form)), data.draw(torus_elements(form))
    assert x.bar().bar() == x
    assert (x + y).bar() == x.bar() + y.bar()
    assert (x * y).bar() == y.bar() * x.bar()
    assert TorusElement.one(form).bar() == TorusElement.one(form)


@cases
@given(laurents, laurents, laurents)
def test_coefficient_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).bar() == a.bar() * b.bar()
    assert (a * b).specialize_at_one() == a.specialize_at_one() * b.specialize_at_one()


# -- enumeration -------------------------------------------------------------------

@cases
@given(seeds(sources=("A2", "A2xA2", "triangle")), st.integers(2, 8), st.data())
def test_enumeration_independent_of_thread_count(seed, workers, data):
    sigma = data.draw(st.permutations(range(seed.n)))
    start = permute_seed(seed, sigma)
    one = enumerate_clusters(start, workers=1).report_bytes()
    many = enumerate_clusters(start, workers=workers).report_bytes()
    assert one == many
