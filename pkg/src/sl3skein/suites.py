"""Named verification suites shared by the command line, the service and the tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .cluster_core import (
    QuantumSeed,
    enumerate_clusters,
    exchange_terms,
    mutate_seed,
    verify_compatibility,
)
from .qtorus import monomial
from .skein_presented import (
    build_dictionary,
    load_builtin,
    name_grading,
    table_verdict,
    verify_table,
)
from .surface import (
    DecoratedTriangulation,
    end_map,
    end_of,
    flip,
    flip_round_trip,
    l3_check,
    surface_pair,
    surface_seed,
)
from .webexpand import (
    LoopDescriptor,
    bracelet,
    loop_to_web,
    oracle_bangle_power,
    oracle_flip_transport,
)

ANNULUS_LOOP = "T1:E2:E1,T2:E1:E2"
QUAD_SIGNS = {"T231": "+", "T341": "-"}


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


def all_plus(name: str) -> DecoratedTriangulation:
    dec = load_builtin(name)
    return dec.with_signs({t: "+" for t in dec.triangulation.triangle_order})


def sign_patterns(name: str):
    """Every sign decoration of a built-in triangulation."""
    from itertools import product

    dec = load_builtin(name)
    order = dec.triangulation.triangle_order
    for signs in product("+-", repeat=len(order)):
        yield dec.with_signs(dict(zip(order, signs)))


def annulus_loop(dec: DecoratedTriangulation | None = None):
    dec = dec or all_plus("annulus11")
    return dec, loop_to_web(dec.triangulation,
                            LoopDescriptor.parse(ANNULUS_LOOP, dec.triangulation))


# -- compatibility --------------------------------------------------------------

def compatibility_suite() -> SuiteReport:
    checks = []
    for name in ("triangle", "quadrilateral", "pentagon", "annulus11"):
        patterns = list(sign_patterns(name)) if name == "quadrilateral" else [load_builtin(name)]
        for dec in patterns:
            rep = verify_compatibility(surface_pair(dec))
            signs = "".join(dec.signs[t] for t in dec.triangulation.triangle_order)
            ok = rep.ok and set(rep.diagonal) == {6}
            checks.append(Check(f"{name}{signs}", ok, rep.to_json()))
    return SuiteReport("compatibility", checks)


# -- relation tables ------------------------------------------------------------

def _table_checks(tag: str) -> tuple[list[Check], bool, int]:
    rows = verify_table(tag)
    ok, reported = table_verdict(rows)
    return [Check(f"row:{r.name}", r.verdict == "pass" or not r.required, r.to_json())
            for r in rows], ok, reported


def triangle_suite() -> SuiteReport:
    d = build_dictionary("triangle")
    en = enumerate_clusters(d.seed)
    checks = [Check("counts", (len(en.clusters), len(en.variables)) == (2, 8),
                    {"clusters": len(en.clusters), "variables": len(en.variables)})]
    face = d.seed.labels.index("t[T]")
    checks.append(Check("face_mutation",
                        mutate_seed(d.seed, face).frame[face] == d["t-123"]))
    face_rel = (d["t+123"] * d["t-123"]
                == d.weyl(["e21", "e13", "e32"]).qshift(3) + d.weyl(["e12", "e23", "e31"]).qshift(-3))
    checks.append(Check("t+t-", face_rel))
    rows, ok, reported = _table_checks("triangle")
    checks += rows
    checks.append(Check("table", ok and reported == 0, {"reported": reported}))
    return SuiteReport("triangle", checks)


def a1_prime_check(d=None) -> Check:
    d = d or build_dictionary("quadrilateral")
    seed, form = d.seed, d.seed.root

    def v(*idx):
        a = [0] * seed.n
        for i in idx:
            a[abs(i) - 1] += 1 if i > 0 else -1
        return a

    x = mutate_seed(seed, 0).frame[0]
    expected = monomial(form, v(-1)) * (monomial(form, v(2, 3)).qshift(2)
                                        + monomial(form, v(4, 7, 12)).qshift(-4))
    return Check("A1_prime", x == expected, {"value": x.to_json()})


def quadrilateral_engine_checks() -> list[Check]:
    d = build_dictionary("quadrilateral")
    en = enumerate_clusters(d.seed)
    counts = {"clusters": len(en.clusters), "variables": len(en.variables),
              "unfrozen": len(en.unfrozen_variables), "frozen": len(en.frozen_variables)}
    return [
        Check("counts", counts == {"clusters": 50, "variables": 24, "unfrozen": 16, "frozen": 8},
              counts),
        Check("positive", all(x.is_positive() for x in en.variables)),
        Check("bar_invariant", all(x.is_bar_invariant() for x in en.variables)),
        a1_prime_check(d),
    ]


def quadrilateral_suite() -> SuiteReport:
    checks = quadrilateral_engine_checks()
    rows, ok, reported = _table_checks("quadrilateral")
    checks += rows
    checks.append(Check("table", ok, {"reported": reported, "allowed": 2}))
    return SuiteReport("quadrilateral", checks)


# -- gradings -------------------------------------------------------------------

def _homogeneous_exchanges(seed: QuantumSeed, root_grades) -> bool:
    grades = [end_of(seed.degrees[i], root_grades) for i in range(seed.n)]
    for k in seed.B.unfrozen:
        plus, minus = exchange_terms(seed, k)
        if end_of(plus, grades) != end_of(minus, grades):
            return False
    return True


def grading_checks(name: str) -> list[Check]:
    if name == "quadrilateral":
        dec = load_builtin(name, QUAD_SIGNS)
    else:
        dec = load_builtin(name)
    rep = l3_check(dec)
    checks = [Check(f"{name}:coker_rank", rep.ok, rep.to_json())]
    tag = {"triangle": "triangle", "quadrilateral": "quadrilateral"}.get(name)
    if tag:
        d = build_dictionary(tag)
        base = dict(zip(surface_seed(dec).labels, end_map(dec)))
        root_grades = [base[lbl] for lbl in d.seed.labels]
        bad = [nm for nm, x in d.entries.items()
               if {end_of(a, root_grades) for a in x.exponents()} != {name_grading(nm, d.points)}]
        checks.append(Check(f"{name}:endpoint_vs_ensemble", not bad, {"mismatched": bad}))
        seeds = [rec.seed for rec in enumerate_clusters(d.seed).clusters]
    else:
        seed = surface_seed(dec)
        root_grades = end_map(dec)
        seeds = [seed] + [mutate_seed(seed, k) for k in seed.B.unfrozen]
    ok = all(_homogeneous_exchanges(s, root_grades) for s in seeds)
    checks.append(Check(f"{name}:exchange_homogeneous", ok, {"seeds": len(seeds)}))
    return checks


def grading_suite() -> SuiteReport:
    checks = []
    for name in ("triangle", "quadrilateral", "pentagon", "annulus11"):
        checks += grading_checks(name)
    return SuiteReport("grading", checks)


# -- flips ----------------------------------------------------------------------

def flip_suite() -> SuiteReport:
    checks = []
    for name in ("quadrilateral", "annulus11"):
        dec = all_plus(name)
        tri = dec.triangulation
        for e in tri.edge_order:
            if tri.edges[e].is_boundary:
                continue
            res = flip(dec, e)
            checks.append(Check(f"{name}:{e}:quiver", True,
                                {"word": list(res.word), "relabel": list(res.relabel)}))
            rt = flip_round_trip(dec, e)
            checks.append(Check(f"{name}:{e}:round_trip", rt.ok, rt.to_json()))
    return SuiteReport("flip", checks)


# -- expansion oracles -------------------------------------------------------------

def bangle_oracle_suite() -> SuiteReport:
    dec, gamma = annulus_loop()
    tri = dec.triangulation
    checks = []
    for n in (2, 3):
        rep = oracle_bangle_power(gamma, n, dec)
        checks.append(Check(f"bangle_power:{n}", rep.passed, rep.details))
    for label, web in (("gamma", gamma), ("bracelet2", bracelet(gamma, 2, tri))):
        rep = oracle_flip_transport(web, dec, "E1")
        checks.append(Check(f"flip_transport:{label}", rep.passed, rep.details))
    return SuiteReport("bangle-oracle", checks)


SUITES: dict[str, Callable[[], SuiteReport]] = {
    "triangle": triangle_suite,
    "quadrilateral": quadrilateral_suite,
    "grading": grading_suite,
    "flip": flip_suite,
    "bangle-oracle": bangle_oracle_suite,
    "compatibility": compatibility_suite,
}


def run_suite(name: str) -> SuiteReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn()
