"""Triangle and quadrilateral skein algebras inside their quantum cluster engines.

Every elementary web of the triangle (8 webs) and of the quadrilateral (24 webs)
is identified with a cluster variable of the root torus. Variables are named by
matching endpoint gradings, which distinguish all elementary webs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .cluster_core import (
    QuantumSeed,
    element_grade,
    ensemble_projection,
    enumerate_clusters,
    initial_seed,
    mutate_seed,
    permute_seed,
    q_commutation,
)
from .qlaurent import QLaurent
from .qtorus import INHOMOGENEOUS, TorusElement
from .surface import DecoratedTriangulation, build_index_set, end_map, end_of, surface_seed


class DictionaryError(RuntimeError):
    """Naming by grading failed (collision or shortfall)."""


def data_path(name: str):
    return resources.files("sl3skein") / "data" / name


def load_builtin(name: str, signs=None) -> DecoratedTriangulation:
    with resources.as_file(data_path(f"{name}.json")) as p:
        return DecoratedTriangulation.load(p, signs)


# -- web names and their endpoint gradings --------------------------------------

_NAME = re.compile(r"^(?:e(\d)(\d)|t([+-])(\d)(\d)(\d)|h(\d))$")


def name_grading(name: str, points: Sequence[str]) -> tuple[int, ...]:
    """Endpoint grading of a web given by name, e.g. ``e31``, ``t+124``, ``h2``."""
    m = _NAME.match(name)
    if not m:
        raise KeyError(f"unknown web name {name}")
    idx = {p: k for k, p in enumerate(points)}
    out = [0] * (2 * len(points))

    def add(p, outward):
        out[2 * idx[p] + (0 if outward else 1)] += 1

    if m.group(1):
        add(m.group(1), True)
        add(m.group(2), False)
    elif m.group(3):
        for p in m.group(4, 5, 6):
            add(p, m.group(3) == "+")
    else:
        j = int(m.group(7))
        n = len(points)
        ring = lambda k: points[(j - 1 + k) % n]  # noqa: E731
        add(ring(1), True)
        add(ring(2), True)
        add(ring(3), False)
        add(ring(0), False)
    return tuple(out)


TRIANGLE_WEBS = ["e12", "e21", "e23", "e32", "e13", "e31", "t+123", "t-123"]
QUAD_WEBS = (
    ["e12", "e21", "e23", "e32", "e34", "e43", "e41", "e14", "e13", "e31", "e24", "e42"]
    + [f"t{s}{c}" for s in "+-" for c in ("124", "231", "342", "413")]
    + ["h1", "h2", "h3", "h4"]
)
# root seed of the quadrilateral: diagonal 13, signs (+, -), labels A1..A12
QUAD_ROOT_ORDER = ["e31", "t[T341]", "t[T231]", "e13", "e41", "e14", "e34", "e43",
                   "e23", "e32", "e12", "e21"]


@dataclass
class WebDictionary:
    tag: str
    seed: QuantumSeed
    entries: dict[str, TorusElement]
    provenance: dict[str, str]
    gradings: dict[str, tuple[int, ...]]
    points: tuple[str, ...]
    cluster_count: int = 0
    _pi_cache: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, name: str) -> TorusElement:
        try:
            return self.entries[name]
        except KeyError:
            raise KeyError(f"unknown web name {name}") from None

    @property
    def names(self) -> list[str]:
        return sorted(self.entries)

    def exchange(self, x: str, y: str) -> int | None:
        """Pi(x, y) with x y = q^{Pi} y x, or None if the webs do not q-commute."""
        key = (x, y)
        if key not in self._pi_cache:
            s = q_commutation(self[x], self[y])
            self._pi_cache[key] = None if s is None else s // 2
        return self._pi_cache[key]

    def weyl(self, names: Sequence[str]) -> TorusElement:
        """Weyl-ordered product [x_1 ... x_k] of pairwise q-commuting webs."""
        twice = 0
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                p = self.exchange(names[a], names[b])
                if p is None:
                    raise ValueError(f"{names[a]} and {names[b]} do not q-commute")
                twice -= p
        return evaluate_word(self, names, twice)


def _reindexed_root(seed: QuantumSeed, order: Sequence[str]) -> QuantumSeed:
    perm = [list(order).index(lbl) for lbl in seed.labels]
    s = permute_seed(seed, perm)
    return initial_seed(s.labels, s.B, s.pi)


def _name_variables(tag: str, seed: QuantumSeed, dec: DecoratedTriangulation,
                    names: Sequence[str], expected_clusters: int | None) -> WebDictionary:
    points = tuple(dec.triangulation.marked_points)
    # end map in the root coordinates of ``seed``
    base = dict(zip(build_index_set(dec).labels, end_map(dec)))
    grads_root = [base[lbl] for lbl in seed.labels]
    by_grade = {}
    for nm in names:
        g = name_grading(nm, points)
        if g in by_grade:
            raise DictionaryError(f"grading collision between {by_grade[g]} and {nm}")
        by_grade[g] = nm
    en = enumerate_clusters(seed, max_clusters=10_000)
    if expected_clusters is not None and len(en.clusters) != expected_clusters:
        raise DictionaryError(f"expected {expected_clusters} clusters, got {len(en.clusters)}")
    proj = ensemble_projection(seed.B)
    entries, prov, grads = {}, {}, {}
    words = {}
    for rec in en.clusters:
        for i, x in enumerate(rec.seed.frame):
            words.setdefault(x.key(), (rec.word, i))
    for x in en.variables:
        if element_grade(x, proj) is INHOMOGENEOUS:
            raise DictionaryError("inhomogeneous cluster variable")
        g = end_of(next(iter(x.terms)), grads_root)
        nm = by_grade.get(g)
        if nm is None or nm in entries:
            raise DictionaryError(f"no unique web name for grading {g}")
        entries[nm] = x
        grads[nm] = g
        word, i = words[x.key()]
        prov[nm] = "initial" if not word else "mutation " + ",".join(map(str, word)) + f" @ {i}"
    missing = set(names) - set(entries)
    if missing:
        raise DictionaryError(f"enumeration shortfall: {sorted(missing)}")
    return WebDictionary(tag, seed, entries, prov, grads, points, len(en.clusters))


@lru_cache(maxsize=None)
def build_dictionary(tag: str) -> WebDictionary:
    if tag == "triangle":
        dec = load_builtin("triangle")
        seed = surface_seed(dec)
        d = _name_variables(tag, seed, dec, TRIANGLE_WEBS, 2)
        # the face mutation must produce t-123
        if mutate_seed(seed, seed.labels.index("t[T]")).frame[-1] != d["t-123"]:
            raise DictionaryError("face mutation does not give the source web")
        return d
    if tag == "quadrilateral":
        dec = load_builtin("quadrilateral", {"T231": "+", "T341": "-"})
        seed = _reindexed_root(surface_seed(dec), QUAD_ROOT_ORDER)
        d = _name_variables(tag, seed, dec, QUAD_WEBS, 50)
        if mutate_seed(seed, 0).frame[0] != d["h4"]:
            raise DictionaryError("mutation of A1 does not give the H-web h4")
        return d
    raise KeyError(f"unknown surface tag {tag!r}")


def evaluate_word(d: WebDictionary, word: Sequence[str], qshift: int = 0) -> TorusElement:
    """Ordered product of dictionary webs times q^{qshift/2} (qshift doubled)."""
    out = TorusElement.one(d.seed.root)
    for nm in word:
        out = out * d[nm]
    return out.qshift(qshift)


# -- relation tables -------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    name: str
    left: tuple[str, ...]
    right: tuple[tuple[int, tuple[str, ...]], ...]  # (doubled A-power, Weyl-ordered names)
    kind: str  # "commute" | "qcomm" | "exchange"
    required: bool


@dataclass
class RelationCheck:
    name: str
    left: list[str]
    right: list
    verdict: str  # "pass" | "mismatch"
    required: bool
    lhs: list | None = None
    rhs: list | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "left": self.left, "right": self.right,
               "verdict": self.verdict, "required": self.required}
        if self.verdict != "pass":
            out.update({"lhs": self.lhs, "rhs": self.rhs, "note": self.note})
        return out


def _parse_rel(name: str, text: str, required: bool | None = None) -> Relation:
    """Parse ``"x y = c1:[a b] + c2:[c d e]"`` where c is a doubled A-power.

    ``"x y = y x"`` denotes plain commutation.
    """
    lhs, rhs = (s.strip() for s in text.split("="))
    left = tuple(lhs.split())
    if "[" not in rhs:
        return Relation(name, left, ((0, tuple(rhs.split())),), "commute",
                        True if required is None else required)
    terms = []
    for chunk in rhs.split(" + "):
        c, _, body = chunk.strip().partition(":")
        terms.append((int(c), tuple(body.strip().strip("[]").split())))
    kind = "qcomm" if len(terms) == 1 else "exchange"
    req = (kind == "qcomm") if required is None else required
    return Relation(name, left, tuple(terms), kind, req)


_TRIANGLE_ROWS = [
    "e21 e12 = e12 e21",
    "e32 e23 = e23 e32",
    "e13 e31 = e31 e13",
    "e21 e32 = -1:[e32 e21]",
    "e12 e32 = -2:[e32 e12]",
    "e21 e23 = -2:[e23 e21]",
    "e12 e23 = -1:[e23 e12]",
    "e21 e13 = 1:[e13 e21]",
    "e12 e13 = 2:[e13 e12]",
    "e21 e31 = 2:[e31 e21]",
    "e12 e31 = 1:[e31 e12]",
    "e21 t+123 = -1:[t+123 e21]",
    "e12 t+123 = 1:[t+123 e12]",
    "e21 t-123 = 1:[t-123 e21]",
    "e12 t-123 = -1:[t-123 e12]",
    "t+123 t-123 = 3:[e21 e13 e32] + -3:[e12 e23 e31]",
    "t-123 t+123 = -3:[e21 e13 e32] + 3:[e12 e23 e31]",
]

_QUAD_ROWS = [
    ("tt_231", "t+124 t+231 = -2:[t+124 t+231]"),
    ("tt_342", "t+124 t+342 = 0:[t+124 t+342]"),
    ("tt_413", "t+124 t+413 = 2:[t+124 t+413]"),
    ("sign_change", "t+124 t-124 = -3:[e12 e24 e41] + 3:[e21 e14 e42]"),
    ("tt-_231", "t+124 t-231 = -4:[e12 e23 e41] + 2:[e21 h3]"),
    ("tt-_342", "t+124 t-342 = 0:[t+124 t-342]"),
    ("tt-_413", "t+124 t-413 = 4:[e21 e14 e43] + 2:[e41 h2]"),
    ("first_mutation", "t+124 e31 = -3:[e41 t+231] + 3:[e21 t+413]"),
    ("te_42", "t+124 e42 = 1:[t+124 e42]"),
    ("te_13", "t+124 e13 = 0:[t+124 e13]"),
    ("te_24", "t+124 e24 = -1:[t+124 e24]"),
    ("th_1", "t+124 h1 = 2:[e21 e14 t+342] + -4:[e41 e24 t+231]"),
    ("th_2", "t+124 h2 = -2:[e12 e41 t-413] + 4:[e21 e42 t+413]"),
    ("th_3", "t+124 h3 = 1:[t+124 h3]"),
    ("th_4", "t+124 h4 = -1:[t+124 h4]"),
    ("ee_42", "e31 e42 = 4:[e32 e41] + -2:[h2]"),
    ("ee_13", "e31 e13 = 0:[e31 e13]"),
    ("ee_24", "e31 e24 = -4:[e21 e34] + 2:[h1]"),
    ("eh_1", "e31 h1 = 2:[e31 h1]"),
    ("eh_2", "e31 h2 = -2:[e31 h2]"),
    ("eh_3", "e31 h3 = -2:[t-231 t+413] + 4:[e32 e41 e13]"),
    ("h_web", "e31 h4 = 2:[t+231 t-413] + -4:[e21 e13 e34]"),
    ("hh_2", "h1 h2 = 2:[e21 e32 e34 e41] + -4:[e31 t-124 t+342]"),
    ("hh_3", "h1 h3 = 0:[e12 e23 e34 e41] + 0:[e32 e23 e14 e41] + 0:[e14 e43 e32 e21]"
             " + 6:[e12 e43 h4] + 0:[e21 e34 h2]"),
    ("hh_4", "h1 h4 = -2:[e21 e14 e23 e34] + 2:[e24 t+231 t-413]"),
]


def _rotate_name(name: str, shift: int, n: int) -> str:
    def r(ch):
        return str((int(ch) - 1 + shift) % n + 1)

    m = _NAME.match(name)
    if m.group(1):
        return f"e{r(m.group(1))}{r(m.group(2))}"
    if m.group(3):
        return f"t{m.group(3)}" + "".join(r(c) for c in m.group(4, 5, 6))
    return f"h{r(m.group(7))}"


def _canonical_triad(name: str, known: set[str]) -> str:
    if name in known or not name.startswith("t"):
        return name
    body = name[2:]
    for k in range(3):
        cand = name[:2] + body[k:] + body[:k]
        if cand in known:
            return cand
    raise KeyError(name)


def relation_table(tag: str, rotations: bool = False) -> list[Relation]:
    if tag == "triangle":
        base = [_parse_rel(f"T{i + 1}", row, True) for i, row in enumerate(_TRIANGLE_ROWS)]
        n, known = 3, set(TRIANGLE_WEBS)
    elif tag == "quadrilateral":
        base = []
        for name, row in _QUAD_ROWS:
            rel = _parse_rel(name, row)
            if name in ("sign_change", "first_mutation"):
                rel = Relation(rel.name, rel.left, rel.right, rel.kind, True)
            base.append(rel)
        n, known = 4, set(QUAD_WEBS)
    else:
        raise KeyError(f"unknown surface tag {tag!r}")
    if not rotations:
        return base
    out = list(base)
    for s in range(1, n):
        for rel in base:
            rot = lambda nm: _canonical_triad(_rotate_name(nm, s, n), known)  # noqa: E731
            out.append(Relation(
                f"{rel.name}@rot{s}", tuple(map(rot, rel.left)),
                tuple((c, tuple(map(rot, names))) for c, names in rel.right),
                rel.kind, rel.required))
    return out


def check_relation(d: WebDictionary, rel: Relation) -> RelationCheck:
    lhs = evaluate_word(d, rel.left)
    right_json = [[c, list(names)] for c, names in rel.right]
    try:
        if rel.kind == "commute":
            rhs = evaluate_word(d, rel.right[0][1])
        else:
            rhs = TorusElement.zero(d.seed.root)
            for c, names in rel.right:
                rhs = rhs + d.weyl(names).qshift(c)
    except ValueError as exc:
        return RelationCheck(rel.name, list(rel.left), right_json, "mismatch", rel.required,
                             lhs.to_json(), None, str(exc))
    if lhs == rhs:
        return RelationCheck(rel.name, list(rel.left), right_json, "pass", rel.required)
    return RelationCheck(rel.name, list(rel.left), right_json, "mismatch", rel.required,
                         lhs.to_json(), rhs.to_json(), _diagnose(d, rel, lhs))


def _sum_grading(d: WebDictionary, names: Sequence[str]) -> tuple[int, ...]:
    total = [0] * (2 * len(d.points))
    for nm in names:
        for k, v in enumerate(d.gradings[nm]):
            total[k] += v
    return tuple(total)


@lru_cache(maxsize=None)
def _cluster_names(tag: str) -> tuple[tuple[str, ...], ...]:
    d = build_dictionary(tag)
    by_key = {x.key(): nm for nm, x in d.entries.items()}
    en = enumerate_clusters(d.seed, max_clusters=10_000)
    return tuple(tuple(sorted(by_key[x.key()] for x in rec.seed.frame)) for rec in en.clusters)


def cluster_monomials(d: WebDictionary, grading: Sequence[int], max_webs: int = 6):
    """All multisets of pairwise compatible webs with the given total grading."""
    grading = tuple(grading)
    found = set()

    def extend(cl, start, rest, combo):
        if not any(rest):
            if combo:
                found.add(tuple(combo))
            return
        if len(combo) == max_webs:
            return
        for k in range(start, len(cl)):
            g = d.gradings[cl[k]]
            left = tuple(r - v for r, v in zip(rest, g))
            # gradings are counts, so partial sums never exceed the target
            if min(left) >= 0 and any(g):
                combo.append(cl[k])
                extend(cl, k, left, combo)
                combo.pop()

    for cl in _cluster_names(d.tag):
        extend(cl, 0, grading, [])
    return sorted(found)


def expand_in_cluster_monomials(d: WebDictionary, x: TorusElement, grading: Sequence[int]):
    """Write a homogeneous element as a QLaurent combination of Weyl-ordered cluster monomials.

    Works by cancelling leading terms; returns None if the greedy reduction gets stuck.
    """
    pieces = {m: d.weyl(m) for m in cluster_monomials(d, grading)}
    by_lead: dict = {}
    for m, p in pieces.items():
        by_lead.setdefault(p.leading()[0], m)
    rest, out = x, {}
    while rest:
        a, c = rest.leading()
        m = by_lead.get(a)
        if m is None:
            return None
        coeff = c.exact_div(pieces[m].leading()[1])
        out[m] = out[m] + coeff if m in out else coeff
        rest = rest - pieces[m].scale(coeff)
    return sorted(((m, c) for m, c in out.items() if c), key=lambda t: t[0])


def _diagnose(d: WebDictionary, rel: Relation, lhs: TorusElement) -> str:
    target = _sum_grading(d, rel.left)
    bad = [" ".join(names) for _, names in rel.right if _sum_grading(d, names) != target]
    parts = []
    if bad:
        parts.append("endpoint grading differs from the left side for: " + "; ".join(bad))
    else:
        parts.append("coefficient disagreement")
    exp = expand_in_cluster_monomials(d, lhs, target)
    if exp is not None:
        parts.append("engine expansion: " + " + ".join(
            f"({c})[{' '.join(m)}]" for m, c in exp))
    return "; ".join(parts)


def verify_table(tag: str, rotations: bool = False) -> list[RelationCheck]:
    d = build_dictionary(tag)
    return [check_relation(d, rel) for rel in relation_table(tag, rotations)]


def table_verdict(checks: Sequence[RelationCheck], max_reported: int = 2) -> tuple[bool, int]:
    """(suite passes, number of reported non-required discrepancies)."""
    required_ok = all(c.verdict == "pass" for c in checks if c.required)
    reported = sum(1 for c in checks if not c.required and c.verdict != "pass")
    return required_ok and reported <= max_reported, reported


def triangle_laurent_demo(word: Sequence[str], sign: str = "+") -> tuple[int, TorusElement]:
    """Clear the opposite face web from a triangle word.

    Returns (k, P) with word * (t^sign)^k = P, where P is a polynomial in the
    cluster containing t^sign.
    """
    d = build_dictionary("triangle")
    other = "t-123" if sign == "+" else "t+123"
    k = sum(1 for w in word if w == other)
    x = evaluate_word(d, word)
    t = d["t+123" if sign == "+" else "t-123"]
    return k, x * (t ** k)
