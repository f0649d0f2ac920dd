"""Laurent expansions of loops, bangles and bracelets in the web cluster.

A web is presented on the split triangulation: one fundamental piece per
triangle it crosses and one braid per biangle. Every crossing of a strand with
an edge is cut twice, once on each side of the biangle, after stacking the web
on top of the Weyl-ordered pair ``[e_AB e_BA]`` (A on the left of the strand).
Each cut contributes one of three states:

    state +1   weight A^3    incoming strand ends at A, outgoing starts at B, arc A->B
    state  0   weight 1      sink on A, B before the cut, source on A, B after it
    state -1   weight A^-3   incoming strand ends at B, outgoing starts at A, arc B->A

The pieces left between consecutive cuts are read off the biangle table and
the two corner tables below. What remains is a flat union of elementary webs,
i.e. a Weyl-ordered monomial; the only non-cluster web that can appear is the
triad of the opposite sign, which is rewritten through the face mutation and
cleared by one extra power of the cluster triad.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .cluster_core import mutate_seed, q_commutation
from .qtorus import TorusElement, monomial
from .surface import (
    DecoratedTriangulation,
    FlipResult,
    Triangulation,
    apply_flip_to_seed,
    build_index_set,
    end_map,
    end_of,
    flip,
    surface_seed,
)

SCHEMA = "sl3skein.expansion/1"
STATES = (1, 0, -1)
CUT_WEIGHT = {1: 3, 0: 0, -1: -3}  # powers of A


class LoopError(ValueError):
    """A loop descriptor does not trace a simple closed curve."""


class ExpansionError(RuntimeError):
    """The expansion engine met a configuration it does not handle."""


# -- the split triangulation ------------------------------------------------------

@dataclass(frozen=True)
class SplitTriangulation:
    """Triangles of a triangulation with a biangle inserted along every edge."""

    triangles: tuple[str, ...]
    biangles: tuple[str, ...]
    side_edge: dict = field(hash=False, compare=False)  # (triangle, side) -> edge

    @classmethod
    def of(cls, tri: Triangulation) -> SplitTriangulation:
        sides = {(t, i): tri.triangles[t].sides[i][0]
                 for t in tri.triangle_order for i in range(3)}
        split = cls(tuple(tri.triangle_order), tuple(tri.edge_order), sides)
        split.check(tri)
        return split

    def check(self, tri: Triangulation) -> None:
        if len(self.triangles) != len(tri.triangles) or len(self.biangles) != len(tri.edges):
            raise ValueError("split triangulation has the wrong number of pieces")
        for e in self.biangles:
            uses = sum(1 for v in self.side_edge.values() if v == e)
            if uses != (1 if tri.edges[e].is_boundary else 2):
                raise ValueError(f"biangle {e} is glued to {uses} triangle sides")


# -- loop descriptors -------------------------------------------------------------

@dataclass(frozen=True)
class Passage:
    """One passage of a strand through a triangle, by side indices."""

    triangle: str
    entry: int
    exit: int


def _side_of(tri: Triangulation, t: str, edge: str) -> int:
    if t not in tri.triangles:
        raise LoopError(f"unknown triangle {t}")
    hits = [i for i, (e, _) in enumerate(tri.triangles[t].sides) if e == edge]
    if not hits:
        raise LoopError(f"edge {edge} is not a side of {t}")
    if len(hits) > 1:
        raise LoopError(f"edge {edge} occurs twice in {t}; the passage is ambiguous")
    return hits[0]


@dataclass(frozen=True)
class LoopDescriptor:
    """A cyclic list of passages describing an oriented simple loop."""

    passages: tuple[Passage, ...]

    @classmethod
    def parse(cls, text: str, tri: Triangulation) -> LoopDescriptor:
        """Read ``"T1:E_in:E_out,T2:E_in:E_out,..."``."""
        passages = []
        for chunk in (c.strip() for c in text.split(",")):
            if not chunk:
                continue
            parts = [p.strip() for p in chunk.split(":")]
            if len(parts) != 3:
                raise LoopError(f"passage {chunk!r} is not TRIANGLE:EDGE_IN:EDGE_OUT")
            t, e_in, e_out = parts
            passages.append(Passage(t, _side_of(tri, t, e_in), _side_of(tri, t, e_out)))
        loop = cls(tuple(passages))
        loop.validate(tri)
        return loop

    def to_text(self, tri: Triangulation) -> str:
        out = []
        for p in self.passages:
            sides = tri.triangles[p.triangle].sides
            out.append(f"{p.triangle}:{sides[p.entry][0]}:{sides[p.exit][0]}")
        return ",".join(out)

    def __len__(self) -> int:
        return len(self.passages)

    def crossed_edge(self, tri: Triangulation, k: int) -> str:
        """Edge crossed when leaving passage k."""
        p = self.passages[k]
        return tri.triangles[p.triangle].sides[p.exit][0]

    def validate(self, tri: Triangulation) -> None:
        if not self.passages:
            raise LoopError("empty loop descriptor")
        m = len(self.passages)
        crossed = []
        for k, p in enumerate(self.passages):
            if p.triangle not in tri.triangles:
                raise LoopError(f"unknown triangle {p.triangle}")
            if p.entry == p.exit or not (0 <= p.entry < 3 and 0 <= p.exit < 3):
                raise LoopError(f"passage {k} must enter and leave {p.triangle} by different sides")
            nxt = self.passages[(k + 1) % m]
            e_out = tri.triangles[p.triangle].sides[p.exit][0]
            e_in = tri.triangles[nxt.triangle].sides[nxt.entry][0] if nxt.triangle in tri.triangles else None
            if e_out != e_in:
                raise LoopError(f"passages {k} and {(k + 1) % m} do not share edge {e_out}")
            if tri.edges[e_out].is_boundary:
                raise LoopError(f"a closed loop cannot cross the boundary edge {e_out}")
            if (p.triangle, p.exit) == (nxt.triangle, nxt.entry):
                raise LoopError(f"passage {k} re-enters {p.triangle} through the side it left by")
            crossed.append(e_out)
        repeated = sorted({e for e in crossed if crossed.count(e) > 1})
        if repeated:
            raise LoopError(f"edges crossed more than once: {', '.join(repeated)}")

    def reversed(self) -> LoopDescriptor:
        return LoopDescriptor(tuple(Passage(p.triangle, p.exit, p.entry)
                                    for p in reversed(self.passages)))


# -- webs on the split triangulation -----------------------------------------------

@dataclass(frozen=True)
class Piece:
    triangle: str
    entry: int
    exit: int
    elevation: int
    lap: int


@dataclass(frozen=True)
class Braid:
    """Strand at position k on the incoming side leaves at ``permutation[k]``."""

    edge: str
    permutation: tuple[int, ...]
    over: tuple[tuple[int, int], ...] = ()  # (upper lap, lower lap) at each crossing

    @property
    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.permutation))


@dataclass(frozen=True)
class WebOnSplit:
    kind: str  # "arc" | "loop" | "bangle" | "bracelet"
    loop: LoopDescriptor | None
    copies: int
    pieces: tuple[Piece, ...]
    braids: tuple[Braid, ...]
    arc: tuple[str, int] | None = None

    def components(self) -> int:
        if self.kind == "bracelet":
            return 1
        return self.copies

    def check(self) -> None:
        """Braid endpoints must match the piece endpoints, and crossings respect elevation."""
        for b in self.braids:
            if sorted(b.permutation) != list(range(self.copies)):
                raise ExpansionError(f"braid at {b.edge} is not a permutation of the laps")
            for hi, lo in b.over:
                if not hi > lo:
                    raise ExpansionError(f"braid at {b.edge}: lap {hi} passes over higher lap {lo}")


def arc_to_web(tri: Triangulation, edge: str, end: int) -> WebOnSplit:
    """The oriented arc along ``edge`` ending at end ``end``; already a cluster variable."""
    if edge not in tri.edges or end not in (0, 1):
        raise LoopError(f"no arc along {edge!r} with end {end!r}")
    return WebOnSplit("arc", None, 1, (), (), (edge, end))


def loop_to_web(tri: Triangulation, loop: LoopDescriptor) -> WebOnSplit:
    loop.validate(tri)
    pieces = tuple(Piece(p.triangle, p.entry, p.exit, 1, 0) for p in loop.passages)
    braids = tuple(Braid(loop.crossed_edge(tri, k), (0,)) for k in range(len(loop)))
    return WebOnSplit("loop", loop, 1, pieces, braids)


def _laps(web: WebOnSplit, n: int, tri: Triangulation) -> tuple[tuple[Piece, ...], list[str]]:
    if web.kind != "loop":
        raise ValueError("bangles and bracelets are built from a single loop")
    if n < 1:
        raise ValueError("the number of copies must be at least 1")
    loop = web.loop
    pieces = tuple(Piece(p.triangle, p.entry, p.exit, lap + 1, lap)
                   for lap in range(n) for p in loop.passages)
    return pieces, [loop.crossed_edge(tri, k) for k in range(len(loop))]


def bangle(web: WebOnSplit, n: int, tri: Triangulation) -> WebOnSplit:
    """n parallel copies of a loop at elevations 1..n."""
    pieces, edges = _laps(web, n, tri)
    ident = tuple(range(n))
    return WebOnSplit("bangle" if n > 1 else "loop", web.loop, n, pieces,
                      tuple(Braid(e, ident) for e in edges))


def bracelet(web: WebOnSplit, n: int, tri: Triangulation, biangle: int = 0) -> WebOnSplit:
    """n copies joined by a cyclic braid in one biangle, the top lap passing over the rest.

    ``biangle`` indexes the crossings of the loop descriptor; the default is the first.
    """
    pieces, edges = _laps(web, n, tri)
    if not 0 <= biangle < len(edges):
        raise LoopError(f"the loop crosses {len(edges)} biangles; index {biangle} is out of range")
    if n == 1:
        return bangle(web, 1, tri)
    ident = tuple(range(n))
    cyc = tuple((k + 1) % n for k in range(n))
    braids = []
    for k, e in enumerate(edges):
        if k == biangle:
            braids.append(Braid(e, cyc, tuple((n - 1, j) for j in range(n - 1))))
        else:
            braids.append(Braid(e, ident))
    out = WebOnSplit("bracelet", web.loop, n, pieces, tuple(braids))
    out.check()
    return out


# -- local tables -----------------------------------------------------------------

def cut_ends(state: int) -> tuple[tuple, tuple, tuple]:
    """(end of the incoming strand, start of the outgoing strand, edge arcs) for a cut.

    Endpoints are "A"/"B"; a vertex on both is ("sink", "A", "B") or ("source", ...).
    Edge arcs are given as ordered point pairs.
    """
    if state == 1:
        return ("A",), ("B",), (("A", "B"),)
    if state == 0:
        return ("sink", "A", "B"), ("source", "A", "B"), ()
    if state == -1:
        return ("B",), ("A",), (("B", "A"),)
    raise ValueError(f"bad cut state {state}")


def biangle_table(start: int, end: int):
    """Web in a biangle between an outgoing cut (state ``start``) and an incoming one.

    Returns a tuple of arcs as point pairs, or None for zero.
    """
    _, s, _ = cut_ends(start)
    e, _, _ = cut_ends(end)
    if len(s) == 1 and len(e) == 1:
        return None if s == e else ((s[0], e[0]),)
    if len(s) == 3 and len(e) == 3:
        return (("A", "B"), ("B", "A"))
    return None


def _corner_arc(T, i: int, j: int) -> tuple:
    """Cluster index key of the arc from corner i to corner j along a side of T."""
    if (i + 1) % 3 == j:
        e, fwd = T.sides[i]
        return ("edge", e, 1 if fwd else 0)
    if (j + 1) % 3 == i:
        e, fwd = T.sides[j]
        return ("edge", e, 0 if fwd else 1)
    raise ValueError("corners coincide")


def triangle_piece(T, entry: int, exit_: int, start: int, end: int):
    """Webs left in triangle T by a strand piece between two cuts, or None for zero.

    Entering through side a the strand has corner a on its left; leaving through
    side b it has corner b+1 on its left. Items are ("edge", e, end) keys or
    ("triad", triangle, sign) with sign "+" for a sink-type triad.
    """
    a, b = entry, exit_
    where = {"A": a, "B": (a + 1) % 3}
    there = {"A": (b + 1) % 3, "B": b}
    _, s, _ = cut_ends(start)
    e, _, _ = cut_ends(end)
    src = [where[x] for x in (s[1:] if len(s) == 3 else s)]
    dst = [there[x] for x in (e[1:] if len(e) == 3 else e)]
    if len(s) == 1 and len(e) == 1:
        return None if src[0] == dst[0] else (_corner_arc(T, src[0], dst[0]),)
    if len(s) == 1:
        return None if src[0] in dst else (("triad", T.name, "+"),)
    if len(e) == 1:
        return None if dst[0] in src else (("triad", T.name, "-"),)
    shared = set(src) & set(dst)
    if len(shared) != 1:
        raise ExpansionError("source and sink pieces must share exactly one corner")
    p = shared.pop()
    u = next(c for c in src if c != p)
    w = next(c for c in dst if c != p)
    return (_corner_arc(T, p, u), _corner_arc(T, w, p))


# -- the cluster of a decorated triangulation -----------------------------------------

class _Cluster:
    def __init__(self, dec: DecoratedTriangulation):
        self.dec = dec
        self.tri = dec.triangulation
        self.index = build_index_set(dec)
        self.pos = self.index.position()
        self.seed = surface_seed(dec)
        self.form = self.seed.pi
        self.grades = end_map(dec)
        self._opp: dict[str, tuple[TorusElement, list[int | None]]] = {}

    def key_index(self, item: tuple) -> int:
        if item[0] == "edge":
            return self.pos[item]
        return self.pos[("face", item[1])]

    def opposite(self, t: str) -> tuple[TorusElement, list[int | None]]:
        """The triad of the other sign and its commutation exponents with the basis."""
        if t not in self._opp:
            k = self.pos[("face", t)]
            x = mutate_seed(self.seed, k).frame[k]
            pis = []
            for i in range(self.form.n):
                s = q_commutation(x, TorusElement.basis(self.form, i))
                pis.append(None if s is None else s // 2)
            self._opp[t] = (x, pis)
        return self._opp[t]

    def weyl(self, exps: Sequence[int], opposite: Iterable[str]) -> TorusElement:
        """Weyl-ordered product of a cluster monomial with opposite triads."""
        out = monomial(self.form, exps)
        twice = 0
        opp = list(opposite)
        for t in opp:
            x, pis = self.opposite(t)
            # [M x] = q^{-Pi(M, x)/2} M x and Pi(M, x) = -sum m_i Pi(x, e_i)
            for i, m in enumerate(exps):
                if m:
                    if pis[i] is None:
                        raise ExpansionError(f"opposite triad in {t} meets index {i} in one state")
                    twice += m * pis[i]
            out = out * x
        for i in range(len(opp)):
            for j in range(i + 1, len(opp)):
                if opp[i] != opp[j]:
                    s = q_commutation(self.opposite(opp[i])[0], self.opposite(opp[j])[0])
                    if s is None:
                        raise ExpansionError("opposite triads fail to q-commute")
                    twice -= s // 2
        return out.qshift(twice)


# -- results ---------------------------------------------------------------------

@dataclass
class ExpansionResult:
    labels: tuple[str, ...]
    J: tuple[int, ...]
    numerator: TorusElement
    element: TorusElement
    positive: bool
    bar_invariant: bool
    grading: tuple[int, ...] | None  # endpoint grading of numerator / J
    states: int = 0

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "J": list(self.J),
            "numerator": self.numerator.to_json(),
            "flags": {
                "positive": self.positive,
                "bar_invariant": self.bar_invariant,
                "grading": None if self.grading is None else list(self.grading),
                "homogeneous": self.grading is not None,
            },
            "terms": len(self.numerator),
        }


def _finish(cl: _Cluster, element: TorusElement, J: Sequence[int], states: int) -> ExpansionResult:
    J = tuple(int(v) for v in J)
    numerator = element * monomial(cl.form, J)
    if any(v < 0 for a in numerator.exponents() for v in a):
        raise ExpansionError("denominator clearing left a negative exponent")
    grades = {end_of(a, cl.grades) for a in numerator.exponents()}
    grading = None
    if len(grades) == 1:
        g = grades.pop()
        grading = tuple(x - y for x, y in zip(g, end_of(J, cl.grades)))
    return ExpansionResult(cl.index.labels, J, numerator, element,
                           bool(numerator) and numerator.is_positive(),
                           element.is_bar_invariant(), grading, states)


def _single_loop(cl: _Cluster, loop: LoopDescriptor) -> tuple[TorusElement, list[int], int]:
    """State sum for one lap; returns (element, J, number of nonzero states)."""
    tri, m, n = cl.tri, len(loop), cl.form.n
    passages = loop.passages
    crossings = []
    for k in range(m):
        nxt = passages[(k + 1) % m]
        e, fwd = tri.triangles[nxt.triangle].sides[nxt.entry]
        arcs = {("A", "B"): cl.pos[("edge", e, 1 if fwd else 0)],
                ("B", "A"): cl.pos[("edge", e, 0 if fwd else 1)]}
        crossings.append(arcs)
    J = [0] * n
    for arcs in crossings:
        for i in arcs.values():
            J[i] += 2  # one pair on each side of the biangle

    tables = []
    for k, p in enumerate(passages):
        T = tri.triangles[p.triangle]
        tables.append({(s, t): triangle_piece(T, p.entry, p.exit, s, t)
                       for s in STATES for t in STATES})

    total = TorusElement.zero(cl.form)
    cleared: set[str] = set()
    count = 0
    for states in product(STATES, repeat=m):
        exps = [0] * n
        opp = []
        weight = 0
        ok = True
        for k in range(m):
            s = states[k]
            middle = biangle_table(s, s)
            for arc in cut_ends(s)[2] * 2 + middle:
                exps[crossings[k][arc]] += 1
            weight += 2 * CUT_WEIGHT[s]
            piece = tables[k][(states[k - 1], s)]
            if piece is None:
                ok = False
                break
            for item in piece:
                if item[0] == "triad" and item[2] != cl.dec.signs[item[1]]:
                    opp.append(item[1])
                else:
                    exps[cl.key_index(item)] += 1
        if not ok:
            continue
        count += 1
        cleared.update(opp)
        total = total + cl.weyl(exps, opp).qshift(2 * weight)
    element = total * monomial(cl.form, [-v for v in J])
    for t in cleared:
        J[cl.pos[("face", t)]] += 1  # one power of the cluster triad clears the opposite one
    return element, J, count


def _power_sums(g: TorusElement, gs: TorusElement, n: int) -> TorusElement:
    """p_n from e1 = g, e2 = gs, e3 = 1 by Newton's identities (g, gs commute)."""
    one = TorusElement.one(g.form)
    e = [one, g, gs, one]
    p = [one.scale(3)]
    for k in range(1, n + 1):
        acc = TorusElement.zero(g.form)
        for i in range(1, min(k, 3) + 1):
            term = e[i].scale(k) if i == k else e[i] * p[k - i]
            acc = acc + (term if i % 2 else -term)
        p.append(acc)
    return p[n]


def expand(web: WebOnSplit, dec: DecoratedTriangulation) -> ExpansionResult:
    """Expand a web in the web cluster of ``dec``."""
    cl = _Cluster(dec)
    if web.kind == "arc":
        i = cl.pos[("edge",) + tuple(web.arc)]
        x = TorusElement.basis(cl.form, i)
        return _finish(cl, x, [0] * cl.form.n, 1)
    web.loop.validate(cl.tri)
    web.check()
    x, J, count = _single_loop(cl, web.loop)
    if web.kind == "loop":
        return _finish(cl, x, J, count)
    n = web.copies
    if web.kind == "bangle":
        # components at distinct elevations stack: the top one is the left factor
        total = TorusElement.one(cl.form)
        for _ in range(n):
            total = x * total
        return _finish(cl, total, [n * v for v in J], count * n)
    if web.kind == "bracelet":
        xs, Js, count_s = _single_loop(cl, web.loop.reversed())
        element = _power_sums(x, xs, n)
        Jb = [n * max(a, b) for a, b in zip(J, Js)]
        return _finish(cl, element, Jb, count + count_s)
    raise ExpansionError(f"unknown web kind {web.kind}")


# -- oracles ------------------------------------------------------------------------

@dataclass
class OracleReport:
    name: str
    passed: bool
    details: dict

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def oracle_bangle_power(web: WebOnSplit, n: int, dec: DecoratedTriangulation) -> OracleReport:
    """The n-bangle against the n-th power of the loop, denominators combined."""
    tri = dec.triangulation
    one = expand(web, dec)
    many = expand(bangle(web, n, tri), dec)
    form = one.numerator.form
    # (N J^-1)^n = N^n-part: combine numerators by moving every J^-1 to the right
    power = TorusElement.one(form)
    for _ in range(n):
        power = power * one.numerator * monomial(form, [-v for v in one.J])
    J = tuple(n * v for v in one.J)
    lhs = power * monomial(form, J)
    ok = many.J == J and lhs == many.numerator
    return OracleReport("bangle_power", ok, {
        "n": n, "terms": len(many.numerator), "J_matches": many.J == J})


def _q_side_map(tri: Triangulation, edge: str):
    (tn, ti), (un, ui) = tri.triangles_of(edge)
    r, ru = (ti + 1) % 3, (ui + 1) % 3
    return tn, un, ti, ui, {
        (tn, r): (un, 1), (tn, (r + 1) % 3): (tn, 0),
        (un, ru): (tn, 1), (un, (ru + 1) % 3): (un, 0),
    }


def transport_loop(loop: LoopDescriptor, tri: Triangulation, edge: str,
                   new_tri: Triangulation) -> LoopDescriptor:
    """The descriptor of the same loop after flipping ``edge``."""
    tn, un, ti, ui, qmap = _q_side_map(tri, edge)
    ps = list(loop.passages)
    m = len(ps)

    def crosses_in(p):
        return (p.triangle, p.entry) in ((tn, ti), (un, ui))

    # rotate so that no crossing of the flipped edge straddles the start
    shift = 0
    while shift < m and crosses_in(ps[shift]):
        shift += 1
    if shift == m:
        raise LoopError(f"loop crosses only {edge}")
    ps = ps[shift:] + ps[:shift]
    out: list[Passage] = []
    k = 0
    while k < m:
        p = ps[k]
        if p.triangle not in (tn, un):
            out.append(p)
            k += 1
            continue
        first = (p.triangle, p.entry)
        last = (p.triangle, p.exit)
        if (p.triangle, p.exit) in ((tn, ti), (un, ui)):
            q = ps[(k + 1) % m]
            last = (q.triangle, q.exit)
            k += 2
        else:
            k += 1
        (t1, i1), (t2, i2) = qmap[first], qmap[last]
        if t1 == t2:
            out.append(Passage(t1, i1, i2))
        else:
            out.append(Passage(t1, i1, 2))
            out.append(Passage(t2, 2, i2))
    new = LoopDescriptor(tuple(out))
    new.validate(new_tri)
    return new


def rebuild(web: WebOnSplit, loop: LoopDescriptor, tri: Triangulation) -> WebOnSplit:
    base = loop_to_web(tri, loop)
    if web.kind == "bangle":
        return bangle(base, web.copies, tri)
    if web.kind == "bracelet":
        return bracelet(base, web.copies, tri)
    return base


def _image(seed, x: TorusElement, form) -> TorusElement:
    """Substitute the frame of ``seed`` into a polynomial in its Weyl monomials."""
    n = seed.n
    powers: dict[tuple[int, int], TorusElement] = {}
    suffix: dict[tuple, TorusElement] = {}

    def power(i: int, k: int) -> TorusElement:
        if (i, k) not in powers:
            powers[(i, k)] = seed.frame[i] ** k
        return powers[(i, k)]

    def tail(v: tuple, i: int) -> TorusElement:
        key = (i,) + v[i:]
        if key not in suffix:
            if i == n:
                suffix[key] = TorusElement.one(form)
            else:
                rest = tail(v, i + 1)
                suffix[key] = power(i, v[i]) * rest if v[i] else rest
        return suffix[key]

    out = TorusElement.zero(form)
    for a, c in x.items():
        twice = -sum(a[i] * a[j] * seed.pi.pi[i][j] for i in range(n) for j in range(i + 1, n)
                     if a[i] and a[j])
        out = out + tail(tuple(a), 0).qshift(twice).scale(c)
    return out


def oracle_flip_transport(web: WebOnSplit, dec: DecoratedTriangulation, edge: str) -> OracleReport:
    """Expand before and after flipping ``edge`` and compare in the original torus."""
    res: FlipResult = flip(dec, edge)
    tri, new_tri = dec.triangulation, res.decorated.triangulation
    new_web = rebuild(web, transport_loop(web.loop, tri, edge, new_tri), new_tri)
    before = expand(web, dec)
    after = expand(new_web, res.decorated)
    seed = apply_flip_to_seed(surface_seed(dec), res)
    form = before.numerator.form
    lhs = before.element * _image(seed, monomial(seed.pi, after.J), form)
    rhs = _image(seed, after.numerator, form)
    return OracleReport("flip_transport", lhs == rhs, {
        "edge": edge,
        "new_edge": res.new_edge,
        "word": list(res.word),
        "loop_after": new_web.loop.to_text(new_tri),
        "terms_before": len(before.numerator),
        "terms_after": len(after.numerator),
    })


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
