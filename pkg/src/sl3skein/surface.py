"""Decorated ideal triangulations of unpunctured marked surfaces.

Besides the combinatorics (index set, quiver by amalgamation, flips and sign
changes) this module fixes the local endpoint rule that produces the
commutation matrix of a web cluster.

Germs of webs at a marked point occupy *slots*. A slot is either a half-edge
end ``("h", edge, end)`` or the middle of a triangle corner ``("f", triangle,
corner)``. At each marked point the slots are totally ordered counterclockwise
inside the surface, from one boundary edge to the other.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .cluster_core import (
    CompatiblePair,
    ExchangeMatrix,
    QuantumSeed,
    ensemble_projection,
    initial_seed,
    mutate_matrix,
    mutate_pair,
    mutate_seed,
    permute_seed,
    same_seed,
    verify_compatibility,
)
from .qtorus import SkewForm


class TriangulationError(ValueError):
    """Malformed triangulation input."""


Slot = tuple


@dataclass(frozen=True)
class Edge:
    name: str
    ends: tuple[str, str]
    kind: str  # "boundary" | "internal"

    @property
    def is_boundary(self) -> bool:
        return self.kind == "boundary"


@dataclass(frozen=True)
class Triangle:
    name: str
    corners: tuple[str, str, str]
    sides: tuple[tuple[str, bool], ...]  # (edge name, traversed end0 -> end1)

    def side_start(self, i: int) -> Slot:
        e, fwd = self.sides[i % 3]
        return ("h", e, 0 if fwd else 1)

    def side_finish(self, i: int) -> Slot:
        e, fwd = self.sides[i % 3]
        return ("h", e, 1 if fwd else 0)

    def corner_slots(self, i: int) -> tuple[Slot, Slot, Slot]:
        """Counterclockwise slots at corner i: side i, the face, side i-1."""
        return (self.side_start(i), ("f", self.name, i), self.side_finish(i - 1))


@dataclass
class Triangulation:
    name: str
    marked_points: list[str]
    boundary_components: list[list[str]]
    edges: dict[str, Edge]
    triangles: dict[str, Triangle]
    edge_order: list[str]
    triangle_order: list[str]
    _slots: dict[str, list[Slot]] = field(default_factory=dict, repr=False)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_dict(cls, data: Mapping) -> Triangulation:
        try:
            points = [str(p) for p in data["marked_points"]]
            comps = [[str(p) for p in c] for c in data["boundary_components"]]
            edges, edge_order = {}, []
            for e in data["edges"]:
                ends = tuple(str(p) for p in e["ends"])
                kind = e.get("kind", "internal")
                if kind not in ("boundary", "internal") or len(ends) != 2:
                    raise TriangulationError(f"bad edge record {e!r}")
                if e["name"] in edges:
                    raise TriangulationError(f"duplicate edge {e['name']}")
                edges[e["name"]] = Edge(e["name"], ends, kind)
                edge_order.append(e["name"])
            tris, tri_order = {}, []
            for t in data["triangles"]:
                corners = tuple(str(p) for p in t["corners"])
                refs = list(t["edges"])
                if len(corners) != 3 or len(refs) != 3:
                    raise TriangulationError(f"triangle {t.get('name')} needs 3 corners and 3 edges")
                sides = []
                for r in refs:
                    r = str(r)
                    fwd = not r.startswith("-")
                    sides.append((r.lstrip("-+"), fwd))
                if t["name"] in tris:
                    raise TriangulationError(f"duplicate triangle {t['name']}")
                tris[t["name"]] = Triangle(t["name"], corners, tuple(sides))
                tri_order.append(t["name"])
        except (KeyError, TypeError) as exc:
            raise TriangulationError(f"missing or malformed field: {exc}") from None
        tri = cls(str(data.get("name", "surface")), points, comps, edges, tris,
                  edge_order, tri_order)
        tri.validate()
        return tri

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "marked_points": list(self.marked_points),
            "boundary_components": [list(c) for c in self.boundary_components],
            "edges": [{"name": e, "ends": list(self.edges[e].ends), "kind": self.edges[e].kind}
                      for e in self.edge_order],
            "triangles": [
                {"name": t, "corners": list(self.triangles[t].corners),
                 "edges": [("" if fwd else "-") + e for e, fwd in self.triangles[t].sides]}
                for t in self.triangle_order
            ],
        }

    def validate(self) -> None:
        pts = set(self.marked_points)
        if len(pts) != len(self.marked_points):
            raise TriangulationError("duplicate marked points")
        seen_in_comps = [p for c in self.boundary_components for p in c]
        if sorted(seen_in_comps) != sorted(self.marked_points):
            raise TriangulationError("every marked point lies on exactly one boundary component")
        if any(not c for c in self.boundary_components):
            raise TriangulationError("boundary component without marked points")
        uses: dict[str, list[bool]] = {e: [] for e in self.edges}
        for t in self.triangles.values():
            for i, (e, fwd) in enumerate(t.sides):
                if e not in self.edges:
                    raise TriangulationError(f"triangle {t.name} references unknown edge {e}")
                a, b = t.corners[i], t.corners[(i + 1) % 3]
                ends = self.edges[e].ends
                if (fwd and ends != (a, b)) or (not fwd and ends != (b, a)):
                    raise TriangulationError(
                        f"triangle {t.name}: side {i} ({a}->{b}) does not match edge {e} {ends}")
                uses[e].append(fwd)
        for e, u in uses.items():
            edge = self.edges[e]
            if edge.is_boundary and len(u) != 1:
                raise TriangulationError(f"boundary edge {e} must border exactly one triangle")
            if not edge.is_boundary and sorted(u) != [False, True]:
                raise TriangulationError(
                    f"internal edge {e} must border two triangle sides with opposite orientations")
            for p in edge.ends:
                if p not in pts:
                    raise TriangulationError(f"edge {e} uses unknown point {p}")
        # boundary intervals: consecutive points of each component
        intervals = []
        for comp in self.boundary_components:
            m = len(comp)
            intervals += [tuple(sorted((comp[i], comp[(i + 1) % m]))) for i in range(m)]
        bd = sorted(tuple(sorted(self.edges[e].ends)) for e in self.edges if self.edges[e].is_boundary)
        if sorted(intervals) != bd:
            raise TriangulationError("boundary edges do not match the boundary components")
        # n(Sigma) = -3 chi + 2|M| with chi = |M| - #edges + #triangles
        n_edges, n_tri, m = len(self.edges), len(self.triangles), len(self.marked_points)
        if n_edges != -3 * (m - n_edges + n_tri) + 2 * m:
            raise TriangulationError("edge count violates the Euler relation")
        for p in self.marked_points:
            self.slot_order(p)

    # -- angular structure -------------------------------------------------
    def slot_order(self, point: str) -> list[Slot]:
        """Counterclockwise slots at ``point``, from one boundary edge to the other."""
        if point in self._slots:
            return self._slots[point]
        by_first: dict[Slot, tuple[Slot, Slot, Slot]] = {}
        lasts = set()
        for t in self.triangles.values():
            for i in range(3):
                if t.corners[i] == point:
                    cs = t.corner_slots(i)
                    by_first[cs[0]] = cs
                    lasts.add(cs[2])
        starts = [s for s in by_first if s not in lasts]
        if len(starts) != 1:
            raise TriangulationError(f"corners at {point} do not form a single fan")
        order = [starts[0]]
        cur = starts[0]
        while cur in by_first:
            _, face, last = by_first.pop(cur)
            order += [face, last]
            cur = last
        if by_first:
            raise TriangulationError(f"corners at {point} do not form a single fan")
        for s in (order[0], order[-1]):
            if not self.edges[s[1]].is_boundary:
                raise TriangulationError(f"fan at {point} does not end on the boundary")
        self._slots[point] = order
        return order

    def slot_position(self, point: str) -> dict[Slot, int]:
        return {s: i for i, s in enumerate(self.slot_order(point))}

    def internal_edges(self) -> list[str]:
        return [e for e in self.edge_order if not self.edges[e].is_boundary]

    def triangles_of(self, edge: str) -> list[tuple[str, int]]:
        out = []
        for t in self.triangle_order:
            for i, (e, _) in enumerate(self.triangles[t].sides):
                if e == edge:
                    out.append((t, i))
        return out


def load_triangulation(source) -> tuple[Triangulation, dict[str, str]]:
    """Read a triangulation file (JSON) or dict; returns it with its optional signs."""
    if isinstance(source, (str, Path)):
        try:
            data = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise TriangulationError(f"cannot read triangulation: {exc}") from None
    else:
        data = source
    tri = Triangulation.from_dict(data)
    return tri, dict(data.get("signs") or {})


# -- decorated triangulations ---------------------------------------------------

@dataclass
class DecoratedTriangulation:
    triangulation: Triangulation
    signs: dict[str, str]

    def __post_init__(self):
        for t in self.triangulation.triangle_order:
            s = self.signs.get(t, "+")
            if s not in ("+", "-"):
                raise TriangulationError(f"sign of {t} must be + or -")
            self.signs[t] = s
        unknown = set(self.signs) - set(self.triangulation.triangles)
        if unknown:
            raise TriangulationError(f"signs given for unknown triangles {sorted(unknown)}")

    @classmethod
    def load(cls, source, signs: Mapping[str, str] | None = None) -> DecoratedTriangulation:
        tri, file_signs = load_triangulation(source)
        merged = dict(file_signs)
        merged.update(signs or {})
        return cls(tri, merged)

    def with_signs(self, signs: Mapping[str, str]) -> DecoratedTriangulation:
        merged = dict(self.signs)
        merged.update(signs)
        return DecoratedTriangulation(self.triangulation, merged)

    def to_dict(self) -> dict:
        d = self.triangulation.to_dict()
        d["signs"] = {t: self.signs[t] for t in self.triangulation.triangle_order}
        return d


def parse_signs(text: str | None, tri: Triangulation) -> dict[str, str]:
    """Parse ``"T1:+,T2:-"`` or a bare sign string like ``"+-"``."""
    if not text:
        return {}
    text = text.strip()
    if all(c in "+-" for c in text):
        if len(text) != len(tri.triangle_order):
            raise TriangulationError("sign string length does not match the triangle count")
        return dict(zip(tri.triangle_order, text))
    out = {}
    for item in text.split(","):
        name, _, s = item.partition(":")
        if s not in ("+", "-"):
            raise TriangulationError(f"bad sign item {item!r}")
        out[name.strip()] = s
    return out


# -- index set and elementary webs -----------------------------------------------

@dataclass(frozen=True)
class IndexEntry:
    label: str
    kind: str  # "edge" | "face"
    edge: str | None = None
    end: int | None = None  # edge vertex sits near this end
    triangle: str | None = None


@dataclass(frozen=True)
class IndexSet:
    entries: tuple[IndexEntry, ...]
    frozen: frozenset[int]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def position(self) -> dict:
        out = {}
        for i, e in enumerate(self.entries):
            out[("edge", e.edge, e.end) if e.kind == "edge" else ("face", e.triangle)] = i
        return out

    def index_of(self, label: str) -> int:
        return self.labels.index(label)


def _arc_name(u: str, v: str, edge: str, end: int, unique: bool = True) -> str:
    if u != v and unique:
        if len(u) == 1 and len(v) == 1:
            return f"e{u}{v}"
        return f"e({u},{v})"
    return f"e({edge}:{end})"


def _unique_ends(tri: Triangulation, edge: str) -> bool:
    """True when no other edge joins the same pair of marked points."""
    ends = sorted(tri.edges[edge].ends)
    return sum(sorted(e.ends) == ends for e in tri.edges.values()) == 1


def build_index_set(dec: DecoratedTriangulation | Triangulation) -> IndexSet:
    tri = dec.triangulation if isinstance(dec, DecoratedTriangulation) else dec
    entries, frozen = [], set()
    for e in tri.edge_order:
        edge = tri.edges[e]
        for a in (0, 1):
            tail, head = edge.ends[1 - a], edge.ends[a]
            if edge.is_boundary:
                frozen.add(len(entries))
            entries.append(IndexEntry(_arc_name(tail, head, e, a, _unique_ends(tri, e)), "edge",
                                      edge=e, end=a))
    for t in tri.triangle_order:
        entries.append(IndexEntry(f"t[{t}]", "face", triangle=t))
    return IndexSet(tuple(entries), frozenset(frozen))


@dataclass(frozen=True)
class Germ:
    point: str
    direction: str  # "out" (pointing away from the marked point) | "in"
    slot: Slot


@dataclass(frozen=True)
class ElementaryWeb:
    name: str
    kind: str  # "arc" | "triad"
    germs: tuple[Germ, ...]
    edge: str | None = None
    end: int | None = None
    triangle: str | None = None
    sign: str | None = None


def arc_web(tri: Triangulation, edge: str, end: int) -> ElementaryWeb:
    """Oriented arc along ``edge`` whose terminal point is end ``end``."""
    e = tri.edges[edge]
    tail, head = e.ends[1 - end], e.ends[end]
    germs = (Germ(tail, "out", ("h", edge, 1 - end)), Germ(head, "in", ("h", edge, end)))
    name = _arc_name(tail, head, edge, end, _unique_ends(tri, edge))
    return ElementaryWeb(name, "arc", germs, edge=edge, end=end)


def triad_web(tri: Triangulation, triangle: str, sign: str) -> ElementaryWeb:
    """Trivalent sink (sign +) or source (sign -) spanning a triangle."""
    t = tri.triangles[triangle]
    direction = "out" if sign == "+" else "in"
    germs = tuple(Germ(t.corners[i], direction, ("f", triangle, i)) for i in range(3))
    corners = "".join(t.corners) if all(len(c) == 1 for c in t.corners) else ",".join(t.corners)
    return ElementaryWeb(f"t{sign}{corners}", "triad", germs, triangle=triangle, sign=sign)


def web_cluster(dec: DecoratedTriangulation) -> list[ElementaryWeb]:
    tri = dec.triangulation
    out = []
    for entry in build_index_set(dec).entries:
        if entry.kind == "edge":
            out.append(arc_web(tri, entry.edge, entry.end))
        else:
            out.append(triad_web(tri, entry.triangle, dec.signs[entry.triangle]))
    return out


def germ_pair_exponent(g: Germ, h: Germ, position: Mapping[Slot, int]) -> int:
    """Local contribution of two germs at the same marked point."""
    if g.slot == h.slot:
        return 0
    mag = 2 if g.direction == h.direction else 1
    return mag if position[g.slot] < position[h.slot] else -mag


def web_exchange(tri: Triangulation, x: ElementaryWeb, y: ElementaryWeb) -> int:
    """Pi(x, y): x y = A^{Pi(x, y)} y x for webs x, y drawn in a common flat picture."""
    total = 0
    for g in x.germs:
        pos = tri.slot_position(g.point)
        for h in y.germs:
            if h.point == g.point:
                total += germ_pair_exponent(g, h, pos)
    return total


def commutation_matrix(dec: DecoratedTriangulation) -> SkewForm:
    webs = web_cluster(dec)
    tri = dec.triangulation
    n = len(webs)
    return SkewForm([[web_exchange(tri, webs[i], webs[j]) for j in range(n)] for i in range(n)])


def endpoint_grading(web: ElementaryWeb, points: Sequence[str]) -> tuple[int, ...]:
    """Per marked point, (germs pointing away, germs pointing toward), flattened."""
    idx = {p: k for k, p in enumerate(points)}
    out = [0] * (2 * len(points))
    for g in web.germs:
        out[2 * idx[g.point] + (0 if g.direction == "out" else 1)] += 1
    return tuple(out)


# -- quivers -----------------------------------------------------------------------

def _local_plus() -> list[list[int]]:
    """Doubled exchange matrix of the positive triangle quiver.

    Local order: S0, E0, S1, E1, S2, E2, t where S_i / E_i are the edge vertices
    of side i near its start / finish corner.
    """
    n = 7
    B = [[0] * n for _ in range(n)]

    def arrow(u, v, w2):  # u -> v with doubled weight
        B[v][u] += w2
        B[u][v] -= w2

    S = [0, 2, 4]
    E = [1, 3, 5]
    t = 6
    for i in range(3):
        arrow(S[i], t, 2)
        arrow(t, E[i], 2)
        arrow(E[i], S[i], 1)
        arrow(E[(i - 1) % 3], S[i], 2)
    return B


def triangle_block(sign: str) -> list[list[int]]:
    B = _local_plus()
    if sign == "-":
        frozen = frozenset(range(6))
        B = [list(r) for r in mutate_matrix(ExchangeMatrix(tuple(map(tuple, B)), frozen), 6).b2]
    return B


def _local_indices(tri: Triangulation, pos: Mapping, t: str) -> list[int]:
    T = tri.triangles[t]
    out = []
    for i in range(3):
        e, fwd = T.sides[i]
        start_end, finish_end = (0, 1) if fwd else (1, 0)
        out += [pos[("edge", e, start_end)], pos[("edge", e, finish_end)]]
    out.append(pos[("face", t)])
    return out


def build_quiver(dec: DecoratedTriangulation) -> ExchangeMatrix:
    tri = dec.triangulation
    index = build_index_set(dec)
    pos = index.position()
    n = len(index)
    B = [[0] * n for _ in range(n)]
    for t in tri.triangle_order:
        block = triangle_block(dec.signs[t])
        loc = _local_indices(tri, pos, t)
        for a in range(7):
            for b in range(7):
                B[loc[a]][loc[b]] += block[a][b]
    return ExchangeMatrix(tuple(map(tuple, B)), index.frozen)


def surface_pair(dec: DecoratedTriangulation) -> CompatiblePair:
    return CompatiblePair(build_quiver(dec), commutation_matrix(dec))


def surface_seed(dec: DecoratedTriangulation) -> QuantumSeed:
    pair = surface_pair(dec)
    return initial_seed(build_index_set(dec).labels, pair.B, pair.pi)


def describe_quiver(B: ExchangeMatrix, labels: Sequence[str]) -> list[dict]:
    """Arrow list: eps[i][j] = b[j][i] > 0 means arrows i -> j."""
    out = []
    for i in range(B.n):
        for j in range(B.n):
            w2 = B.b2[j][i]
            if w2 > 0:
                out.append({"from": labels[i], "to": labels[j], "weight2": w2})
    return out


# -- sign changes and flips -----------------------------------------------------------

def change_sign(dec: DecoratedTriangulation, triangle: str) -> tuple[DecoratedTriangulation, int]:
    flipped = "-" if dec.signs[triangle] == "+" else "+"
    k = build_index_set(dec).position()[("face", triangle)]
    return dec.with_signs({triangle: flipped}), k


class FlipError(ValueError):
    """The requested flip is not available for this edge or sign pattern."""


@dataclass(frozen=True)
class FlipResult:
    decorated: DecoratedTriangulation
    word: tuple[int, ...]
    relabel: tuple[int, ...]  # old index i becomes new index relabel[i]
    new_edge: str


def flip_triangulation(tri: Triangulation, edge: str, new_name: str | None = None):
    """Combinatorial flip; returns the new triangulation and the new edge name."""
    if edge not in tri.edges:
        raise FlipError(f"unknown edge {edge}")
    if tri.edges[edge].is_boundary:
        raise FlipError(f"edge {edge} lies on the boundary")
    adj = tri.triangles_of(edge)
    if len(adj) != 2 or adj[0][0] == adj[1][0]:
        raise FlipError(f"edge {edge} does not separate two distinct triangles")
    # rotate both triangles so the flipped edge is side 2
    (tn, ti), (un, ui) = adj
    T, U = tri.triangles[tn], tri.triangles[un]

    def rot(tr: Triangle, i: int):
        r = (i + 1) % 3  # side i becomes side 2
        return ([tr.corners[(r + k) % 3] for k in range(3)],
                [tr.sides[(r + k) % 3] for k in range(3)])

    (x, y, z), (sa, sb, se) = rot(T, ti)
    (z2, w, x2), (sc, sd, se2) = rot(U, ui)
    if se[1] == se2[1] or z2 != z or x2 != x:
        raise FlipError("inconsistent gluing along the flipped edge")
    name = new_name or f"{edge}'"
    new_edges = dict(tri.edges)
    del new_edges[edge]
    new_edges[name] = Edge(name, (y, w), "internal")
    order = [name if e == edge else e for e in tri.edge_order]
    nt = Triangle(tn, (y, z, w), (sb, sc, (name, False)))
    nu = Triangle(un, (w, x, y), (sd, sa, (name, True)))
    tris = dict(tri.triangles)
    tris[tn], tris[un] = nt, nu
    new = Triangulation(tri.name, list(tri.marked_points),
                        [list(c) for c in tri.boundary_components],
                        new_edges, tris, order, list(tri.triangle_order))
    new.validate()
    return new, name


def flip(dec: DecoratedTriangulation, edge: str, new_name: str | None = None) -> FlipResult:
    """Flip ``edge`` by the mutation word (i, i_op, j_op, j) and a relabeling.

    Both triangles at the edge must carry sign +; other patterns are reached by
    first changing signs (the error message names the face indices to mutate).
    """
    tri = dec.triangulation
    adj = tri.triangles_of(edge) if edge in tri.edges else []
    if edge not in tri.edges or tri.edges[edge].is_boundary:
        raise FlipError(f"edge {edge} is not an internal edge")
    index = build_index_set(dec)
    pos = index.position()
    bad = [t for t, _ in adj if dec.signs[t] != "+"]
    if bad:
        raise FlipError("unsupported sign pattern; prepend sign changes at face indices "
                        + ", ".join(str(pos[("face", t)]) for t in bad))
    new_tri, name = flip_triangulation(tri, edge, new_name)
    new_dec = DecoratedTriangulation(new_tri, dict(dec.signs))
    new_index = build_index_set(new_dec)
    new_pos = new_index.position()

    i, i_op = pos[("edge", edge, 0)], pos[("edge", edge, 1)]
    faces = [pos[("face", t)] for t, _ in adj]
    target = surface_pair(new_dec)
    start = surface_pair(dec)

    base = {}
    for key, k in pos.items():
        if key in new_pos:
            base[k] = new_pos[key]
    new_faces = [new_pos[("face", t)] for t, _ in adj]
    new_edge_vs = [new_pos[("edge", name, 0)], new_pos[("edge", name, 1)]]

    for f_order in (faces, faces[::-1]):
        word = (i, i_op, f_order[0], f_order[1])
        pair = start
        for k in word:
            pair = mutate_pair(pair, k)
        for fa, ea in product((0, 1), repeat=2):
            sigma = dict(base)
            sigma[i], sigma[i_op] = new_faces[fa], new_faces[1 - fa]
            sigma[faces[0]], sigma[faces[1]] = new_edge_vs[ea], new_edge_vs[1 - ea]
            perm = tuple(sigma[k] for k in range(len(index)))
            if _relabeled_equal(pair, target, perm):
                return FlipResult(new_dec, word, perm, name)
    raise FlipError(f"no relabeling matches the flipped quiver at {edge}")


def _relabeled_equal(pair: CompatiblePair, target: CompatiblePair, perm: Sequence[int]) -> bool:
    n = pair.B.n
    for a in range(n):
        for b in range(n):
            if pair.B.b2[a][b] != target.B.b2[perm[a]][perm[b]]:
                return False
            if pair.pi.pi[a][b] != target.pi.pi[perm[a]][perm[b]]:
                return False
    return True


def apply_flip_to_seed(seed: QuantumSeed, result: FlipResult) -> QuantumSeed:
    """Run the flip word on a seed and relabel it into the flipped index set."""
    for k in result.word:
        seed = mutate_seed(seed, k)
    seed = permute_seed(seed, result.relabel)
    labels = build_index_set(result.decorated).labels
    return QuantumSeed(labels, seed.B, seed.pi, seed.frame, seed.root, seed.degrees)


@dataclass(frozen=True)
class RoundTrip:
    ok: bool
    words: tuple[tuple[int, ...], tuple[int, ...]]
    relabel: tuple[int, ...] | None  # old index i sits at relabel[i] after both flips

    def to_json(self) -> dict:
        return {"ok": self.ok, "words": [list(w) for w in self.words],
                "relabel": None if self.relabel is None else list(self.relabel)}


def flip_round_trip(dec: DecoratedTriangulation, edge: str) -> RoundTrip:
    """Flip ``edge`` and flip the new edge back; the seed must return up to relabeling."""
    first = flip(dec, edge)
    second = flip(first.decorated, first.new_edge)
    start = surface_seed(dec)
    end = apply_flip_to_seed(apply_flip_to_seed(start, first), second)
    where = {x.key(): j for j, x in enumerate(end.frame)}
    sigma = [where.get(x.key()) for x in start.frame]
    words = (first.word, second.word)
    if None in sigma or sorted(sigma) != list(range(start.n)):
        return RoundTrip(False, words, None)
    return RoundTrip(same_seed(permute_seed(start, sigma), end), words, tuple(sigma))


# -- gradings --------------------------------------------------------------------

def aug(vec: Sequence[int]) -> int:
    return sum(vec[0::2]) - sum(vec[1::2])


def end_map(dec: DecoratedTriangulation) -> list[tuple[int, ...]]:
    pts = dec.triangulation.marked_points
    return [endpoint_grading(w, pts) for w in web_cluster(dec)]


def end_of(alpha: Sequence[int], gradings: Sequence[Sequence[int]]) -> tuple[int, ...]:
    m = len(gradings[0]) if gradings else 0
    out = [0] * m
    for a, g in zip(alpha, gradings):
        if a:
            for k in range(m):
                out[k] += a * g[k]
    return tuple(out)


def _lattice_index(gens: Iterable[Sequence[int]], dim: int) -> tuple[int, int]:
    """(rank, product of nonzero invariant factors) of the lattice spanned by gens."""
    rows = [list(g) for g in gens]
    if not rows:
        return 0, 1
    D, _, _ = smith_normal_decomp(Matrix(rows))
    diag = [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i]]
    idx = 1
    for d in diag:
        idx *= d
    return len(diag), idx


@dataclass
class L3Report:
    ok: bool
    in_l3: bool
    kills_image: bool
    coker_rank: int
    l3_rank: int
    spans_l3: bool
    details: dict

    def to_json(self) -> dict:
        return {"ok": self.ok, "in_l3": self.in_l3, "kills_image": self.kills_image,
                "coker_free_rank": self.coker_rank, "l3_rank": self.l3_rank,
                "spans_l3": self.spans_l3, **self.details}


def l3_check(dec: DecoratedTriangulation) -> L3Report:
    tri = dec.triangulation
    B = build_quiver(dec)
    grads = end_map(dec)
    m = len(tri.marked_points)
    in_l3 = all(aug(g) % 3 == 0 for g in grads)
    kills = True
    for i in B.unfrozen:
        v = end_of([B.b(j, i) for j in range(B.n)], grads)
        if any(v):
            kills = False
    proj = ensemble_projection(B)
    rank_end, idx_end = _lattice_index(grads, 2 * m)
    # L(3) = ker(aug mod 3) has index 3 in Z^{2|M|}
    spans = rank_end == 2 * m and idx_end == 3
    ok = in_l3 and kills and proj.rank == 2 * m and spans
    return L3Report(ok, in_l3, kills, proj.rank, 2 * m, spans,
                    {"end_image_index": idx_end, "torsion": [t for _, t in proj.torsion]})


def compatibility_report(dec: DecoratedTriangulation):
    return verify_compatibility(surface_pair(dec))
