"""Quantum seeds, mutations, exchange-graph enumeration and the ensemble grading.

Conventions follow Berenstein-Zelevinsky: ``eps = B^T`` so ``eps[i][j] = b[j][i]``
counts arrows i -> j, and a compatible pair satisfies ``sum_k b[k][i] pi[k][j] =
d_i delta_ij`` for unfrozen i. Exchange matrices are stored doubled (``B2 = 2B``)
because entries between frozen indices may be half-integral.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .qlaurent import QLaurent
from .qtorus import INHOMOGENEOUS, SkewForm, TorusElement, exact_left_divide, monomial

Matrix2 = tuple[tuple[int, ...], ...]


class FrozenIndexError(ValueError):
    """Mutation was requested at a frozen index."""


class CompatibilityError(ArithmeticError):
    """A pair (B, Pi) fails the compatibility relation."""


class BoundExceeded(RuntimeError):
    """Exchange-graph enumeration hit its cluster bound."""


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _freeze(rows) -> Matrix2:
    return tuple(tuple(int(v) for v in row) for row in rows)


# -- exchange matrices -----------------------------------------------------

@dataclass(frozen=True)
class ExchangeMatrix:
    """Skew-symmetric exchange matrix, stored doubled."""

    b2: Matrix2
    frozen: frozenset[int]

    def __post_init__(self):
        n = len(self.b2)
        for i in range(n):
            if len(self.b2[i]) != n:
                raise ValueError("exchange matrix must be square")
            for j in range(n):
                if self.b2[i][j] != -self.b2[j][i]:
                    raise ValueError(f"exchange matrix not skew-symmetric at ({i}, {j})")
                both_frozen = i in self.frozen and j in self.frozen
                if self.b2[i][j] % 2 and not both_frozen:
                    raise ValueError(f"entry ({i}, {j}) must be integral")

    @property
    def n(self) -> int:
        return len(self.b2)

    def b(self, i: int, j: int) -> int:
        """Integral entry b_ij; only valid unless both indices are frozen."""
        v = self.b2[i][j]
        if v % 2:
            raise ValueError(f"entry ({i}, {j}) is half-integral")
        return v // 2

    @property
    def unfrozen(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.frozen]

    def as_fractions(self) -> list[list[float]]:
        return [[v / 2 for v in row] for row in self.b2]


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    if k in B.frozen:
        raise FrozenIndexError(f"index {k} is frozen")
    b2 = B.b2
    n = B.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-b2[i][j])
            else:
                bik, bkj = b2[i][k], b2[k][j]
                # doubled form of b + (|b_ik| b_kj + b_ik |b_kj|) / 2
                row.append(b2[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 4)
        out.append(tuple(row))
    return ExchangeMatrix(tuple(out), B.frozen)


def e_matrix(B: ExchangeMatrix, k: int, sign: int) -> list[list[int]]:
    n = B.n
    E = [[int(i == j) for j in range(n)] for i in range(n)]
    E[k][k] = -1
    for i in range(n):
        if i != k:
            E[i][k] = _pos(-sign * B.b(i, k))
    return E


def f_matrix(B: ExchangeMatrix, k: int, sign: int) -> list[list[int]]:
    n = B.n
    F = [[int(i == j) for j in range(n)] for i in range(n)]
    F[k][k] = -1
    for j in range(n):
        if j != k:
            F[k][j] = _pos(sign * B.b(k, j))
    return F


def _matmul(X, Y):
    cols = list(zip(*Y))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in X]


def _transpose(X):
    return [list(r) for r in zip(*X)]


# -- compatible pairs ------------------------------------------------------

@dataclass(frozen=True)
class CompatiblePair:
    B: ExchangeMatrix
    pi: SkewForm


@dataclass(frozen=True)
class CompatibilityReport:
    ok: bool
    diagonal: tuple[int, ...]
    violations: tuple[tuple[int, int, int], ...]

    def to_json(self) -> dict:
        return {"ok": self.ok, "diagonal": list(self.diagonal),
                "violations": [list(v) for v in self.violations]}


def verify_compatibility(pair: CompatiblePair) -> CompatibilityReport:
    """Check B^T Pi = (D, 0) on unfrozen rows; D must be positive diagonal."""
    B, pi = pair.B, pair.pi.pi
    n = B.n
    diag, bad = [], []
    for i in B.unfrozen:
        for j in range(n):
            twice = sum(B.b2[k][i] * pi[k][j] for k in range(n))
            v = twice // 2
            if i == j:
                diag.append(v)
                if twice % 2 or v <= 0:
                    bad.append((i, j, v))
            elif twice:
                bad.append((i, j, twice // 2))
    return CompatibilityReport(not bad, tuple(diag), tuple(bad))


def mutate_pair(pair: CompatiblePair, k: int, sign: int = 1) -> CompatiblePair:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    B = pair.B
    if k in B.frozen:
        raise FrozenIndexError(f"index {k} is frozen")
    E = e_matrix(B, k, sign)
    pi_new = _matmul(_matmul(_transpose(E), pair.pi.pi), E)
    result = CompatiblePair(mutate_matrix(B, k), SkewForm(pi_new))
    if not verify_compatibility(result).ok:
        raise CompatibilityError(f"mutation at {k} broke compatibility")
    return result


def ebf_product(pair: CompatiblePair, k: int, sign: int = 1) -> list[list[int]]:
    """E B F on the unfrozen columns (integral part of the mutated matrix)."""
    B = pair.B
    uf = B.unfrozen
    E = e_matrix(B, k, sign)
    F = f_matrix(B, k, sign)
    Bcols = [[B.b(i, j) if j not in B.frozen else 0 for j in uf] for i in range(B.n)]
    Fuf = [[F[a][b] for b in uf] for a in uf]
    return _matmul(_matmul(E, Bcols), Fuf)


# -- seeds -----------------------------------------------------------------

@dataclass(frozen=True)
class QuantumSeed:
    """A quantum seed whose frame lives in a fixed ambient (root) torus."""

    labels: tuple[str, ...]
    B: ExchangeMatrix
    pi: SkewForm
    frame: tuple[TorusElement, ...]
    root: SkewForm
    degrees: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def n(self) -> int:
        return self.B.n

    @property
    def frozen(self) -> frozenset[int]:
        return self.B.frozen

    @property
    def pair(self) -> CompatiblePair:
        return CompatiblePair(self.B, self.pi)

    def cluster_key(self) -> str:
        return cluster_key(self.frame, self.frozen)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "frozen": sorted(self.frozen),
            "B2": [list(r) for r in self.B.b2],
            "Pi": [list(r) for r in self.pi.pi],
            "root_Pi": [list(r) for r in self.root.pi],
            "frame": [x.to_json() for x in self.frame],
        }

    @classmethod
    def from_json(cls, data: dict) -> QuantumSeed:
        labels = tuple(data["labels"])
        frozen = frozenset(int(i) for i in data["frozen"])
        B = ExchangeMatrix(_freeze(data["B2"]), frozen)
        pi = SkewForm(data["Pi"])
        root = SkewForm(data.get("root_Pi", data["Pi"]))
        if "frame" in data and data["frame"] is not None:
            frame = tuple(TorusElement.from_json(root, x) for x in data["frame"])
        else:
            frame = tuple(TorusElement.basis(root, i) for i in range(len(labels)))
        if len(labels) != B.n or len(frame) != B.n or pi.n != B.n or root.n != B.n:
            raise ValueError("seed components have inconsistent sizes")
        seed = cls(labels, B, pi, frame, root, ())
        return seed.with_default_degrees()

    def with_default_degrees(self) -> QuantumSeed:
        if self.degrees:
            return self
        degs = []
        for x in self.frame:
            if x.is_monomial():
                degs.append(next(iter(x.terms)))
            else:
                degs.append(x.leading()[0])
        return QuantumSeed(self.labels, self.B, self.pi, self.frame, self.root, tuple(degs))


def initial_seed(labels: Sequence[str], B: ExchangeMatrix, pi: SkewForm) -> QuantumSeed:
    """The seed whose frame is the monomial basis of its own torus."""
    n = B.n
    frame = tuple(TorusElement.basis(pi, i) for i in range(n))
    degrees = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return QuantumSeed(tuple(labels), B, pi, frame, pi, degrees)


def frame_monomial(seed: QuantumSeed, v: Sequence[int]) -> TorusElement:
    """M(v) for a nonnegative vector v: Weyl-normalized product of frame entries."""
    result = TorusElement.one(seed.root)
    twice = 0
    seen = [0] * seed.n
    for i, vi in enumerate(v):
        if vi < 0:
            raise ValueError("frame_monomial expects a nonnegative vector")
        for _ in range(vi):
            result = result * seed.frame[i]
            # moving later factors right of earlier ones costs pi(earlier, later)
            twice -= seed.pi.pair(seen, [int(j == i) for j in range(seed.n)])
            seen[i] += 1
    return result.qshift(twice)


def exchange_terms(seed: QuantumSeed, k: int) -> tuple[list[int], list[int]]:
    B = seed.B
    v_plus = [(_pos(B.b(j, k)) if j != k else 0) for j in range(seed.n)]
    v_minus = [(_pos(-B.b(j, k)) if j != k else 0) for j in range(seed.n)]
    return v_plus, v_minus


def exchange_numerator(seed: QuantumSeed, k: int) -> TorusElement:
    """A_k * A'_k as a sum of two q-shifted Weyl monomials of the current frame."""
    total = TorusElement.zero(seed.root)
    ek = [int(j == k) for j in range(seed.n)]
    for v in exchange_terms(seed, k):
        total = total + frame_monomial(seed, v).qshift(seed.pi.pair(ek, v))
    return total


def mutate_seed(seed: QuantumSeed, k: int, sign: int = 1, check: bool = True) -> QuantumSeed:
    if k in seed.frozen:
        raise FrozenIndexError(f"index {k} is frozen")
    new_pair = mutate_pair(seed.pair, k, sign)
    new_var = exact_left_divide(exchange_numerator(seed, k), seed.frame[k])
    frame = list(seed.frame)
    frame[k] = new_var
    degrees = list(seed.degrees) if seed.degrees else []
    if degrees:
        v_plus, _ = exchange_terms(seed, k)
        d = [-x for x in degrees[k]]
        for j, m in enumerate(v_plus):
            if m:
                d = [a + m * b for a, b in zip(d, degrees[j])]
        degrees[k] = tuple(d)
    result = QuantumSeed(seed.labels, new_pair.B, new_pair.pi, tuple(frame), seed.root,
                         tuple(degrees))
    if check:
        for j in range(seed.n):
            if j != k and not q_commute_ok(result, k, j):
                raise CompatibilityError(f"frame entries {k}, {j} fail q-commutation")
        if not new_var.is_bar_invariant():
            raise CompatibilityError(f"new variable at {k} is not bar-invariant")
    return result


def mutate_word(seed: QuantumSeed, word: Sequence[int], sign: int = 1) -> QuantumSeed:
    for k in word:
        seed = mutate_seed(seed, k, sign)
    return seed


def q_commute_ok(seed: QuantumSeed, i: int, j: int) -> bool:
    x, y = seed.frame[i], seed.frame[j]
    return x * y == (y * x).qshift(2 * seed.pi.pi[i][j])


def permute_seed(seed: QuantumSeed, sigma: Sequence[int]) -> QuantumSeed:
    """Relabel: the new index sigma[i] carries the old index i."""
    n = seed.n
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s] = i
    b2 = tuple(tuple(seed.B.b2[inv[i]][inv[j]] for j in range(n)) for i in range(n))
    pi = SkewForm([[seed.pi.pi[inv[i]][inv[j]] for j in range(n)] for i in range(n)])
    frozen = frozenset(sigma[i] for i in seed.frozen)
    return QuantumSeed(
        tuple(seed.labels[inv[i]] for i in range(n)),
        ExchangeMatrix(b2, frozen),
        pi,
        tuple(seed.frame[inv[i]] for i in range(n)),
        seed.root,
        tuple(seed.degrees[inv[i]] for i in range(n)) if seed.degrees else (),
    )


def same_seed(a: QuantumSeed, b: QuantumSeed) -> bool:
    return a.B == b.B and a.pi == b.pi and a.frame == b.frame


# -- enumeration ------------------------------------------------------------

def cluster_key(frame: Sequence[TorusElement], frozen=frozenset()) -> str:
    entries = sorted(x.key() for i, x in enumerate(frame) if i not in frozen)
    return hashlib.sha256("\n".join(entries).encode()).hexdigest()


@dataclass(frozen=True)
class ClusterRecord:
    key: str
    seed: QuantumSeed
    word: tuple[int, ...]


@dataclass
class Enumeration:
    clusters: list[ClusterRecord]
    variables: list[TorusElement]
    unfrozen_variables: list[TorusElement]
    frozen_variables: list[TorusElement]

    def report(self) -> dict:
        return {
            "clusters": len(self.clusters),
            "variables": len(self.variables),
            "unfrozen_variables": len(self.unfrozen_variables),
            "frozen_variables": len(self.frozen_variables),
            "cluster_keys": [c.key for c in self.clusters],
            "cluster_words": [list(c.word) for c in self.clusters],
            "variable_digests": [hashlib.sha256(v.key().encode()).hexdigest()
                                 for v in self.variables],
        }

    def report_bytes(self) -> bytes:
        return json.dumps(self.report(), sort_keys=True).encode()


def enumerate_clusters(seed: QuantumSeed, max_clusters: int = 1000,
                       workers: int = 1) -> Enumeration:
    """Breadth-first closure of the exchange graph under unfrozen mutations.

    Levels are expanded with a worker pool; results are merged in a fixed order,
    so the outcome does not depend on ``workers``.
    """
    start = ClusterRecord(seed.cluster_key(), seed, ())
    found: dict[str, ClusterRecord] = {start.key: start}
    frontier = [start]
    unfrozen = seed.B.unfrozen

    def expand(rec: ClusterRecord):
        out = []
        for k in unfrozen:
            if rec.word and rec.word[-1] == k:
                continue
            nxt = mutate_seed(rec.seed, k)
            out.append(ClusterRecord(nxt.cluster_key(), nxt, rec.word + (k,)))
        return out

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            batches = list(pool.map(expand, frontier)) if pool else [expand(r) for r in frontier]
            new = []
            for batch in batches:
                for rec in batch:
                    if rec.key not in found:
                        found[rec.key] = rec
                        new.append(rec)
                        if len(found) > max_clusters:
                            raise BoundExceeded(
                                f"more than {max_clusters} clusters reached")
            frontier = new
    finally:
        if pool:
            pool.shutdown()

    clusters = sorted(found.values(), key=lambda r: (len(r.word), r.word))
    var_all: dict[str, TorusElement] = {}
    var_uf: dict[str, TorusElement] = {}
    var_fr: dict[str, TorusElement] = {}
    for rec in clusters:
        for i, x in enumerate(rec.seed.frame):
            key = x.key()
            var_all[key] = x
            (var_fr if i in rec.seed.frozen else var_uf)[key] = x
    order = sorted(var_all)
    return Enumeration(
        clusters,
        [var_all[k] for k in order],
        [var_uf[k] for k in sorted(var_uf)],
        [var_fr[k] for k in sorted(var_fr)],
    )


# -- ensemble grading ---------------------------------------------------------

@dataclass(frozen=True)
class EnsembleProjection:
    """Coordinates on coker p*: free rows, and torsion rows with their moduli."""

    n: int
    free: tuple[tuple[int, ...], ...]
    torsion: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def rank(self) -> int:
        return len(self.free)

    def __call__(self, alpha: Sequence[int]) -> tuple:
        f = tuple(sum(r * a for r, a in zip(row, alpha)) for row in self.free)
        t = tuple(sum(r * a for r, a in zip(row, alpha)) % m for row, m in self.torsion)
        return f + t

    def to_json(self) -> dict:
        return {"free_rank": self.rank, "torsion": [m for _, m in self.torsion],
                "free": [list(r) for r in self.free]}


def p_star_matrix(B: ExchangeMatrix) -> list[list[int]]:
    """Columns are p*(e_i) = i-th row of eps = B^T, for unfrozen i."""
    uf = B.unfrozen
    return [[B.b(j, i) for i in uf] for j in range(B.n)]


def ensemble_projection(B: ExchangeMatrix) -> EnsembleProjection:
    n = B.n
    P = p_star_matrix(B)
    if not B.unfrozen or all(v == 0 for row in P for v in row):
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return EnsembleProjection(n, ident, ())
    D, U, _ = smith_normal_decomp(Matrix(P))
    diag = [int(D[i, i]) for i in range(min(D.shape))]
    r = sum(1 for d in diag if d)
    U_rows = [tuple(int(v) for v in U.row(i)) for i in range(n)]
    torsion = tuple((U_rows[i], abs(diag[i])) for i in range(r) if abs(diag[i]) > 1)
    return EnsembleProjection(n, tuple(U_rows[r:]), torsion)


def element_grade(x: TorusElement, proj: EnsembleProjection):
    if not x:
        return (0,) * (len(proj.free) + len(proj.torsion))
    grades = {proj(a) for a in x.terms}
    return grades.pop() if len(grades) == 1 else INHOMOGENEOUS


def variable_grading(seed: QuantumSeed, i: int, proj: EnsembleProjection):
    """Grade of frame entry i; checks it against the transported degree vector."""
    g = element_grade(seed.frame[i], proj)
    if g is INHOMOGENEOUS:
        raise CompatibilityError(f"frame entry {i} is inhomogeneous")
    if seed.degrees and proj(seed.degrees[i]) != g:
        raise CompatibilityError(f"frame entry {i}: transported grade disagrees")
    return g


@dataclass(frozen=True)
class BarReport:
    ok: bool
    failing: tuple[int, ...]


def bar_check(seed: QuantumSeed) -> BarReport:
    bad = tuple(i for i, x in enumerate(seed.frame) if not x.is_bar_invariant())
    return BarReport(not bad, bad)


def q_commutation(x: TorusElement, y: TorusElement) -> int | None:
    """The doubled exponent s with x*y = q^{s/2} y*x, or None if x, y do not q-commute."""
    xy, yx = x * y, y * x
    if not xy:
        return 0
    a, cxy = xy.leading()
    cyx = yx.terms.get(a)
    if cyx is None:
        return None
    shift = cxy.max_exp() - cyx.max_exp()
    return shift if xy == yx.qshift(shift) else None


__all__ = [
    "BoundExceeded", "ClusterRecord", "CompatibilityError", "CompatibilityReport",
    "CompatiblePair", "Enumeration", "EnsembleProjection", "ExchangeMatrix",
    "FrozenIndexError", "QLaurent", "QuantumSeed", "bar_check", "cluster_key",
    "ebf_product", "element_grade", "ensemble_projection", "enumerate_clusters",
    "exchange_numerator", "frame_monomial", "initial_seed", "monomial",
    "mutate_matrix", "mutate_pair", "mutate_seed", "mutate_word", "permute_seed",
    "q_commutation", "same_seed", "variable_grading", "verify_compatibility",
]
