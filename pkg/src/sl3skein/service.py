"""Request/response models and the handlers behind every command.

Both the HTTP application and the command line call these handlers, so a run
produces the same report whichever front end is used.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Literal

from pydantic import BaseModel, Field, field_validator

from .cluster_core import (
    BoundExceeded,
    CompatibilityError,
    FrozenIndexError,
    QuantumSeed,
    bar_check,
    enumerate_clusters,
    mutate_seed,
    verify_compatibility,
)
from .surface import (
    DecoratedTriangulation,
    TriangulationError,
    build_index_set,
    describe_quiver,
    parse_signs,
    surface_pair,
    surface_seed,
)
from .suites import SUITES, run_suite
from .webexpand import (
    ExpansionError,
    LoopDescriptor,
    LoopError,
    bangle,
    bracelet,
    expand,
    loop_to_web,
)

SCHEMA = "sl3skein.report/1"


class InputError(ValueError):
    """The request is malformed or refers to something that does not exist."""


# -- models ---------------------------------------------------------------------

class RunReport(BaseModel):
    version: str = SCHEMA
    command: str
    inputs_digest: str
    ok: bool
    verdicts: dict[str, Any]
    artifacts: dict[str, Any]

    def dumps(self) -> str:
        return canonical(self.model_dump())


class QuiverRequest(BaseModel):
    triangulation: dict[str, Any]
    signs: str | None = None


class MutateRequest(BaseModel):
    seed: dict[str, Any]
    signs: str | None = None
    word: list[int | str] = Field(min_length=1)


class EnumerateRequest(BaseModel):
    seed: dict[str, Any]
    signs: str | None = None
    max: int = Field(default=1000, ge=1)
    workers: int = Field(default=1, ge=1)


class VerifyRequest(BaseModel):
    suite: str

    @field_validator("suite")
    @classmethod
    def _known(cls, v: str) -> str:
        if v not in SUITES:
            raise ValueError(f"unknown suite {v!r}; choose from {', '.join(SUITES)}")
        return v


class ExpandRequest(BaseModel):
    triangulation: dict[str, Any]
    signs: str | None = None
    loop: str
    mode: Literal["loop", "bangle", "bracelet"] = "loop"
    n: int = Field(default=1, ge=1)
    biangle: int = Field(default=0, ge=0)


# -- helpers --------------------------------------------------------------------

def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# execution settings that cannot change a result stay out of the digest
_EXECUTION_ONLY = {"workers"}


def digest(req: BaseModel) -> str:
    data = req.model_dump(exclude=_EXECUTION_ONLY)
    return hashlib.sha256(canonical(data).encode()).hexdigest()


def _decorated(data: dict, signs: str | None) -> DecoratedTriangulation:
    try:
        dec = DecoratedTriangulation.load(data)
        return dec.with_signs(parse_signs(signs, dec.triangulation))
    except (TriangulationError, KeyError, TypeError) as exc:
        raise InputError(f"bad triangulation: {exc}") from None


def _seed(data: dict, signs: str | None) -> QuantumSeed:
    """A seed record, a report that carries one, or a triangulation."""
    if "artifacts" in data and isinstance(data["artifacts"], dict) and "seed" in data["artifacts"]:
        data = data["artifacts"]["seed"]
    if "triangles" in data:
        return surface_seed(_decorated(data, signs))
    try:
        return QuantumSeed.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad seed: {exc}") from None


def _index(seed: QuantumSeed, k: int | str) -> int:
    if isinstance(k, str):
        if k.lstrip("-").isdigit():
            k = int(k)
        elif k in seed.labels:
            return seed.labels.index(k)
        else:
            raise InputError(f"unknown label {k!r}")
    if not 0 <= k < seed.n:
        raise InputError(f"index {k} out of range 0..{seed.n - 1}")
    return k


# -- handlers -------------------------------------------------------------------

def quiver(req: QuiverRequest) -> RunReport:
    dec = _decorated(req.triangulation, req.signs)
    pair = surface_pair(dec)
    labels = build_index_set(dec).labels
    comp = verify_compatibility(pair)
    seed = surface_seed(dec)
    return RunReport(
        command="quiver", inputs_digest=digest(req), ok=comp.ok,
        verdicts={"compatibility": comp.to_json()},
        artifacts={
            "labels": list(labels),
            "frozen": sorted(pair.B.frozen),
            "B2": [list(r) for r in pair.B.b2],
            "Pi": [list(r) for r in pair.pi.pi],
            "D": list(comp.diagonal),
            "graph": describe_quiver(pair.B, labels),
            "signs": {t: dec.signs[t] for t in dec.triangulation.triangle_order},
            "seed": seed.to_json(),
        })


def mutate(req: MutateRequest) -> RunReport:
    seed = _seed(req.seed, req.signs)
    word = [_index(seed, k) for k in req.word]
    try:
        for k in word:
            seed = mutate_seed(seed, k)
    except FrozenIndexError as exc:
        raise InputError(str(exc)) from None
    except CompatibilityError as exc:
        return RunReport(command="mutate", inputs_digest=digest(req), ok=False,
                         verdicts={"error": str(exc)}, artifacts={"word": word})
    comp = verify_compatibility(seed.pair)
    bar = bar_check(seed)
    return RunReport(
        command="mutate", inputs_digest=digest(req), ok=comp.ok and bar.ok,
        verdicts={"compatibility": comp.to_json(), "bar_invariant": bar.ok,
                  "positive": all(x.is_positive() for x in seed.frame)},
        artifacts={"word": word, "seed": seed.to_json()})


def enumerate_(req: EnumerateRequest) -> RunReport:
    seed = _seed(req.seed, req.signs)
    try:
        en = enumerate_clusters(seed, max_clusters=req.max, workers=req.workers)
    except BoundExceeded as exc:
        return RunReport(command="enumerate", inputs_digest=digest(req), ok=False,
                         verdicts={"bound_exceeded": str(exc)}, artifacts={"max": req.max})
    positive = all(x.is_positive() for x in en.variables)
    bar = all(x.is_bar_invariant() for x in en.variables)
    rep = en.report()
    return RunReport(
        command="enumerate", inputs_digest=digest(req), ok=positive and bar,
        verdicts={"positive": positive, "bar_invariant": bar,
                  "clusters": rep["clusters"], "variables": rep["variables"],
                  "unfrozen_variables": rep["unfrozen_variables"],
                  "frozen_variables": rep["frozen_variables"]},
        artifacts={k: rep[k] for k in ("cluster_keys", "cluster_words", "variable_digests")})


def verify(req: VerifyRequest) -> RunReport:
    rep = run_suite(req.suite)
    return RunReport(
        command="verify", inputs_digest=digest(req), ok=rep.passed,
        verdicts={c.name: c.passed for c in rep.checks},
        artifacts={"suite": req.suite, "checks": [c.to_json() for c in rep.checks]})


def expand_(req: ExpandRequest) -> RunReport:
    dec = _decorated(req.triangulation, req.signs)
    tri = dec.triangulation
    try:
        web = loop_to_web(tri, LoopDescriptor.parse(req.loop, tri))
        if req.mode == "bangle":
            web = bangle(web, req.n, tri)
        elif req.mode == "bracelet":
            web = bracelet(web, req.n, tri, req.biangle)
        res = expand(web, dec)
    except (LoopError, ExpansionError) as exc:
        raise InputError(str(exc)) from None
    body = res.to_json()
    flags = body.pop("flags")
    ok = flags["positive"] and flags["bar_invariant"] and flags["grading"] is not None \
        and not any(flags["grading"])
    return RunReport(command="expand", inputs_digest=digest(req), ok=ok,
                     verdicts=flags, artifacts={"web": req.mode, "n": req.n, **body})


def summary(rep: RunReport) -> str:
    """One-paragraph human summary of a report."""
    head = f"{rep.command}: {'ok' if rep.ok else 'FAILED'}"
    bits = []
    for k, v in sorted(rep.verdicts.items()):
        if isinstance(v, (bool, int, str)) or v is None:
            bits.append(f"{k}={v}")
    if rep.command == "quiver":
        n = len(rep.artifacts["labels"])
        bits.append(f"size={n}x{n} D={rep.artifacts['D']}")
    if rep.command == "expand":
        bits.append(f"terms={rep.artifacts['terms']} J={rep.artifacts['J']}")
    failed = [k for k, v in rep.verdicts.items() if v is False]
    if failed and rep.command == "verify":
        bits = [f"failed: {', '.join(failed)}", f"checks={len(rep.verdicts)}"]
    return head + ("\n  " + "\n  ".join(bits) if bits else "")
