"""Command-line client.

Reports are written as canonical JSON to stdout (or ``--out``), with a short
summary on stderr. Exit status: 0 success, 1 verification failure, 2 bad input.
By default requests are handled in-process; ``--server URL`` sends them to a
running HTTP service instead.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from pydantic import BaseModel, ValidationError

from . import service
from .service import (
    EnumerateRequest,
    ExpandRequest,
    InputError,
    MutateRequest,
    QuiverRequest,
    RunReport,
    VerifyRequest,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

HANDLERS = {
    "quiver": service.quiver,
    "mutate": service.mutate,
    "enumerate": service.enumerate_,
    "verify": service.verify,
    "expand": service.expand_,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path} does not hold a JSON object")
    return data


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sl3skein", description=__doc__.splitlines()[0])
    p.add_argument("--server", help="base URL of a running service")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        return sp

    q = common(sub.add_parser("quiver", help="exchange matrix and commutation form"))
    q.add_argument("--triangulation", required=True)
    q.add_argument("--signs")

    m = common(sub.add_parser("mutate", help="apply a mutation word to a seed"))
    m.add_argument("--seed", required=True)
    m.add_argument("--signs")
    m.add_argument("--word", required=True, help="comma separated indices or labels")

    e = common(sub.add_parser("enumerate", help="close the exchange graph"))
    e.add_argument("--seed", required=True)
    e.add_argument("--signs")
    e.add_argument("--max", type=int, default=1000)
    e.add_argument("--workers", type=int, default=1)

    v = common(sub.add_parser("verify", help="run a verification suite"))
    v.add_argument("--suite", required=True)

    x = common(sub.add_parser("expand", help="expand a loop, bangle or bracelet"))
    x.add_argument("--triangulation", required=True)
    x.add_argument("--signs")
    x.add_argument("--loop", required=True, help='"T1:E_in:E_out,..."')
    g = x.add_mutually_exclusive_group()
    g.add_argument("--bangle", type=int, metavar="N")
    g.add_argument("--bracelet", type=int, metavar="N")
    x.add_argument("--biangle", type=int, default=0,
                   help="passage whose exit edge carries the bracelet braid")
    return p


def make_request(args) -> BaseModel:
    c = args.command
    if c == "quiver":
        return QuiverRequest(triangulation=_read_json(args.triangulation), signs=args.signs)
    if c == "mutate":
        word = [w.strip() for w in args.word.split(",") if w.strip()]
        return MutateRequest(seed=_read_json(args.seed), signs=args.signs, word=word)
    if c == "enumerate":
        return EnumerateRequest(seed=_read_json(args.seed), signs=args.signs,
                                max=args.max, workers=args.workers)
    if c == "verify":
        return VerifyRequest(suite=args.suite)
    mode, n = "loop", 1
    if args.bangle is not None:
        mode, n = "bangle", args.bangle
    elif args.bracelet is not None:
        mode, n = "bracelet", args.bracelet
    return ExpandRequest(triangulation=_read_json(args.triangulation), signs=args.signs,
                         loop=args.loop, mode=mode, n=n, biangle=args.biangle)


def _remote(url: str, command: str, req: BaseModel) -> RunReport:
    import httpx

    r = httpx.post(f"{url.rstrip('/')}/{command}", json=req.model_dump(), timeout=None)
    if r.status_code == 422:
        raise InputError(str(r.json().get("detail")))
    r.raise_for_status()
    return RunReport.model_validate(r.json())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        req = make_request(args)
        if args.server:
            rep = _remote(args.server, args.command, req)
        else:
            rep = HANDLERS[args.command](req)
    except ValidationError as exc:
        msgs = "; ".join(e["msg"] for e in exc.errors())
        print(f"{args.command}: input error: {msgs}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"{args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rep.dumps() + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(service.summary(rep), file=sys.stderr)
    print(f"  elapsed={time.perf_counter() - start:.2f}s", file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
