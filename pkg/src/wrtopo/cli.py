"""Command-line client for the toolkit service.

Each subcommand posts to the HTTP API: against a remote server when
--server is given, otherwise against an in-process instance of the app
over an ASGI transport, so no server needs to run.  Results go to
stdout as JSON (or DOT/OFF text for export); logs go to stderr.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 size
bound exceeded.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Any

import httpx

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_BOUND = 3


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _request(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.post(path, json=payload)

    from .service import create_app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://wrtopo", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _finish(response: httpx.Response, *, raw_text: bool = False) -> int:
    if response.status_code >= 400:
        try:
            body = response.json()
        except ValueError:
            body = {"error": {"code": "http", "detail": response.text}}
        error = body.get("error", body)
        code = error.get("code") if isinstance(error, dict) else None
        _log(f"error: {json.dumps(error)}")
        return EXIT_BOUND if code == "size-bound" else EXIT_USAGE
    if raw_text:
        sys.stdout.write(response.text)
        return EXIT_OK
    print(json.dumps(response.json(), indent=2, sort_keys=True))
    return EXIT_OK


def _read_payload(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _build_payload(args) -> dict:
    payload: dict[str, Any] = {"n": args.n, "stats": getattr(args, "stats", False)}
    if args.chromatic:
        payload["chromatic"] = True
    elif args.iterated is not None:
        payload["iterated"] = args.iterated
    else:
        payload["l"] = args.l if args.l is not None else 0
    return payload


def cmd_build(args) -> int:
    return _finish(_request(args.server, "/build", _build_payload(args)))


def cmd_collapse(args) -> int:
    payload: dict[str, Any] = {"n": args.n}
    if args.void:
        payload["mode"] = "void"
    elif args.horn is not None:
        payload.update(mode="horn", p=args.horn)
    elif args.iterated is not None:
        payload.update(mode="iterated", k=args.iterated)
    elif args.full:
        payload["mode"] = "full"
    elif args.equivariant:
        payload.update(mode="equivariant", l=args.l if args.l is not None else 0)
    else:
        payload.update(mode="round", l=args.l if args.l is not None else 0)
    return _finish(_request(args.server, "/collapse", payload))


def cmd_verify(args) -> int:
    data = _read_payload(args.trace)
    if "trace" in data and "steps" not in data.get("trace", {}):
        payload = data
    elif "source" in data:
        payload = {"trace": data}
    else:
        payload = {"trace": data.get("trace", data)}
    response = _request(args.server, "/verify", payload)
    if response.status_code >= 400:
        return _finish(response)
    body = response.json()
    print(json.dumps(body, indent=2, sort_keys=True))
    if not body.get("ok"):
        _log(f"verification failed: {body.get('detail')}")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.descriptor:
        payload = _read_payload(args.descriptor)
    else:
        scheduler: dict[str, Any] = {"kind": args.scheduler}
        if args.seed is not None:
            scheduler["seed"] = args.seed
        if args.script:
            scheduler["script"] = [int(x) for x in args.script.split(",")]
        payload = {"n": args.n, "scheduler": scheduler}
    if args.exhaustive:
        return _finish(
            _request(args.server, "/simulate/exhaustive", {"n": payload["n"]})
        )
    return _finish(_request(args.server, "/simulate", payload))


def cmd_count(args) -> int:
    return _finish(_request(args.server, "/count", {"n": args.n}))


def cmd_export(args) -> int:
    payload: dict[str, Any] = {"format": args.format}
    if args.input:
        data = _read_payload(args.input)
        payload["complex"] = data.get("complex", data)
    else:
        if args.n is None:
            _log("export needs --input or --n")
            return EXIT_USAGE
        payload["build"] = _build_payload(args)
    response = _request(args.server, "/export", payload)
    if response.status_code >= 400 or not args.out:
        return _finish(response, raw_text=True)
    with open(args.out, "w") as fh:
        fh.write(response.text)
    _log(f"wrote {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def _add_build_options(parser, *, stats: bool = True) -> None:
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--l", type=int, default=None)
    parser.add_argument("--chromatic", action="store_true")
    parser.add_argument("--iterated", type=int, default=None, metavar="K")
    if stats:
        parser.add_argument("--stats", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wrtopo",
        description="Protocol complexes, collapse traces, and protocol simulation",
    )
    parser.add_argument("--server", default=None, help="base URL of a running service")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit a complex as JSON")
    _add_build_options(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("collapse", help="emit a collapse trace as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--full", action="store_true")
    p.add_argument("--equivariant", action="store_true")
    p.add_argument("--void", action="store_true")
    p.add_argument("--horn", type=int, default=None, metavar="P")
    p.add_argument("--iterated", type=int, default=None, metavar="K")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("verify", help="replay a trace file")
    p.add_argument("trace", help="trace JSON file, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run the protocol under a scheduler")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--scheduler", choices=["random", "scripted", "exhaustive"],
                   default="random")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--script", default=None, help="comma-separated process ids")
    p.add_argument("--exhaustive", action="store_true",
                   help="enumerate all schedules instead of one run")
    p.add_argument("--descriptor", default=None,
                   help="JSON run descriptor file, or - for stdin")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("count", help="profile counts and censuses per round")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("export", help="write DOT or OFF renderings")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--chromatic", action="store_true")
    p.add_argument("--iterated", type=int, default=None, metavar="K")
    p.add_argument("--input", default=None, help="complex JSON file instead of a build")
    p.add_argument("--format", choices=["dot", "off"], default="dot")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except httpx.HTTPError as exc:
        _log(f"transport error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _log(f"io error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
