"""Command line front end.

A thin client: every subcommand reads a JSON config, sends one request to the
service app in-process over an ASGI transport, and writes the returned
artifact verbatim (stdout by default). The CLI never computes numbers itself,
so its output is byte-identical to what a deployed service would emit.

Exit codes: 0 success, 2 invalid config, 3 numeric failure, 1 I/O failure on
the output path.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Optional

import httpx

from .service import create_app

_EXPERIMENT_KINDS = {
    "sweep-dim": "dimension-sweep",
    "vdc": "vdc-sweep",
    "symbols": "symbol-envelope",
    "boundary": "boundary-measure",
    "jump-corpus": "jump-corpus",
}
_OPS = ("jump-count", "variation", "jump-seminorm", "lewko")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jumpkit",
        description="Jump-counting and variation-seminorm toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_report_args(p: argparse.ArgumentParser, config_required: bool) -> None:
        p.add_argument("--config", required=config_required, metavar="PATH",
                       help="JSON config file")
        p.add_argument("--seed", type=int, default=None, metavar="U64",
                       help="seed override (embedded in the report)")
        p.add_argument("--out", default=None, metavar="PATH",
                       help="output path (default: stdout, or the config's 'out')")
        p.add_argument("--format", choices=("csv", "json"), default="json")

    for name in _OPS:
        add_report_args(sub.add_parser(name), config_required=True)
    for name in _EXPERIMENT_KINDS:
        add_report_args(sub.add_parser(name), config_required=False)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return data


def _post(url: str, payload: dict, fmt: str) -> httpx.Response:
    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://jumpkit", timeout=None
        ) as client:
            return await client.post(url, json=payload, params={"format": fmt})

    return asyncio.run(go())


def _write_artifact(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "wb") as fh:
            fh.write(text.encode("utf-8"))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def _fail(detail, code: int) -> int:
    if not isinstance(detail, str):
        detail = json.dumps(detail)
    print(f"error: {detail}", file=sys.stderr)
    return code


def _check_seed(seed: Optional[int]) -> Optional[int]:
    if seed is not None and not (0 <= seed < 2**64):
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return seed


def _run_report_command(args: argparse.Namespace) -> int:
    try:
        seed = _check_seed(args.seed)
        data = _load_config(args.config)
    except (OSError, ValueError) as exc:
        return _fail(str(exc), 2)

    if args.command in _EXPERIMENT_KINDS:
        kind = _EXPERIMENT_KINDS[args.command]
        data.setdefault("kind", kind)
        if data["kind"] != kind:
            return _fail(f"config kind {data['kind']!r} does not match {kind!r}", 2)
        payload = {"config": data}
        if seed is not None:
            payload["seed"] = seed
        url = "/experiments/run"
    else:
        if seed is not None:
            data["seed"] = seed
        payload = data
        url = f"/ops/{args.command}"

    resp = _post(url, payload, args.format)
    if resp.status_code != 200:
        body = resp.json()
        detail = body.get("detail", body)
        return _fail(detail, 2 if resp.status_code == 422 else 3)

    artifact = resp.json()["artifact"]
    out = args.out if args.out is not None else data.get("out")
    try:
        _write_artifact(artifact, out)
    except OSError as exc:
        return _fail(str(exc), 1)
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    return _run_report_command(args)


if __name__ == "__main__":
    sys.exit(main())
