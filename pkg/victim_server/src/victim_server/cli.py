"""Command-line entry point: load a checkpoint and serve the wire protocol."""

from __future__ import annotations

import argparse
import sys

import uvicorn

from .app import ServerConfig, create_app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="victim-server",
        description="Serve a sequence-classification checkpoint over the victim wire protocol.",
    )
    parser.add_argument("--model", required=True,
                        help="checkpoint path or hub identifier")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--max-batch", dest="max_batch", type=int, default=32)
    parser.add_argument("--device", default="cpu")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ServerConfig(model=args.model, port=args.port,
                       max_batch=args.max_batch, device=args.device)
    try:
        app = create_app(cfg)
    except Exception as exc:
        print(f"error: cannot load model {cfg.model!r}: {exc}", file=sys.stderr)
        return 1
    uvicorn.run(app, host=args.host, port=cfg.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
