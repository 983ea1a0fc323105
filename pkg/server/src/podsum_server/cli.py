"""Command-line entry point: podsum-server --mode fixture --port 8080."""

from __future__ import annotations

import argparse

import uvicorn

from podsum_server.app import MODES, ServerConfig, create_app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="podsum-server",
        description="Serve /v1/summarize and /v1/embed for the podsum pipeline.",
    )
    parser.add_argument("--mode", choices=MODES, default="fixture")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--max-request-bytes", type=int, default=1_000_000)
    parser.add_argument("--summarizer-model", default="",
                        help="checkpoint id, pretrained mode only")
    parser.add_argument("--encoder-model", default="",
                        help="checkpoint id, pretrained mode only")
    args = parser.parse_args(argv)
    try:
        config = ServerConfig(
            mode=args.mode,
            summarizer_model=args.summarizer_model,
            encoder_model=args.encoder_model,
            host=args.host,
            port=args.port,
            max_request_bytes=args.max_request_bytes,
        )
    except ValueError as exc:
        parser.error(str(exc))
    uvicorn.run(create_app(config), host=config.host, port=config.port,
                log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
