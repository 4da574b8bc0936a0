"""Command line entry point: model-adapter [--mode mock|real] [--model.<stage> ID]."""

import argparse

from .app import create_app
from .config import AdapterConfig
from .mock import STAGES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="model-adapter",
                                     description="Reference model server for the stage wire protocol")
    parser.add_argument("--mode", choices=("mock", "real"), default="mock")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8100)
    for stage in STAGES:
        parser.add_argument(f"--model.{stage}", dest=f"model_{stage}", metavar="MODEL_ID",
                            help=f"model id for the {stage} stage (real mode)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    models = {stage: value for stage in STAGES
              if (value := getattr(args, f"model_{stage}")) is not None}
    app = create_app(AdapterConfig(mode=args.mode, models=models))

    import uvicorn
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
