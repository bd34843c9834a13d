"""Command line interface.

  ncc preprocess -c <config>      tokenize + binarize a JSONL corpus
  ncc train -c <config>           train a model, write a model directory
  ncc eval -c <config>            write a JSON metric report
  ncc predict -m <dir> -t <task> -i <input> [-k N] [--json]
  ncc serve --port <p> --models <models.json> [--serve-ui <dir>]
  ncc linearize <file>            print linearized block-tree tokens
  ncc --list-models / --list-tasks
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import ncc

from ..errors import NccError
from ..registry import RegistryKind, entries
from ..synparse import linearize_source

EXIT_MODEL_LOAD = 2
EXIT_BAD_INPUT = 3


def _load_config(path: str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _print_registry(kind: RegistryKind) -> None:
    for entry in entries(kind):
        print(f"{entry.kind.value} {entry.name} {entry.description}")


def _cmd_predict(args) -> int:
    from .modelstore import Predictor

    try:
        predictor = Predictor(args.model_dir)
    except (NccError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: cannot load model from {args.model_dir}: {exc}", file=sys.stderr)
        return EXIT_MODEL_LOAD
    try:
        result = predictor.predict(args.task, args.input, args.k)
    except NccError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.json:
        print(json.dumps(result, separators=(",", ":")))
        return 0
    if args.task == "complete":
        for cand in result["candidates"]:
            print(f"{cand['token']}\t{cand['prob']:.6f}")
    elif args.task == "summarize":
        print(result["summary"])
    else:
        for hit in result["results"]:
            print(f"{hit['path']}\t{hit['score']:.6f}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import ModelCatalog, create_app

    catalog = ModelCatalog.from_file(args.models)
    app = create_app(catalog, ui_dir=args.serve_ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncc", description="code language-modeling toolkit")
    parser.add_argument("--list-models", action="store_true", help="list registered models")
    parser.add_argument("--list-tasks", action="store_true", help="list registered tasks")
    sub = parser.add_subparsers(dest="command")

    for name in ("preprocess", "train", "eval"):
        p = sub.add_parser(name)
        p.add_argument("-c", "--config", required=True, help="JSON config file")

    p = sub.add_parser("predict")
    p.add_argument("-m", "--model-dir", required=True)
    p.add_argument("-t", "--task", required=True, choices=["complete", "summarize", "search"])
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--json", action="store_true", help="emit the HTTP response body")

    p = sub.add_parser("serve")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--models", required=True, help="models.json catalog")
    p.add_argument("--serve-ui", default=None, help="static web UI directory")

    p = sub.add_parser("linearize")
    p.add_argument("file")
    return parser


def main(argv: list[str] | None = None) -> int:
    ncc.install_builtins()
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.list_models:
        _print_registry(RegistryKind.MODEL)
        return 0
    if args.list_tasks:
        _print_registry(RegistryKind.TASK)
        return 0

    if args.command == "preprocess":
        from .pipeline import preprocess

        summary = preprocess(_load_config(args.config))
        print(json.dumps(summary, indent=2))
        return 0
    if args.command == "train":
        from .pipeline import run_training

        result = run_training(_load_config(args.config))
        print(json.dumps(result, indent=2))
        return 0
    if args.command == "eval":
        from .pipeline import run_eval

        report = run_eval(_load_config(args.config))
        print(json.dumps(report, indent=2))
        return 0
    if args.command == "predict":
        return _cmd_predict(args)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "linearize":
        source = Path(args.file).read_text(encoding="utf-8")
        for token in linearize_source(source):
            print(token)
        return 0

    parser.print_help()
    return 0


if __name__ == "__main__":
    sys.exit(main())
