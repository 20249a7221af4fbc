"""Batch command-line surface: info, algos, run, serve.

Exit codes: 0 success, 2 bad usage or unreadable file, 3 validation error,
4 runtime failure, 130 interrupted (SIGINT maps to run cancellation).
"""

from __future__ import annotations

import argparse
import json
import signal
import sys

from .data import ArffError, load_arff, summarize
from .engine import AlgorithmSpec, ValidationError, execute_spec, list_algorithms
from .runtime import RunCancelled, RunContext

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4
EXIT_INTERRUPT = 130


def _load(path):
    try:
        return load_arff(path)
    except OSError as exc:
        raise SystemExit_(EXIT_USAGE, f"cannot read {path}: {exc.strerror or exc}")
    except ArffError as exc:
        raise SystemExit_(EXIT_USAGE, f"{path}: {exc}")


class SystemExit_(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code
        self.message = message


def _render_summary(summary):
    lines = [
        f"relation: {summary.relation}",
        f"instances: {summary.n_instances}",
        f"attributes: {summary.n_attributes}",
        "",
        f"{'name':24s} {'kind':8s} {'distinct':>8s} {'missing':>8s}",
    ]
    for a in summary.attributes:
        lines.append(f"{a.name:24s} {a.kind:8s} {a.distinct:8d} {a.missing:8d}")
    if summary.class_distribution:
        lines.append("")
        lines.append("class distribution:")
        for label, count in summary.class_distribution.items():
            lines.append(f"  {label}: {count}")
    return "\n".join(lines)


def _render_result(doc):
    lines = [f"algorithm: {doc['algorithm']}"]
    if doc["params"]:
        lines.append("params: " + ", ".join(f"{k}={v}" for k, v in doc["params"].items()))
    if "accuracy" in doc:
        lines.append(f"accuracy: {doc['accuracy']:.4f} %")
        lines.append(f"build time: {doc['build_time_s']:.4f} s, "
                     f"cross-validation time: {doc['cv_time_s']:.4f} s")
        lines.append("")
        lines.append(f"{'class':20s} {'precision':>9s} {'recall':>9s} {'f1':>9s}")
        for m in doc["per_class"]:
            lines.append(f"{m['label']:20s} {m['precision']:9.4f} "
                         f"{m['recall']:9.4f} {m['f1']:9.4f}")
        lines.append("")
        lines.append("confusion matrix (rows = actual, columns = predicted):")
        labels = doc["class_labels"]
        width = max(6, max(len(l) for l in labels) + 1)
        lines.append(" " * 20 + "".join(f"{l:>{width}s}" for l in labels))
        for label, row in zip(labels, doc["confusion"]):
            lines.append(f"{label:20s}" + "".join(f"{v:>{width}d}" for v in row))
    elif "clusters" in doc:
        c = doc["clusters"]
        lines.append(f"build time: {doc['build_time_s']:.4f} s")
        lines.append(f"iterations: {c['iterations']}, within-cluster score: "
                     f"{c['within_score']:.6f}")
        lines.append("cluster sizes: " + ", ".join(str(s) for s in c["sizes"]))
    else:
        lines.append(f"build time: {doc['build_time_s']:.4f} s")
        lines.append(f"rules found: {len(doc['rules'])}")
    lines.append("")
    lines.append("model:")
    lines.append(doc["model_text"])
    return "\n".join(lines)


def _parse_params(pairs):
    params = {}
    for raw in pairs or []:
        if "=" not in raw:
            raise SystemExit_(EXIT_USAGE, f"--param expects key=value, got {raw!r}")
        key, value = raw.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def _class_index_arg(value):
    # 1-based on the command line, "last" by default
    if value == "last":
        return "last"
    try:
        n = int(value)
    except ValueError:
        raise SystemExit_(EXIT_USAGE, f"--class-index expects a number or 'last', got {value!r}")
    if n < 1:
        raise SystemExit_(EXIT_USAGE, "--class-index is 1-based")
    return n - 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="arffmine",
        description="Train and evaluate data-mining models on ARFF datasets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="parse a dataset and print its summary")
    p_info.add_argument("data", help="path to an ARFF file")
    p_info.add_argument("--json", action="store_true")

    p_algos = sub.add_parser("algos", help="list available algorithms")
    p_algos.add_argument("--json", action="store_true")

    p_run = sub.add_parser("run", help="run one algorithm against a dataset")
    p_run.add_argument("--data", required=True)
    p_run.add_argument("--algo", required=True)
    p_run.add_argument("--param", action="append", metavar="KEY=VALUE")
    p_run.add_argument("--folds", type=int, default=10)
    p_run.add_argument("--seed", type=int, default=1)
    p_run.add_argument("--class-index", default="last",
                       help="1-based attribute index or 'last'")
    p_run.add_argument("--json", action="store_true")

    p_serve = sub.add_parser("serve", help="start the local run service")
    p_serve.add_argument("--port", type=int, default=8750)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data-dir", default=None,
                         help="directory of ARFF files to preload")
    return parser


def _cmd_info(args):
    summary = summarize(_load(args.data))
    if args.json:
        print(json.dumps(summary.to_dict(), indent=2))
    else:
        print(_render_summary(summary))
    return EXIT_OK


def _cmd_algos(args):
    algos = list_algorithms()
    if args.json:
        print(json.dumps(algos, indent=2))
        return EXIT_OK
    for a in algos:
        params = ", ".join(
            f"{p['name']}={p['default']}" for p in a["params"]) or "(no parameters)"
        print(f"{a['id']:16s} {a['family']:10s} {params}")
    return EXIT_OK


def _cmd_run(args):
    ds = _load(args.data)
    spec = AlgorithmSpec(
        algorithm=args.algo,
        params=_parse_params(args.param),
        seed=args.seed,
        folds=args.folds,
        class_index=_class_index_arg(getattr(args, "class_index")),
    )
    ctx = RunContext()
    previous = signal.getsignal(signal.SIGINT)

    def on_interrupt(signum, frame):
        ctx.request_cancel()

    try:
        signal.signal(signal.SIGINT, on_interrupt)
    except ValueError:
        pass    # not on the main thread (tests); cancellation still works via ctx
    try:
        doc = execute_spec(spec, ds, ctx=ctx)
    except RunCancelled:
        print("run cancelled", file=sys.stderr)
        return EXIT_INTERRUPT
    except ValidationError as exc:
        raise SystemExit_(EXIT_VALIDATION, str(exc))
    except Exception as exc:
        raise SystemExit_(EXIT_RUNTIME, f"run failed: {exc}")
    finally:
        try:
            signal.signal(signal.SIGINT, previous)
        except ValueError:
            pass

    print(json.dumps(doc, indent=2) if args.json else _render_result(doc))
    return EXIT_OK


def _cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "info":
            return _cmd_info(args)
        if args.command == "algos":
            return _cmd_algos(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_serve(args)
    except SystemExit_ as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPT


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
