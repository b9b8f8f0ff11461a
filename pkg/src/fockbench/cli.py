"""``fockbench`` command line: run scenario files, list scenario kinds.

Exit codes: 0 success, 2 configuration error, 3 empty outcome (a heralding
event of probability zero). Random draws use numpy's PCG64 generator seeded
with the scenario seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from .scenarios import KINDS, ScenarioError, run_kind

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EMPTY = 3
FORMATS = ("json", "csv")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _line_of(text: str, key: str) -> Optional[int]:
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def load_scenario(path: Path) -> tuple[dict, str]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError(f"{path}: top level must be an object")
    for key in doc:
        if key not in ("kind", "parameters", "seed", "output", "description"):
            raise _located(path, text, ScenarioError("unknown top-level key", key))
    if "kind" not in doc:
        raise _located(path, text, ScenarioError("required", "kind"))
    if doc["kind"] not in KINDS:
        raise _located(path, text, ScenarioError(f"unknown kind {doc['kind']!r}", "kind"))
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise _located(path, text, ScenarioError("expected a non-negative integer", "seed"))
    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise _located(path, text, ScenarioError("expected an object", "output"))
    if output.get("format", "json") not in FORMATS:
        raise _located(path, text, ScenarioError(f"expected one of {FORMATS}", "output.format"))
    return doc, text


def _located(path: Path, text: str, exc: ScenarioError) -> ScenarioError:
    line = _line_of(text, exc.field.split(".")[-1]) if exc.field else None
    return ScenarioError(f"{path}:{line}: {exc}" if line else f"{path}: {exc}")


def _clean(value):
    """JSON-safe copy: non-finite floats become strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.12g" % value
    if isinstance(value, (list, tuple)):
        return "[" + " ".join(_csv_cell(v) for v in value) + "]"
    return str(value)


def render(fmt: str, document: dict) -> str:
    if fmt == "json":
        return json.dumps(_clean(document), sort_keys=True, indent=2) + "\n"
    rows = document["rows"]
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row.get(k)) for k in header])
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_run(args) -> int:
    path = Path(args.file)
    try:
        doc, text = load_scenario(path)
        output = doc.get("output", {})
        fmt = args.format or output.get("format", "json")
        out_path = Path(args.out or output.get("path") or f"{path.stem}.{fmt}")
        seed = args.seed if args.seed is not None else doc.get("seed", 0)
        try:
            params, result, elapsed = run_kind(doc["kind"], doc.get("parameters", {}), seed)
        except ScenarioError as exc:
            raise _located(path, text, exc) from exc
    except ScenarioError as exc:
        print(f"fockbench: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if result.empty:
        print(f"fockbench: empty outcome: {result.summary}", file=sys.stderr)
        return EXIT_EMPTY
    document = {"kind": doc["kind"], "seed": seed, "parameters": params, "summary": result.summary, "rows": result.rows}
    document.update(result.extra)
    write_atomic(out_path, render(fmt, document))
    print(f"{result.summary} [{elapsed:.2f} s] -> {out_path}")
    return EXIT_OK


def schema() -> dict:
    return {
        name: {
            "help": kind.help,
            "parameters": [
                {"name": p.name, "type": p.type, "required": p.required, "default": p.default, "help": p.help}
                for p in kind.params
            ],
        }
        for name, kind in KINDS.items()
    }


def cmd_list(args) -> int:
    if args.format == "json":
        print(json.dumps(_clean(schema()), sort_keys=True, indent=2))
        return EXIT_OK
    for name, kind in KINDS.items():
        print(f"{name}: {kind.help}")
        for p in kind.params:
            flag = "required" if p.required else f"default {p.default!r}"
            extra = f"  {p.help}" if p.help else ""
            print(f"    {p.name} ({p.type}, {flag}){extra}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockbench", description="Linear-optics Fock-space scenarios.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("file")
    run.add_argument("--out", help="output path (overrides the scenario)")
    run.add_argument("--format", choices=FORMATS, help="output format (overrides the scenario)")
    run.add_argument("--seed", type=int, help="seed (overrides the scenario)")
    run.set_defaults(func=cmd_run)
    lst = sub.add_parser("list", help="list scenario kinds and parameters")
    lst.add_argument("--format", choices=("text", "json"), default="text")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
