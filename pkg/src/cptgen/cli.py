"""Command-line interface.

Verbs: validate, generate, verify, questions, serve. Exit codes are a
stable contract: 0 success, 1 validation failure, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .document import DocumentError, ElicitationDocument, load_document
from .elicit import distinct_anchor_count
from .engine import generate_cpt
from .export import FORMATS, export_cpt, import_cpt
from .model import ValidationError
from .verify import verify_generation, verify_rows

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2


def _load(path: str, lenient: bool) -> ElicitationDocument:
    return load_document(Path(path).read_bytes(), strict=not lenient)


def _print_load_error(exc: Exception) -> None:
    if isinstance(exc, ValidationError):
        for v in exc.violations:
            print(f"error[{v.code}] {v.where}: {v.message}", file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        doc = _load(args.document, args.lenient)
    except (DocumentError, ValidationError, OSError) as exc:
        _print_load_error(exc)
        return EXIT_VALIDATION
    spec = doc.spec
    print(f"OK: {spec.child_name} with {len(spec.parents)} parent(s); "
          f"{distinct_anchor_count(doc.compat)} anchor(s) generate "
          f"{spec.row_count} row(s)")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        doc = _load(args.document, args.lenient)
    except (DocumentError, ValidationError, OSError) as exc:
        _print_load_error(exc)
        return EXIT_VALIDATION
    result = generate_cpt(doc.spec, doc.anchor_set)
    data = export_cpt(result, args.format)
    if args.out:
        Path(args.out).write_bytes(data)
        print(f"wrote {len(result.cpt.rows)} rows to {args.out}")
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        doc = _load(args.document, args.lenient)
    except (DocumentError, ValidationError, OSError) as exc:
        _print_load_error(exc)
        return EXIT_VALIDATION
    if args.cpt:
        try:
            table = import_cpt(Path(args.cpt).read_bytes())
        except Exception as exc:
            print(f"error: cannot read table {args.cpt}: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        report = verify_rows(doc.spec, doc.anchor_set, table)
    else:
        report = verify_generation(doc.spec, doc.anchor_set)
    for line in report.summary_lines():
        print(line)
    if report.ok:
        print("VERIFY OK")
        return EXIT_OK
    print("VERIFY FAILED")
    return EXIT_VERIFICATION


def cmd_questions(args: argparse.Namespace) -> int:
    try:
        doc = _load(args.document, args.lenient)
    except (DocumentError, ValidationError, OSError) as exc:
        _print_load_error(exc)
        return EXIT_VALIDATION
    spec = doc.spec
    compat = doc.compat
    image = compat.image()
    print(f"{len(image)} distribution(s) to elicit "
          f"(instead of {spec.row_count}, one per table row):")
    order = {
        (p.name, s): (i, j)
        for i, p in enumerate(spec.parents) for j, s in enumerate(p.states)
    }
    for n, config in enumerate(
        sorted(image, key=lambda c: c.sort_key(spec)), start=1
    ):
        keys = sorted(compat.keys_for(config), key=lambda k: order[k])
        covered = ", ".join(f"{p}={s}" for p, s in keys)
        print(f"  {n}. p({spec.child_name} | {config.describe(spec)})"
              f"   [covers {covered}]")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    try:
        serve(args.document, host=args.host, port=args.port,
              strict=not args.lenient)
    except (DocumentError, ValidationError, OSError) as exc:
        _print_load_error(exc)
        return EXIT_VALIDATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cptgen",
        description="Generate, verify, and serve conditional probability "
                    "tables built from weighted anchor distributions.",
    )
    parser.add_argument("--lenient", action="store_true",
                        help="preserve unknown document fields instead of rejecting them")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document and report violations")
    p.add_argument("document")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="generate the full table")
    p.add_argument("document")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify",
                       help="hull-membership and flatness checks on all rows")
    p.add_argument("document")
    p.add_argument("--cpt", help="verify this exported JSON table instead of "
                                 "regenerating")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("questions",
                       help="list the distributions the expert must supply")
    p.add_argument("document")
    p.set_defaults(func=cmd_questions)

    p = sub.add_parser("serve", help="run the what-if HTTP service")
    p.add_argument("document")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
