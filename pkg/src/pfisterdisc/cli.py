"""Thin command-line client over the service handlers.

Commands mirror the HTTP endpoints one-to-one and print canonical JSON.
Exit codes: 0 on success, 2 on NOT_FOUND / UNDECIDED outcomes, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .jsonio import canonical_dumps
from .service import (
    USER_ERRORS,
    handle_analyze,
    handle_basechange,
    handle_crosscheck,
    handle_decide,
    handle_decompose,
    handle_pfister,
    handle_selftest,
    handle_verify,
)


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _apply_options(spec: dict, args) -> dict:
    opts = dict(spec.get("options", {}))
    if args.height_bound is not None:
        opts["height_bound"] = args.height_bound
    if args.seed is not None:
        opts["seed"] = args.seed
    if opts:
        spec = dict(spec)
        spec["options"] = opts
    return spec


def _emit(report: dict, args) -> None:
    text = canonical_dumps(report, pretty=not args.compact)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pfisterdisc",
        description="Discriminant Pfister forms and quaternion tensor "
                    "decompositions of algebras with involution of capacity 4",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_instance=True):
        if with_instance:
            p.add_argument("instance", help="path to an instance JSON file")
        p.add_argument("--height-bound", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--json-out", default=None)
        p.add_argument("--compact", action="store_true",
                       help="single-line canonical JSON output")

    for name in ("analyze", "pfister", "decide", "decompose", "crosscheck"):
        add_common(sub.add_parser(name))
    p_verify = sub.add_parser("verify")
    add_common(p_verify)
    p_verify.add_argument("certificate", help="path to a certificate JSON file")
    p_base = sub.add_parser("basechange")
    add_common(p_base)
    p_base.add_argument("--d", type=int, required=True,
                        help="square-free integer to adjoin as a square root")
    p_self = sub.add_parser("selftest")
    add_common(p_self, with_instance=False)
    p_self.add_argument("--jobs", type=int, default=1)
    p_self.add_argument("--full", action="store_true",
                        help="run the whole built-in corpus")
    p_serve = sub.add_parser("serve", help="run the HTTP service (needs uvicorn)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)

    if args.command == "serve":
        try:
            import uvicorn
        except ImportError:
            print("uvicorn is not installed; pip install pfisterdisc[serve]",
                  file=sys.stderr)
            return 1
        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        if args.command == "selftest":
            report = handle_selftest(jobs=args.jobs, full=args.full)
            _emit(report, args)
            return 0 if report["passed"] else 1
        spec = _apply_options(_load(args.instance), args)
        if args.command == "analyze":
            report = handle_analyze(spec)
        elif args.command == "pfister":
            report = handle_pfister(spec)
        elif args.command == "decide":
            report = handle_decide(spec)
        elif args.command == "decompose":
            report = handle_decompose(spec)
            _emit(report, args)
            return 0 if report["found"] else 2
        elif args.command == "crosscheck":
            report = handle_crosscheck(spec)
        elif args.command == "verify":
            report = handle_verify(spec, _load(args.certificate))
        elif args.command == "basechange":
            report = handle_basechange(spec, args.d)
            _emit(report, args)
            return 0 if report.get("hyperbolic_over_extension") != "UNDECIDED" else 2
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
        _emit(report, args)
        return 0
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
