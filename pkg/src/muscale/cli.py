"""Batch and operator entry point.

Subcommands:
    analyze       scale/cluster/fluency report for documents (json or csv)
    annotate      render the annotated SVG for one document
    generate      emit synthetic documents with ground-truth side files
    serve         run the dashboard service
    print-schema  print the document JSON schema

Exit codes: 0 success, 2 validation failures, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .annotator import RenderOptions, UnknownCluster, build_overlay, render_svg
from .canonical import canonical_json_bytes
from .model import DocumentError, ffwc_schema, parse_document, serialize_document
from .recognizer import RecognizerConfig, build_hierarchy, compute_analytics
from .service.config import resolve_config
from .synthgen import (
    GenSpec,
    InfeasibleSpec,
    nested_triads_spec,
    broad_middle_spec,
    generate,
    generate_unconstrained,
)

CSV_HEADER = "path,hash,scales,clusters,clusters_per_scale,elements,words,images"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2


def _recognizer_config(args) -> RecognizerConfig:
    service = resolve_config(zoom_step=args.zoom_step, expansion=args.expansion)
    return service.recognizer_config()


def _maybe_print_config(args, extra: dict | None = None) -> bool:
    if getattr(args, "print_config", False):
        cfg = resolve_config(
            port=getattr(args, "port", None),
            data_dir=getattr(args, "data_dir", None),
            zoom_step=getattr(args, "zoom_step", None),
            expansion=getattr(args, "expansion", None),
        )
        merged = {**cfg.to_json_dict(), **(extra or {})}
        sys.stdout.write(canonical_json_bytes(merged).decode() + "\n")
        return True
    return False


def _collect_paths(paths: list[str]) -> list[Path]:
    """Files as given; directories recursively, skipping ground-truth side
    files. Deterministic sorted order."""
    out: list[Path] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            out.extend(
                f for f in path.rglob("*.json") if not f.name.endswith(".truth.json")
            )
        else:
            out.append(path)
    return sorted(set(out))


def cmd_analyze(args) -> int:
    if _maybe_print_config(args, {"format": args.format}):
        return EXIT_OK
    cfg = _recognizer_config(args)
    files = _collect_paths(args.paths)
    if not files:
        print("no input files", file=sys.stderr)
        return EXIT_VALIDATION

    def analyze_one(path: Path):
        try:
            doc = parse_document(path.read_bytes())
        except (OSError, DocumentError) as exc:
            return path, None, exc
        return path, compute_analytics(doc, cfg), None

    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
        results = list(pool.map(analyze_one, files))

    failed = 0
    rows = []
    for path, record, error in results:
        if error is not None:
            failed += 1
            print(f"{path}: {error}", file=sys.stderr)
            continue
        rows.append((path, record))

    if args.format == "csv":
        print(CSV_HEADER)
        for path, r in rows:
            per_scale = "|".join(str(n) for n in r.clusters_per_scale)
            print(
                f"{path},{r.content_hash},{r.num_scales},{r.num_clusters},"
                f"{per_scale},{r.fluency.element_count},{r.fluency.word_count},"
                f"{r.fluency.image_count}"
            )
    else:
        payload = [
            {"path": str(path), "analytics": r.to_json_dict()} for path, r in rows
        ]
        sys.stdout.write(canonical_json_bytes(payload).decode() + "\n")
    return EXIT_VALIDATION if failed else EXIT_OK


def cmd_annotate(args) -> int:
    if _maybe_print_config(args):
        return EXIT_OK
    cfg = _recognizer_config(args)
    try:
        doc = parse_document(Path(args.path).read_bytes())
        overlay = build_overlay(doc, build_hierarchy(doc, cfg))
        svg = render_svg(
            doc,
            overlay,
            RenderOptions(animated=args.animated, highlight_cluster=args.highlight_cluster),
        )
    except (OSError, DocumentError, UnknownCluster) as exc:
        print(f"{args.path}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    Path(args.output).write_bytes(svg)
    return EXIT_OK


def cmd_generate(args) -> int:
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        if args.no_margins:
            seed = args.seed if args.seed is not None else 0
            doc = generate_unconstrained(seed, args.elements)
            stem = out_dir / f"scatter-{seed}"
            (stem.with_suffix(".json")).write_bytes(serialize_document(doc) + b"\n")
            print(stem.with_suffix(".json"))
            return EXIT_OK

        if args.preset == "nested-triads":
            spec = nested_triads_spec()
        elif args.preset == "broad-middle":
            spec = broad_middle_spec()
        elif args.spec:
            spec = GenSpec.from_json_dict(json.loads(Path(args.spec).read_text()))
        else:
            print("generate needs --spec or --preset", file=sys.stderr)
            return EXIT_VALIDATION
        if args.seed is not None:
            spec = replace(spec, seed=args.seed)
        doc, truth = generate(spec)
    except (InfeasibleSpec, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"generate: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    stem = out_dir / f"synth-{spec.seed}"
    doc_path = stem.with_suffix(".json")
    truth_path = Path(str(stem) + ".truth.json")
    doc_path.write_bytes(serialize_document(doc) + b"\n")
    truth_path.write_bytes(canonical_json_bytes(truth.to_json_dict()) + b"\n")
    print(doc_path)
    print(truth_path)
    return EXIT_OK


def cmd_serve(args) -> int:
    if _maybe_print_config(args):
        return EXIT_OK
    import uvicorn

    from .service import create_app

    cfg = resolve_config(
        port=args.port,
        data_dir=args.data_dir,
        zoom_step=args.zoom_step,
        expansion=args.expansion,
    )
    app = create_app(cfg, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=cfg.port, log_level="warning")
    return EXIT_OK


def cmd_print_schema(args) -> int:
    sys.stdout.write(json.dumps(ffwc_schema(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muscale", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_recognizer_flags(p):
        p.add_argument("--zoom-step", type=float, default=None)
        p.add_argument("--expansion", type=float, default=None)
        p.add_argument("--print-config", action="store_true")

    p = sub.add_parser("analyze", help="report scale/cluster analytics for documents")
    p.add_argument("paths", nargs="+")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    add_recognizer_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("annotate", help="render annotated SVG for one document")
    p.add_argument("path")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--animated", action="store_true")
    p.add_argument("--highlight-cluster", type=int, default=None)
    add_recognizer_flags(p)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("generate", help="emit synthetic documents with ground truth")
    p.add_argument("--spec", help="GenSpec JSON file")
    p.add_argument("--preset", choices=("nested-triads", "broad-middle"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--no-margins", action="store_true", help="unguaranteed scatter")
    p.add_argument("--elements", type=int, default=100, help="scatter element count")
    p.add_argument("-o", "--output-dir", default=".")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="run the dashboard service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data-dir", default=None)
    p.add_argument("--ui-dir", default=None)
    add_recognizer_flags(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("print-schema", help="print the document JSON schema")
    p.set_defaults(func=cmd_print_schema)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
