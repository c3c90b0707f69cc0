"""Command-line interface: the `explore` tool.

Sessions persist as JSON documents holding a data reference, the seed and
the event history; every command loads the session by replaying its
history, applies one operation and writes the document back.  Display is
1-based in messages where it matters, while files and the API stay
0-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from . import german
from .errors import TilePursuitError
from .experiments import (
    ExperimentSpec,
    run_gain_matrix,
    run_scaling,
    run_stability,
    run_walkthrough,
)
from .ingestion import load_csv, make_toy
from .selection import PointSelection
from .session import Session
from .tiling import HypothesisTilings


def _resolve_data(data_ref):
    kind = data_ref.get("kind")
    if kind == "csv":
        return load_csv(
            data_ref["path"],
            manifest=data_ref.get("manifest"),
            subsample_n=data_ref.get("subsample_n"),
            seed=data_ref.get("seed", 0),
        )
    if kind == "builtin" and data_ref.get("name") == "german":
        return german.load_german(seed=data_ref.get("seed", 0), subsample_n=data_ref.get("subsample_n"))
    if kind == "builtin" and data_ref.get("name") == "toy":
        return make_toy(seed=data_ref.get("seed", 0))
    raise TilePursuitError(f"cannot resolve data reference {data_ref!r}")


def load_session(path):
    with open(path) as fh:
        doc = json.load(fh)
    data = _resolve_data(doc["data_ref"])
    session = Session.replay(data, doc["history"], seed=doc.get("seed", 0), session_id=doc.get("id"))
    return session, doc["data_ref"]


def _save(session, path, data_ref):
    session.save(path, data_ref=data_ref)


def _parse_rows(text, n):
    if text == "all":
        return list(range(n))
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return [int(r) for r in json.load(fh)]
    return [int(r) for r in text.split(",") if r.strip()]


def _parse_partition(text, cols):
    if text == "singletons":
        return None
    if text == "whole":
        return [cols]
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return [[int(c) for c in block.split(",") if c.strip()] for block in text.split(";")]


def cmd_load(args):
    if args.builtin == "german":
        data = german.load_german(seed=args.data_seed, subsample_n=args.subsample)
        data_ref = {"kind": "builtin", "name": "german", "seed": args.data_seed, "subsample_n": args.subsample}
    elif args.builtin == "toy":
        data = make_toy(seed=args.data_seed)
        data_ref = {"kind": "builtin", "name": "toy", "seed": args.data_seed}
    else:
        if not args.csv:
            raise TilePursuitError("need a CSV path or --builtin")
        data = load_csv(args.csv, manifest=args.manifest, subsample_n=args.subsample, seed=args.seed)
        data_ref = {
            "kind": "csv",
            "path": str(Path(args.csv).resolve()),
            "manifest": args.manifest,
            "subsample_n": args.subsample,
            "seed": args.seed,
        }
    session = Session(data, seed=args.seed)
    _save(session, args.out, data_ref)
    print(f"session {session.id}: {data.n_rows} rows x {data.n_cols} columns -> {args.out}")


def cmd_hypothesize(args):
    session, data_ref = load_session(args.session)
    n, m = session.data.shape
    rows = _parse_rows(args.rows, n)
    cols = _parse_rows(args.cols, m)
    partition = _parse_partition(args.partition, cols)
    session.set_hypothesis(HypothesisTilings(rows, cols, partition))
    _save(session, args.session, data_ref)
    k = len(session.hypothesis.partition)
    print(f"hypothesis set: |rows|={len(rows)} |cols|={len(cols)} k={k}")


def cmd_view(args):
    session, _ = load_session(args.session)
    view = session.compute_view(num_samples=args.samples, floor=args.floor)
    payload = view.to_json(col_names=session.data.col_names)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh)
    if args.svg:
        from .experiments import _scatter_svg

        _scatter_svg(args.svg, view, session.data, title=Path(args.session).stem)
    print(f"gain {view.gain:.4f}" + (" (degenerate)" if view.projection.degenerate else ""))


def cmd_select(args):
    session, _ = load_session(args.session)
    rows = _parse_rows(args.rows, session.data.n_rows)
    report = session.selection_report(PointSelection(rows), tau=args.tau)
    json.dump(report.to_json(), sys.stdout, indent=2)
    print()


def cmd_tile(args):
    session, data_ref = load_session(args.session)
    rows = _parse_rows(args.rows, session.data.n_rows)
    session.add_tile_from_selection(PointSelection(rows), tau=args.tau)
    _save(session, args.session, data_ref)
    event = session.history[-1]
    print(f"tile added: {len(event['rows'])} rows x {len(event['cols'])} columns "
          f"({len(session.user_map.tile_extents())} tiles total)")


def cmd_gains(args):
    session, _ = load_session(args.session)
    spec = ExperimentSpec("gains", out_dir=args.out_dir, seed=args.seed)
    table = run_gain_matrix(spec, data=session.data, external_file=args.external)
    print(table.to_frame().round(3).to_string())


def cmd_cov(args):
    session, _ = load_session(args.session)
    if args.action != "dump":
        raise TilePursuitError(f"unknown cov action {args.action!r}")
    cov = session.hypothesis_pair_covariances()
    names = session.data.col_names
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, matrix in [("sigma1", cov.sigma1), ("sigma2", cov.sigma2)]:
        path = out_dir / f"{name}.csv"
        pd.DataFrame(matrix, index=names, columns=names).to_csv(path)
        print(f"wrote {path}")


def cmd_experiment(args):
    spec = ExperimentSpec(
        args.which,
        out_dir=args.out_dir,
        seed=args.seed,
        repeats=args.repeats,
        german_csv=args.german,
    )
    if args.which == "stability":
        table = run_stability(spec)
        print(table.to_string(index=False))
    elif args.which == "scaling":
        table = run_scaling(spec)
        print(table.to_string(index=False))
    elif args.which == "gainmatrix":
        table = run_gain_matrix(spec, external_file=args.external)
        print(table.to_frame().round(3).to_string())
    elif args.which == "walkthrough":
        views = run_walkthrough(spec)
        for step, view in views.items():
            print(f"{step}: gain {view.gain:.3f}")
    print(f"outputs in {spec.out_dir}")


def cmd_serve(args):
    from .service import run_server

    ui_dir = args.ui_dir
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = str(candidate) if candidate.is_dir() else None
    print(f"serving on http://{args.host}:{args.port}" + (f" (ui from {ui_dir})" if ui_dir else ""))
    run_server(port=args.port, host=args.host, data_dir=args.data_dir, ui_dir=ui_dir)


def cmd_demo_data(args):
    frame = german.make_standin_frame(seed=args.seed)
    frame.to_csv(args.out, index=False)
    manifest_path = args.manifest or str(Path(args.out).with_suffix(".manifest.json"))
    german.write_manifest(manifest_path)
    print(f"wrote {args.out} and {manifest_path}")


def build_parser():
    parser = argparse.ArgumentParser(prog="explore", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load", help="ingest a CSV (or a builtin dataset) into a new session")
    p.add_argument("csv", nargs="?", help="CSV file with a header row")
    p.add_argument("--builtin", choices=["german", "toy"], help="use a builtin dataset instead of a CSV")
    p.add_argument("--manifest", help="JSON manifest naming numeric and categorical columns")
    p.add_argument("--subsample", type=int, default=None, help="uniform row subsample size")
    p.add_argument("--seed", type=int, default=0, help="session seed (sample overlays)")
    p.add_argument("--data-seed", type=int, default=0, help="builtin dataset generator seed")
    p.add_argument("--out", required=True, help="session JSON to create")
    p.set_defaults(func=cmd_load)

    p = sub.add_parser("hypothesize", help="set the hypothesis (focus rows, columns, partition)")
    p.add_argument("session")
    p.add_argument("--rows", default="all", help="'all', comma list, or @file.json")
    p.add_argument("--cols", default="all")
    p.add_argument("--partition", default="singletons", help="'singletons', 'whole', 'a,b;c,d' or @file.json")
    p.set_defaults(func=cmd_hypothesize)

    p = sub.add_parser("view", help="compute the most informative view")
    p.add_argument("session")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--floor", type=float, default=None)
    p.add_argument("--out", help="write the view as JSON")
    p.add_argument("--svg", help="write a scatter plot")
    p.set_defaults(func=cmd_view)

    p = sub.add_parser("select", help="spread-ratio report for a row selection")
    p.add_argument("session")
    p.add_argument("--rows", required=True)
    p.add_argument("--tau", type=float, default=0.5)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("tile", help="convert a selection into a background tile")
    p.add_argument("session")
    p.add_argument("--rows", required=True)
    p.add_argument("--tau", type=float, default=0.5)
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("gains", help="gain table of the benchmark hypothesis pairs")
    p.add_argument("session")
    p.add_argument("--external", help="JSON file of named external directions")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gains)

    p = sub.add_parser("cov", help="covariance utilities")
    p.add_argument("action", choices=["dump"])
    p.add_argument("session")
    p.add_argument("--out-dir", default="out")
    p.set_defaults(func=cmd_cov)

    p = sub.add_parser("experiment", help="run a benchmark experiment")
    p.add_argument("which", choices=["stability", "scaling", "gainmatrix", "walkthrough"])
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--german", help="path to the original German CSV (defaults to the stand-in)")
    p.add_argument("--external", help="JSON file of named external directions (gainmatrix)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", help="persist session logs here")
    p.add_argument("--ui-dir", help="static UI bundle to serve at /ui")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("demo-data", help="write the synthetic stand-in CSV and its manifest")
    p.add_argument("--out", default="german_standin.csv")
    p.add_argument("--manifest")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_demo_data)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except TilePursuitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
