"""Command-line interface.

Subcommands: gen-graph, mst, ln-experiment, fmsf-census, verify.

Exit codes: 0 success, 2 usage error, 3 input format error, 4 capacity error,
5 internal invariant violation. An interrupted experiment flushes the records
collected so far plus a truncation marker line and exits 130.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from ._version import __version__
from .errors import CapacityError, ContractError, DisconnectedError, EdgeListFormatError
from .experiments import census_experiment, tightness_experiment
from .forests import kruskal_mst
from .graphs import (
    Graph,
    GraphMeta,
    RootedTreeSpec,
    build_grid_box,
    build_rooted_tree,
    direct_product,
    read_edge_list,
    write_edge_list,
)
from .labels import EdgeLabeling, parse_seed
from .manifest import MANIFEST_NAME, RunManifest, file_digest64, verify_outputs, write_manifest

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_CAPACITY = 4
EXIT_INTERNAL = 5
EXIT_INTERRUPTED = 130


class UsageError(ValueError):
    """Bad parameter combination discovered after argument parsing."""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in str(text).split(",") if part.strip() != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _load_config(path) -> dict:
    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise EdgeListFormatError(path, 0, f"cannot read config: {exc}")
    except tomllib.TOMLDecodeError as exc:
        raise EdgeListFormatError(path, 0, f"bad TOML: {exc}")


class _Options:
    """Merged view of CLI arguments over config-file values.

    Command-line values win; config supplies the rest; missing required
    options raise UsageError. Unknown config keys are rejected.
    """

    def __init__(self, args, allowed: set[str]):
        self.args = args
        self.config = {}
        if getattr(args, "config", None):
            self.config = _load_config(args.config)
            unknown = set(self.config) - allowed
            if unknown:
                raise UsageError(f"unknown config keys: {sorted(unknown)}")

    def get(self, name, default=None, required=False):
        value = getattr(self.args, name, None)
        if value is None:
            value = self.config.get(name)
        if value is None:
            if required:
                raise UsageError(f"missing required option --{name.replace('_', '-')}")
            return default
        return value

    def get_int(self, name, default=None, required=False):
        value = self.get(name, default, required)
        if value is None:
            return None
        try:
            return int(value)
        except (TypeError, ValueError):
            raise UsageError(f"option {name} must be an integer, got {value!r}")

    def get_int_list(self, name, default=None, required=False):
        value = self.get(name, default, required)
        if value is None:
            return None
        if isinstance(value, str):
            return _int_list(value)
        if isinstance(value, int):
            return [value]
        return [int(v) for v in value]

    def get_seed(self, required=True) -> tuple[int, str]:
        """Returns (parsed value, verbatim text) of the master seed."""
        value = self.get("seed", required=required)
        text = str(value)
        try:
            return parse_seed(text), text
        except ValueError as exc:
            raise UsageError(str(exc))


def _manifest_for(argv, seed_text, parameters, started, outputs_dir, output_names) -> RunManifest:
    outputs = {name: file_digest64(Path(outputs_dir) / name) for name in output_names}
    return RunManifest(
        command=["mstlab", *argv],
        seed=seed_text,
        parameters=parameters,
        started_at=started,
        finished_at=_now(),
        outputs=outputs,
    )


def cmd_gen_graph(args) -> int:
    started = _now()
    if args.kind == "rooted-tree":
        if args.d is None or args.n is None:
            raise UsageError("rooted-tree requires --d and --n")
        g = build_rooted_tree(RootedTreeSpec(args.d, args.n))
        parameters = {"kind": args.kind, "d": args.d, "n": args.n}
    elif args.kind == "grid":
        if args.width is None or args.height is None:
            raise UsageError("grid requires --width and --height")
        g = build_grid_box(args.width, args.height)
        parameters = {"kind": args.kind, "width": args.width, "height": args.height}
    else:  # product
        if args.left is None or args.right is None:
            raise UsageError("product requires --left and --right")
        g = direct_product(read_edge_list(args.left), read_edge_list(args.right))
        parameters = {"kind": args.kind, "left": args.left, "right": args.right}

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_edge_list(g, out)
    manifest = _manifest_for(args.raw_argv, "", parameters, started, out.parent, [out.name])
    write_manifest(manifest, str(out) + ".manifest.json")
    print(f"wrote {out} ({g.vertex_count} vertices, {g.edge_count} edges)")
    return EXIT_OK


def cmd_mst(args) -> int:
    started = _now()
    seed_value = parse_seed(args.seed)
    g = read_edge_list(args.graph)
    labeling = EdgeLabeling(seed_value)
    tree = kruskal_mst(g, labeling, strict=args.require_spanning)
    if not tree.spanning:
        print("input graph is disconnected; wrote a spanning forest", file=sys.stderr)
    edges = sorted(tree.edges)
    total = math.fsum(labeling.label(e) for e in edges)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    forest_graph = Graph(g.vertex_count, edges, GraphMeta(f"mst({g.describe()})"))
    write_edge_list(forest_graph, out, extra_header_lines=[f"total_label={total:.17g}"])
    manifest = _manifest_for(
        args.raw_argv,
        args.seed,
        {"graph": args.graph, "require_spanning": args.require_spanning},
        started,
        out.parent,
        [out.name],
    )
    write_manifest(manifest, str(out) + ".manifest.json")
    print(f"wrote {out} ({len(edges)} edges, total_label={total:.17g})")
    return EXIT_OK


def _run_experiment(args, allowed_keys, build_runner):
    """Shared driver: stream records to trials.jsonl, then write report + manifest."""
    opts = _Options(args, allowed_keys)
    out_dir = Path(opts.get("out", required=True))
    out_dir.mkdir(parents=True, exist_ok=True)
    started = _now()
    runner, parameters, seed_text = build_runner(opts)

    trials_path = out_dir / "trials.jsonl"
    try:
        with open(trials_path, "w", newline="\n") as fh:
            try:
                report = runner(lambda record: fh.write(record.json_line() + "\n"))
            except KeyboardInterrupt:
                fh.write('{"truncated":true}\n')
                raise
    except KeyboardInterrupt:
        manifest = _manifest_for(
            args.raw_argv,
            seed_text,
            {**parameters, "truncated": True},
            started,
            out_dir,
            ["trials.jsonl"],
        )
        write_manifest(manifest, out_dir / MANIFEST_NAME)
        print("interrupted; partial trials flushed with truncation marker", file=sys.stderr)
        return EXIT_INTERRUPTED

    with open(out_dir / "report.json", "w", newline="\n") as fh:
        json.dump(report.to_json_obj(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out_dir / "report.csv", "w", newline="") as fh:
        csv.writer(fh).writerows(report.csv_rows())

    manifest = _manifest_for(
        args.raw_argv,
        seed_text,
        parameters,
        started,
        out_dir,
        ["trials.jsonl", "report.json", "report.csv"],
    )
    write_manifest(manifest, out_dir / MANIFEST_NAME)
    print(f"wrote {out_dir}/trials.jsonl, report.json, report.csv, {MANIFEST_NAME}")
    return EXIT_OK


_LN_KEYS = {"d", "b", "n_list", "trials", "seed", "out", "workers", "probes"}


def cmd_ln_experiment(args) -> int:
    def build(opts):
        d = opts.get_int("d", required=True)
        b = opts.get_int("b", required=True)
        n_list = opts.get_int_list("n_list", required=True)
        trials = opts.get_int("trials", required=True)
        seed_value, seed_text = opts.get_seed()
        workers = opts.get_int("workers")
        probes = opts.get_int_list("probes")
        parameters = {
            "d": d,
            "b": b,
            "n_list": n_list,
            "trials": trials,
            "workers": workers,
            "probes": probes,
        }

        def runner(on_record):
            return tightness_experiment(
                d, b, n_list, trials, seed_value,
                probes=probes, workers=workers, on_record=on_record,
            )

        return runner, parameters, seed_text

    return _run_experiment(args, _LN_KEYS, build)


_CENSUS_KEYS = {"family", "d", "b", "sizes", "seeds", "seed", "margin", "out", "workers"}


def cmd_fmsf_census(args) -> int:
    def build(opts):
        family = opts.get("family", required=True)
        sizes = opts.get_int_list("sizes", required=True)
        seeds = opts.get_int("seeds", required=True)
        margin = opts.get_int("margin", default=2)
        d = opts.get_int("d", default=3)
        b = opts.get_int("b", default=3)
        seed_value, seed_text = opts.get_seed()
        workers = opts.get_int("workers")
        parameters = {
            "family": family,
            "sizes": sizes,
            "seeds": seeds,
            "margin": margin,
            "d": d,
            "b": b,
            "workers": workers,
        }

        def runner(on_record):
            return census_experiment(
                family, sizes, seeds, seed_value,
                d=d, b=b, margin=margin, workers=workers, on_record=on_record,
            )

        return runner, parameters, seed_text

    return _run_experiment(args, _CENSUS_KEYS, build)


def cmd_verify(args) -> int:
    path = Path(args.path)
    manifest_path = path / MANIFEST_NAME if path.is_dir() else path
    if not manifest_path.is_file():
        raise EdgeListFormatError(manifest_path, 0, "manifest not found")
    try:
        results = verify_outputs(manifest_path)
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise EdgeListFormatError(manifest_path, 0, f"bad manifest: {exc}")
    ok = True
    for rel, expected, actual in results:
        if actual is None:
            print(f"MISSING  {rel} (expected {expected})")
            ok = False
        elif actual != expected:
            print(f"MISMATCH {rel} expected {expected} got {actual}")
            ok = False
        else:
            print(f"OK       {rel} {expected}")
    return EXIT_OK if ok else EXIT_FORMAT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mstlab",
        description="Spanning trees/forests on product graphs with reproducible labels",
    )
    parser.add_argument("--version", action="version", version=f"mstlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a graph edge-list file")
    p.add_argument("kind", choices=["rooted-tree", "grid", "product"])
    p.add_argument("--d", type=int, help="tree degree (rooted-tree)")
    p.add_argument("--n", type=int, help="tree depth (rooted-tree)")
    p.add_argument("--width", type=int, help="grid width")
    p.add_argument("--height", type=int, help="grid height")
    p.add_argument("--left", help="edge-list file for the left factor (product)")
    p.add_argument("--right", help="edge-list file for the right factor (product)")
    p.add_argument("--out", required=True, help="output edge-list path")
    p.set_defaults(func=cmd_gen_graph)

    p = sub.add_parser("mst", help="minimal spanning tree/forest of an edge-list file")
    p.add_argument("--graph", required=True, help="input edge-list path")
    p.add_argument("--seed", required=True, help="label seed, decimal or 0x-hex")
    p.add_argument("--out", required=True, help="output edge-list path")
    p.add_argument(
        "--require-spanning",
        action="store_true",
        help="fail instead of writing a forest when the input is disconnected",
    )
    p.set_defaults(func=cmd_mst)

    p = sub.add_parser("ln-experiment", help="root-neighbor distance-sum experiment")
    p.add_argument("--d", type=int, help="left tree degree")
    p.add_argument("--b", type=int, help="right tree degree")
    p.add_argument("--n-list", dest="n_list", help="comma-separated depths, e.g. 2,3,4")
    p.add_argument("--trials", type=int, help="trials per depth")
    p.add_argument("--seed", help="master seed, decimal or 0x-hex")
    p.add_argument("--probes", help="comma-separated CDF thresholds (default: quantiles)")
    p.add_argument("--workers", type=int, help="worker processes (default: CPU count)")
    p.add_argument("--config", help="TOML config supplying defaults for these options")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_ln_experiment)

    p = sub.add_parser("fmsf-census", help="window census of certified forest components")
    p.add_argument("--family", choices=["tree-product", "grid"])
    p.add_argument("--d", type=int, help="left tree degree (tree-product)")
    p.add_argument("--b", type=int, help="right tree degree (tree-product)")
    p.add_argument("--sizes", help="comma-separated window sizes (radii or box sides)")
    p.add_argument("--seeds", type=int, help="number of matched seeds per size")
    p.add_argument("--margin", type=int, help="core margin from the boundary (default 2)")
    p.add_argument("--seed", help="master seed, decimal or 0x-hex")
    p.add_argument("--workers", type=int, help="worker processes (default: CPU count)")
    p.add_argument("--config", help="TOML config supplying defaults for these options")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_fmsf_census)

    p = sub.add_parser("verify", help="re-check output digests against a manifest")
    p.add_argument("path", help="manifest file or directory containing manifest.json")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    args.raw_argv = list(argv)
    try:
        return args.func(args)
    except EdgeListFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ValueError, ContractError, DisconnectedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
