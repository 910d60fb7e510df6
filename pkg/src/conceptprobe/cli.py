"""Batch front door: convert contexts, compute lattices, run probes, serve HTTP.

Exit codes: 0 success, 1 usage error, 2 data error (parse/validation),
3 enumeration overflow.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from .context import (
    ContextError,
    generate_benchmark,
    parse_csv,
    parse_cxt,
    write_csv,
    write_cxt,
)
from .lattice import (
    DEFAULT_CONCEPT_LIMIT,
    LatticeOverflowError,
    aoc_to_json,
    build_aoc,
    build_lattice,
    compute_groups,
    enumerate_concepts,
    export_dot,
    iceberg_filter,
    lattice_to_json,
)
from .probe import (
    ProbeState,
    complementary_cover,
    cover_result_to_json,
    group_to_json,
    layout,
    layout_to_json,
)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_OVERFLOW = 3


def _read_input(path):
    if path == "-":
        return sys.stdin.read(), None
    p = Path(path)
    try:
        return p.read_text(encoding="utf-8"), p.suffix.lower()
    except OSError as exc:
        raise ContextError(f"cannot read {path}: {exc}") from None


def _load_context(path, fmt):
    text, suffix = _read_input(path)
    if fmt is None:
        fmt = "csv" if suffix == ".csv" else "cxt"
    return parse_csv(text) if fmt == "csv" else parse_cxt(text)


def _emit(text, out):
    if out is None or out == "-":
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out).write_text(text, encoding="utf-8")


def _dump(payload):
    return json.dumps(payload, indent=2) + "\n"


def _build_probe(ctx, objects, weights):
    probe = ProbeState(ctx)
    for name in objects:
        probe.add_object(name)
    for name, value in weights.items():
        probe.set_weight(name, value)
    return probe


def _parse_objects(raw):
    return [s.strip() for s in raw.split(",") if s.strip()]


def _parse_weights(raw):
    weights = {}
    if not raw:
        return weights
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise click.UsageError(f"weight {part!r} must look like NAME=VALUE")
        name, value = part.split("=", 1)
        weights[name.strip()] = value.strip()
    return weights


input_option = click.option("--input", "-i", "input_path", required=True,
                            help="Context file, or '-' for stdin.")
format_option = click.option("--format", "fmt", type=click.Choice(["cxt", "csv"]),
                             default=None, help="Override extension-based sniffing.")
out_option = click.option("--out", "-o", default=None, help="Output path (default stdout).")
limit_option = click.option("--limit", type=int, default=DEFAULT_CONCEPT_LIMIT,
                            show_default=True, help="Concept enumeration ceiling.")


@click.group()
def cli():
    """Concept lattices, Galois sub-hierarchies, and probe queries."""


@cli.command("lattice")
@input_option
@format_option
@out_option
@limit_option
@click.option("--min-support", default=None, help="Iceberg threshold (e.g. 0.6 or 3/5).")
@click.option("--stats", is_flag=True, help="Print counts instead of JSON.")
@click.option("--dot", "as_dot", is_flag=True, help="Emit a DOT line diagram.")
def lattice_cmd(input_path, fmt, out, limit, min_support, stats, as_dot):
    """Enumerate all concepts and the cover relation."""
    ctx = _load_context(input_path, fmt)
    lat = build_lattice(ctx, enumerate_concepts(ctx, limit))
    if stats:
        lines = [f"concepts: {len(lat.concepts)}"]
        if min_support is not None:
            kept = iceberg_filter(lat, ctx, Fraction(min_support))
            lines.append(f"iceberg({min_support}): {len(kept)}")
        _emit("\n".join(lines) + "\n", out)
        return
    if as_dot:
        _emit(export_dot(lat, labeling="full"), out)
        return
    iceberg = None
    if min_support is not None:
        iceberg = iceberg_filter(lat, ctx, Fraction(min_support))
    _emit(_dump(lattice_to_json(lat, iceberg)), out)


@cli.command("aoc")
@input_option
@format_option
@out_option
@limit_option
@click.option("--dot", "as_dot", is_flag=True, help="Emit DOT with reduced labels.")
@click.option("--labeling", type=click.Choice(["reduced", "full"]), default="reduced",
              show_default=True)
def aoc_cmd(input_path, fmt, out, limit, as_dot, labeling):
    """Reduce the lattice to its attribute/object Galois sub-hierarchy."""
    ctx = _load_context(input_path, fmt)
    lat = build_lattice(ctx, enumerate_concepts(ctx, limit))
    aoc = build_aoc(ctx, lat)
    if as_dot:
        _emit(export_dot(aoc, labeling=labeling), out)
    else:
        _emit(_dump(aoc_to_json(aoc)), out)


@cli.command("groups")
@input_option
@format_option
@out_option
def groups_cmd(input_path, fmt, out):
    """Partition attributes into same-extent groups."""
    ctx = _load_context(input_path, fmt)
    groups = compute_groups(ctx)
    _emit(_dump({"groups": [group_to_json(ctx, g) for g in groups]}), out)


@cli.command("probe")
@input_option
@format_option
@out_option
@click.option("--objects", required=True, help="Comma-separated object names to load.")
@click.option("--weights", default="", help='Weight overrides, e.g. "Cate=0.5,Brad=1".')
def probe_cmd(input_path, fmt, out, objects, weights):
    """Layer the visible groups for a probe (layout JSON)."""
    ctx = _load_context(input_path, fmt)
    probe = _build_probe(ctx, _parse_objects(objects), _parse_weights(weights))
    groups = compute_groups(ctx)
    _emit(_dump(layout_to_json(ctx, groups, layout(ctx, probe, groups))), out)


@cli.command("covers")
@input_option
@format_option
@out_option
@click.option("--objects", required=True, help="Comma-separated object names to load.")
@click.option("--weights", default="", help="Weight overrides.")
@click.option("--max-size", type=int, default=4, show_default=True)
@click.option("--max-results", type=int, default=50, show_default=True)
def covers_cmd(input_path, fmt, out, objects, weights, max_size, max_results):
    """Minimal complementary covers of the probe by visible groups."""
    ctx = _load_context(input_path, fmt)
    probe = _build_probe(ctx, _parse_objects(objects), _parse_weights(weights))
    result = complementary_cover(ctx, probe, max_size, max_results)
    _emit(_dump(cover_result_to_json(result)), out)


@cli.command("gen-benchmark")
@out_option
@click.option("--films", type=int, required=True)
@click.option("--people", type=int, required=True)
@click.option("--trilogy/--no-trilogy", default=True, show_default=True,
              help="Give three films one shared five-person cast.")
@click.option("--seed", type=int, default=0, show_default=True)
def gen_benchmark_cmd(out, films, people, trilogy, seed):
    """Generate the synthetic film/person benchmark context."""
    ctx = generate_benchmark(films, people, trilogy=trilogy, seed=seed)
    _emit(write_cxt(ctx), out)


@cli.command("convert")
@input_option
@format_option
@out_option
@click.option("--to", "target", type=click.Choice(["cxt", "csv"]), required=True)
def convert_cmd(input_path, fmt, out, target):
    """Convert a context between the cxt and CSV formats."""
    ctx = _load_context(input_path, fmt)
    _emit(write_csv(ctx) if target == "csv" else write_cxt(ctx), out)


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8841, show_default=True)
@click.option("--data-dir", default="data", show_default=True,
              help="Directory for persisted datasets and sessions.")
@click.option("--token", default=None, help="Require 'Authorization: Bearer TOKEN'.")
@click.option("--limit", type=int, default=DEFAULT_CONCEPT_LIMIT, show_default=True)
def serve_cmd(host, port, data_dir, token, limit):
    """Run the HTTP/JSON service."""
    import uvicorn

    from .server import create_app

    app = create_app(data_dir=data_dir, token=token, concept_limit=limit)
    uvicorn.run(app, host=host, port=port)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.Abort:
        sys.exit(EXIT_USAGE)
    except LatticeOverflowError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_OVERFLOW)
    except (ContextError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA)
    sys.exit(0)


if __name__ == "__main__":
    main()
