"""Command-line entry point.

Three subcommands:

  point        one (params, T) evaluation; prints the entanglement value
  sweep        full grid over a coupling cut x temperatures x sizes
  extrapolate  fit prior multi-size sweep output against 1/N

Run configurations are JSON or YAML documents holding the physics
payload (couplings, fields, temperatures, sizes); operational knobs
(output path, format, workers, cache) are command-line flags.  Unknown
config keys are hard errors.

Exit codes: 0 success, 2 configuration error, 3 sweep finished with
error rows, 4 I/O failure.
"""

import argparse
import csv
import dataclasses
import json
import sys
import time

import yaml

from . import __version__
from .model import FieldPattern, FieldSpec, ModelParams, DEFAULT_MAX_SITES, build_hamiltonian
from .entanglement import logarithmic_negativity
from .observables import compute_observables
from .spectra import cached_diagonalize
from .sweep import (
    CutKind,
    STATUS_OK,
    SweepRow,
    SweepSpec,
    extrapolate,
    run_sweep,
)
from .thermal import thermal_density_matrix

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3
EXIT_IO = 4

BASE_COLUMNS = [
    "n_sites",
    "j_spin",
    "i_pseudo",
    "k_coupling",
    "field_s_mag",
    "field_s_pattern",
    "field_t_mag",
    "field_t_pattern",
    "temperature",
    "log_negativity",
    "trace_norm",
    "ground_energy",
    "ground_degeneracy",
]
OBSERVABLE_COLUMNS = ["ss_bond_mean", "tt_bond_mean", "sstt_bond_mean", "mag_s", "mag_t"]
TAIL_COLUMNS = ["wall_time_ms", "status"]

EXTRAPOLATION_COLUMNS = [
    "j_spin",
    "i_pseudo",
    "k_coupling",
    "field_s_mag",
    "field_s_pattern",
    "field_t_mag",
    "field_t_pattern",
    "temperature",
    "intercept",
    "slope",
    "residual",
    "n_points",
]


class ConfigError(Exception):
    """Invalid run configuration; the message names the offending key."""


@dataclasses.dataclass(frozen=True)
class RunConfig:
    mode: str
    point_params: ModelParams | None = None
    point_temperature: float | None = None
    sweep_spec: SweepSpec | None = None
    extrapolate_input: str | None = None
    output_path: str | None = None
    output_format: str = "csv"
    worker_budget: int = 1
    include_observables: bool = False
    cache_dir: str | None = None


def _require_keys(doc: dict, allowed: set[str], context: str) -> None:
    for key in doc:
        if key not in allowed:
            raise ConfigError(
                f"unknown key {key!r} in {context}; allowed keys: {sorted(allowed)}"
            )


def _numeric(doc: dict, key: str, context: str, default=None, required=False):
    if key not in doc:
        if required:
            raise ConfigError(f"missing required key {key!r} in {context}")
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r} in {context} must be a number, got {value!r}")
    return float(value)


def _parse_field(doc, context: str) -> FieldSpec:
    if doc is None:
        return FieldSpec.off()
    if not isinstance(doc, dict):
        raise ConfigError(f"{context} must be a mapping with magnitude/pattern")
    _require_keys(doc, {"magnitude", "pattern"}, context)
    magnitude = _numeric(doc, "magnitude", context, default=0.0)
    pattern = doc.get("pattern", "off")
    try:
        return FieldSpec(magnitude=magnitude, pattern=FieldPattern(pattern))
    except ValueError as exc:
        raise ConfigError(f"invalid {context}: {exc}") from exc


def _parse_point(doc: dict, max_sites: int) -> RunConfig:
    allowed = {
        "mode", "n_sites", "j_spin", "i_pseudo", "k_coupling",
        "temperature", "field_spin", "field_pseudo",
    }
    _require_keys(doc, allowed, "point config")
    n_sites = doc.get("n_sites")
    if not isinstance(n_sites, int) or isinstance(n_sites, bool):
        raise ConfigError(f"key 'n_sites' must be an integer, got {n_sites!r}")
    temperature = _numeric(doc, "temperature", "point config", required=True)
    if temperature < 0:
        raise ConfigError(f"key 'temperature' must be >= 0, got {temperature}")
    try:
        params = ModelParams(
            n_sites=n_sites,
            j_spin=_numeric(doc, "j_spin", "point config", default=0.0),
            i_pseudo=_numeric(doc, "i_pseudo", "point config", default=0.0),
            k_coupling=_numeric(doc, "k_coupling", "point config", required=True),
            field_spin=_parse_field(doc.get("field_spin"), "field_spin"),
            field_pseudo=_parse_field(doc.get("field_pseudo"), "field_pseudo"),
            max_sites=max_sites,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(mode="point", point_params=params, point_temperature=temperature)


def _parse_sweep(doc: dict, max_sites: int) -> RunConfig:
    allowed = {
        "mode", "cut", "k_coupling", "temperatures", "n_sites",
        "range", "explicit_points", "field_spin", "field_pseudo",
    }
    _require_keys(doc, allowed, "sweep config")
    if "cut" not in doc:
        raise ConfigError("missing required key 'cut' in sweep config")
    try:
        cut = CutKind(doc["cut"])
    except ValueError as exc:
        raise ConfigError(
            f"key 'cut' must be one of {[c.value for c in CutKind]}, got {doc['cut']!r}"
        ) from exc

    temperatures = doc.get("temperatures")
    if not isinstance(temperatures, list) or not temperatures:
        raise ConfigError("key 'temperatures' must be a non-empty list")

    n_sites = doc.get("n_sites")
    if isinstance(n_sites, int) and not isinstance(n_sites, bool):
        n_list = [n_sites]
    elif isinstance(n_sites, list) and n_sites:
        n_list = n_sites
    else:
        raise ConfigError("key 'n_sites' must be an integer or non-empty list of integers")
    for n in n_list:
        if not isinstance(n, int) or isinstance(n, bool):
            raise ConfigError(f"every n_sites entry must be an integer, got {n!r}")

    range_lo = range_hi = range_points = None
    if "range" in doc:
        range_doc = doc["range"]
        if not isinstance(range_doc, dict):
            raise ConfigError("key 'range' must be a mapping with lo/hi/points")
        _require_keys(range_doc, {"lo", "hi", "points"}, "range")
        range_lo = _numeric(range_doc, "lo", "range", required=True)
        range_hi = _numeric(range_doc, "hi", "range", required=True)
        points = range_doc.get("points")
        if not isinstance(points, int) or isinstance(points, bool):
            raise ConfigError(f"key 'points' in range must be an integer, got {points!r}")
        range_points = points

    explicit = None
    if "explicit_points" in doc:
        raw = doc["explicit_points"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("key 'explicit_points' must be a non-empty list of [j, i] pairs")
        explicit = []
        for entry in raw:
            if not isinstance(entry, list) or len(entry) != 2:
                raise ConfigError(f"explicit_points entries must be [j, i] pairs, got {entry!r}")
            explicit.append((float(entry[0]), float(entry[1])))

    try:
        spec = SweepSpec(
            cut=cut,
            k_coupling=_numeric(doc, "k_coupling", "sweep config", required=True),
            temperatures=tuple(float(t) for t in temperatures),
            n_sites_list=tuple(n_list),
            range_lo=range_lo,
            range_hi=range_hi,
            range_points=range_points,
            explicit_points=tuple(explicit) if explicit else None,
            field_spin=_parse_field(doc.get("field_spin"), "field_spin"),
            field_pseudo=_parse_field(doc.get("field_pseudo"), "field_pseudo"),
            max_sites=max_sites,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(mode="sweep", sweep_spec=spec)


def _parse_extrapolate(doc: dict) -> RunConfig:
    _require_keys(doc, {"mode", "input"}, "extrapolate config")
    path = doc.get("input")
    if not isinstance(path, str) or not path:
        raise ConfigError("key 'input' must be a path to a prior sweep CSV")
    return RunConfig(mode="extrapolate", extrapolate_input=path)


def parse_config(text: str, max_sites: int = DEFAULT_MAX_SITES) -> RunConfig:
    """Parse a JSON or YAML run configuration.

    Defaults: j_spin = i_pseudo = 0, fields off.  k_coupling is always
    required; point mode requires a single temperature, sweep mode a
    temperature list.  Any unknown key raises ConfigError naming it.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is neither valid JSON nor valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config must be a mapping, got {type(doc).__name__}")
    mode = doc.get("mode")
    if mode not in ("point", "sweep", "extrapolate"):
        raise ConfigError(
            f"key 'mode' must be one of ['point', 'sweep', 'extrapolate'], got {mode!r}"
        )
    if mode == "point":
        return _parse_point(doc, max_sites)
    if mode == "sweep":
        return _parse_sweep(doc, max_sites)
    return _parse_extrapolate(doc)


def load_config(path: str, max_sites: int = DEFAULT_MAX_SITES) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), max_sites=max_sites)


def format_number(value) -> str:
    """Shortest decimal that round-trips; integral floats drop the '.0'."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def row_columns(include_observables: bool) -> list[str]:
    cols = list(BASE_COLUMNS)
    if include_observables:
        cols += OBSERVABLE_COLUMNS
    return cols + TAIL_COLUMNS


def _row_cells(row: SweepRow, columns: list[str]) -> list[str]:
    out = []
    for name in columns:
        value = getattr(row, name)
        out.append(value if isinstance(value, str) else format_number(value))
    return out


def write_rows(
    rows: list[SweepRow],
    output_format: str,
    path: str,
    include_observables: bool = False,
    metadata: dict | None = None,
) -> None:
    """Serialize sweep rows to CSV (fixed column contract) or JSON.

    CSV prints floats as their shortest round-trip decimal and leaves
    None cells empty.  JSON wraps the same records in
    {"metadata": ..., "rows": [...]} with null for missing values.
    """
    columns = row_columns(include_observables)
    if output_format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow(_row_cells(row, columns))
        return
    if output_format == "json":
        payload = {
            "metadata": metadata or {},
            "rows": [{name: getattr(row, name) for name in columns} for row in rows],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return
    raise ValueError(f"unknown output format {output_format!r}")


def _write_extrapolation(records: list[dict], output_format: str, path: str,
                         metadata: dict | None = None) -> None:
    if output_format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(EXTRAPOLATION_COLUMNS)
            for record in records:
                writer.writerow(
                    value if isinstance(value, str) else format_number(value)
                    for value in (record[c] for c in EXTRAPOLATION_COLUMNS)
                )
        return
    if output_format == "json":
        payload = {"metadata": metadata or {}, "rows": records}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return
    raise ValueError(f"unknown output format {output_format!r}")


def _metadata(config: RunConfig, total_ms: float, row_count: int) -> dict:
    return {
        "tool": "kkchain",
        "version": __version__,
        "mode": config.mode,
        "total_wall_time_ms": round(total_ms, 3),
        "rows": row_count,
    }


def _point_row(config: RunConfig) -> SweepRow:
    params = config.point_params
    t0 = time.perf_counter()
    h = build_hamiltonian(params)
    spec = cached_diagonalize(h, params, config.cache_dir)
    rho = thermal_density_matrix(spec, config.point_temperature)
    negativity = logarithmic_negativity(rho, "spin")
    if config.include_observables:
        import numpy as np

        obs = compute_observables(rho, params)
        means = {
            "ss_bond_mean": float(np.mean(obs.ss_bond)) if obs.ss_bond else 0.0,
            "tt_bond_mean": float(np.mean(obs.tt_bond)) if obs.tt_bond else 0.0,
            "sstt_bond_mean": float(np.mean(obs.sstt_bond)) if obs.sstt_bond else 0.0,
            "mag_s": obs.mag_s,
            "mag_t": obs.mag_t,
        }
    else:
        means = dict.fromkeys(OBSERVABLE_COLUMNS)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return SweepRow(
        n_sites=params.n_sites,
        j_spin=params.j_spin,
        i_pseudo=params.i_pseudo,
        k_coupling=params.k_coupling,
        field_s_mag=params.field_spin.magnitude,
        field_s_pattern=params.field_spin.pattern.value,
        field_t_mag=params.field_pseudo.magnitude,
        field_t_pattern=params.field_pseudo.pattern.value,
        temperature=config.point_temperature,
        log_negativity=negativity.log_negativity,
        trace_norm=negativity.trace_norm,
        ground_energy=spec.ground_energy,
        ground_degeneracy=spec.ground_degeneracy,
        wall_time_ms=round(elapsed_ms, 3),
        status=STATUS_OK,
        **means,
    )


def _group_key(record: dict) -> tuple:
    # string-typed cells group exactly; shortest round-trip makes equal
    # values print identically
    return tuple(
        record[c]
        for c in (
            "j_spin", "i_pseudo", "k_coupling", "field_s_mag", "field_s_pattern",
            "field_t_mag", "field_t_pattern", "temperature",
        )
    )


def _run_extrapolate(config: RunConfig) -> list[dict]:
    try:
        with open(config.extrapolate_input, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise ConfigError(f"{config.extrapolate_input}: empty input")
            missing = {"n_sites", "log_negativity", "status", "temperature"} - set(
                reader.fieldnames
            )
            if missing:
                raise ConfigError(
                    f"{config.extrapolate_input}: missing columns {sorted(missing)}"
                )
            records = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read {config.extrapolate_input}: {exc}") from exc

    groups: dict[tuple, list[tuple[int, float]]] = {}
    for record in records:
        if record["status"] != STATUS_OK:
            continue
        groups.setdefault(_group_key(record), []).append(
            (int(record["n_sites"]), float(record["log_negativity"]))
        )

    out = []
    for key in sorted(groups, key=lambda k: tuple(_sort_cell(c) for c in k)):
        points = groups[key]
        if len({n for n, _ in points}) < 2:
            continue
        fit = extrapolate(points)
        record = dict(
            zip(
                (
                    "j_spin", "i_pseudo", "k_coupling", "field_s_mag", "field_s_pattern",
                    "field_t_mag", "field_t_pattern", "temperature",
                ),
                key,
            )
        )
        record.update(
            intercept=fit.intercept,
            slope=fit.slope,
            residual=fit.residual,
            n_points=fit.n_points,
        )
        out.append(record)
    if not out:
        raise ConfigError(
            "no parameter group in the input spans two or more chain lengths; "
            "extrapolation needs a multi-size sweep"
        )
    return out


def _sort_cell(cell: str):
    try:
        return (0, float(cell), "")
    except ValueError:
        return (1, 0.0, cell)


def _memory_estimate(max_sites: int) -> str:
    dim = 4**max_sites
    matrix_bytes = 8 * dim * dim
    gib = matrix_bytes / 2**30
    return (
        f"max-sites {max_sites}: dimension {dim}, one dense matrix {gib:.2f} GiB, "
        f"pipeline peak roughly {3 * gib:.2f} GiB"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kkchain",
        description=(
            "Thermal entanglement between spin and pseudospin subsystems of a "
            "coupled two-doublet chain, by exact diagonalization"
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, workers=False, figure=False):
        p.add_argument("--config", required=True, help="JSON or YAML run configuration")
        p.add_argument("--output", help="output file path")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--observables", action="store_true",
                       help="include bond correlators and magnetizations")
        p.add_argument("--cache", help="directory for the spectra cache")
        p.add_argument("--max-sites", type=int, default=None,
                       help="override the chain-length cap (prints a memory estimate)")
        if workers:
            p.add_argument("--workers", type=int, default=1,
                           help="process pool size for grid points")
        if figure:
            p.add_argument("--figure", help="also render a line figure to this path")

    common(sub.add_parser("point", help="evaluate a single (params, T) point"))
    common(sub.add_parser("sweep", help="run a coupling-cut sweep"), workers=True, figure=True)
    extrap = sub.add_parser("extrapolate", help="fit prior multi-size sweep output vs 1/N")
    extrap.add_argument("--config", required=True)
    extrap.add_argument("--output", required=True)
    extrap.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    max_sites = DEFAULT_MAX_SITES
    if getattr(args, "max_sites", None) is not None:
        if args.max_sites < 1:
            print("error: --max-sites must be >= 1", file=sys.stderr)
            return EXIT_CONFIG
        max_sites = args.max_sites
        print(_memory_estimate(max_sites), file=sys.stderr)

    try:
        config = load_config(args.config, max_sites=max_sites)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    if config.mode != args.command:
        print(
            f"error: config declares mode {config.mode!r} but the "
            f"{args.command!r} subcommand was invoked",
            file=sys.stderr,
        )
        return EXIT_CONFIG

    config = dataclasses.replace(
        config,
        output_path=getattr(args, "output", None),
        output_format=args.format,
        worker_budget=getattr(args, "workers", 1),
        include_observables=getattr(args, "observables", False),
        cache_dir=getattr(args, "cache", None),
    )
    if config.worker_budget < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if config.mode == "point":
            return _cmd_point(config)
        if config.mode == "sweep":
            return _cmd_sweep(config, figure_path=getattr(args, "figure", None))
        return _cmd_extrapolate(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def _cmd_point(config: RunConfig) -> int:
    row = _point_row(config)
    print(format_number(row.log_negativity))
    if config.output_path:
        write_rows(
            [row],
            config.output_format,
            config.output_path,
            include_observables=config.include_observables,
            metadata=_metadata(config, row.wall_time_ms, 1),
        )
    return EXIT_OK


def _cmd_sweep(config: RunConfig, figure_path: str | None) -> int:
    if not config.output_path:
        print("error: sweep requires --output", file=sys.stderr)
        return EXIT_CONFIG
    spec = config.sweep_spec
    if config.include_observables:
        spec = dataclasses.replace(spec, observables_enabled=True)
    rows = run_sweep(spec, worker_budget=config.worker_budget, cache_dir=config.cache_dir)
    total_ms = sum(row.wall_time_ms or 0.0 for row in rows)
    write_rows(
        rows,
        config.output_format,
        config.output_path,
        include_observables=config.include_observables,
        metadata=_metadata(config, total_ms, len(rows)),
    )
    if figure_path:
        from .figures import render_sweep_figure

        render_sweep_figure(rows, figure_path)
    failed = sum(1 for row in rows if row.status != STATUS_OK)
    if failed:
        print(f"{failed} of {len(rows)} rows failed; see status column", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_extrapolate(config: RunConfig) -> int:
    records = _run_extrapolate(config)
    _write_extrapolation(
        records,
        config.output_format,
        config.output_path,
        metadata=_metadata(config, 0.0, len(records)),
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
