"""File-driven command-line runner.

Subcommands::

    omniprice [--out DIR] analyze    [--config PATH] [--case N] [--seed N]
    omniprice [--out DIR] regions    [--config PATH] [--case N] [--seed N] [--plane P]
    omniprice [--out DIR] simulate   [--config PATH] [--case N] [--seed N]
    omniprice [--out DIR] montecarlo [--config PATH] [--case N] [--seed N]
    omniprice --from-manifest PATH [--out DIR]

Config files are flat INI-style key/value sections (params, theta, regions,
season, montecarlo); every key has a default except [params], which must
come from the file or from ``--case 1|2|3`` (built-in cost presets). Each
run emits CSV files plus a ``manifest.json`` recording the tool version,
resolved config (embedded and hashed), master seed, and the SHA-256 of
every output; ``--from-manifest`` re-executes the embedded config and
verifies the outputs reproduce byte-for-byte.

Numbers are printed with 9 significant digits and a ``.`` decimal point so
CSV outputs are byte-stable across runs and platforms. Exit codes: 0 ok,
1 reproduction mismatch, 2 config error, 3 model-assumption violation.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .core import ModelParams
from .presets import COST_CASES
from .season import Scenario, SeasonConfig, monte_carlo, simulate_season
from .strategy import cost_region_map, select_strategy


class ConfigError(Exception):
    """Malformed or incomplete configuration (exit code 2)."""


class AssumptionError(Exception):
    """Parameters violate the model's cost assumptions (exit code 3)."""


DEFAULTS = {
    "theta": {"start": "0.0", "stop": "1.0", "step": "0.01"},
    "regions": {
        "thetas": "0.9 0.3 0.0",
        "samples": "101",
        "costmap_theta": "0.9",
        "costmap_resolution": "41",
    },
    "season": {
        "periods": "12",
        "alpha": "0.05",
        "store_inventory0": "10.0",
        "scenario": "optimal_switch",
        "seed": "20240601",
        "theta_noise": "1.0",
    },
    "montecarlo": {"replications": "1000", "theta_noise": "0.95"},
}


def fmt(x) -> str:
    """Fixed 9-significant-digit rendering used for every CSV number."""
    if isinstance(x, bool) or isinstance(x, np.bool_):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if v == 0.0:
        v = 0.0  # fold -0.0
    return format(v, ".9g")


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path: Path) -> str:
    return _sha256_bytes(path.read_bytes())


def load_config(
    config_path: str | None, case: int | None, seed: int | None
) -> configparser.ConfigParser:
    """Defaults, then the config file, then --case / --seed overrides."""
    cp = configparser.ConfigParser()
    cp.read_dict(DEFAULTS)
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file {config_path}: {exc}") from exc
    if case is not None:
        if case not in COST_CASES:
            raise ConfigError(f"unknown case {case}; available: {sorted(COST_CASES)}")
        p = COST_CASES[case]
        cp["params"] = {"c": str(p.c), "c_e": str(p.c_e), "c_b": str(p.c_b), "c_s": str(p.c_s)}
    if seed is not None:
        cp["season"]["seed"] = str(seed)
    if not cp.has_section("params"):
        raise ConfigError("missing [params] section; supply a config file or --case 1|2|3")
    return cp


def config_text(cp: configparser.ConfigParser) -> str:
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _get(cp, section: str, key: str, conv):
    try:
        return conv(cp.get(section, key))
    except (configparser.Error, ValueError) as exc:
        raise ConfigError(f"bad or missing [{section}] {key}: {exc}") from exc


def resolve_params(cp) -> ModelParams:
    values = {k: _get(cp, "params", k, float) for k in ("c", "c_e", "c_b", "c_s")}
    try:
        return ModelParams(**values)
    except ValueError as exc:
        raise AssumptionError(str(exc)) from exc


def theta_grid(cp) -> np.ndarray:
    start = _get(cp, "theta", "start", float)
    stop = _get(cp, "theta", "stop", float)
    step = _get(cp, "theta", "step", float)
    if not (0.0 <= start <= stop <= 1.0) or step <= 0:
        raise ConfigError("[theta] requires 0 <= start <= stop <= 1 and step > 0")
    n = int(round((stop - start) / step)) + 1
    return np.linspace(start, stop, n)


def season_config(cp, params: ModelParams, noise_key: str = "season") -> SeasonConfig:
    scenario_name = _get(cp, "season", "scenario", str).strip().lower()
    try:
        scenario = Scenario(scenario_name)
    except ValueError as exc:
        raise ConfigError(
            f"unknown scenario '{scenario_name}'; choose from "
            f"{[s.value for s in Scenario]}"
        ) from exc
    try:
        return SeasonConfig(
            params=params,
            periods=_get(cp, "season", "periods", int),
            alpha=_get(cp, "season", "alpha", float),
            store_inventory0=_get(cp, "season", "store_inventory0", float),
            scenario=scenario,
            seed=_get(cp, "season", "seed", int),
            theta_noise=_get(cp, noise_key, "theta_noise", float),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def cmd_analyze(cp, outdir: Path) -> list[Path]:
    """Profit of every strategy on a theta grid, plus the per-theta winner."""
    params = resolve_params(cp)
    rows = []
    for theta in theta_grid(cp):
        sel = select_strategy(params, float(theta))
        for o in sel.menu:
            rows.append(
                [
                    fmt(float(theta)),
                    o.strategy.value,
                    fmt(o.feasible),
                    fmt(o.prices.p_e),
                    fmt(o.prices.p_s),
                    fmt(o.demands.d_e),
                    fmt(o.demands.d_b),
                    fmt(o.demands.d_s),
                    fmt(o.profit),
                    sel.best.strategy.value,
                    fmt(sel.offer_bops),
                ]
            )
    path = _write_csv(
        outdir / "analyze.csv",
        ["theta", "strategy", "feasible", "p_e", "p_s", "d_e", "d_b", "d_s", "profit", "winner", "winner_offer_bops"],
        rows,
    )
    return [path]


def _segment_plane_curves(c: float, theta: float, bops: bool, n: int):
    """Segment boundaries on the (d, delta) plane as (curve, x, y) samples."""
    lo, hi = -2.0 * theta * c, 2.0 * c
    if bops:
        for y in np.linspace(lo, hi, n):
            yield "local_split", c, float(y)
        y = (2.0 - 2.0 * theta) * c
        if y < hi:  # collapses onto the price cap at theta = 0: no store segment
            for x in np.linspace(0.0, 2.0 * c, n):
                yield "bops_store", float(x), y
        x_lo = c
    else:
        x_lo = 0.0
    x_hi = min(2.0 * c, (1.0 + 2.0 * theta) * c)
    if x_hi > x_lo:
        for x in np.linspace(x_lo, x_hi, n):
            yield "delivery_store", float(x), float((1.0 - 2.0 * theta) * c + x)


def _price_plane_curves(c: float, theta: float, bops: bool, n: int):
    """Region boundaries on the (p_e, theta*p_s) plane as (curve, x, y) samples."""
    y_cap = 2.0 * theta * c
    if y_cap > 0.0:
        for y in np.linspace(0.0, y_cap, n):
            yield "pe_split", c, float(y)
    shift = (2.0 - 2.0 * theta) * c if bops else (1.0 - 2.0 * theta) * c
    name = "be_se" if bops else "e_se"
    x_lo, x_hi = max(0.0, shift), min(2.0 * c, shift + y_cap)
    if x_hi > x_lo:
        for x in np.linspace(x_lo, x_hi, n):
            yield name, float(x), float(x - shift)
    shift = (3.0 - 2.0 * theta) * c
    x_lo, x_hi = shift, min(2.0 * c, shift + y_cap)
    if x_hi > x_lo:  # the all-store region only exists for theta > 1/2
        for x in np.linspace(x_lo, x_hi, n):
            yield "se_s", float(x), float(x - shift)


def cmd_regions(cp, outdir: Path, plane: str = "both") -> list[Path]:
    """Boundary polylines for plotting, and optionally the cost-region map."""
    params = resolve_params(cp)
    n = _get(cp, "regions", "samples", int)
    if n < 2:
        raise ConfigError("[regions] samples must be at least 2")
    thetas = [float(tok) for tok in _get(cp, "regions", "thetas", str).split()]
    outputs = []

    if plane in ("segments", "prices", "both", "all"):
        rows = []
        for theta in thetas:
            if not 0.0 <= theta <= 1.0:
                raise ConfigError(f"[regions] thetas must lie in [0, 1], got {theta}")
            for bops in (True, False):
                if plane in ("segments", "both", "all"):
                    for curve, x, y in _segment_plane_curves(params.c, theta, bops, n):
                        rows.append(["segments", fmt(bops), curve, fmt(theta), fmt(x), fmt(y)])
                if plane in ("prices", "both", "all"):
                    for curve, x, y in _price_plane_curves(params.c, theta, bops, n):
                        rows.append(["prices", fmt(bops), curve, fmt(theta), fmt(x), fmt(y)])
        outputs.append(
            _write_csv(outdir / "boundaries.csv", ["plane", "bops", "curve", "theta", "x", "y"], rows)
        )

    if plane in ("costmap", "all"):
        theta = _get(cp, "regions", "costmap_theta", float)
        res = _get(cp, "regions", "costmap_resolution", int)
        if res < 2:
            raise ConfigError("[regions] costmap_resolution must be at least 2")
        grid = np.linspace(0.0, params.c, res, endpoint=False)
        rows = [
            [fmt(theta), fmt(params.c_e), fmt(c_b), fmt(c_s), winner.value, fmt(bops)]
            for c_b, c_s, winner, bops in cost_region_map(params, theta, grid, grid)
        ]
        outputs.append(
            _write_csv(
                outdir / "costmap.csv", ["theta", "c_e", "c_b", "c_s", "winner", "offer_bops"], rows
            )
        )
    return outputs


_SEASON_HEADER = [
    "t", "theta", "strategy", "offer_bops", "p_e", "p_s", "d_e", "d_b", "d_s",
    "store_demand", "store_sales", "inventory_end", "profit",
]


def cmd_simulate(cp, outdir: Path) -> list[Path]:
    """One seeded season; prints the switching periods."""
    params = resolve_params(cp)
    record = simulate_season(season_config(cp, params))
    rows = [
        [
            fmt(r.t), fmt(r.theta), r.strategy.value, fmt(r.offer_bops), fmt(r.p_e), fmt(r.p_s),
            fmt(r.d_e), fmt(r.d_b), fmt(r.d_s), fmt(r.store_demand), fmt(r.store_sales),
            fmt(r.inventory_end), fmt(r.profit),
        ]
        for r in record.rows
    ]
    path = _write_csv(outdir / "season.csv", _SEASON_HEADER, rows)
    switches = ", ".join(str(t) for t in record.switching_periods) or "none"
    print(f"switching periods: {switches}")
    print(f"total profit: {fmt(record.total_profit)}")
    return [path]


def cmd_montecarlo(cp, outdir: Path) -> list[Path]:
    """Replicated three-scenario comparison on common random numbers."""
    params = resolve_params(cp)
    replications = _get(cp, "montecarlo", "replications", int)
    if replications < 1:
        raise ConfigError("[montecarlo] replications must be at least 1")
    cfg = season_config(cp, params, noise_key="montecarlo")
    result = monte_carlo(cfg, replications)

    gain_for = {
        Scenario.ALWAYS_BOPS: result.gain_vs_always_pct,
        Scenario.NEVER_BOPS: result.gain_vs_never_pct,
        Scenario.OPTIMAL_SWITCH: 0.0,
    }
    summary_rows = []
    hist_rows = []
    for scenario in Scenario:
        st = result.stats[scenario]
        summary_rows.append(
            [
                scenario.value, fmt(replications), fmt(st.mean_profit), fmt(st.std_profit),
                fmt(st.min_profit), fmt(st.max_profit), fmt(gain_for[scenario]),
            ]
        )
        for period, count in st.switch_histogram.items():
            hist_rows.append([scenario.value, "switch", fmt(period), fmt(count)])
        hist_rows.append([scenario.value, "none", "", fmt(st.none_count)])
        for period, count in st.none_to_e.items():
            hist_rows.append([scenario.value, "none_to_e", fmt(period), fmt(count)])
        print(f"{scenario.value}: mean profit {fmt(st.mean_profit)}")
    print(
        f"optimal_switch gain: {fmt(result.gain_vs_always_pct)}% vs always_bops, "
        f"{fmt(result.gain_vs_never_pct)}% vs never_bops"
    )

    return [
        _write_csv(
            outdir / "montecarlo.csv",
            ["scenario", "replications", "mean_profit", "std_profit", "min_profit", "max_profit", "optimal_gain_pct"],
            summary_rows,
        ),
        _write_csv(outdir / "switch_histogram.csv", ["scenario", "bucket", "period", "count"], hist_rows),
    ]


def _run(command: str, cp, outdir: Path, case: int | None, plane: str = "both") -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    if command == "analyze":
        outputs = cmd_analyze(cp, outdir)
    elif command == "regions":
        outputs = cmd_regions(cp, outdir, plane)
    elif command == "simulate":
        outputs = cmd_simulate(cp, outdir)
    elif command == "montecarlo":
        outputs = cmd_montecarlo(cp, outdir)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown command {command}")

    text = config_text(cp)
    manifest = {
        "tool": "omniprice",
        "version": __version__,
        "command": command,
        "plane": plane,
        "case": case,
        "master_seed": cp.get("season", "seed", fallback=None),
        "config_sha256": _sha256_bytes(text.encode()),
        "config": text,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "outputs": [{"file": p.name, "sha256": _sha256_file(p)} for p in outputs],
    }
    manifest_path = outdir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    for p in outputs + [manifest_path]:
        print(f"wrote {p}")
    return outputs


def _replay(manifest_path: Path, outdir: Path) -> int:
    """Re-execute a manifest's embedded config and verify byte-identical outputs."""
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        cp = configparser.ConfigParser()
        cp.read_string(manifest["config"])
        command = manifest["command"]
        plane = manifest.get("plane", "both")
    except (OSError, KeyError, ValueError, configparser.Error) as exc:
        raise ConfigError(f"cannot replay manifest {manifest_path}: {exc}") from exc

    outputs = _run(command, cp, outdir, manifest.get("case"), plane)
    recorded = {entry["file"]: entry["sha256"] for entry in manifest["outputs"]}
    status = 0
    for path in outputs:
        want = recorded.get(path.name)
        got = _sha256_file(path)
        if want == got:
            print(f"reproduced {path.name}: OK")
        else:
            print(f"reproduced {path.name}: MISMATCH (expected {want}, got {got})")
            status = 1
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omniprice", description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out", help="output directory (default: ./out)")
    parser.add_argument(
        "--from-manifest", metavar="PATH", help="re-run a recorded manifest and verify its outputs"
    )
    parser.add_argument("--version", action="version", version=f"omniprice {__version__}")
    sub = parser.add_subparsers(dest="command")
    for name, help_text in (
        ("analyze", "strategy profits and winners over a theta grid"),
        ("regions", "segment/region boundary polylines and the cost-region map"),
        ("simulate", "one seeded selling season"),
        ("montecarlo", "replicated three-scenario comparison"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="INI-style config file")
        p.add_argument("--case", type=int, choices=sorted(COST_CASES), help="built-in cost preset")
        p.add_argument("--seed", type=int, help="override [season] seed")
        if name == "regions":
            p.add_argument(
                "--plane",
                choices=("segments", "prices", "both", "costmap", "all"),
                default="both",
            )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.from_manifest:
            return _replay(Path(args.from_manifest), Path(args.out))
        if not args.command:
            parser.print_usage(sys.stderr)
            print("error: a subcommand or --from-manifest is required", file=sys.stderr)
            return 2
        cp = load_config(args.config, args.case, args.seed)
        _run(args.command, cp, Path(args.out), args.case, getattr(args, "plane", "both"))
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AssumptionError as exc:
        print(f"assumption violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
