"""Command-line front end.

Every command prints a fixed-header CSV table (or JSON with ``--format
json``) to stdout or ``--out``; commands that draw also accept ``--figure
PATH``. Exit status: 0 success, 1 usage or validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from pixvlc import plots
from pixvlc.ber import ber_analytic_db, estimate_ber_monte_carlo, required_snr
from pixvlc.channel import ChannelModel, load_calibration_csv
from pixvlc.config import bundled_path, load_config
from pixvlc.energy import (
    ConsumptionModel,
    HarvestParams,
    feasibility,
    load_current_table,
)
from pixvlc.errors import PixVlcError, ValidationError
from pixvlc.link_adapt import AdaptationPolicy, adaptation_table
from pixvlc.pixel_array import PixelArray, pixel_areas, pixel_diameters
from pixvlc.sim_pipeline import run_scenario, sweep

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2

# per-column number formats; anything unlisted is written with str()
FORMATS = {
    "M": "d",
    "chosen_M": "d",
    "bit_errors": "d",
    "n_bits": "d",
    "cluster": "d",
    "weight": "d",
    "distance_m": ".6g",
    "snr_db": ".4f",
    "required_snr_db": ".4f",
    "margin_db": ".4f",
    "analytic_ber": ".6e",
    "measured_ber": ".6e",
    "mc_ber": ".6e",
    "ci95": ".6e",
    "throughput_bps": ".1f",
    "harvested_uW": ".3f",
    "consumed_uW": ".3f",
    "margin_uW": ".3f",
    "diameter_mm": ".4f",
    "area_mm2": ".4f",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _count(text):
    # accepts 1e7 style
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a count, got {text!r}") from None
    if value < 1 or value != int(value):
        raise argparse.ArgumentTypeError(f"expected a positive integer count, got {text!r}")
    return int(value)


def _cell(key, value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    spec = FORMATS.get(key)
    if spec and isinstance(value, (int, float)):
        if spec == "d":
            return str(int(value))
        return format(value, spec)
    return str(value)


def render(rows, header, fmt, extra=None):
    """Rows of dicts as CSV or JSON text."""
    if fmt == "json":
        doc = {"rows": [{k: r.get(k) for k in header} for r in rows]}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_cell(k, r.get(k)) for k in header])
    return buf.getvalue()


def emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def note(line):
    print(f"# {line}", file=sys.stderr)


def cmd_required_snr(args):
    rows = []
    for M in args.orders:
        rows.append({
            "M": M,
            "required_snr_db": required_snr(M, args.target_ber),
            "throughput_bps": args.symbol_rate * math.log2(M),
        })
    return render(rows, ["M", "required_snr_db", "throughput_bps"], args.format)


def _load_channel(args):
    calibration = load_calibration_csv(args.calibration)
    if args.power_law:
        return ChannelModel.fitted(calibration), calibration
    return ChannelModel.from_table(calibration), calibration


def cmd_adapt(args):
    model, calibration = _load_channel(args)
    policy = AdaptationPolicy(tuple(args.orders), args.target_ber, args.symbol_rate)
    decisions = adaptation_table(model, args.distances, policy)
    rows = [
        {
            "distance_m": d.distance_m,
            "snr_db": d.snr_db,
            "chosen_M": d.chosen_M,
            "throughput_bps": d.throughput_bps,
            "margin_db": d.margin_db,
        }
        for d in decisions
    ]
    extra = None
    if args.power_law:
        fit = {
            "c0_db": model.c0_db,
            "gamma": model.gamma,
            "residuals_db": [
                {"distance_m": d, "residual_db": r}
                for (d, _), r in zip(calibration, model.residuals_db)
            ],
        }
        extra = {"power_law_fit": fit}
        if args.format == "csv":
            note(f"power-law fit: c0_db={model.c0_db:.4f} gamma={model.gamma:.4f}")
            for (d, _), r in zip(calibration, model.residuals_db):
                note(f"residual_db distance_m={d:g}: {r:+.4f}")
    if args.figure:
        plots.adaptation(decisions, args.figure, calibration)
    header = ["distance_m", "snr_db", "chosen_M", "throughput_bps", "margin_db"]
    return render(rows, header, args.format, extra)


def _snr_grid(lo, hi, step):
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 10) for i in range(n)]


def cmd_ber_curve(args):
    if args.snr_min > args.snr_max:
        raise UsageError("--snr-min must not exceed --snr-max")
    if not args.step > 0:
        raise UsageError("--step must be positive")
    rows = []
    for snr in _snr_grid(args.snr_min, args.snr_max, args.step):
        row = {"snr_db": snr, "analytic_ber": float(ber_analytic_db(args.order, snr))}
        if args.monte_carlo:
            rep = estimate_ber_monte_carlo(args.order, snr, args.monte_carlo, args.seed, workers=args.workers)
            row.update(mc_ber=rep.ber_monte_carlo, ci95=rep.ci95_halfwidth, bit_errors=rep.bit_errors)
        rows.append(row)
    header = ["snr_db", "analytic_ber"]
    if args.monte_carlo:
        header += ["mc_ber", "ci95", "bit_errors"]
    if args.figure:
        plots.ber_curve(rows, args.order, args.figure)
    return render(rows, header, args.format)


def cmd_budget(args):
    harvest = HarvestParams(args.lux, args.area_cm2, args.efficiency)
    if args.current_table:
        model = ConsumptionModel(
            args.clock, tuple(load_current_table(args.current_table)), args.voltage, args.lcd_uw
        )
    else:
        model = ConsumptionModel.measured(args.clock, supply_voltage_v=args.voltage, lcd_power_uW_at_200hz=args.lcd_uw)
    result = feasibility(harvest, model, args.mod_freq)
    row = {
        "clock": model.clock_source,
        "harvested_uW": result.harvested_uW,
        "consumed_uW": result.consumed_uW,
        "margin_uW": result.margin_uW,
        "feasible": result.feasible,
    }
    if args.figure:
        plots.budget(result, args.figure)
    return render([row], list(row), args.format)


SIM_HEADER = [
    "distance_m", "M", "snr_db", "analytic_ber", "measured_ber",
    "bit_errors", "n_bits", "throughput_bps", "status",
]


def _result_row(res, status="ok"):
    return {
        "distance_m": res.distance_m,
        "M": res.order,
        "snr_db": res.snr_db_used,
        "analytic_ber": res.analytic_ber,
        "measured_ber": res.measured_ber,
        "bit_errors": res.bit_errors,
        "n_bits": res.n_bits,
        "throughput_bps": res.throughput_bps,
        "status": status,
    }


def cmd_simulate(args):
    cfg, spec = load_config(args.config)
    if spec is None:
        if args.figure:
            raise UsageError("--figure needs a config with a sweep section")
        rows = [_result_row(run_scenario(cfg))]
        return render(rows, SIM_HEADER, args.format)
    cells = sweep(cfg, spec.distances, spec.orders, spec.target_ber, workers=args.workers)
    rows = []
    for row in cells:
        for c in row:
            if c.ok:
                rows.append(_result_row(c.result, "above_target" if c.above_target else "ok"))
            else:
                rows.append({"distance_m": c.distance_m, "M": c.order, "status": f"error: {c.error}"})
    if args.figure:
        plots.sweep_grid(cells, args.figure)
    return render(rows, SIM_HEADER, args.format)


def cmd_pixels(args):
    array = PixelArray.uniform(args.clusters, args.diameter) if args.uniform else PixelArray.binary_weighted(args.clusters, args.diameter)
    diameters, areas = pixel_diameters(array), pixel_areas(array)
    rows = [
        {"cluster": k + 1, "weight": w, "diameter_mm": d, "area_mm2": a}
        for k, (w, d, a) in enumerate(zip(array.weights, diameters, areas))
    ]
    reference = math.pi * (args.diameter / 2.0) ** 2
    rel = abs(sum(areas) - reference) / reference
    check = {"area_sum_mm2": sum(areas), "reference_area_mm2": reference, "relative_error": rel}
    if args.format == "csv":
        note(f"area conservation: sum={sum(areas):.6f} mm2 reference={reference:.6f} mm2 relative_error={rel:.3e}")
    return render(rows, ["cluster", "weight", "diameter_mm", "area_mm2"], args.format, {"conservation": check})


def build_parser():
    parser = _Parser(prog="pixvlc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, figure=False):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write output here instead of stdout")
        if figure:
            p.add_argument("--figure", metavar="PATH", help="also save a figure (.png/.pdf/.svg)")

    p = sub.add_parser("required-snr", help="required SNR per PAM order at a target BER")
    p.add_argument("--target-ber", type=float, default=1e-3)
    p.add_argument("--orders", type=_int_list, default=[2, 4, 8])
    p.add_argument("--symbol-rate", type=float, default=200.0)
    common(p)
    p.set_defaults(func=cmd_required_snr)

    p = sub.add_parser("adapt", help="rate adaptation over distance")
    p.add_argument("--calibration", default=str(bundled_path("table3_distance_snr.csv")),
                   help="distance_m,snr_db CSV (default: bundled measurements)")
    p.add_argument("--distances", type=_float_list, default=[2.0, 3.0, 4.0, 5.0])
    p.add_argument("--target-ber", type=float, default=1e-3)
    p.add_argument("--orders", type=_int_list, default=[2, 4, 8])
    p.add_argument("--symbol-rate", type=float, default=200.0)
    p.add_argument("--power-law", action="store_true", help="use a least-squares power-law fit")
    common(p, figure=True)
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("ber-curve", help="BER against SNR, optionally with Monte Carlo")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--snr-min", type=float, default=0.0)
    p.add_argument("--snr-max", type=float, default=30.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--monte-carlo", type=_count, metavar="N", help="symbols per point")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    common(p, figure=True)
    p.set_defaults(func=cmd_ber_curve)

    p = sub.add_parser("budget", help="energy harvest versus consumption")
    p.add_argument("--lux", type=float, default=200.0)
    p.add_argument("--area-cm2", type=float, default=25.0)
    p.add_argument("--efficiency", type=float, default=0.40)
    p.add_argument("--clock", type=str.lower, choices=("vlo", "dco"), default="vlo")
    p.add_argument("--mod-freq", type=float, default=100.0)
    p.add_argument("--voltage", type=float, default=3.0)
    p.add_argument("--lcd-uw", type=float, default=0.2, help="LCD power at 200 Hz (µW)")
    p.add_argument("--current-table", help="frequency_hz,current_uA CSV overriding the bundled table")
    common(p, figure=True)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("simulate", help="run a JSON scenario or sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    common(p, figure=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pixels", help="pixel diameters under area conservation")
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--diameter", type=float, default=20.0)
    p.add_argument("--uniform", action="store_true", help="equal-size pixels instead of binary-weighted")
    common(p)
    p.set_defaults(func=cmd_pixels)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.command == "pixels" and (args.clusters < 1 or not args.diameter > 0):
        print("pixvlc pixels: error: need --clusters >= 1 and --diameter > 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        text = args.func(args)
        emit(text, args.out)
    except ValidationError as exc:
        print("validation failed:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, PixVlcError, ValueError) as exc:
        print(f"pixvlc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pixvlc {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
