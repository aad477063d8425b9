"""Command-line front end: ``ic analyze | simulate | sweep``.

Exit status is 0 on success (a diverging simulation counts as success), 1 for
usage or scenario-file errors and 2 for numerical failures.
"""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import pipeline
from .exceptions import IntermittentError, ScenarioError
from .scenario import load_scenario, with_parameter
from .simulator import attach_eigen_coordinates, output_state_pairs

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _jsonable(v.real), "im": _jsonable(v.imag)}
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2)
        fh.write("\n")


def prediction_dict(sc, an):
    p = an.prediction
    d = {
        "scenario": sc.name,
        "delta_crit": p.delta_crit,
        "lambda_crit": complex(p.lambda_crit),
        "cycle_class": p.cycle_class.value,
        "reason": p.reason,
        "period": p.period,
        "gamma": p.gamma,
        "e0": p.e0,
        "spectrum": [complex(z) for z in p.spectrum],
        "v_crit": None if p.v_crit is None else [complex(z) for z in p.v_crit],
        "marker": {"delta": p.delta_crit, "max_abs_eig": 1.0},
        "sweep_range": [sc.sweep.delta_min, sc.sweep.delta_max, sc.sweep.steps],
    }
    if p.trajectory is not None:
        # event functional along the predicted orbit; an early crossing means
        # the detector would fire before delta_crit on this orbit
        es = an.error_system
        e = p.trajectory @ es.T_event.T
        f = np.einsum("ij,jk,ik->i", e, sc.event.Q_t, e)
        q2 = sc.event.q_t**2
        inside = (p.tau > sc.event.delta_min) & (p.tau < p.delta_crit)
        d["event_check"] = {
            "end_ratio": f[-1] / q2,
            "max_interior_ratio": float(f[inside].max()) if inside.any() else None,
            "early_trigger": bool(np.any(f[inside] >= q2 * (1 - 1e-9))),
        }
        d["tau"] = p.tau
        d["trajectory"] = p.trajectory
    return d


def cmd_analyze(sc, out):
    an = pipeline.analyze(sc)
    sw, ref = an.sweep, an.reference_sweep
    write_csv(out / "sweep.csv", ["delta", "max_abs_eig_rho0", "max_abs_eig"],
              zip(sw.deltas, ref.max_magnitudes, sw.max_magnitudes))
    rows = [(d, i, z.real, z.imag) for d, lams in zip(sw.deltas, sw.spectra)
            for i, z in enumerate(lams)]
    write_csv(out / "loci.csv", ["delta", "eig_index", "re", "im"], rows)
    write_json(out / "prediction.json", prediction_dict(sc, an))
    p = an.prediction
    print(f"{sc.name}: {p.cycle_class.value} delta_crit={p.delta_crit:.6g}"
          + (f" period={p.period:.6g} gamma={p.gamma:.6g}" if p.period else f" ({p.reason})"))
    return an


def _chi_rows(trace, an):
    gamma = an.prediction.gamma
    if an.basis is None:
        return []
    chi = attach_eigen_coordinates(trace, an.basis).chi
    others = np.linalg.norm(chi[:, 1:], axis=1) if chi.shape[1] > 1 else np.zeros(len(chi))
    return zip(trace.times, np.abs(chi[:, 0]), others, [gamma] * len(chi))


def cmd_simulate(sc, out, duration=None, dt=None):
    an, trace, ctrace, summary = pipeline.run(sc, duration, dt)
    ny, nu = trace.y.shape[1], trace.u.shape[1]
    yc = np.full_like(trace.y, np.nan)
    m = min(len(ctrace.y), len(yc))
    yc[:m] = ctrace.y[:m]
    header = (["t"] + [f"y{i + 1}" for i in range(ny)] + [f"y_c{i + 1}" for i in range(ny)]
              + [f"u{i + 1}" for i in range(nu)])
    write_csv(out / "trace.csv", header, np.hstack([trace.times[:, None], trace.y, yc, trace.u]))
    write_csv(out / "events.csv", ["i", "t_i"], enumerate(trace.events.tolist(), 1))
    dref = an.prediction.delta_crit if np.isfinite(an.prediction.delta_crit) else None
    write_csv(out / "intervals.csv", ["i", "delta_i", "delta_crit_ref"],
              ((i, d, dref) for i, d in enumerate(trace.intervals.tolist(), 1)))
    write_csv(out / "chi.csv", ["t", "abs_chi_k1", "norm_others", "gamma_ref"], _chi_rows(trace, an))

    pairs = output_state_pairs(sc.plant.actual)
    tail = trace.times >= trace.times[-1] * 0.5
    header = ["t"]
    for v, p in pairs:
        header += [f"x{v + 1}", f"x{p + 1}"]
    cols = [trace.times[tail]] + [trace.x[tail][:, j] for v, p in pairs for j in (v, p)]
    write_csv(out / "phase.csv", header, np.column_stack(cols))
    s = summary.to_dict()
    s["continuous_diverged_at"] = ctrace.diverged_at
    write_json(out / "summary.json", s)
    msg = f"{sc.name}: {summary.cycle_class}, {summary.n_events} events"
    if summary.measured_period is not None:
        msg += f", measured period {summary.measured_period:.6g}"
    if summary.diverged_at is not None:
        msg += f", diverged at t={summary.diverged_at:.3f}"
    print(msg + (", converged" if summary.converged else ", not converged"))
    return summary


def cmd_sweep(sc, out, param, values, duration=None, dt=None):
    fields = list(pipeline.RunSummary.__dataclass_fields__)
    rows = []
    for v in values:
        try:
            s = cmd_sweep_row(sc, param, v, duration, dt)
            rows.append([param, v] + [getattr(s, f) for f in fields] + [""])
        except IntermittentError as exc:
            rows.append([param, v] + [None] * len(fields) + [f"{type(exc).__name__}: {exc}"])
        print(f"{param}={v:g}: " + (rows[-1][-1] or rows[-1][2 + fields.index("cycle_class")]))
    write_csv(out / "sweep_summary.csv", ["param", "value"] + fields + ["error"], rows)
    return rows


def cmd_sweep_row(sc, param, value, duration=None, dt=None):
    var = with_parameter(sc, param, value)
    an = pipeline.analyze(var, reference=False)
    trace = pipeline.simulate(var, an.design, duration, dt)
    return pipeline.summarize(var, an, trace)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _values(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("no values given")
    return vals


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="scenario JSON file")
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--dt", type=float, help="simulation step [s]")
    common.add_argument("--duration", type=float, help="simulation length [s]")

    ap = _Parser(prog="ic", description="Limit cycles in intermittent control.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("analyze", parents=[common], help="spectral sweep and limit-cycle prediction")
    sub.add_parser("simulate", parents=[common], help="event-driven simulation and summary")
    p = sub.add_parser("sweep", parents=[common], help="repeat analysis + simulation over values")
    p.add_argument("--param", required=True, choices=["rho", "q_t", "b"])
    p.add_argument("--values", required=True, type=_values, help="comma-separated values")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"ic: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "analyze":
            cmd_analyze(sc, out)
        elif args.command == "simulate":
            cmd_simulate(sc, out, args.duration, args.dt)
        else:
            cmd_sweep(sc, out, args.param, args.values, args.duration, args.dt)
    except ScenarioError as exc:
        print(f"ic: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntermittentError as exc:
        print(f"ic: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"ic: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
