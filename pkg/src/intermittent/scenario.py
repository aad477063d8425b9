"""Scenario files: one JSON document describing a complete experiment.

Layout::

    {
      "name": "simple_b0.8",
      "nominal":   {"A": [[...]], "B": [[...]], "C": [[...]]},
      "deviation": {"A": [[...]], "B": [[...]], "C": [[...]]},
      "rho": 1.0,
      "state_map": [[...]],                          # optional when nhat == n
      "weights": {"Qc": 3, "Rc": 1, "Qo": 100, "Ro": 1},   # optional
      "event": {"Q_t": [[...]], "q_t": 0.1, "delta_min": 0.1},
      "simulation": {"x0": [...], "xo0": [...], "duration": 60, "dt": 0.001},
      "sweep": {"delta_min": 0.05, "delta_max": 5, "steps": 200}
    }

Weights may be scalars (multiples of identity), lists (diagonals) or
matrices.  Unknown fields anywhere are rejected.
"""

import json
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .design import DesignWeights
from .exceptions import IntermittentError, ScenarioError
from .model import (
    Deviation,
    EventConfig,
    make_scenario,
    model_from_dict,
    model_to_dict,
)

__all__ = [
    "Scenario",
    "SweepRange",
    "SHIPPED",
    "scenario_from_dict",
    "scenario_to_dict",
    "load_scenario",
    "shipped_scenario",
    "default_x0",
    "with_parameter",
]

SHIPPED = (
    "simple_b0.8",
    "simple_b1.2",
    "simple_b1.7",
    "simple_rho0",
    "three_link_b0.9",
    "three_link_b1.1",
    "neglected_dynamics",
)

_TOP = {"name", "nominal", "deviation", "rho", "state_map", "weights", "event",
        "simulation", "sweep"}
_REQUIRED = {"nominal", "deviation", "rho"}
_FIELDS = {
    "weights": ({"Qc", "Rc", "Qo", "Ro"}, set()),
    "event": ({"Q_t", "q_t", "delta_min"}, {"q_t"}),
    "simulation": ({"x0", "xo0", "duration", "dt"}, set()),
    "sweep": ({"delta_min", "delta_max", "steps"}, set()),
    "deviation": ({"A", "B", "C"}, {"A", "B", "C"}),
}


@dataclass(frozen=True)
class SweepRange:
    delta_min: float = 0.05
    delta_max: float = 5.0
    steps: int = 200


@dataclass(frozen=True)
class Scenario:
    """A parsed scenario: plant, design weights, event detector and run settings."""

    name: str
    plant: object
    weights: DesignWeights
    event: EventConfig
    x0: np.ndarray
    xo0: np.ndarray
    duration: float = 60.0
    dt: float = 1e-3
    sweep: SweepRange = SweepRange()
    weight_spec: dict = None


def _section(d, key, where):
    allowed, required = _FIELDS[key]
    sec = d.get(key, {})
    path = f"{where}.{key}"
    if not isinstance(sec, dict):
        raise ScenarioError(f"{path}: expected an object")
    extra = set(sec) - allowed
    if extra:
        raise ScenarioError(f"{path}: unknown field(s) {sorted(extra)}")
    missing = required - set(sec)
    if missing:
        raise ScenarioError(f"{path}: missing field(s) {sorted(missing)}")
    return sec


def _number(v, path, positive=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{path}: expected a number, got {v!r}")
    if not np.isfinite(v) or (positive and not v > 0):
        raise ScenarioError(f"{path}: expected a {'positive ' if positive else ''}finite number")
    return float(v)


def _array(v, path, ndim=None):
    try:
        a = np.asarray(v, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}: not a numeric array ({exc})") from exc
    if ndim is not None and a.ndim != ndim:
        raise ScenarioError(f"{path}: expected {ndim}-d array, got shape {a.shape}")
    return a


def default_x0(plant):
    """0.1 on the position state read by the first output."""
    x0 = np.zeros(plant.n)
    x0[int(np.argmax(np.abs(plant.actual.C[0])))] = 0.1
    return x0


def scenario_from_dict(d, where="scenario"):
    """Validate and convert a scenario document.

    Raises
    ------
    ScenarioError
        With the dotted path of the offending field.
    """
    if not isinstance(d, dict):
        raise ScenarioError(f"{where}: expected a JSON object")
    extra = set(d) - _TOP
    if extra:
        raise ScenarioError(f"{where}: unknown field(s) {sorted(extra)}")
    missing = _REQUIRED - set(d)
    if missing:
        raise ScenarioError(f"{where}: missing field(s) {sorted(missing)}")
    name = d.get("name", "")
    if not isinstance(name, str):
        raise ScenarioError(f"{where}.name: expected a string")

    try:
        nominal = model_from_dict(d["nominal"], where=f"{where}.nominal")
        dev = _section(d, "deviation", where)
        deviation = Deviation(*(_array(dev[k], f"{where}.deviation.{k}", 2) for k in "ABC"))
        rho = _number(d["rho"], f"{where}.rho")
        T = d.get("state_map")
        T = None if T is None else _array(T, f"{where}.state_map", 2)
        plant = make_scenario(nominal, deviation, rho, T, name=name)

        wsec = _section(d, "weights", where)
        wspec = {k: wsec.get(k, 1.0) for k in ("Qc", "Rc", "Qo", "Ro")}
        weights = DesignWeights.scaled(nominal, **{k: _array(v, f"{where}.weights.{k}")
                                                   for k, v in wspec.items()})

        esec = _section(d, "event", where)
        Q_t = esec.get("Q_t")
        Q_t = np.eye(nominal.n) if Q_t is None else _array(Q_t, f"{where}.event.Q_t", 2)
        event = EventConfig(Q_t, _number(esec["q_t"], f"{where}.event.q_t", True),
                            _number(esec.get("delta_min", 0.1), f"{where}.event.delta_min", True))

        ssec = _section(d, "simulation", where)
        x0 = ssec.get("x0")
        x0 = default_x0(plant) if x0 is None else _array(x0, f"{where}.simulation.x0", 1)
        xo0 = ssec.get("xo0")
        xo0 = np.zeros(plant.n_hat) if xo0 is None else _array(xo0, f"{where}.simulation.xo0", 1)
        if x0.shape != (plant.n,):
            raise ScenarioError(f"{where}.simulation.x0: expected {plant.n} entries")
        if xo0.shape != (plant.n_hat,):
            raise ScenarioError(f"{where}.simulation.xo0: expected {plant.n_hat} entries")
        duration = _number(ssec.get("duration", 60.0), f"{where}.simulation.duration", True)
        dt = _number(ssec.get("dt", 1e-3), f"{where}.simulation.dt", True)

        wsw = _section(d, "sweep", where)
        steps = wsw.get("steps", 200)
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
            raise ScenarioError(f"{where}.sweep.steps: expected an integer >= 2")
        sw = SweepRange(_number(wsw.get("delta_min", 0.05), f"{where}.sweep.delta_min", True),
                        _number(wsw.get("delta_max", 5.0), f"{where}.sweep.delta_max", True),
                        steps)
        if not sw.delta_min < sw.delta_max:
            raise ScenarioError(f"{where}.sweep: delta_min must be below delta_max")
    except ScenarioError:
        raise
    except IntermittentError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc

    return Scenario(name, plant, weights, event, x0, xo0, duration, dt, sw, wspec)


def _plain(w):
    a = np.asarray(w, dtype=float)
    return float(a) if a.ndim == 0 else a.tolist()


def scenario_to_dict(sc):
    p = sc.plant
    nominal = model_to_dict(p.nominal)
    wspec = sc.weight_spec or {"Qc": sc.weights.Qc, "Rc": sc.weights.Rc,
                              "Qo": sc.weights.Qo, "Ro": sc.weights.Ro}
    return {
        "name": sc.name,
        "nominal": nominal,
        "deviation": {k: np.asarray(v).tolist() for k, v in zip("ABC", p.deviation)},
        "rho": p.rho,
        "state_map": p.state_map.tolist(),
        "weights": {k: _plain(v) for k, v in wspec.items()},
        "event": {"Q_t": sc.event.Q_t.tolist(), "q_t": sc.event.q_t,
                  "delta_min": sc.event.delta_min},
        "simulation": {"x0": sc.x0.tolist(), "xo0": sc.xo0.tolist(),
                       "duration": sc.duration, "dt": sc.dt},
        "sweep": {"delta_min": sc.sweep.delta_min, "delta_max": sc.sweep.delta_max,
                  "steps": sc.sweep.steps},
    }


def _loads(text, where):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{where}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(d, where=where)


def load_scenario(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from exc
    return _loads(text, str(path))


def shipped_scenario(name):
    """Load one of the scenarios bundled with the package (see ``SHIPPED``)."""
    if name not in SHIPPED:
        raise ScenarioError(f"unknown shipped scenario {name!r}; choose from {SHIPPED}")
    text = resources.files("intermittent.scenarios").joinpath(f"{name}.json").read_text()
    return _loads(text, f"{name}.json")


def with_parameter(sc, param, value):
    """Copy of `sc` with one parameter changed.

    ``rho`` rescales the deviation, ``q_t`` changes the event threshold and
    ``b`` replaces the input deviation by ``(1 - b) Bhat`` at ``rho = 1`` so
    the actual input matrix is ``b Bhat``.  ``b`` needs ``nhat == n``.
    """
    value = float(value)
    p = sc.plant
    if param == "rho":
        return replace(sc, plant=p.with_rho(value))
    if param == "q_t":
        return replace(sc, event=EventConfig(sc.event.Q_t, value, sc.event.delta_min))
    if param == "b":
        if p.n != p.n_hat:
            raise ScenarioError("parameter b needs matching nominal and actual orders")
        dev = Deviation(p.deviation.A, (1.0 - value) * p.nominal.B, p.deviation.C)
        return replace(sc, plant=p.with_deviation(dev, rho=1.0))
    raise ScenarioError(f"unknown sweep parameter {param!r}; choose rho, q_t or b")


# --------------------------------------------------------------------------
# Bundled scenarios, rebuilt from the model builders.  The JSON files under
# ``intermittent/scenarios`` are written by :func:`write_shipped`.

_SIMPLE_WEIGHTS = {"Qc": 3.0, "Rc": 1.0, "Qo": 100.0, "Ro": 1.0}
_THREE_LINK_WEIGHTS = {"Qc": 1e6, "Rc": 1.0, "Qo": 100.0, "Ro": 1.0}
_NEGLECTED_WEIGHTS = {"Qc": 1e4, "Rc": 1.0, "Qo": [1e4, 10.0], "Ro": 1.0}


def _assemble(name, plant, wspec, x0, duration, xo0=None, q_t=0.1):
    weights = DesignWeights.scaled(plant.nominal, **wspec)
    xo0 = np.zeros(plant.n_hat) if xo0 is None else np.asarray(xo0, float)
    return Scenario(name, plant, weights, EventConfig.identity(plant.n_hat, q_t, 0.1),
                    np.asarray(x0, float), xo0, duration, 1e-3, SweepRange(), dict(wspec))


def build_shipped(name):
    """Construct a bundled scenario from the model builders."""
    from .model import neglected_dynamics_scenario, simple_scenario, three_link_scenario

    if name == "simple_rho0":
        plant = simple_scenario(0.8, rho=0.0)
        plant = replace(plant, name=name)
        x0 = default_x0(plant)
        # observer starts on the true state: the matched loop then needs no events
        return _assemble(name, plant, _SIMPLE_WEIGHTS, x0, 50.0, xo0=x0, q_t=1e-3)
    if name.startswith("simple_b"):
        plant = simple_scenario(float(name[len("simple_b"):]))
        return _assemble(name, plant, _SIMPLE_WEIGHTS, default_x0(plant), 60.0)
    if name.startswith("three_link_b"):
        plant = three_link_scenario(float(name[len("three_link_b"):]))
        return _assemble(name, plant, _THREE_LINK_WEIGHTS, default_x0(plant), 60.0)
    if name == "neglected_dynamics":
        plant = neglected_dynamics_scenario()
        return _assemble(name, plant, _NEGLECTED_WEIGHTS, default_x0(plant), 100.0)
    raise ScenarioError(f"unknown shipped scenario {name!r}")


def write_shipped(directory):
    from pathlib import Path

    for name in SHIPPED:
        path = Path(directory) / f"{name}.json"
        path.write_text(json.dumps(scenario_to_dict(build_shipped(name)), indent=1) + "\n")
