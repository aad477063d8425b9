"""Acceptance checks: theory against simulation on the bundled scenarios.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``; each check prints one PASS/FAIL line.
"""

import math
import sys
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from intermittent.analysis import CycleClass, predict, sweep  # noqa: E402
from intermittent.design import design_controller  # noqa: E402
from intermittent.errorsys import assemble, nominal_assembly, phi_bar  # noqa: E402
from intermittent.model import EventConfig  # noqa: E402
from intermittent.numerics import eig, expm, solve_care  # noqa: E402
from intermittent.pipeline import analyze, simulate  # noqa: E402
from intermittent.scenario import SHIPPED, shipped_scenario, with_parameter  # noqa: E402
from intermittent.simulator import (  # noqa: E402
    attach_eigen_coordinates,
    continuous_matrix,
    measure_cycle,
    simulate_intermittent,
)

from conftest import scalar_scenario  # noqa: E402
from test_analysis import oracle_delta_crit  # noqa: E402


@lru_cache(maxsize=None)
def run(name, q_t=None):
    sc = shipped_scenario(name)
    if q_t is not None:
        sc = with_parameter(sc, "q_t", q_t)
    an = analyze(sc, reference=False)
    return sc, an, simulate(sc, an.design)


def report(label, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return ok


def check_matched_null():
    sc = shipped_scenario("simple_rho0")
    d = design_controller(sc.plant.nominal, sc.weights)
    es = assemble(sc.plant, d)
    sw = sweep(es, 0.05, 5.0, 200)
    ev = EventConfig(sc.event.Q_t, 1e-3, sc.event.delta_min)
    tr = simulate_intermittent(sc.plant, d, ev, sc.x0, 50.0, 1e-3, sc.xo0)
    ok = sw.max_magnitudes.max() < 1 and tr.events.size <= 2
    return ok, f"max rho(phi) = {sw.max_magnitudes.max():.6f}, events = {tr.events.size}"


def check_reduction_identity():
    worst = 0.0
    names = []
    for name in SHIPPED:
        sc = shipped_scenario(name)
        if sc.plant.n != sc.plant.n_hat:
            continue
        d = design_controller(sc.plant.nominal, sc.weights)
        a = assemble(sc.plant.with_rho(0.0), d).A_bar_C
        b = nominal_assembly(sc.plant.nominal, d).A_bar_C
        worst = max(worst, float(np.abs(a - b).max()))
        names.append(name)
    return worst <= 1e-14, f"max abs difference {worst:.1e} over {len(names)} scenarios"


def check_fixed_point():
    parts, ok = [], True
    for name in ("simple_b0.8", "simple_b1.2"):
        _, an, _ = run(name)
        p = an.prediction
        sign = {CycleClass.PLUS_ONE: 1.0, CycleClass.MINUS_ONE: -1.0}.get(p.cycle_class)
        if sign is None:
            return False, f"{name}: class {p.cycle_class.value}"
        xv = p.gamma * np.real(p.v_crit)
        rel = np.linalg.norm(phi_bar(an.error_system, p.delta_crit) @ xv - sign * xv)
        rel /= np.linalg.norm(xv)
        ok &= rel <= 1e-7 and np.sign(p.lambda_crit.real) == sign
        parts.append(f"{name} {p.cycle_class.value} rel {rel:.1e}")
    return ok, "; ".join(parts)


def check_period_consistency():
    _, a8, t8 = run("simple_b0.8")
    _, a12, t12 = run("simple_b1.2")
    _, a17, t17 = run("simple_b1.7")
    m8, m12 = measure_cycle(t8), measure_cycle(t12)
    p8, p12 = a8.prediction, a12.prediction
    e8 = abs(m8.period - p8.delta_crit) / p8.delta_crit
    e12 = abs(m12.period - 2 * p12.delta_crit) / (2 * p12.delta_crit)
    ok8 = p8.cycle_class is CycleClass.PLUS_ONE and e8 <= 0.02
    ok12 = p12.cycle_class is CycleClass.MINUS_ONE and e12 <= 0.02 and m12.mean_cosine <= -0.9
    if t17.diverged_at is not None:
        ok17, d17 = True, f"diverged at {t17.diverged_at:.2f}s"
    else:
        m17 = measure_cycle(t17)
        ok17, d17 = m17.relative_spread > 0.10, f"tail spread {m17.relative_spread:.0%}"
    detail = (f"b0.8 {p8.cycle_class.value} err {e8:.2%}; b1.2 {p12.cycle_class.value} "
              f"err {e12:.2%} cos {m12.mean_cosine:.3f}; b1.7 {d17}")
    return ok8 and ok12 and ok17, detail


def check_interval_convergence():
    parts, ok = [], True
    for name in ("simple_b0.8", "simple_b1.2"):
        _, an, tr = run(name)
        dc = an.prediction.delta_crit
        worst = float(np.max(np.abs(tr.intervals[-5:] - dc)) / dc)
        ok &= worst <= 0.02
        parts.append(f"{name} worst {worst:.2%}")
    return ok, "; ".join(parts)


def check_amplitude_law():
    parts, ok = [], True
    for name in ("simple_b0.8", "simple_b1.2"):
        _, an, tr = run(name)
        chi = attach_eigen_coordinates(tr, an.basis).chi[tr.event_index[-5:], 0]
        worst = float(np.max(np.abs(np.abs(chi) - an.prediction.gamma)) / an.prediction.gamma)
        ok &= worst <= 0.03
        parts.append(f"{name} |chi_k1| vs gamma {worst:.2%}")
    amps = np.array([measure_cycle(run("simple_b0.8", q)[2]).amplitude for q in (0.05, 0.1, 0.2)])
    ratio = amps / amps[0]
    worst = float(np.max(np.abs(ratio - [1, 2, 4]) / [1, 2, 4]))
    ok &= worst <= 0.05
    parts.append(f"amplitude ratios {ratio[1]:.4f}, {ratio[2]:.4f} (err {worst:.2%})")
    return ok, "; ".join(parts)


def check_three_link():
    parts, ok = [], True
    for name, want in (("three_link_b0.9", CycleClass.PLUS_ONE),
                       ("three_link_b1.1", CycleClass.MINUS_ONE)):
        _, an, tr = run(name)
        p = an.prediction
        if tr.diverged_at is not None or p.period is None:
            return False, f"{name}: class {p.cycle_class.value}, diverged {tr.diverged_at}"
        m = measure_cycle(tr)
        err = abs(m.period - p.period) / p.period
        ok &= p.cycle_class is want and err <= 0.02
        parts.append(f"{name} {p.cycle_class.value} dcrit {p.delta_crit:.4f} period err {err:.2%}")
    return ok, "; ".join(parts)


def check_neglected_dynamics():
    sc, an, tr = run("neglected_dynamics")
    re = float(np.max(np.linalg.eigvals(continuous_matrix(sc.plant, an.design)).real))
    p = an.prediction
    if tr.diverged_at is not None or p.period is None:
        return False, f"continuous max Re {re:.4f}; class {p.cycle_class.value}, diverged {tr.diverged_at}"
    m = measure_cycle(tr)
    err = abs(m.period - p.period) / p.period
    ok = re > 0 and p.cycle_class is CycleClass.PLUS_ONE and err <= 0.02
    return ok, (f"continuous max Re {re:+.4f}; intermittent bounded, {p.cycle_class.value}, "
                f"period err {err:.2%}")


def check_numerics():
    rng = np.random.default_rng(7)
    worst_sg = worst_inv = worst_res = 0.0
    for _ in range(20):
        M = rng.normal(size=(6, 6))
        M *= rng.uniform(0.1, 5.0) / np.linalg.norm(M, 2)
        s, t = rng.uniform(0, 2, 2)
        E = expm(M * (s + t))
        worst_sg = max(worst_sg, np.linalg.norm(E - expm(M * s) @ expm(M * t)) / np.linalg.norm(E))
        worst_inv = max(worst_inv, np.abs(expm(M) @ expm(-M) - np.eye(6)).max())
        worst_res = max(worst_res, eig(M).residual)
    p = solve_care([[1.0]], [[1.0]], [[1.0]], [[1.0]])[0, 0]
    perr = abs(p - (1 + math.sqrt(2)))
    ok = worst_sg <= 1e-9 and worst_inv <= 1e-9 and worst_res <= 1e-9 and perr <= 1e-12
    return ok, (f"semigroup {worst_sg:.1e}, inverse {worst_inv:.1e}, eig residual "
                f"{worst_res:.1e}, CARE |p - (1+sqrt2)| {perr:.1e}")


def check_scalar_oracle():
    parts, ok = [], True
    for b in (0.8, 1.2):
        sc = scalar_scenario(b)
        es = assemble(sc, design_controller(sc.nominal))
        got = predict(es, EventConfig.identity(1, 0.1))[0].delta_crit
        want = oracle_delta_crit(b)
        ok &= abs(got - want) <= 1e-8
        parts.append(f"b={b}: {got:.10f} vs {want:.10f}")
    return ok, "; ".join(parts)


CHECKS = [
    ("matched-model null result", check_matched_null),
    ("reduction identity", check_reduction_identity),
    ("fixed-point certificate", check_fixed_point),
    ("period consistency", check_period_consistency),
    ("interval convergence", check_interval_convergence),
    ("amplitude law", check_amplitude_law),
    ("three-link qualitative pattern", check_three_link),
    ("neglected dynamics", check_neglected_dynamics),
    ("numerics kernel suite", check_numerics),
    ("scalar-plant oracle", check_scalar_oracle),
]


@pytest.mark.parametrize("label,check", CHECKS, ids=[c[0].replace(" ", "_") for c in CHECKS])
def test_criterion(label, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print()
        report(label, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = [report(label, *check()) for label, check in CHECKS]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
