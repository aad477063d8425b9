"""Limit cycles of event-driven intermittent control under model mismatch.

Typical use::

    from intermittent import shipped_scenario, pipeline

    sc = shipped_scenario("simple_b0.8")
    an, trace, ctrace, summary = pipeline.run(sc)
"""

from . import pipeline
from .analysis import (
    CycleClass,
    LimitCyclePrediction,
    SpectralSweep,
    classify_and_predict,
    critical_amplitude,
    eigen_coordinates,
    find_delta_crit,
    first_crossing,
    predict,
    sweep,
)
from .design import ControlDesign, DesignWeights, design_controller, effective_gain
from .errorsys import ErrorSystem, assemble, nominal_assembly, phi_bar
from .exceptions import *  # noqa: F401,F403
from .model import (
    Deviation,
    EventConfig,
    PlantScenario,
    StateSpaceModel,
    make_scenario,
    matched_scenario,
    neglected_dynamics_scenario,
    simple_scenario,
    simple_system,
    three_link_model,
    three_link_scenario,
    transfer_function,
)
from .numerics import EigenDecomposition, eig, expm, solve_care, spectral_radius
from .scenario import Scenario, load_scenario, shipped_scenario
from .simulator import (
    SimulationTrace,
    attach_eigen_coordinates,
    measure_cycle,
    simulate_continuous,
    simulate_intermittent,
)

__version__ = "0.1.0"
