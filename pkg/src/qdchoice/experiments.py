"""Delayed-choice scenarios, closed-form intensities and simulator checks."""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bench import BenchCircuit
from .elements import BS, HWP, PHASE, QBS, Element, compose
from .errors import DegeneratePostselectionError
from .measurement import (
    DetectorSpec,
    detector_probability,
    joint_probability,
    postselect,
)
from .statecore import Pol, PureState, source_state

SQRT2 = math.sqrt(2.0)
HWP_DIAGONAL_DEG = 22.5

FIG3_THETA_RANGE = (0.0, 5 * math.pi)
FIG3_ALPHA_RANGE = (0.0, math.pi / 2)
FIG3_THETA_STEPS = 256
FIG3_ALPHA_STEPS = 64


class ScenarioId(enum.Enum):
    WHEELER_WITH_BS2 = "wheeler_with_bs2"
    WHEELER_WITHOUT_BS2 = "wheeler_without_bs2"
    FIG1_QUANTUM = "fig1_quantum"
    FIG2_MIXTURE = "fig2_mixture"
    FIG2_PARTICLE_WAVE = "fig2_particle_wave"
    FIG2_SUPERPOSITION = "fig2_superposition"


FIG2_SCENARIOS = (
    ScenarioId.FIG1_QUANTUM,
    ScenarioId.FIG2_MIXTURE,
    ScenarioId.FIG2_PARTICLE_WAVE,
    ScenarioId.FIG2_SUPERPOSITION,
)


@dataclass(frozen=True)
class Scenario:
    """A scenario topology plus its parameters.

    ``postselect`` only matters for the superposition readout, where H selects
    the D2/D3 branch and V the D1/D4 branch.
    """

    id: ScenarioId
    alpha: float = 0.0
    theta: float = 0.0
    postselect: Pol = Pol.H

    def __post_init__(self):
        object.__setattr__(self, "id", ScenarioId(self.id))
        if not (math.isfinite(self.alpha) and math.isfinite(self.theta)):
            raise ValueError("scenario parameters must be finite")


def _four_detectors() -> tuple[DetectorSpec, ...]:
    return (
        DetectorSpec("D1", 0, Pol.V),
        DetectorSpec("D2", 0, Pol.H),
        DetectorSpec("D3", 1, Pol.H),
        DetectorSpec("D4", 1, Pol.V),
    )


def base_elements(theta: float) -> list[Element]:
    """First BS, phase shifter, then the polarization-controlled BS."""
    return [BS(0, 1), PHASE(1, theta), QBS(0, 1)]


def build_scenario(s: Scenario) -> BenchCircuit:
    sid, theta = s.id, s.theta
    if sid in (ScenarioId.WHEELER_WITH_BS2, ScenarioId.WHEELER_WITHOUT_BS2):
        elements = [BS(0, 1), PHASE(1, theta)]
        if sid is ScenarioId.WHEELER_WITH_BS2:
            elements.append(BS(0, 1))
        dets = (DetectorSpec("D1", 0), DetectorSpec("D2", 1))
        return BenchCircuit(2, math.pi / 2, 0, tuple(elements), dets)
    elements = base_elements(theta)
    if sid is ScenarioId.FIG1_QUANTUM:
        dets = (DetectorSpec("D1", 0), DetectorSpec("D2", 1))
        return BenchCircuit(2, s.alpha, 0, tuple(elements), dets)
    if sid is ScenarioId.FIG2_MIXTURE:
        dets = (DetectorSpec("D2", 0), DetectorSpec("D3", 1))
        return BenchCircuit(2, s.alpha, 0, tuple(elements), dets)
    if sid is ScenarioId.FIG2_PARTICLE_WAVE:
        return BenchCircuit(2, s.alpha, 0, tuple(elements), _four_detectors())
    elements += [HWP(0, HWP_DIAGONAL_DEG), HWP(1, HWP_DIAGONAL_DEG)]
    return BenchCircuit(2, s.alpha, 0, tuple(elements), _four_detectors(), s.postselect)


@functools.lru_cache(maxsize=1024)
def _circuit_unitary(elements: tuple[Element, ...], d: int) -> np.ndarray:
    U = compose(elements, d)
    U.setflags(write=False)
    return U


def simulate(circuit: BenchCircuit) -> PureState:
    """Final state of the circuit before any postselection."""
    src = source_state(circuit.alpha, circuit.source_mode, circuit.d)
    U = _circuit_unitary(tuple(circuit.elements), circuit.d)
    out = U @ src.amplitudes
    return PureState(circuit.d, out / np.linalg.norm(out))


@dataclass
class CircuitResult:
    """Outcome of evaluating a circuit.

    ``probabilities`` maps detector names to their reported intensity, or
    ``None`` when the detector's polarization branch is empty.
    ``joint`` holds the unconditional probability of each detector event
    (after postselection, when the circuit asks for it).
    """

    state: PureState
    detected_state: PureState
    postselect_probability: float | None
    probabilities: dict[str, float | None] = field(default_factory=dict)
    joint: dict[str, float] = field(default_factory=dict)


def evaluate(circuit: BenchCircuit) -> CircuitResult:
    """Simulate, postselect if requested, and read every detector.

    Raises:
        DegeneratePostselectionError: when the circuit's postselection has
            (numerically) zero probability.
    """
    state = simulate(circuit)
    detected, p_post = state, None
    if circuit.postselect is not None:
        detected, p_post = postselect(state, circuit.postselect)
    res = CircuitResult(state, detected, p_post)
    for det in circuit.detectors:
        res.joint[det.name] = joint_probability(detected, det)
        try:
            res.probabilities[det.name] = detector_probability(detected, det)
        except DegeneratePostselectionError:
            res.probabilities[det.name] = None
    return res


# closed-form intensities


def oracle_wave(theta):
    return np.cos(np.asarray(theta) / 2) ** 2


def oracle_particle(theta=None):
    if theta is None:
        return 0.5
    return np.full_like(np.asarray(theta, dtype=float), 0.5)


def oracle_mixture(theta, alpha):
    """Path-0 intensity of the polarization-traced mixture."""
    theta, alpha = np.asarray(theta), np.asarray(alpha)
    return np.cos(theta / 2) ** 2 * np.sin(alpha) ** 2 + 0.5 * np.cos(alpha) ** 2


def oracle_superposition(theta, alpha):
    """Path-0 intensity of the H-postselected wave/particle superposition."""
    theta, alpha = np.asarray(theta), np.asarray(alpha)
    s2a = np.sin(2 * alpha)
    num = 1 + np.sin(alpha) ** 2 * np.cos(theta) + SQRT2 * s2a * np.cos(theta / 2) ** 2
    den = 2 + SQRT2 * s2a * np.cos(theta)
    return num / den


def oracle_superposition_v(theta, alpha):
    """D1 reading of the V branch, ``cos(a)|particle> - sin(a)|wave>``: alpha -> -alpha."""
    return oracle_superposition(theta, -np.asarray(alpha))


def _one_minus(f: Callable) -> Callable:
    return lambda theta, alpha: 1.0 - f(theta, alpha)


_WAVE = lambda theta, alpha: oracle_wave(theta)  # noqa: E731
_PARTICLE = lambda theta, alpha: oracle_particle(theta)  # noqa: E731

# (detector, postselection, oracle(theta, alpha)) triples checked per scenario
CHECKS: dict[ScenarioId, list[tuple[str, Pol, Callable]]] = {
    ScenarioId.WHEELER_WITH_BS2: [("D1", Pol.H, _WAVE), ("D2", Pol.H, _one_minus(_WAVE))],
    ScenarioId.WHEELER_WITHOUT_BS2: [("D1", Pol.H, _PARTICLE), ("D2", Pol.H, _PARTICLE)],
    ScenarioId.FIG1_QUANTUM: [
        ("D1", Pol.H, oracle_mixture),
        ("D2", Pol.H, _one_minus(oracle_mixture)),
    ],
    ScenarioId.FIG2_MIXTURE: [
        ("D2", Pol.H, oracle_mixture),
        ("D3", Pol.H, _one_minus(oracle_mixture)),
    ],
    ScenarioId.FIG2_PARTICLE_WAVE: [
        ("D1", Pol.H, _PARTICLE),
        ("D2", Pol.H, _WAVE),
        ("D3", Pol.H, _one_minus(_WAVE)),
        ("D4", Pol.H, _PARTICLE),
    ],
    ScenarioId.FIG2_SUPERPOSITION: [
        ("D2", Pol.H, oracle_superposition),
        ("D3", Pol.H, _one_minus(oracle_superposition)),
        ("D1", Pol.V, oracle_superposition_v),
        ("D4", Pol.V, _one_minus(oracle_superposition_v)),
    ],
}


@dataclass
class VerifyReport:
    scenario: ScenarioId
    tol: float
    max_deviation: float
    points: int
    skipped: int
    per_detector: dict[str, float]

    @property
    def passed(self) -> bool:
        return self.points > 0 and self.max_deviation <= self.tol

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario.value,
            "tol": self.tol,
            "max_deviation": self.max_deviation,
            "points": self.points,
            "skipped": self.skipped,
            "per_detector": dict(self.per_detector),
            "passed": self.passed,
        }


def verify_scenario(
    sid: ScenarioId | str,
    theta_grid: Sequence[float],
    alpha_grid: Sequence[float],
    tol: float = 1e-10,
    oracle_offset: float = 0.0,
) -> VerifyReport:
    """Compare simulated detector readings with the closed forms on a grid.

    Points where a detector's branch is empty are counted as skipped.
    ``oracle_offset`` shifts every oracle value; it exists to self-test the
    harness.
    """
    sid = ScenarioId(sid)
    if len(theta_grid) == 0 or len(alpha_grid) == 0:
        raise ValueError("verification grids must be nonempty")
    worst: dict[str, float] = {}
    points = skipped = 0
    for name, pol, oracle in CHECKS[sid]:
        dev = 0.0
        for alpha in alpha_grid:
            for theta in theta_grid:
                circuit = build_scenario(Scenario(sid, float(alpha), float(theta), pol))
                value = evaluate(circuit).probabilities[name]
                if value is None:
                    skipped += 1
                    continue
                expected = float(oracle(theta, alpha)) + oracle_offset
                dev = max(dev, abs(value - expected))
                points += 1
        worst[name] = dev
    return VerifyReport(sid, tol, max(worst.values()), points, skipped, worst)


@dataclass
class SweepResult:
    """Intensity surface; ``values[a, t]`` is taken at ``alpha_grid[a]``, ``theta_grid[t]``.

    Points whose detector branch is empty hold NaN.
    """

    scenario: ScenarioId
    detector: str
    theta_grid: np.ndarray
    alpha_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        shape = (len(self.alpha_grid), len(self.theta_grid))
        if self.values.shape != shape:
            raise ValueError(f"values shape {self.values.shape} != {shape}")
        finite = self.values[~np.isnan(self.values)]
        if finite.size and (finite.min() < 0 or finite.max() > 1):
            raise ValueError("surface values must lie in [0, 1]")


DEFAULT_DETECTOR = {
    ScenarioId.WHEELER_WITH_BS2: "D1",
    ScenarioId.WHEELER_WITHOUT_BS2: "D1",
    ScenarioId.FIG1_QUANTUM: "D1",
    ScenarioId.FIG2_MIXTURE: "D2",
    ScenarioId.FIG2_PARTICLE_WAVE: "D2",
    ScenarioId.FIG2_SUPERPOSITION: "D2",
}


def open_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """``n`` evenly spaced interior points of ``(lo, hi)``."""
    return np.linspace(lo, hi, n + 2)[1:-1]


def fig3_grids(theta_steps: int = FIG3_THETA_STEPS, alpha_steps: int = FIG3_ALPHA_STEPS):
    theta = open_grid(*FIG3_THETA_RANGE, theta_steps)
    alpha = np.linspace(*FIG3_ALPHA_RANGE, alpha_steps)
    return theta, alpha


def surface(
    sid: ScenarioId | str,
    theta_grid: Sequence[float] | None = None,
    alpha_grid: Sequence[float] | None = None,
    detector: str | None = None,
    postselect: Pol = Pol.H,
) -> SweepResult:
    """Simulated detector intensity over an (alpha, theta) grid.

    Defaults to the Fig. 3 style grids: 256 interior points of (0, 5 pi) and
    64 points of [0, pi/2].
    """
    sid = ScenarioId(sid)
    default_theta, default_alpha = fig3_grids()
    theta = np.asarray(default_theta if theta_grid is None else theta_grid, dtype=float)
    alpha = np.asarray(default_alpha if alpha_grid is None else alpha_grid, dtype=float)
    if theta.size == 0 or alpha.size == 0:
        raise ValueError("sweep grids must be nonempty")
    name = detector or DEFAULT_DETECTOR[sid]
    values = np.empty((alpha.size, theta.size))
    for a, al in enumerate(alpha):
        for t, th in enumerate(theta):
            res = evaluate(build_scenario(Scenario(sid, float(al), float(th), postselect)))
            p = res.probabilities[name]
            values[a, t] = np.nan if p is None else p
    return SweepResult(sid, name, theta, alpha, values)
