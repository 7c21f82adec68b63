"""Born-rule probabilities, postselection, visibility and shot sampling."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator

import numpy as np

from .errors import DegeneratePostselectionError, UndefinedVisibilityError
from .statecore import (
    NORM_TOL,
    Pol,
    PureState,
    basis_labels,
    partial_trace_pol,
    to_density,
)

DEGENERATE_TOL = 1e-12
SAMPLING_SUM_TOL = 1e-9


@dataclass(frozen=True)
class DetectorSpec:
    """A detector on path ``mode``; ``pol=None`` accepts either polarization."""

    name: str
    mode: int
    pol: Pol | None = None

    @property
    def pol_name(self) -> str:
        return "any" if self.pol is None else self.pol.name


class ProbabilityTable(Mapping):
    """Read-only mapping from outcome keys to probabilities in ``[0, 1]``.

    Keys keep insertion order; ``sample_shots`` relies on it.
    """

    def __init__(self, entries: Mapping[Hashable, float] | Iterable[tuple[Hashable, float]]):
        data = dict(entries)
        for k, p in data.items():
            if not -NORM_TOL <= p <= 1 + NORM_TOL:
                raise ValueError(f"probability for {k} is {p!r}, outside [0, 1]")
        # clip rounding spill at the edges so consumers can rely on [0, 1]
        self._data = {k: min(max(float(p), 0.0), 1.0) for k, p in data.items()}

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self) -> Iterator:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def total(self) -> float:
        return float(sum(self._data.values()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {p:.6g}" for k, p in self._data.items())
        return f"ProbabilityTable({{{body}}})"


def outcome_probabilities(state: PureState) -> ProbabilityTable:
    probs = np.abs(state.amplitudes) ** 2
    return ProbabilityTable(zip(basis_labels(state.d), probs.tolist()))


def polarization_probability(state: PureState, pol: Pol) -> float:
    col = state.as_matrix()[:, pol.bit]
    return float(np.vdot(col, col).real)


def postselect(state: PureState, pol: Pol) -> tuple[PureState, float]:
    """Project onto polarization ``pol`` and renormalize.

    Returns:
        The conditional state and the probability of the postselection.

    Raises:
        DegeneratePostselectionError: if that probability is below 1e-12.
    """
    m = state.as_matrix().copy()
    m[:, pol.other().bit] = 0.0
    prob = float(np.vdot(m, m).real)
    if prob < DEGENERATE_TOL:
        raise DegeneratePostselectionError(
            f"postselection on {pol.name} has probability {prob:.3g}"
        )
    return PureState(state.d, m.ravel() / np.sqrt(prob)), prob


def joint_probability(state: PureState, event: DetectorSpec) -> float:
    """Unconditional probability that ``event`` fires."""
    row = state.as_matrix()[event.mode]
    if event.pol is None:
        return float(np.vdot(row, row).real)
    return float(abs(row[event.pol.bit]) ** 2)


def conditional_probability(state: PureState, event: DetectorSpec, given_pol: Pol) -> float:
    """``P(event and given_pol) / P(given_pol)``."""
    p_given = polarization_probability(state, given_pol)
    if p_given < DEGENERATE_TOL:
        raise DegeneratePostselectionError(
            f"conditioning on {given_pol.name} has probability {p_given:.3g}"
        )
    row = state.as_matrix()[event.mode]
    if event.pol is None or event.pol is given_pol:
        p_joint = abs(row[given_pol.bit]) ** 2
    else:
        p_joint = 0.0
    return float(min(p_joint / p_given, 1.0))


def detector_probability(state: PureState, det: DetectorSpec) -> float:
    """Intensity reported for a detector.

    Polarization-blind detectors read the path marginal. A detector behind a
    polarization filter reads the probability renormalized within its own
    polarization branch, so the four-detector readout gives 1/2 and
    cos^2(theta/2) style values independent of how the source splits its
    weight between H and V.
    """
    if det.pol is None:
        return joint_probability(state, det)
    return conditional_probability(state, det, det.pol)


def mixture_path_probabilities(state: PureState) -> ProbabilityTable:
    """Path-mode distribution with polarization marginalized."""
    p = np.sum(np.abs(state.as_matrix()) ** 2, axis=1)
    return ProbabilityTable(enumerate(p.tolist()))


def mixture_path_probabilities_via_trace(state: PureState) -> ProbabilityTable:
    """Same distribution computed as ``Tr[rho_path |m><m|]`` after tracing out polarization."""
    rho = partial_trace_pol(to_density(state)).entries
    return ProbabilityTable((m, float(rho[m, m].real)) for m in range(state.d))


def visibility(intensities) -> float:
    """Fringe visibility ``(I_max - I_min) / (I_max + I_min)``."""
    arr = np.asarray(list(intensities), dtype=float)
    if arr.size == 0:
        raise UndefinedVisibilityError("visibility of an empty intensity list")
    hi, lo = float(arr.max()), float(arr.min())
    if hi + lo <= DEGENERATE_TOL:
        raise UndefinedVisibilityError("I_max + I_min is zero")
    return (hi - lo) / (hi + lo)


def sample_shots(table: Mapping, n: int, seed: int) -> dict:
    """Draw ``n`` detection events from ``table``.

    The draw is a single ``numpy.random.default_rng(seed).multinomial`` call
    over the table's keys in iteration order, so the same (table, n, seed)
    always gives the same counts.
    """
    if n < 0:
        raise ValueError(f"shot count must be >= 0, got {n}")
    keys = list(table)
    if not keys:
        raise ValueError("cannot sample from an empty table")
    probs = np.array([table[k] for k in keys], dtype=float)
    if np.any(~np.isfinite(probs)) or np.any(probs < 0):
        raise ValueError("table contains negative or non-finite probabilities")
    total = probs.sum()
    if abs(total - 1.0) > SAMPLING_SUM_TOL:
        raise ValueError(f"table sums to {total!r}, expected 1")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, probs / total)
    return {k: int(c) for k, c in zip(keys, counts)}
