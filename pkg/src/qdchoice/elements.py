"""Unitaries for linear-optical elements acting on path (x) polarization.

Conventions:

* ``BS(i, j)`` is a Hadamard on the path pair, the same for both polarizations:
  ``|i> -> (|i> + |j>)/sqrt2``, ``|j> -> (|i> - |j>)/sqrt2``.
* ``PBS(i, j)`` transmits H and swaps V between modes ``i`` and ``j``.
* ``PHASE(i, theta)`` multiplies both polarizations of mode ``i`` by ``e^{i theta}``.
* ``HWP(i, angle_deg)`` applies the Jones matrix
  ``[[cos 2a, sin 2a], [sin 2a, -cos 2a]]`` to mode ``i``; at 22.5 deg this is a
  Hadamard on polarization.
* ``QBS(i, j)`` is ``BS(i, j)`` on the H subspace and the identity on V.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidModeError, NotUnitaryError
from .statecore import UNITARY_TOL, Pol, is_unitary

_SQRT1_2 = 1.0 / math.sqrt(2.0)


class Kind(enum.Enum):
    BS = "bs"
    PBS = "pbs"
    PHASE = "phase"
    HWP = "hwp"
    QBS = "qbs"


TWO_MODE = {Kind.BS, Kind.PBS, Kind.QBS}


@dataclass(frozen=True)
class Element:
    """One optical element.

    ``j`` is used by the two-mode kinds; ``theta`` (radians) by PHASE;
    ``angle_deg`` (degrees) by HWP.
    """

    kind: Kind
    i: int
    j: int | None = None
    theta: float = 0.0
    angle_deg: float = 0.0

    def __post_init__(self):
        if self.kind in TWO_MODE:
            if self.j is None:
                raise InvalidModeError(f"{self.kind.name} needs two mode indices")
            if self.i == self.j:
                raise InvalidModeError(f"{self.kind.name} needs distinct modes, got {self.i} twice")
        elif self.j is not None:
            raise InvalidModeError(f"{self.kind.name} acts on a single mode")

    def modes(self) -> tuple[int, ...]:
        return (self.i,) if self.j is None else (self.i, self.j)

    def __str__(self) -> str:
        if self.kind is Kind.PHASE:
            return f"PHASE({self.i}, {self.theta:g})"
        if self.kind is Kind.HWP:
            return f"HWP({self.i}, {self.angle_deg:g}deg)"
        return f"{self.kind.name}({self.i}, {self.j})"


def BS(i: int, j: int) -> Element:
    return Element(Kind.BS, i, j)


def PBS(i: int, j: int) -> Element:
    return Element(Kind.PBS, i, j)


def QBS(i: int, j: int) -> Element:
    return Element(Kind.QBS, i, j)


def PHASE(i: int, theta: float) -> Element:
    return Element(Kind.PHASE, i, theta=float(theta))


def HWP(i: int, angle_deg: float) -> Element:
    return Element(Kind.HWP, i, angle_deg=float(angle_deg))


def _idx(mode: int, pol: Pol) -> int:
    return 2 * mode + pol.bit


def _hadamard_on(U: np.ndarray, i: int, j: int, pols: Iterable[Pol]) -> None:
    for p in pols:
        a, b = _idx(i, p), _idx(j, p)
        U[a, a] = _SQRT1_2
        U[b, a] = _SQRT1_2
        U[a, b] = _SQRT1_2
        U[b, b] = -_SQRT1_2


def element_unitary(e: Element, d: int) -> np.ndarray:
    """Return the ``2d x 2d`` unitary of ``e``; identity outside its modes."""
    for m in e.modes():
        if not 0 <= m < d:
            raise InvalidModeError(f"{e}: mode {m} out of range for d={d}")
    U = np.eye(2 * d, dtype=complex)
    if e.kind is Kind.BS:
        _hadamard_on(U, e.i, e.j, (Pol.H, Pol.V))
    elif e.kind is Kind.QBS:
        _hadamard_on(U, e.i, e.j, (Pol.H,))
    elif e.kind is Kind.PBS:
        a, b = _idx(e.i, Pol.V), _idx(e.j, Pol.V)
        U[a, a] = U[b, b] = 0.0
        U[a, b] = U[b, a] = 1.0
    elif e.kind is Kind.PHASE:
        ph = np.exp(1j * e.theta)
        U[_idx(e.i, Pol.H), _idx(e.i, Pol.H)] = ph
        U[_idx(e.i, Pol.V), _idx(e.i, Pol.V)] = ph
    elif e.kind is Kind.HWP:
        two = 2.0 * math.radians(e.angle_deg)
        c, s = math.cos(two), math.sin(two)
        h, v = _idx(e.i, Pol.H), _idx(e.i, Pol.V)
        U[h, h], U[h, v] = c, s
        U[v, h], U[v, v] = s, -c
    else:  # pragma: no cover
        raise ValueError(f"unknown element kind {e.kind!r}")
    return U


def compose(elements: Iterable[Element], d: int) -> np.ndarray:
    """Product ``U_n ... U_2 U_1``; the first listed element acts first."""
    U = np.eye(2 * d, dtype=complex)
    for e in elements:
        U = element_unitary(e, d) @ U
    if not is_unitary(U, UNITARY_TOL):
        raise NotUnitaryError("composed operator drifted from unitarity")
    return U


def qbs_decomposition(i: int, j: int, anc_i: int, anc_j: int) -> list[Element]:
    """PBS/BS/PBS network equivalent to ``QBS(i, j)``.

    V light is routed into the ancilla modes before the beam splitter and
    brought back afterwards, so only H sees the BS.
    """
    if len({i, j, anc_i, anc_j}) != 4:
        raise InvalidModeError(f"decomposition needs four distinct modes, got {(i, j, anc_i, anc_j)}")
    return [PBS(i, anc_i), PBS(j, anc_j), BS(i, j), PBS(i, anc_i), PBS(j, anc_j)]
