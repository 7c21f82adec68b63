"""Independent reference computations used by the tests.

Nothing here imports the package's numerical code: states are plain dicts
``{(mode, "H"|"V"): amplitude}`` and elements are applied one basis ket at a
time from their textbook action.
"""

import cmath
import math

R2 = 1 / math.sqrt(2)


def ket(mode, pol, amp=1.0):
    return {(mode, pol): complex(amp)}


def add(*states):
    out = {}
    for s in states:
        for k, a in s.items():
            out[k] = out.get(k, 0) + a
    return out


def scale(s, c):
    return {k: c * a for k, a in s.items()}


def _act(kind, args, mode, pol):
    """Image of a single basis ket under one element."""
    if kind in ("bs", "qbs"):
        i, j = args
        if kind == "qbs" and pol == "V" or mode not in (i, j):
            return ket(mode, pol)
        if mode == i:
            return add(ket(i, pol, R2), ket(j, pol, R2))
        return add(ket(i, pol, R2), ket(j, pol, -R2))
    if kind == "pbs":
        i, j = args
        if pol == "H" or mode not in (i, j):
            return ket(mode, pol)
        return ket(j if mode == i else i, "V")
    if kind == "phase":
        i, theta = args
        return ket(mode, pol, cmath.exp(1j * theta) if mode == i else 1)
    if kind == "hwp":
        i, deg = args
        if mode != i:
            return ket(mode, pol)
        c, s = math.cos(math.radians(2 * deg)), math.sin(math.radians(2 * deg))
        if pol == "H":
            return add(ket(i, "H", c), ket(i, "V", s))
        return add(ket(i, "H", s), ket(i, "V", -c))
    raise ValueError(kind)


def run(state, elements):
    """Apply ``[(kind, args), ...]`` in order."""
    for kind, args in elements:
        state = add(*(scale(_act(kind, args, m, p), a) for (m, p), a in state.items()))
    return state


def vec(state, d):
    """Dense vector in the package's index order (2*mode + polbit)."""
    out = [0j] * (2 * d)
    for (m, p), a in state.items():
        out[2 * m + (0 if p == "H" else 1)] += a
    return out


def braket(a, b):
    return sum(x.conjugate() * y for x, y in zip(a, b))


def particle(theta):
    return [R2, R2 * cmath.exp(1j * theta)]


def wave(theta):
    g = cmath.exp(0.5j * theta)
    return [g * math.cos(theta / 2), g * -1j * math.sin(theta / 2)]


def fig2_base(alpha, theta):
    src = add(ket(0, "H", math.sin(alpha)), ket(0, "V", math.cos(alpha)))
    return run(src, [("bs", (0, 1)), ("phase", (1, theta)), ("qbs", (0, 1))])


def fig2_hwp(alpha, theta):
    return run(fig2_base(alpha, theta), [("hwp", (0, 22.5)), ("hwp", (1, 22.5))])


def path0_given_h(state):
    """P(mode 0, H) / P(H) by direct summation."""
    ph = sum(abs(a) ** 2 for (m, p), a in state.items() if p == "H")
    return sum(abs(a) ** 2 for (m, p), a in state.items() if p == "H" and m == 0) / ph
