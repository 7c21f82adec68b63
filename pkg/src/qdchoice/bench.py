"""Line-oriented bench description language.

Example::

    # quantum delayed-choice, superposition readout
    modes 2
    source alpha=pi/4 mode=0
    bs 0 1
    phase 1 1.0
    qbs 0 1
    hwp 0 22.5
    hwp 1 22.5
    detect D2 mode=0 pol=H
    postselect pol=H

One directive per line, ``#`` starts a comment. Angles are radians and may
be written as ``pi``, ``3*pi``, ``pi/4``, ``3*pi/4`` or a plain decimal (a
leading ``-`` is allowed). HWP angles are plain decimal degrees.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .elements import BS, HWP, PBS, PHASE, QBS, Element, Kind
from .errors import ParseError
from .measurement import DetectorSpec
from .statecore import Pol

_NUM = r"[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?|\.[0-9]+(?:[eE][+-]?[0-9]+)?"
_DECIMAL_RE = re.compile(rf"[+-]?(?:{_NUM})")
_PI_RE = re.compile(rf"(?P<sign>-)?(?:(?P<num>{_NUM})\*)?pi(?:/(?P<den>{_NUM}))?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*")
_INT_RE = re.compile(r"[0-9]+")

MAX_PI_DENOMINATOR = 64


@dataclass(frozen=True)
class BenchCircuit:
    d: int
    alpha: float
    source_mode: int = 0
    elements: tuple[Element, ...] = ()
    detectors: tuple[DetectorSpec, ...] = ()
    postselect: Pol | None = None

    def detector(self, name: str) -> DetectorSpec:
        for det in self.detectors:
            if det.name == name:
                return det
        raise KeyError(name)


def parse_angle(token: str) -> float:
    """Evaluate an angle token; raises ``ValueError`` when malformed."""
    if _DECIMAL_RE.fullmatch(token):
        return float(token)
    m = _PI_RE.fullmatch(token)
    if not m:
        raise ValueError(f"malformed angle {token!r}")
    value = math.pi
    if m["num"] is not None:
        value = float(m["num"]) * math.pi
    if m["den"] is not None:
        den = float(m["den"])
        if den == 0:
            raise ValueError(f"zero denominator in angle {token!r}")
        value = value / den
    return -value if m["sign"] else value


def format_angle(x: float) -> str:
    """Shortest ``pi`` expression that evaluates exactly to ``x``, else a 17-digit decimal."""
    x = float(x)
    if x != 0.0 and math.isfinite(x):
        for den in range(1, MAX_PI_DENOMINATOR + 1):
            num = round(abs(x) * den / math.pi)
            if num == 0 or math.gcd(num, den) != 1:
                continue
            text = ("-" if x < 0 else "") + (
                ("" if num == 1 else f"{num}*") + "pi" + ("" if den == 1 else f"/{den}")
            )
            if parse_angle(text) == x:
                return text
    return _decimal(x)


def _decimal(x: float) -> str:
    return format(x, ".17g")


def _parse_int(token: str, what: str) -> int:
    if not _INT_RE.fullmatch(token):
        raise ValueError(f"malformed {what} {token!r}")
    return int(token)


def _keyvals(tokens: list[str], required: tuple[str, ...]) -> dict[str, str]:
    out: dict[str, str] = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or not val:
            raise ValueError(f"expected key=value, got {tok!r}")
        if key not in required:
            raise ValueError(f"unexpected key {key!r}")
        if key in out:
            raise ValueError(f"duplicate key {key!r}")
        out[key] = val
    missing = [k for k in required if k not in out]
    if missing:
        raise ValueError(f"missing {', '.join(missing)}")
    return out


def _parse_pol(token: str, allow_any: bool) -> Pol | None:
    if token == "any" and allow_any:
        return None
    try:
        return Pol[token]
    except KeyError:
        raise ValueError(f"bad polarization {token!r}") from None


def _argc(args: list[str], n: int, kw: str) -> None:
    if len(args) != n:
        raise ValueError(f"{kw} takes {n} argument(s), got {len(args)}")


def parse_bench(text: str) -> BenchCircuit:
    """Parse bench text into a validated circuit.

    Raises:
        ParseError: carrying the 1-based line number of the first bad line.
    """
    d: int | None = None
    source: tuple[float, int] | None = None
    elements: list[Element] = []
    detectors: list[DetectorSpec] = []
    postselect: Pol | None = None
    seen_postselect = False

    def mode(token: str) -> int:
        m = _parse_int(token, "mode index")
        if m >= d:
            raise ValueError(f"mode {m} out of range for modes {d}")
        return m

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        kw, *args = body.split()
        try:
            if kw == "modes":
                if d is not None:
                    raise ValueError("duplicate modes directive")
                _argc(args, 1, kw)
                d = _parse_int(args[0], "mode count")
                if d < 2:
                    raise ValueError(f"modes must be >= 2, got {d}")
                continue
            if kw == "postselect":
                if seen_postselect:
                    raise ValueError("duplicate postselect directive")
                _argc(args, 1, kw)
                postselect = _parse_pol(_keyvals(args, ("pol",))["pol"], allow_any=False)
                seen_postselect = True
                continue
            if kw not in {"source", "bs", "pbs", "qbs", "phase", "hwp", "detect"}:
                raise ValueError(f"unknown keyword {kw!r}")
            if d is None:
                raise ValueError(f"{kw} before modes directive")
            if kw == "source":
                if source is not None:
                    raise ValueError("duplicate source directive")
                _argc(args, 2, kw)
                kv = _keyvals(args, ("alpha", "mode"))
                source = (parse_angle(kv["alpha"]), mode(kv["mode"]))
            elif kw in ("bs", "pbs", "qbs"):
                _argc(args, 2, kw)
                i, j = mode(args[0]), mode(args[1])
                if i == j:
                    raise ValueError(f"{kw} needs two distinct modes")
                elements.append({"bs": BS, "pbs": PBS, "qbs": QBS}[kw](i, j))
            elif kw == "phase":
                _argc(args, 2, kw)
                elements.append(PHASE(mode(args[0]), parse_angle(args[1])))
            elif kw == "hwp":
                _argc(args, 2, kw)
                if not _DECIMAL_RE.fullmatch(args[1]):
                    raise ValueError(f"malformed degrees {args[1]!r}")
                elements.append(HWP(mode(args[0]), float(args[1])))
            elif kw == "detect":
                _argc(args, 3, kw)
                name = args[0]
                if not _NAME_RE.fullmatch(name):
                    raise ValueError(f"bad detector name {name!r}")
                if any(det.name == name for det in detectors):
                    raise ValueError(f"duplicate detector name {name!r}")
                kv = _keyvals(args[1:], ("mode", "pol"))
                detectors.append(
                    DetectorSpec(name, mode(kv["mode"]), _parse_pol(kv["pol"], allow_any=True))
                )
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None

    last = max(len(lines), 1)
    if d is None:
        raise ParseError(last, "missing modes directive")
    if source is None:
        raise ParseError(last, "missing source directive")
    return BenchCircuit(d, source[0], source[1], tuple(elements), tuple(detectors), postselect)


def _element_line(e: Element) -> str:
    if e.kind is Kind.PHASE:
        return f"phase {e.i} {format_angle(e.theta)}"
    if e.kind is Kind.HWP:
        return f"hwp {e.i} {_degrees(e.angle_deg)}"
    return f"{e.kind.value} {e.i} {e.j}"


def _degrees(x: float) -> str:
    text = repr(float(x))
    return text if _DECIMAL_RE.fullmatch(text) else _decimal(x)


def serialize(circuit: BenchCircuit) -> str:
    """Canonical LF-terminated text; ``parse_bench(serialize(c)) == c``."""
    out = [
        f"modes {circuit.d}",
        f"source alpha={format_angle(circuit.alpha)} mode={circuit.source_mode}",
    ]
    out += [_element_line(e) for e in circuit.elements]
    out += [f"detect {det.name} mode={det.mode} pol={det.pol_name}" for det in circuit.detectors]
    if circuit.postselect is not None:
        out.append(f"postselect pol={circuit.postselect.name}")
    return "\n".join(out) + "\n"
