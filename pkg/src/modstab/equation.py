"""The radical functional equation, its defect, and control functions.

The equation under study, for an odd integer ``s >= 3`` and a real
``0 < |q| <= 1``::

    phi(x) + phi(y) + phi(z) = q * phi(((x**s + y**s + z**s) / q) ** (1/s))

Exact solutions are exactly the maps ``c * x**s``; the defect of a candidate
``phi`` at a triple is the modular of the left-minus-right side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArgumentError, ConfigError, RangeError
from .functions import FunctionHandle
from .modular import ModularSpec, rho_eval

__all__ = [
    "EquationParams",
    "ControlFunction",
    "radical_root",
    "radical_combine",
    "defect",
    "pair_additivity_defect",
    "control_eval",
    "parse_control",
]


@dataclass(frozen=True)
class EquationParams:
    """Radical exponent ``s`` (odd, >= 3) and scaling parameter ``q``."""

    s: int
    q: float

    def __post_init__(self):
        if self.s < 3 or self.s % 2 == 0:
            raise ArgumentError(f"s must be an odd integer >= 3, got {self.s}")
        if self.q == 0 or abs(self.q) > 1.0 or not math.isfinite(self.q):
            raise ArgumentError(f"q must satisfy 0 < |q| <= 1, got {self.q}")


@dataclass(frozen=True)
class ControlFunction:
    """Bound ``alpha(x, y, z)`` on the equation defect.

    ``power``:   ``theta * (|x|**p + |y|**p + |z|**p)``
    ``constant``: the fixed value ``eps``.
    """

    kind: str
    theta: float = 0.0
    p: float = 0.0
    eps: float = 0.0

    def __post_init__(self):
        if self.kind not in ("power", "constant"):
            raise ArgumentError(f"unknown control kind {self.kind!r}")
        if self.kind == "power" and (self.theta < 0 or self.p < 0):
            raise ArgumentError("power control needs theta >= 0 and p >= 0")
        if self.kind == "constant" and self.eps < 0:
            raise ArgumentError("constant control needs eps >= 0")

    @classmethod
    def power(cls, theta: float, p: float) -> "ControlFunction":
        return cls(kind="power", theta=float(theta), p=float(p))

    @classmethod
    def constant(cls, eps: float) -> "ControlFunction":
        return cls(kind="constant", eps=float(eps))

    def spec_string(self) -> str:
        if self.kind == "power":
            return f"power:theta={self.theta:g},p={self.p:g}"
        return f"const:eps={self.eps:g}"


def radical_root(t: float, s: int) -> float:
    """The real s-th root ``sign(t) * |t|**(1/s)`` for odd ``s >= 3``.

    One Newton step polishes the float power so exact powers come back
    exact up to ulp scale.
    """
    if s < 3 or s % 2 == 0:
        raise ArgumentError(f"radical_root needs an odd integer s >= 3, got {s}")
    t = float(t)
    if t == 0.0:
        return 0.0
    mag = abs(t)
    r = mag ** (1.0 / s)
    if math.isfinite(r) and r > 0.0:
        r -= (r**s - mag) / (s * r ** (s - 1))
    return math.copysign(r, t)


def radical_combine(params: EquationParams, x: float, y: float, z: float) -> float:
    """The combined argument ``((x**s + y**s + z**s) / q) ** (1/s)``."""
    s = params.s
    powers = {}
    for name, v in (("x", x), ("y", y), ("z", z)):
        try:
            pw = float(v) ** s
        except OverflowError:
            pw = math.inf
        if not math.isfinite(pw):
            raise RangeError(f"{name}**{s} overflows for {name}={v!r}", coordinate=name)
        powers[name] = pw
    return radical_root((powers["x"] + powers["y"] + powers["z"]) / params.q, s)


def defect(
    params: EquationParams,
    phi: FunctionHandle,
    rho: ModularSpec,
    x: float,
    y: float,
    z: float,
) -> float:
    """Modular of the equation residual of ``phi`` at the triple ``(x, y, z)``."""
    w = radical_combine(params, x, y, z)
    residual = phi(x) + phi(y) + phi(z) - params.q * phi(w)
    return rho_eval(rho, residual)


def pair_additivity_defect(
    phi: FunctionHandle,
    rho: ModularSpec,
    s: int,
    x: float,
    y: float,
) -> float:
    """Modular of ``phi((x**s + y**s)**(1/s)) - phi(x) - phi(y)``.

    Vanishes for every exact solution of the radical equation.
    """
    if s < 3 or s % 2 == 0:
        raise ArgumentError(f"pair_additivity_defect needs odd s >= 3, got {s}")
    powers = {}
    for name, v in (("x", x), ("y", y)):
        try:
            pw = float(v) ** s
        except OverflowError:
            pw = math.inf
        if not math.isfinite(pw):
            raise RangeError(f"{name}**{s} overflows for {name}={v!r}", coordinate=name)
        powers[name] = pw
    w = radical_root(powers["x"] + powers["y"], s)
    return rho_eval(rho, phi(w) - phi(x) - phi(y))


def control_eval(alpha: ControlFunction, x: float, y: float, z: float) -> float:
    """Evaluate the control function at a triple."""
    if alpha.kind == "power":
        return alpha.theta * (abs(x) ** alpha.p + abs(y) ** alpha.p + abs(z) ** alpha.p)
    return alpha.eps


def parse_control(text: str) -> ControlFunction:
    """Parse ``"power:theta=...,p=..."`` or ``"const:eps=..."``."""
    s = text.strip()
    try:
        if s.startswith("power:"):
            fields = dict(part.split("=", 1) for part in s[len("power:"):].split(","))
            return ControlFunction.power(float(fields["theta"]), float(fields["p"]))
        if s.startswith("const:"):
            fields = dict(part.split("=", 1) for part in s[len("const:"):].split(","))
            return ControlFunction.constant(float(fields["eps"]))
    except (KeyError, ValueError, ArgumentError) as exc:
        raise ConfigError(f"malformed control spec {text!r}: {exc}") from exc
    raise ConfigError(f"unknown control spec {text!r} (expected 'power:...' or 'const:...')")
