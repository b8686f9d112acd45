"""Direct construction of the exact radical mapping from a perturbed solution.

Two dual scaling routes build the limit ``A``:

* contract route: ``A(x) = lim 2**n * phi(x / 2**(n/s))`` -- contracts the
  argument, scales the value up; needs a finite doubling constant on the
  modular.
* expand route:   ``A(x) = lim phi_hat(2**(n/s) * x) / 2**n`` with
  ``phi_hat = phi - q*phi(0)`` -- expands the argument, scales down; needs
  no doubling constant.

Each route carries a truncated-series error bound with a certified geometric
tail, plus (for the contract route) the closed form the series collapses to
for power-type control functions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .equation import ControlFunction, EquationParams, control_eval
from .errors import ArgumentError, ContractViolation, RegimeError, TailUnknownError
from .functions import FunctionHandle
from .modular import ModularSpec, rho_eval
from .sampling import Grid

__all__ = [
    "Mode",
    "LimitResult",
    "SeriesBound",
    "approximant_contract",
    "approximant_expand",
    "limit_function",
    "construct_limit",
    "series_bound_contract",
    "series_bound_expand",
    "contract_bound_closed_form",
    "contract_regime_threshold",
]


class Mode(enum.Enum):
    """Which scaling route builds the limit."""

    CONTRACT = "t1-contract"
    EXPAND = "t2-expand"


def approximant_contract(
    phi: FunctionHandle, params: EquationParams, n: int, x: float
) -> float:
    """n-th contract-route approximant ``2**n * phi(x / 2**(n/s))``.

    Overflow inside the evaluation returns ``inf``: the saturation signal
    ``construct_limit`` freezes on, rather than an exception.
    """
    if n < 0:
        raise ArgumentError(f"approximant index must be >= 0, got {n}")
    try:
        return 2.0**n * phi(x / 2.0 ** (n / params.s))
    except OverflowError:
        return math.inf


def approximant_expand(
    phi: FunctionHandle, params: EquationParams, n: int, x: float
) -> float:
    """n-th expand-route approximant ``(phi(2**(n/s)*x) - q*phi(0)) / 2**n``.

    Overflow of the rescaled argument inside ``phi`` returns ``inf`` as the
    saturation signal.
    """
    if n < 0:
        raise ArgumentError(f"approximant index must be >= 0, got {n}")
    offset = params.q * phi(0.0)
    try:
        return (phi(2.0 ** (n / params.s) * x) - offset) / 2.0**n
    except OverflowError:
        return math.inf


def limit_function(
    mode: Mode, phi: FunctionHandle, params: EquationParams, n: int
) -> FunctionHandle:
    """The n-th approximant as an evaluable handle (usable off-grid)."""
    if mode is Mode.CONTRACT:
        return phi.scaled(outer=2.0**n, inner=2.0 ** (-n / params.s))
    offset = params.q * phi(0.0)
    return phi.shifted(-offset).scaled(outer=2.0**-n, inner=2.0 ** (n / params.s))


@dataclass(frozen=True)
class LimitResult:
    """Converged (or frozen) per-point approximants plus diagnostics.

    ``cauchy_gap[i]`` is the modular of the last approximant step at grid
    point ``i``; unless ``saturated`` it is below the requested tolerance.
    ``function`` evaluates the final approximant anywhere, not just on the
    grid.
    """

    mode: Mode
    grid: Grid
    values: tuple[float, ...]
    achieved_n: int
    cauchy_gap: tuple[float, ...]
    saturated: bool
    function: FunctionHandle


def construct_limit(
    mode: Mode,
    phi: FunctionHandle,
    params: EquationParams,
    rho: ModularSpec,
    grid: Grid,
    tol: float = 1e-9,
    n_max: int = 60,
) -> LimitResult:
    """Iterate the scaling approximants to their modular limit on a grid.

    Terminates when the per-point modular gap between successive
    approximants stays below ``tol`` at every grid point for two consecutive
    steps (a single sub-tolerance step can be coincidence), or at ``n_max``.
    A non-finite approximant freezes that point at its last finite value and
    marks the result saturated instead of aborting the sweep.
    """
    if tol <= 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    if n_max < 1:
        raise ArgumentError(f"n_max must be >= 1, got {n_max}")
    if mode is Mode.CONTRACT and rho.delta2_tau is None:
        raise ContractViolation(
            "contract route needs a modular with a finite doubling constant "
            f"(delta2_tau); {rho.spec_string()} has none"
        )

    approx = approximant_contract if mode is Mode.CONTRACT else approximant_expand
    pts = grid.points()
    current = [approx(phi, params, 0, x) for x in pts]
    gaps = [math.inf] * len(pts)
    frozen = [not math.isfinite(v) for v in current]
    current = [v if math.isfinite(v) else 0.0 for v in current]
    saturated = any(frozen)
    streak = 0
    achieved = 0

    for n in range(n_max):
        live_ok = True
        for i, x in enumerate(pts):
            if frozen[i]:
                continue
            nxt = approx(phi, params, n + 1, x)
            diff = nxt - current[i]
            if not (math.isfinite(nxt) and math.isfinite(diff)):
                frozen[i] = True
                saturated = True
                continue
            gaps[i] = rho_eval(rho, diff)
            current[i] = nxt
            if not gaps[i] < tol:
                live_ok = False
        achieved = n + 1
        streak = streak + 1 if live_ok else 0
        if streak >= 2:
            break
    else:
        saturated = True

    return LimitResult(
        mode=mode,
        grid=grid,
        values=tuple(current),
        achieved_n=achieved,
        cauchy_gap=tuple(gaps),
        saturated=saturated,
        function=limit_function(mode, phi, params, achieved),
    )


@dataclass(frozen=True)
class SeriesBound:
    """A truncated stability-bound series with a certified geometric tail.

    ``value`` is the partial sum through ``terms_used`` terms and
    ``tail_estimate`` bounds everything beyond it, so ``upper`` dominates
    the full series.  ``converged`` is false whenever the term ratio is
    >= 1; no finite bound exists there.
    """

    value: float
    terms_used: int
    tail_estimate: float
    converged: bool
    ratio: float

    @property
    def upper(self) -> float:
        return self.value + self.tail_estimate


def _sum_geometric_series(term_at, j_start: int, ratio: float, tol: float) -> SeriesBound:
    # Terms of both built-in control kinds are exactly geometric with the
    # given ratio, so tail-after-j = term_j * ratio / (1 - ratio).
    first = term_at(j_start)
    if ratio >= 1.0:
        if first == 0.0:
            return SeriesBound(0.0, 0, 0.0, False, ratio)
        return SeriesBound(math.inf, 0, math.inf, False, ratio)
    total = 0.0
    j = j_start
    term = first
    while True:
        total += term
        tail = term * ratio / (1.0 - ratio)
        if tail <= tol * total or tail == 0.0:
            return SeriesBound(total, j - j_start + 1, tail, True, ratio)
        if j - j_start + 1 >= 100_000:
            raise RegimeError(
                f"series did not meet tolerance {tol} within 100000 terms (ratio {ratio})"
            )
        j += 1
        term = term_at(j)


def _term_ratio(alpha: ControlFunction, weight_ratio: float, arg_step: int, s: int) -> float:
    # weight_ratio: per-step growth of the scale weight; arg_step: the series
    # arguments rescale by 2**(arg_step/s) from one term to the next.
    if alpha.kind == "power":
        return weight_ratio * 2.0 ** (arg_step * alpha.p / s)
    if alpha.kind == "constant":
        return weight_ratio
    raise TailUnknownError(
        f"no certified tail for control kind {alpha.kind!r}; refusing to truncate"
    )


def series_bound_contract(
    alpha: ControlFunction, tau: float, s: int, x: float, tol: float = 1e-9
) -> SeriesBound:
    """Contract-route error bound at ``x``::

        (1/2) * sum_{j>=1} (tau**2/2)**j
              * alpha(x/2**(j/s), x/2**(j/s), -x/2**((j-1)/s))

    Term ratio is ``(tau**2/2) * 2**(-p/s)`` for power control and
    ``tau**2/2`` for constant control; divergent ratios yield an infinite
    flagged bound, never a truncated number.
    """
    if tau < 2.0:
        raise ArgumentError(f"doubling constant must be >= 2, got {tau}")
    if tol <= 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    weight = tau * tau / 2.0
    ratio = _term_ratio(alpha, weight, -1, s)

    def term_at(j: int) -> float:
        a = control_eval(
            alpha,
            x / 2.0 ** (j / s),
            x / 2.0 ** (j / s),
            -x / 2.0 ** ((j - 1) / s),
        )
        return 0.5 * weight**j * a

    return _sum_geometric_series(term_at, 1, ratio, tol)


def series_bound_expand(
    alpha: ControlFunction, s: int, x: float, tol: float = 1e-9
) -> SeriesBound:
    """Expand-route error bound at ``x``::

        (1/2) * sum_{j>=0} 2**(-j)
              * alpha(2**(j/s)*x, 2**(j/s)*x, -2**((j+1)/s)*x)

    Term ratio is ``2**(p/s)/2`` for power control (divergent once
    ``p >= s``) and ``1/2`` for constant control.
    """
    if tol <= 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    ratio = _term_ratio(alpha, 0.5, +1, s)

    def term_at(j: int) -> float:
        a = control_eval(
            alpha,
            2.0 ** (j / s) * x,
            2.0 ** (j / s) * x,
            -(2.0 ** ((j + 1) / s)) * x,
        )
        return 0.5 * 2.0**-j * a

    return _sum_geometric_series(term_at, 0, ratio, tol)


def contract_regime_threshold(s: int, tau: float) -> float:
    """Smallest decay exponent (exclusive) with a convergent contract series."""
    return s * math.log2(tau * tau / 2.0)


def contract_bound_closed_form(
    theta: float, p: float, s: int, tau: float, x: float
) -> float:
    """Closed form of the contract-route series for power control::

        theta * (2 + 2**(p/s)) * tau**2 / (2 * (2**(p/s+1) - tau**2)) * |x|**p

    valid only for ``p > s*log2(tau**2/2)``, where the denominator is
    positive.  The ``theta`` prefactor carries through the summation
    linearly, so the closed form scales with it.
    """
    threshold = contract_regime_threshold(s, tau)
    if not p > threshold:
        raise RegimeError(
            f"closed-form bound needs p > s*log2(tau^2/2) = {threshold:.6g}, got p={p:g}"
        )
    coeff = theta * (2.0 + 2.0 ** (p / s)) * tau * tau / (2.0 * (2.0 ** (p / s + 1.0) - tau * tau))
    return coeff * abs(x) ** p
