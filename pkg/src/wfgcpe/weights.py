"""Nonnegative weight functions and their antiderivatives.

The entropy functionals are "length-biased" through a weight ``psi``; the
empirical estimator additionally needs its antiderivative ``Psi`` and the
proportional-reversed-hazard decomposition needs the derivative
``psi'``. Builtins carry all three in closed form; custom weights fall
back to numerical differentiation / cumulative quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import WeightAntiderivativeUnavailable
from .quadrature import Integrand, integrate

INCREASING = "increasing"
DECREASING = "decreasing"
CONSTANT = "constant"
NEITHER = "neither"


@dataclass(frozen=True)
class WeightFunction:
    psi: Callable[[float], float]
    antiderivative: Optional[Callable[[float], float]] = None
    derivative: Optional[Callable[[float], float]] = None
    monotonicity: str = NEITHER
    tag: str = "custom"

    def __call__(self, x):
        return self.psi(x)

    def psi_prime(self, x: float) -> float:
        """Derivative of the weight; central difference if no closed form."""
        if self.derivative is not None:
            return self.derivative(x)
        h = max(1e-6, 1e-6 * abs(x))
        return (self.psi(x + h) - self.psi(x - h)) / (2.0 * h)

    def big_psi(self, x: float) -> float:
        """Antiderivative ``Psi`` with ``Psi' = psi``; quadrature fallback.

        The fallback anchors ``Psi(0) = 0``, which matches every closed
        form shipped here; only differences of ``Psi`` are ever used.
        """
        if self.antiderivative is not None:
            return self.antiderivative(x)
        if x == 0.0:
            return 0.0
        try:
            return integrate(Integrand(self.psi, 0.0, x),
                             abs_tol=1e-12, rel_tol=1e-10).value
        except Exception as exc:
            raise WeightAntiderivativeUnavailable(
                f"cannot accumulate antiderivative of weight {self.tag!r} at {x}"
            ) from exc


def weight_one() -> WeightFunction:
    return WeightFunction(lambda x: 1.0, lambda x: x, lambda x: 0.0,
                          CONSTANT, "one")


def weight_x() -> WeightFunction:
    return WeightFunction(lambda x: x, lambda x: 0.5 * x * x, lambda x: 1.0,
                          INCREASING, "x")


def weight_x_squared() -> WeightFunction:
    return WeightFunction(lambda x: x * x, lambda x: x ** 3 / 3.0,
                          lambda x: 2.0 * x, INCREASING, "x2")


def weight_sqrt_x() -> WeightFunction:
    return WeightFunction(lambda x: math.sqrt(x),
                          lambda x: (2.0 / 3.0) * x ** 1.5,
                          lambda x: 0.5 / math.sqrt(x) if x > 0 else math.inf,
                          INCREASING, "sqrtx")


def weight_exp_neg() -> WeightFunction:
    return WeightFunction(lambda x: math.exp(-x),
                          lambda x: -math.expm1(-x),
                          lambda x: -math.exp(-x),
                          DECREASING, "expneg")


def self_density_weight(model) -> WeightFunction:
    """Weight ``psi = k`` (the population density), so ``Psi = K``."""
    return WeightFunction(model.pdf, model.cdf, None, NEITHER, "self_density")


def power_weight(exponent: float) -> WeightFunction:
    """Weight ``psi(x) = x**p`` for ``p >= 0`` (used by the xi^gamma bound)."""
    if exponent == 0:
        return weight_one()
    p = float(exponent)
    return WeightFunction(lambda x: x ** p,
                          lambda x: x ** (p + 1) / (p + 1),
                          lambda x: p * x ** (p - 1) if x > 0 else 0.0,
                          INCREASING, f"pow{p:g}")


def custom_weight(psi, antiderivative=None, derivative=None,
                  monotonicity=NEITHER, tag="custom") -> WeightFunction:
    return WeightFunction(psi, antiderivative, derivative, monotonicity, tag)


def piecewise_linear_weight(xs, ys) -> WeightFunction:
    """Piecewise-linear weight from a table, with trapezoid antiderivative.

    Outside the table the weight is extended by its endpoint values.
    """
    import numpy as np

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise ValueError("need matching 1-d tables with at least two knots")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("knot locations must be strictly increasing")
    if np.any(ys < 0):
        raise ValueError("weight values must be nonnegative")

    # cumulative trapezoid areas at the knots, anchored at Psi(xs[0]) = 0
    areas = np.concatenate(
        [[0.0], np.cumsum(0.5 * (ys[1:] + ys[:-1]) * np.diff(xs))])

    def psi(x):
        return float(np.interp(x, xs, ys))

    def big(x):
        x = float(x)
        if x <= xs[0]:
            return float(ys[0] * (x - xs[0]))
        if x >= xs[-1]:
            return float(areas[-1] + ys[-1] * (x - xs[-1]))
        i = int(np.searchsorted(xs, x) - 1)
        y = np.interp(x, xs, ys)
        return float(areas[i] + 0.5 * (ys[i] + y) * (x - xs[i]))

    d = np.diff(ys)
    if np.all(d >= 0):
        mono = INCREASING if np.any(d > 0) else CONSTANT
    elif np.all(d <= 0):
        mono = DECREASING
    else:
        mono = NEITHER
    return WeightFunction(psi, big, None, mono, "custom")


BUILTIN_WEIGHTS = {
    "one": weight_one,
    "x": weight_x,
    "x2": weight_x_squared,
    "sqrtx": weight_sqrt_x,
    "expneg": weight_exp_neg,
}
