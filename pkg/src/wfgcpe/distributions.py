"""Parametric distribution families and proportional reversed hazard machinery.

Each model bundles CDF/PDF/quantile/support plus, where available, closed
forms for the weighted fractional cumulative past entropy; those closed
forms are the analytic side of the closed-form-vs-quadrature cross checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma as _gamma

from .errors import ConstraintError, DomainError, ValidationError
from .quadrature import Integrand, integrate
from .weights import WeightFunction

_PROBE_POINTS = 1024


@dataclass(frozen=True)
class DistributionModel:
    """CDF/PDF/quantile bundle on support ``(lo, hi)`` with ``hi <= inf``.

    ``closed_wfgcpe(tag, gamma)`` returns the closed-form entropy for a
    weight tag when the family has one; it raises ``KeyError`` for
    unsupported tags and ``ConstraintError`` when ``gamma`` sits at or
    below a divergence threshold.
    """

    cdf: Callable[[float], float]
    pdf: Callable[[float], float]
    quantile: Callable[[float], float]
    support: tuple[float, float]
    family: str = "custom"
    params: dict = field(default_factory=dict)
    closed_wfgcpe: Optional[Callable[[str, float], float]] = None
    tail_hint: tuple[str, ...] = ()
    log_cdf: Optional[Callable[[float], float]] = None
    log_survival: Optional[Callable[[float], float]] = None

    def survival(self, x: float) -> float:
        return 1.0 - self.cdf(x)

    def neg_log_cdf(self, x: float) -> float:
        """``-ln K(x)``, exact where the family supplies ``log_cdf``.

        Without it, ``K`` values that round to 1 collapse the result to 0,
        which truncates slowly-decaying tails (e.g. heavy-tailed families);
        the analytic ``log_cdf`` keeps the tail mass.
        """
        if self.log_cdf is not None:
            return -self.log_cdf(x)
        k = self.cdf(x)
        if k <= 0.0:
            return math.inf
        return -math.log(k)

    def neg_log_survival(self, x: float) -> float:
        """``-ln (1 - K(x))``; exact where ``log_survival`` is supplied."""
        if self.log_survival is not None:
            return -self.log_survival(x)
        s = self.survival(x)
        if s <= 0.0:
            return math.inf
        return -math.log(s)

    def reversed_hazard(self, x: float) -> float:
        k = self.cdf(x)
        if k <= 0.0:
            raise DomainError(f"reversed hazard undefined where K(x)=0 (x={x})")
        return self.pdf(x) / k

    def expectation(self, g: Callable[[float], float],
                    abs_tol: float = 1e-10, rel_tol: float = 1e-9) -> float:
        """E[g(X)] through the quantile transform on (0, 1)."""
        f = Integrand(lambda u: g(self.quantile(u)), 0.0, 1.0)
        return integrate(f, abs_tol=abs_tol, rel_tol=rel_tol).value

    def mean(self) -> float:
        return self.expectation(lambda x: x)


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise DomainError(f"require {name} > 0, got {value}")


def make_power(b: float, c: float) -> DistributionModel:
    """Power distribution ``K(x) = (x/b)^c`` on ``(0, b)``."""
    _check_positive(b=b, c=c)

    def closed(tag, g):
        # evaluated in log space: the ratio terms underflow to 0 rather
        # than overflow for very large g
        if tag == "one":
            return b * math.exp(g * math.log(c)
                                - (g + 1.0) * math.log(c + 1.0))
        if tag == "x":
            return (b * b / c) * math.exp(-(g + 1.0) * math.log1p(2.0 / c))
        if tag == "x2":
            return (b ** 3 / c) * math.exp(-(g + 1.0) * math.log1p(3.0 / c))
        raise KeyError(tag)

    return DistributionModel(
        cdf=lambda x: min(max(x / b, 0.0), 1.0) ** c,
        pdf=lambda x: c * x ** (c - 1.0) / b ** c if 0.0 < x < b else 0.0,
        quantile=lambda u: b * u ** (1.0 / c),
        support=(0.0, b),
        family="power", params={"b": b, "c": c},
        closed_wfgcpe=closed,
        tail_hint=("log_at_lo",),
        log_cdf=lambda x: (c * (math.log(x) - math.log(b)) if 0.0 < x < b
                           else (0.0 if x >= b else -math.inf)),
    )


def make_uniform_shifted(a: float) -> DistributionModel:
    """Uniform distribution on ``(a, a + 1)`` with ``a >= 0``."""
    if a < 0:
        raise DomainError(f"require a >= 0, got {a}")

    def closed(tag, g):
        if tag == "one":
            return 0.5 ** (g + 1.0)
        if tag == "x":
            return 3.0 ** -(g + 1.0) + a * 2.0 ** -(g + 1.0)
        if tag == "x2":
            return (4.0 ** -(g + 1.0) + 2.0 * a * 3.0 ** -(g + 1.0)
                    + a * a * 2.0 ** -(g + 1.0))
        raise KeyError(tag)

    return DistributionModel(
        cdf=lambda x: min(max(x - a, 0.0), 1.0),
        pdf=lambda x: 1.0 if a < x < a + 1.0 else 0.0,
        quantile=lambda u: a + u,
        support=(a, a + 1.0),
        family="uniform_shifted", params={"a": a},
        closed_wfgcpe=closed,
        tail_hint=("log_at_lo",),
        log_cdf=lambda x: (math.log(x - a) if a < x < a + 1.0
                           else (0.0 if x >= a + 1.0 else -math.inf)),
    )


def make_frechet(b: float, c: float) -> DistributionModel:
    """Frechet distribution ``K(x) = exp(-b x^{-c})`` on ``(0, inf)``.

    The closed form for weight ``x^m`` converges only for
    ``gamma > (m + 1) / c``; below that threshold the defining integral
    diverges and ``ConstraintError`` is raised.
    """
    _check_positive(b=b, c=c)

    def closed(tag, g):
        m = {"one": 1.0, "x": 2.0, "x2": 3.0}.get(tag)
        if m is None:
            raise KeyError(tag)
        if g <= m / c:
            raise ConstraintError(
                f"Frechet closed form for weight {tag!r} needs gamma > {m / c:g}, "
                f"got {g:g} (integral diverges)")
        return b ** (m / c) * _gamma(g - m / c) / (c * _gamma(g + 1.0))

    return DistributionModel(
        cdf=lambda x: math.exp(-b * x ** -c) if x > 0 else 0.0,
        pdf=lambda x: b * c * x ** (-c - 1.0) * math.exp(-b * x ** -c)
        if x > 0 else 0.0,
        quantile=lambda u: (b / -math.log(u)) ** (1.0 / c),
        support=(0.0, math.inf),
        family="frechet", params={"b": b, "c": c},
        closed_wfgcpe=closed,
        tail_hint=("decay_at_infinity",),
        log_cdf=lambda x: -b * x ** -c if x > 0 else -math.inf,
    )


def make_weibull_square(theta: float) -> DistributionModel:
    """Weibull with shape 2: ``K(x) = 1 - exp(-theta x^2)`` on ``(0, inf)``."""
    _check_positive(theta=theta)
    return DistributionModel(
        cdf=lambda x: -math.expm1(-theta * x * x) if x > 0 else 0.0,
        pdf=lambda x: 2.0 * theta * x * math.exp(-theta * x * x)
        if x > 0 else 0.0,
        quantile=lambda u: math.sqrt(-math.log1p(-u) / theta),
        support=(0.0, math.inf),
        family="weibull_square", params={"theta": theta},
        tail_hint=("decay_at_infinity",),
        log_survival=lambda x: -theta * x * x if x > 0 else 0.0,
    )


def make_exponential(rate: float) -> DistributionModel:
    """Exponential distribution ``K(x) = 1 - exp(-rate x)`` (DFR boundary)."""
    _check_positive(rate=rate)
    return DistributionModel(
        cdf=lambda x: -math.expm1(-rate * x) if x > 0 else 0.0,
        pdf=lambda x: rate * math.exp(-rate * x) if x > 0 else 0.0,
        quantile=lambda u: -math.log1p(-u) / rate,
        support=(0.0, math.inf),
        family="exponential", params={"rate": rate},
        tail_hint=("decay_at_infinity",),
        log_survival=lambda x: -rate * x if x > 0 else 0.0,
    )


def make_custom(cdf, pdf, quantile, support, family="custom", params=None,
                validate=True) -> DistributionModel:
    """Wrap user-supplied functions, validating the model invariants.

    Validation probes ``K(Q(u)) = u`` and ``lambda(t) K(t) = k(t)`` on a
    1024-point grid and checks that the density integrates to one.
    """
    lo, hi = support
    if lo < 0 or not lo < hi:
        raise DomainError(f"invalid support {support}")
    model = DistributionModel(cdf=cdf, pdf=pdf, quantile=quantile,
                              support=(float(lo), float(hi)),
                              family=family, params=params or {},
                              tail_hint=("decay_at_infinity",)
                              if math.isinf(hi) else ("log_at_lo",))
    if validate:
        _validate_model(model)
    return model


def _validate_model(model: DistributionModel):
    us = np.linspace(0.0, 1.0, _PROBE_POINTS + 2)[1:-1]
    for u in us:
        x = model.quantile(u)
        if abs(model.cdf(x) - u) > 1e-9:
            raise ValidationError(
                f"quantile/CDF mismatch at u={u}: K(Q(u))={model.cdf(x)}")
        k = model.cdf(x)
        if k > 0:
            lam = model.pdf(x) / k
            if abs(lam * k - model.pdf(x)) > 1e-9:
                raise ValidationError(f"reversed hazard inconsistent at x={x}")
    total = integrate(Integrand(model.pdf, *model.support,
                                singularity_hints=model.tail_hint),
                      abs_tol=1e-10, rel_tol=1e-9).value
    if abs(total - 1.0) > 1e-8:
        raise ValidationError(f"density integrates to {total}, not 1")


# ---------------------------------------------------------------------------
# Proportional reversed hazard (PRH) model: K2 = K1^eta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrhParameter:
    """Proportionality constant of the reversed hazard model."""

    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise DomainError(f"require eta > 0, got {self.eta}")


@dataclass(frozen=True)
class PrhExpectationTerms:
    """The two expectation terms of the PRH decomposition at one order."""

    e_term: float
    e_tilde_term: float
    gamma: float


def _as_eta(eta) -> float:
    return eta.eta if isinstance(eta, PrhParameter) else float(eta)


def prh_transform(base: DistributionModel, eta) -> DistributionModel:
    """Model with CDF ``K1^eta``, PDF ``eta K1^(eta-1) k1``, same support."""
    e = _as_eta(eta)
    if e <= 0:
        raise DomainError(f"require eta > 0, got {e}")

    def cdf(x):
        return base.cdf(x) ** e

    def pdf(x):
        k1 = base.cdf(x)
        if k1 <= 0.0:
            return 0.0
        return e * k1 ** (e - 1.0) * base.pdf(x)

    return DistributionModel(
        cdf=cdf, pdf=pdf,
        quantile=lambda u: base.quantile(u ** (1.0 / e)),
        support=base.support,
        family="prh", params={"eta": e, "base": base.family, **base.params},
        tail_hint=base.tail_hint,
        log_cdf=lambda x: -e * base.neg_log_cdf(x),
    )


def prh_expectation_terms(base: DistributionModel, eta,
                          psi: WeightFunction, gamma: float,
                          ) -> PrhExpectationTerms:
    """Expectation terms of the decomposition, evaluated at order ``gamma``.

    With ``X2`` distributed as the transformed model and ``u = K2(X2)``
    uniform, both expectations become single integrals on (0, 1):

    ``E  = (1/Gamma(g)) int_0^1 Q2(u) psi(Q2(u)) (-ln u)^(g-1) du``
    ``Et = (1/Gamma(g)) int_0^1 Q2(u) psi'(Q2(u)) (-ln u)^(g-1) / lambda1 du``
    """
    e = _as_eta(eta)
    if gamma <= 0:
        raise DomainError(f"require gamma > 0, got {gamma}")

    def q2(u):
        return base.quantile(u ** (1.0 / e))

    def f_main(u):
        x = q2(u)
        return x * psi(x) * (-math.log(u)) ** (gamma - 1.0)

    def f_tilde(u):
        x = q2(u)
        dp = psi.psi_prime(x)
        if dp == 0.0:
            return 0.0
        k1 = base.cdf(x)
        lam1 = base.pdf(x) / k1
        return x * dp * (-math.log(u)) ** (gamma - 1.0) / lam1

    g = _gamma(gamma)
    main = integrate(Integrand(f_main, 0.0, 1.0)).value / g
    if psi.derivative is not None and psi.monotonicity == "constant":
        tilde = 0.0
    else:
        tilde = integrate(Integrand(f_tilde, 0.0, 1.0)).value / g
    return PrhExpectationTerms(main, tilde, gamma)


def prh_wfgcpe(base: DistributionModel, eta, psi: WeightFunction,
               gamma: float) -> float:
    """Entropy of the transformed model via the expectation decomposition:

    ``E(g) - E(g + 1) - eta^{-1} Et(g + 1)``.
    """
    e = _as_eta(eta)
    t0 = prh_expectation_terms(base, e, psi, gamma)
    t1 = prh_expectation_terms(base, e, psi, gamma + 1.0)
    return t0.e_term - t1.e_term - t1.e_tilde_term / e


def prh_recurrence_step(base: DistributionModel, eta, psi: WeightFunction,
                        gamma: float, prior: float) -> float:
    """Order ``gamma + 1`` entropy from the order ``gamma`` value ``prior``:

    ``E(g) - E(g + 2) - eta^{-1} [Et(g + 1) + Et(g + 2)] - prior``.
    """
    e = _as_eta(eta)
    t0 = prh_expectation_terms(base, e, psi, gamma)
    t1 = prh_expectation_terms(base, e, psi, gamma + 1.0)
    t2 = prh_expectation_terms(base, e, psi, gamma + 2.0)
    return (t0.e_term - t2.e_term
            - (t1.e_tilde_term + t2.e_tilde_term) / e - prior)


def prh_n_step(base: DistributionModel, eta, psi: WeightFunction,
               gamma: float, n: int, prior: float) -> float:
    """Closed n-step recurrence for the order ``gamma + n`` entropy.

    ``prior`` is the order ``gamma`` value. Equals ``n`` chained
    applications of ``prh_recurrence_step``.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"require integer n >= 1, got {n}")
    e = _as_eta(eta)
    tn = prh_expectation_terms(base, e, psi, gamma + n)
    tn1 = prh_expectation_terms(base, e, psi, gamma + n + 1.0)
    t0 = prh_expectation_terms(base, e, psi, gamma)
    t1 = prh_expectation_terms(base, e, psi, gamma + 1.0)
    sign = (-1.0) ** n
    return (tn.e_term - tn1.e_term
            - sign * (t0.e_term - t1.e_term)
            + (sign * t1.e_tilde_term - tn1.e_tilde_term) / e
            + sign * prior)


def mean_inactivity_time(model: DistributionModel, t: float) -> float:
    """``mu(t) = int_lo^t K(x) dx / K(t)`` for ``t`` inside the support."""
    lo, hi = model.support
    if not lo < t <= hi:
        raise DomainError(f"t={t} outside support ({lo}, {hi})")
    kt = model.cdf(t)
    if kt <= 0.0:
        raise DomainError(f"K(t)=0 at t={t}")
    num = integrate(Integrand(model.cdf, lo, t)).value
    return num / kt
