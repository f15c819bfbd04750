"""lambda-parameter families and the scalar coefficients of (J, G).

Everything here is a function of the energy density ``t``.  The complex
structure is fixed by ``a1 = A/lambda`` together with the integrability value
of ``b1``; the metric coefficients follow from the Hermitian proportionality
relations with factor ``lambda + 2 t mu`` and become Kahler for
``mu = lambda'``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import SingularParameterError

__all__ = [
    "LambdaFamily",
    "CoefficientSet",
    "CoefficientRates",
    "coefficients",
    "coefficient_rates",
    "check_admissibility",
    "AdmissibilityReport",
    "fd_lambda_prime_check",
]

KINDS = ("constant", "power", "inverse-sqrt", "custom")


@dataclass(frozen=True)
class LambdaFamily:
    """A positive function lambda(t) together with its derivatives.

    Kinds
    -----
    ``constant``      lambda = B
    ``power``         lambda = t**m + B         (m > 0, B > 0)
    ``inverse-sqrt``  lambda = A / sqrt(2 c t + B)
    ``custom``        user supplied ``(lam, dlam)`` callables; the second
                      derivative (needed by the connection) is taken by
                      central differences of ``dlam``.
    """

    kind: str
    A: float = 1.0
    c: float = 0.0
    m: float = 1.0
    B: float = 1.0
    lam: Callable[[float], float] | None = field(default=None, compare=False)
    dlam: Callable[[float], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown lambda family {self.kind!r}; expected one of {KINDS}")
        if not self.A > 0:
            raise ValueError(f"A must be positive, got {self.A!r}")
        if self.kind == "custom" and (self.lam is None or self.dlam is None):
            raise ValueError("custom families need both lam and dlam callables")
        if self.kind == "power" and not self.m > 0:
            raise ValueError(f"power family needs m > 0, got {self.m!r}")

    @classmethod
    def constant(cls, B=1.0, A=1.0):
        return cls("constant", A=A, B=B)

    @classmethod
    def power(cls, m, B, A=1.0):
        return cls("power", A=A, m=m, B=B)

    @classmethod
    def inverse_sqrt(cls, c, B, A=1.0):
        return cls("inverse-sqrt", A=A, c=c, B=B)

    @classmethod
    def custom(cls, lam, dlam, A=1.0):
        return cls("custom", A=A, lam=lam, dlam=dlam)

    def eval(self, t: float) -> tuple[float, float]:
        """Return ``(lambda(t), lambda'(t))``."""
        t = float(t)
        if self.kind == "constant":
            return float(self.B), 0.0
        if self.kind == "power":
            m = self.m
            if t == 0.0:
                d = 0.0 if m > 1 else (1.0 if m == 1 else math.inf)
                return float(self.B), d
            return t**m + self.B, m * t ** (m - 1)
        if self.kind == "inverse-sqrt":
            s = 2.0 * self.c * t + self.B
            if s <= 0:
                raise SingularParameterError("2ct + B", t, s)
            return self.A / math.sqrt(s), -self.A * self.c * s**-1.5
        return float(self.lam(t)), float(self.dlam(t))

    def second_derivative(self, t: float) -> float:
        t = float(t)
        if self.kind == "constant":
            return 0.0
        if self.kind == "power":
            m = self.m
            if t == 0.0:
                if m in (1, 2) or m > 2:
                    return 2.0 if m == 2 else 0.0
                return math.inf
            return m * (m - 1) * t ** (m - 2)
        if self.kind == "inverse-sqrt":
            s = 2.0 * self.c * t + self.B
            return 3.0 * self.A * self.c**2 * s**-2.5
        h = 1e-5 * max(1.0, abs(t))
        if t - h < 0:
            return (-3 * self.dlam(t) + 4 * self.dlam(t + h) - self.dlam(t + 2 * h)) / (2 * h)
        return (self.dlam(t + h) - self.dlam(t - h)) / (2 * h)

    def describe(self) -> dict:
        out = {"kind": self.kind, "A": self.A}
        if self.kind == "constant":
            out["B"] = self.B
        elif self.kind == "power":
            out.update(m=self.m, B=self.B)
        elif self.kind == "inverse-sqrt":
            out.update(c=self.c, B=self.B)
        return out


@dataclass(frozen=True)
class CoefficientSet:
    t: float
    lambda_: float
    lambda_prime: float
    mu: float
    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float
    d1: float
    d2: float

    def almost_complex_residual(self) -> float:
        """Residual of a1 a2 = 1 and (a1 + 2t b1)(a2 + 2t b2) = 1.

        The second product is scaled by the size of its terms, since
        a2 + 2t b2 cancels heavily for steep families at large t.
        """
        t = self.t
        u, v = self.a1 + 2 * t * self.b1, self.a2 + 2 * t * self.b2
        scale = max(1.0, (abs(self.a1) + 2 * t * abs(self.b1)) * (abs(self.a2) + 2 * t * abs(self.b2)))
        return max(abs(self.a1 * self.a2 - 1.0), abs(u * v - 1.0) / scale)

    def is_positive(self) -> bool:
        t = self.t
        return (self.c1 > 0 and self.c2 > 0 and self.c1 + 2 * t * self.d1 > 0
                and self.c2 + 2 * t * self.d2 > 0)


@dataclass(frozen=True)
class CoefficientRates:
    """t-derivatives of the metric coefficients (needed for fiber derivatives of G)."""

    dc1: float
    dd1: float
    dc2: float
    dd2: float


def _nonzero(name, value, t):
    if value == 0.0 or not math.isfinite(value):
        raise SingularParameterError(name, t, value)
    return value


def integrable_b1(lam, dlam, A, c, t):
    """b1 forced by integrability over a base of constant curvature c."""
    m = _nonzero("lambda + 2t lambda'", lam + 2 * t * dlam, t)
    return -(c * lam**3 + A**2 * dlam) / (A * lam * m)


def metric_d(lam, dlam, mu, A, c, t):
    """(d1, d2) from the Hermitian proportionality relations for a given mu."""
    m = _nonzero("lambda + 2t lambda'", lam + 2 * t * dlam, t)
    d = _nonzero("A^2 - 2ct lambda^2", A**2 - 2 * c * t * lam**2, t)
    d1 = (-(c * lam**3 + A**2 * dlam) + mu * d) / (A * m)
    d2 = (lam * (c * lam**3 + A**2 * dlam) + mu * A**2 * m) / (A * d)
    return d1, d2


def coefficients(family: LambdaFamily, c: float, t: float, *, mu: float | None = None,
                 b1: float | None = None) -> CoefficientSet:
    """All scalar coefficients of (J, G) at energy density ``t``.

    ``mu`` defaults to ``lambda'`` (the Kahler case).  ``b1`` may be overridden
    to build non-integrable almost complex structures; ``b2`` then follows from
    ``J^2 = -I`` while the metric coefficients keep their integrable values.
    """
    t = float(t)
    if t < 0:
        raise ValueError(f"energy density must be non-negative, got {t!r}")
    A = float(family.A)
    lam, dlam = family.eval(t)
    if not lam > 0:
        raise SingularParameterError("lambda", t, lam)
    mu = dlam if mu is None else float(mu)
    b1 = integrable_b1(lam, dlam, A, c, t) if b1 is None else float(b1)
    a1 = A / lam
    a2 = lam / A
    b2 = -lam**2 * b1 / (A * _nonzero("A + 2t lambda b1", A + 2 * t * lam * b1, t))
    d1, d2 = metric_d(lam, dlam, mu, A, c, t)
    return CoefficientSet(t=t, lambda_=lam, lambda_prime=dlam, mu=mu, a1=a1, a2=a2, b1=b1,
                          b2=b2, c1=A, c2=lam**2 / A, d1=d1, d2=d2)


def coefficient_rates(family: LambdaFamily, c: float, t: float, *,
                      mu_offset: float = 0.0) -> CoefficientRates:
    """t-derivatives of (c1, d1, c2, d2) for ``mu = lambda' + mu_offset``.

    Uses lambda'' (analytic for named families).
    """
    A = float(family.A)
    lam, dlam = family.eval(t)
    ddlam = family.second_derivative(t)
    mu, dmu = dlam + mu_offset, ddlam
    m = _nonzero("lambda + 2t lambda'", lam + 2 * t * dlam, t)
    dm = 3 * dlam + 2 * t * ddlam
    d = _nonzero("A^2 - 2ct lambda^2", A**2 - 2 * c * t * lam**2, t)
    dd = -2 * c * lam**2 - 4 * c * t * lam * dlam
    k = c * lam**3 + A**2 * dlam
    dk = 3 * c * lam**2 * dlam + A**2 * ddlam

    n1 = -k + mu * d
    dn1 = -dk + dmu * d + mu * dd
    n2 = lam * k + mu * A**2 * m
    dn2 = dlam * k + lam * dk + dmu * A**2 * m + mu * A**2 * dm
    return CoefficientRates(
        dc1=0.0,
        dd1=(dn1 * m - n1 * dm) / (A * m**2),
        dc2=2 * lam * dlam / A,
        dd2=(dn2 * d - n2 * dd) / (A * d**2),
    )


@dataclass
class ConditionResult:
    name: str
    passed: bool
    first_failure_t: float | None
    min_value: float


@dataclass
class AdmissibilityReport:
    family: dict
    c: float
    t_max: float
    samples: int
    kahler: list[ConditionResult]
    hermitian_stage: ConditionResult
    metric_positivity: ConditionResult

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.kahler) and self.metric_positivity.passed

    def first_failure(self) -> ConditionResult | None:
        for r in [*self.kahler, self.metric_positivity]:
            if not r.passed:
                return r
        return None

    def to_dict(self) -> dict:
        def row(r):
            return {"condition": r.name, "pass": r.passed, "first_failure_t": r.first_failure_t,
                    "min_value": r.min_value}

        return {
            "family": self.family,
            "c": self.c,
            "t_max": self.t_max,
            "samples": self.samples,
            "conditions": [row(r) for r in self.kahler],
            "hermitian_stage": row(self.hermitian_stage),
            "metric_positivity": row(self.metric_positivity),
            "pass": self.passed,
        }


def _condition(name, ts, values):
    values = np.asarray(values, dtype=float)
    bad = ~(values > 0)
    first = float(ts[np.argmax(bad)]) if bad.any() else None
    finite = values[np.isfinite(values)]
    return ConditionResult(name, not bad.any(), first, float(finite.min()) if finite.size else math.nan)


def check_admissibility(family: LambdaFamily, c: float, t_max: float,
                        samples: int = 201) -> AdmissibilityReport:
    """Evaluate the Kahler-stage positivity conditions on a grid over [0, t_max].

    Failures are report content, never exceptions.
    """
    if samples < 2 or not t_max > 0:
        raise ValueError("need samples >= 2 and t_max > 0")
    A = float(family.A)
    ts = np.linspace(0.0, t_max, samples)
    lam = np.empty(samples)
    dlam = np.empty(samples)
    for i, t in enumerate(ts):
        try:
            lam[i], dlam[i] = family.eval(t)
        except (SingularParameterError, ValueError, ZeroDivisionError):
            lam[i] = dlam[i] = math.nan
    m = lam + 2 * ts * dlam
    d = A**2 - 2 * c * ts * lam**2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = d / m

    positivity = np.empty(samples)
    for i, t in enumerate(ts):
        try:
            cs = coefficients(family, c, t)
            positivity[i] = min(cs.c1, cs.c2, cs.c1 + 2 * t * cs.d1, cs.c2 + 2 * t * cs.d2)
        except (SingularParameterError, ValueError, ZeroDivisionError):
            positivity[i] = math.nan

    return AdmissibilityReport(
        family=family.describe(),
        c=c,
        t_max=t_max,
        samples=samples,
        kahler=[
            _condition("lambda > 0", ts, lam),
            _condition("A^2 - 2ct lambda^2 > 0", ts, d),
            _condition("lambda + 2t lambda' > 0", ts, m),
        ],
        hermitian_stage=_condition("(A^2 - 2ct lambda^2)/(lambda + 2t lambda') > 0", ts, ratio),
        metric_positivity=_condition("c1, c2, c1 + 2t d1, c2 + 2t d2 > 0", ts, positivity),
    )


def fd_lambda_prime_check(family: LambdaFamily, t: float, h: float = 1e-5) -> float:
    """|finite-difference lambda'(t) - supplied lambda'(t)|.

    Central differences, or a second-order one-sided stencil when ``t - h < 0``.
    """
    t = float(t)
    lam = lambda s: family.eval(s)[0]
    if t - h < 0:
        estimate = (-3 * lam(t) + 4 * lam(t + h) - lam(t + 2 * h)) / (2 * h)
    else:
        estimate = (lam(t + h) - lam(t - h)) / (2 * h)
    return abs(estimate - family.eval(t)[1])
