"""Closed-form expectations, asymptotics and bounds for random-set sizes.

Conventions for a random subset A of [0, N] with inclusion probability p:

* S = |A+A|, D = |A-A|; missing counts Sc = (2N+1) - S, Dc = (2N+1) - D.
* For a binary form f = (u, v), Df = |f(A)| and Dfc = (u+|v|)N - Df.
* The threshold scale is p ~ N**-0.5: regime "below" means p decays
  faster (delta > 1/2), "at" means p = c*N**-0.5, "above" means slower
  decay (delta < 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .sampling import PFamily, p_of
from .sets import LinearForm

# Below this x the closed forms lose ~u*eps to cancellation, so both
# ratio functions switch to their truncated alternating series; at the
# crossover the two branches agree to ~1e-17 absolute.
_SERIES_CUTOVER = 1e-3
_SERIES_TERMS = 12

REGIMES = ("below", "at", "above")


def series_partial_g(x: float, m: int) -> float:
    """Partial sum 2 * sum_{k=1..m} (-1)^(k-1) x^k / (k+1)!."""
    if m < 1:
        raise ValueError("m must be >= 1")
    term = x / 2.0
    total = term
    for k in range(2, m + 1):
        term *= -x / (k + 1)
        total += term
    return 2.0 * total


def g_ratio(x: float) -> float:
    """The size ratio function 2*(exp(-x) - (1-x))/x, increasing (0,inf)->(0,2)."""
    if x <= 0:
        raise ValueError("g is defined for x > 0")
    if x < _SERIES_CUTOVER:
        return series_partial_g(x, _SERIES_TERMS)
    # expm1 keeps the numerator's cancellation at eps*x instead of eps
    return 2.0 * (math.expm1(-x) + x) / x


def _series_partial_g_form(u: int, absv: int, x: float, m: int) -> float:
    total = 0.0
    sign = 1.0
    xk = 1.0
    for k in range(1, m + 1):
        xk *= x
        total += sign * xk * (2 * absv / math.factorial(k + 1) + (u - absv) / math.factorial(k))
        sign = -sign
    return total


def g_form(u: int, absv: int, x: float) -> float:
    """(u+|v|) - 2|v|(1-exp(-x))/x - (u-|v|)exp(-x); increasing (0,inf)->(0,u+|v|)."""
    if not (isinstance(u, int) and isinstance(absv, int)) or u < absv or absv < 1:
        raise ValueError(f"need integers u >= |v| >= 1, got u={u}, |v|={absv}")
    if x <= 0:
        raise ValueError("g_form is defined for x > 0")
    if x < _SERIES_CUTOVER:
        return _series_partial_g_form(u, absv, x, _SERIES_TERMS)
    return (u + absv) + 2.0 * absv * math.expm1(-x) / x - (u - absv) * math.exp(-x)


def alpha(u: int, absv: int) -> Fraction:
    """Exact small-c quartic coefficient (3u - |v|) / (6 u^2).

    Smaller alpha means the larger image just below the threshold scale.
    """
    if u < absv or absv < 1:
        raise ValueError(f"need u >= |v| >= 1, got u={u}, |v|={absv}")
    if math.gcd(u, absv) != 1:
        raise ValueError(f"need gcd(u, |v|) = 1, got u={u}, |v|={absv}")
    return Fraction(3 * u - absv, 6 * u * u)


def expected_tuple_count(
    n: int, p: float, k: int, kind: str, form: LinearForm | None = None
) -> float:
    """Leading-order E[X_k]: expected k-sets of pairs sharing a value.

    sum:  (2/(k+1)!) (p^2/2)^k N^(k+1)
    diff: (2/(k+1)!) p^(2k)  N^(k+1)
    form (u, v): u^-k (2|v|/(k+1)! + (u-|v|)/k!) p^(2k) N^(k+1)
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if kind == "sum":
        return 2.0 / math.factorial(k + 1) * (p * p / 2.0) ** k * float(n) ** (k + 1)
    if kind == "diff":
        return 2.0 / math.factorial(k + 1) * p ** (2 * k) * float(n) ** (k + 1)
    if kind == "form":
        if form is None or form.arity != 2:
            raise ValueError("kind='form' requires a binary LinearForm")
        u, absv = form.u, abs(form.v)
        coeff = (2 * absv / math.factorial(k + 1) + (u - absv) / math.factorial(k)) / u**k
        return coeff * p ** (2 * k) * float(n) ** (k + 1)
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class PredictionBundle:
    """Asymptotic size and missing-count predictions at one (N, p)."""

    regime: str  # below | at | above (relative to the N^-1/2 threshold scale)
    n: int
    p: float
    S_pred: float
    D_pred: float
    Sc_pred: float
    Dc_pred: float
    forms: dict[LinearForm, tuple[float, float]] = field(default_factory=dict)
    c: float | None = None

    def form_prediction(self, form: LinearForm) -> tuple[float, float]:
        return self.forms[form]


def _resolve_regime(family: PFamily, regime: str | None) -> str:
    if family.variant == "power-law":
        derived = "below" if family.delta > 0.5 else ("at" if family.delta == 0.5 else "above")
        if regime is not None and regime != derived:
            raise ValueError(f"declared regime {regime!r} contradicts delta={family.delta}")
        return derived
    if regime is None:
        raise ValueError("explicit-p families require a declared regime (below/at/above)")
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")
    return regime


def asymptotic_bundle(
    n: int,
    family: PFamily,
    forms: tuple[LinearForm, ...] = (),
    regime: str | None = None,
) -> PredictionBundle:
    """Predicted S, D, Sc, Dc and per-form Df, Dfc at (N, family)."""
    for f in forms:
        if f.kind != "binary-difference":
            raise ValueError(f"predictions cover binary difference forms only, got {f}")
    regime = _resolve_regime(family, regime)
    p = p_of(family, n)
    total = 2 * n + 1
    form_preds: dict[LinearForm, tuple[float, float]] = {}
    if regime == "below":
        s = (n * p) ** 2 / 2.0
        d = (n * p) ** 2
        bundle = PredictionBundle("below", n, p, s, d, total - s, total - d)
        for f in forms:
            df = (n * p) ** 2
            form_preds[f] = (df, f.weight * n - df)
    elif regime == "at":
        c = family.c if family.variant == "power-law" else p * math.sqrt(n)
        s = g_ratio(c * c / 2.0) * n
        d = g_ratio(c * c) * n
        bundle = PredictionBundle("at", n, p, s, d, total - s, total - d, c=c)
        for f in forms:
            df = g_form(f.u, abs(f.v), c * c / f.u) * n
            form_preds[f] = (df, f.weight * n - df)
    else:
        sc = 4.0 / (p * p)
        dc = 2.0 / (p * p)
        bundle = PredictionBundle("above", n, p, total - sc, total - dc, sc, dc)
        for f in forms:
            dfc = 2.0 * f.u * abs(f.v) / (p * p)
            form_preds[f] = (f.weight * n - dfc, dfc)
    bundle.forms.update(form_preds)
    return bundle


def missing_sum_probability(n: int, p: float, value: int) -> float:
    """Exact P(value not in A+A) for A binomial over [0, n], value in [0, 2n].

    The two-element representations {k, value-k} and the possible
    diagonal {value/2, value/2} occupy disjoint index pairs, so the
    exclusion events are independent and the probability is an exact
    product.
    """
    if not 0 <= value <= 2 * n:
        raise ValueError(f"value {value} outside [0, {2*n}]")
    m = min(value, 2 * n - value)
    if m % 2 == 0:
        return (1.0 - p * p) ** (m // 2) * (1.0 - p)
    return (1.0 - p * p) ** ((m + 1) // 2)


def exact_missing_sums_expectation(n: int, p: float) -> float:
    """Exact E[Sc] = sum over values in [0, 2n] of P(value not in A+A)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    vals = np.arange(n + 1, dtype=np.int64)
    logq = math.log1p(-p * p)
    expo = np.where(
        vals % 2 == 0,
        (vals // 2) * logq + math.log1p(-p),
        ((vals + 1) // 2) * logq,
    )
    probs = np.exp(expo)
    # values n+1 .. 2n mirror values 0 .. n-1
    return float(2.0 * probs[:-1].sum() + probs[-1])


def janson_missing_diffs_bounds(n: int, p: float) -> tuple[float, float]:
    """Rigorous bounds for E[Dc] = 2 * sum_{d=1..n} P(d not in A-A) + P(A empty).

    Per positive difference d the exclusion probability lies between
    M = (1-p^2)^(n-d+1) and M * exp(Delta/(1-eps)) with eps = p^2 and
    Delta = (n-2d+1) p^3 for d <= n/2 (one dependent pair per 3-term
    arithmetic progression of gap d), Delta = 0 otherwise.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    zero_term = math.exp((n + 1) * math.log1p(-p))
    if n == 0:
        return zero_term, zero_term
    d = np.arange(1, n + 1, dtype=np.int64)
    log_m = (n - d + 1) * math.log1p(-p * p)
    delta = np.where(d <= n / 2, (n - 2 * d + 1) * p**3, 0.0)
    lower_terms = np.exp(log_m)
    upper_expo = log_m + delta / (1.0 - p * p)
    if np.any(upper_expo > 700.0):
        return float(2.0 * lower_terms.sum() + zero_term), math.inf
    # same exp per term keeps upper >= lower under floating rounding
    upper_terms = np.maximum(np.exp(upper_expo), lower_terms)
    lower = float(2.0 * lower_terms.sum() + zero_term)
    upper = float(2.0 * upper_terms.sum() + zero_term)
    return lower, upper


def symmetry_count(form: LinearForm) -> int:
    """Number of coordinate permutations fixing the coefficient vector."""
    mult: dict[int, int] = {}
    for c in form.coeffs:
        mult[c] = mult.get(c, 0) + 1
    total = 1
    for m in mult.values():
        total *= math.factorial(m)
    return total


@dataclass(frozen=True)
class ConjecturePrediction:
    """Conjectured k-ary image-size / missing-count scaling at one (N, family).

    These are conjectured values, reproduced as stated so experiments can
    probe them.  Desk-scale sweeps support the image-size formula in the
    near-injective window ((N*p)^k = o(N), i.e. delta > (k-1)/k) but
    measure saturated-regime missing counts growing like p**-(k/(k-1)),
    below the conjectured p**-k (edge representation counts grow like
    gap**(k-1), not linearly, for k >= 3).
    """

    regime: str  # below | at | above (relative to the N^-1/k scale)
    quantity: str | None  # "image-size" | "missing-count" | None
    value: float | None  # None: the threshold-regime scaling function is unspecified
    theta: int


def conjecture_prediction(form: LinearForm, n: int, family: PFamily) -> ConjecturePrediction:
    """Conjectured |f(A)| scaling for a k-ary form, k >= 3."""
    k = form.arity
    if k < 3:
        raise ValueError("conjectured scalings cover k >= 3 only")
    if family.variant != "power-law":
        raise ValueError("the k-ary regimes are dispatched on delta; use a power-law family")
    theta = symmetry_count(form)
    p = p_of(family, n)
    threshold = Fraction(1, k)
    delta = Fraction(family.delta).limit_denominator(10**9)
    if delta > threshold:
        return ConjecturePrediction("below", "image-size", (n * p) ** k / theta, theta)
    if delta < threshold:
        prod = 1
        for c in form.coeffs:
            prod *= abs(c)
        return ConjecturePrediction("above", "missing-count", 2.0 * theta * prod / p**k, theta)
    return ConjecturePrediction("at", None, None, theta)
