"""Which of two binary difference forms yields the larger image, by regime.

For forms f = (u1, v1) and g = (u2, v2) the deciding quantities are the
weights u + |v| (dominant when p decays slower than N**-0.5) and the
exact rationals alpha(u, |v|) (dominant when p decays faster).  When the
weight and alpha orderings disagree there is a sharp threshold at
c = c_{f,g}: the unique positive root of
g_form(u1,|v1|, c^2/u1) = g_form(u2,|v2|, c^2/u2).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BracketingError
from .predictions import alpha, g_form
from .sampling import PFamily
from .sets import LinearForm

VALIDITY_NOTE = "valid where N^-3/5 = o(p(N)) and p(N) = o(1)"

_ROOT_REL_TOL = 1e-12
_BRACKET_CAP = 1e3
_TIE_SCALE = 1e-14


@dataclass(frozen=True)
class DominationReport:
    """Outcome of comparing two difference forms across the parameter range."""

    case: str  # case-i | case-ii | incomparable
    f: LinearForm
    g: LinearForm
    dominator_below: str  # form label, or "same"
    dominator_above: str
    c_threshold: float | None
    validity_note: str = VALIDITY_NOTE


def _require_difference_form(form: LinearForm) -> None:
    if form.kind != "binary-difference":
        raise ValueError(f"{form} is not a binary difference form")


def _h(f: LinearForm, g: LinearForm, c: float) -> float:
    return g_form(f.u, abs(f.v), c * c / f.u) - g_form(g.u, abs(g.v), c * c / g.u)


def classify_pair(f: LinearForm, g: LinearForm) -> DominationReport:
    """Case-i (one form dominates throughout), case-ii (sharp threshold),
    or incomparable (identical (u, |v|): all estimates coincide)."""
    _require_difference_form(f)
    _require_difference_form(g)
    wf, wg = f.weight, g.weight
    af, ag = alpha(f.u, abs(f.v)), alpha(g.u, abs(g.v))
    if (f.u, abs(f.v)) == (g.u, abs(g.v)):
        return DominationReport("incomparable", f, g, "same", "same", None)
    if wf >= wg and af < ag:
        return DominationReport("case-i", f, g, f.label(), f.label(), None)
    if wg >= wf and ag < af:
        return DominationReport("case-i", f, g, g.label(), g.label(), None)
    if wf > wg and af > ag:
        return DominationReport("case-ii", f, g, g.label(), f.label(), solve_threshold(f, g))
    if wg > wf and ag > af:
        return DominationReport("case-ii", f, g, f.label(), g.label(), solve_threshold(f, g))
    raise AssertionError("unreachable: equal alpha implies equal (u, |v|)")


def solve_threshold(f: LinearForm, g: LinearForm) -> float:
    """The unique positive root of h(c) = 0, resolved to relative 1e-12.

    h(c) compares the threshold-regime image sizes of f and g; a root
    exists exactly in case-ii, where the small-c and large-c orderings
    disagree.  Bisection from [1e-6, 1], doubling the upper end until the
    sign changes (capped at 1e3).  The sign at the small-c end is taken
    from the exact quartic coefficients (h ~ (alpha_g - alpha_f) c^4
    there, which underflows in floating point when the alphas are close).
    """
    _require_difference_form(f)
    _require_difference_form(g)
    af, ag = alpha(f.u, abs(f.v)), alpha(g.u, abs(g.v))
    if af == ag:
        raise BracketingError(
            f"({f}, {g}) share (u, |v|); h vanishes identically and has no root"
        )
    sign_lo = -1.0 if af > ag else 1.0
    lo = 1e-6
    hi = 1.0
    while _h(f, g, hi) * sign_lo > 0:
        hi *= 2.0
        if hi > _BRACKET_CAP:
            raise BracketingError(
                f"no sign change of h on [1e-6, {_BRACKET_CAP:g}]; "
                f"is ({f}, {g}) really a sharp-threshold pair?"
            )
    while hi - lo > _ROOT_REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        if _h(f, g, mid) * sign_lo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dominator_at(f: LinearForm, g: LinearForm, c: float) -> LinearForm | None:
    """The form with the larger predicted image at p = c*N**-0.5.

    Returns None on a tie within 1e-14 * (u1+|v1|) — in particular for
    every c when the two forms share (u, |v|).
    """
    _require_difference_form(f)
    _require_difference_form(g)
    if c <= 0:
        raise ValueError("c must be positive")
    h = _h(f, g, c)
    if abs(h) < _TIE_SCALE * f.weight:
        return None
    return f if h > 0 else g


@dataclass(frozen=True)
class RegimeDomination:
    dominator: LinearForm | None  # None: tie, or model breakdown
    regime: str  # above-threshold | between | at-threshold | breakdown
    rationale: str
    breakdown: bool = False


def regime_dominator(f: LinearForm, g: LinearForm, family: PFamily) -> RegimeDomination:
    """Dominating form for a power-law family, dispatched on delta.

    delta < 1/2: larger u+|v| wins, ties broken by larger u.
    1/2 < delta < 3/5: smaller alpha wins.
    delta = 1/2: sign of the threshold-regime comparison at c.
    delta >= 3/5: the binomial model cannot separate the forms.
    """
    _require_difference_form(f)
    _require_difference_form(g)
    if family.variant != "power-law":
        raise ValueError("regime dispatch requires a power-law family")
    delta = family.delta
    if delta >= 0.6:
        return RegimeDomination(
            None,
            "breakdown",
            f"delta={delta:g} >= 3/5: set-size noise swamps the comparison",
            breakdown=True,
        )
    if delta < 0.5:
        if f.weight != g.weight:
            winner = f if f.weight > g.weight else g
            return RegimeDomination(winner, "above-threshold", "larger u+|v| saturates a wider interval")
        if f.u != g.u:
            winner = f if f.u > g.u else g
            return RegimeDomination(winner, "above-threshold", "equal u+|v|: smaller u|v| misses fewer values")
        return RegimeDomination(None, "above-threshold", "identical (u, |v|): indistinguishable")
    if delta > 0.5:
        af, ag = alpha(f.u, abs(f.v)), alpha(g.u, abs(g.v))
        if af == ag:
            return RegimeDomination(None, "between", "identical alpha: indistinguishable")
        winner = f if af < ag else g
        return RegimeDomination(winner, "between", "smaller alpha loses fewer values to collisions")
    winner = dominator_at(f, g, family.c)
    return RegimeDomination(winner, "at-threshold", f"sign of the ratio-function gap at c={family.c:g}")
