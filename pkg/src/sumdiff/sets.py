"""Exact set arithmetic and collision statistics for finite integer sets.

An :class:`IntegerSet` stores a subset of an integer interval ``[lo, hi]``
as a bit mask (one Python big integer, bit ``m - lo`` set iff ``m`` is a
member) together with the sorted member array.  Sumsets and difference
sets are computed by bit-parallel shift-accumulate over the members;
representation histograms by chunked numpy bincounts over ordered pairs.

All operations are pure: values never mutate after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator

import numpy as np

from .errors import ResourceBudgetError

# Elementary pair operations allowed per histogram / image call.
PAIR_BUDGET = 10**10

# Rows are blocked so each outer-product chunk stays ~10^7 entries.
_CHUNK_ENTRIES = 10**7


class IntegerSet:
    """Immutable subset of the integer interval ``[lo, hi]``."""

    __slots__ = ("lo", "hi", "_members", "_mask")

    def __init__(self, elements: Iterable[int], lo: int, hi: int):
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        members = np.unique(np.asarray(list(elements), dtype=np.int64))
        if members.size and (members[0] < lo or members[-1] > hi):
            bad = members[(members < lo) | (members > hi)]
            raise ValueError(f"elements outside [{lo}, {hi}]: {bad[:5].tolist()}")
        self.lo = int(lo)
        self.hi = int(hi)
        members.flags.writeable = False
        self._members = members
        self._mask = _mask_from_members(members, lo, hi)

    @classmethod
    def from_bool(cls, bits: np.ndarray, lo: int) -> "IntegerSet":
        """Build from a boolean membership array starting at ``lo``."""
        obj = cls.__new__(cls)
        obj.lo = int(lo)
        obj.hi = int(lo) + len(bits) - 1
        members = np.flatnonzero(bits).astype(np.int64) + lo
        members.flags.writeable = False
        obj._members = members
        obj._mask = int.from_bytes(
            np.packbits(bits, bitorder="little").tobytes(), "little"
        )
        return obj

    @classmethod
    def from_members(cls, members: np.ndarray, lo: int, hi: int) -> "IntegerSet":
        """Build from a sorted, unique, in-range int64 array (trusted)."""
        obj = cls.__new__(cls)
        obj.lo = int(lo)
        obj.hi = int(hi)
        members = np.asarray(members, dtype=np.int64)
        members.flags.writeable = False
        obj._members = members
        obj._mask = _mask_from_members(members, lo, hi)
        return obj

    @property
    def count(self) -> int:
        return int(self._members.size)

    @property
    def mask(self) -> int:
        return self._mask

    def members(self) -> np.ndarray:
        """Sorted member values (read-only view)."""
        return self._members

    def __len__(self) -> int:
        return self.count

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi and bool((self._mask >> (value - self.lo)) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self._members.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerSet):
            return NotImplemented
        return (self.lo, self.hi, self._mask) == (other.lo, other.hi, other._mask)

    def __hash__(self) -> int:
        return hash((self.lo, self.hi, self._mask))

    def __repr__(self) -> str:
        head = self._members[:8].tolist()
        tail = "..." if self.count > 8 else ""
        return f"IntegerSet([{self.lo},{self.hi}] n={self.count} {{{', '.join(map(str, head))}{tail}}})"


def _mask_from_members(members: np.ndarray, lo: int, hi: int) -> int:
    width = hi - lo + 1
    bits = np.zeros(width, dtype=bool)
    if members.size:
        bits[members - lo] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def make_set(elements: Iterable[int], lo: int, hi: int) -> IntegerSet:
    """Set of the distinct ``elements``; every element must lie in [lo, hi]."""
    return IntegerSet(elements, lo, hi)


@dataclass(frozen=True)
class LinearForm:
    """A linear form u1*x1 + ... + uk*xk with non-zero integer coefficients.

    Binary forms (k=2) must satisfy u >= |v| >= 1 and gcd(u, v) = 1;
    (1, 1) is the sum form, every other admissible pair is a difference
    form.  Forms with k >= 3 require gcd(u1, ..., uk) = 1.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise ValueError("a linear form needs at least two coefficients")
        if any(c == 0 for c in coeffs):
            raise ValueError(f"zero coefficient in {coeffs}")
        if len(coeffs) == 2:
            u, v = coeffs
            if u < abs(v) or v == 0:
                raise ValueError(f"binary form requires u >= |v| > 0, got {coeffs}")
            if gcd(u, v) != 1:
                raise ValueError(f"binary form requires gcd(u, v) = 1, got {coeffs}")
        else:
            g = 0
            for c in coeffs:
                g = gcd(g, c)
            if g != 1:
                raise ValueError(f"coefficients must be coprime overall, got {coeffs}")

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    @property
    def kind(self) -> str:
        if self.arity == 2:
            return "binary-sum" if self.coeffs == (1, 1) else "binary-difference"
        return "k-ary"

    @property
    def u(self) -> int:
        if self.arity != 2:
            raise ValueError("u/v defined for binary forms only")
        return self.coeffs[0]

    @property
    def v(self) -> int:
        if self.arity != 2:
            raise ValueError("u/v defined for binary forms only")
        return self.coeffs[1]

    @property
    def weight(self) -> int:
        """Sum of absolute coefficients (the scale of the image interval)."""
        return sum(abs(c) for c in self.coeffs)

    def label(self) -> str:
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class RepHistogram:
    """Representation counts R(value) over a value interval.

    kind="sum":  R(n) = unordered pairs {a1, a2} (repetition allowed) with
                 a1 + a2 = n; totals |A|(|A|+1)/2.
    kind="diff": R(d) = ordered pairs (a1, a2) with a1 - a2 = d (diagonal
                 included, so R(0) = |A|); totals |A|^2.
    kind="form": R(n) = ordered pairs (a1, a2) with u*a1 + v*a2 = n
                 (diagonal included); totals |A|^2.
    """

    kind: str
    domain_lo: int
    domain_hi: int
    counts: np.ndarray = field(repr=False)
    form: LinearForm | None = None

    def __post_init__(self):
        self.counts.flags.writeable = False

    def count(self, value: int) -> int:
        if value < self.domain_lo or value > self.domain_hi:
            return 0
        return int(self.counts[value - self.domain_lo])

    def total(self) -> int:
        return int(self.counts.sum())

    def support_size(self) -> int:
        """Number of values with R(value) >= 1."""
        return int(np.count_nonzero(self.counts))

    def nonzero_items(self) -> Iterator[tuple[int, int]]:
        for idx in np.flatnonzero(self.counts):
            yield int(idx) + self.domain_lo, int(self.counts[idx])


def sumset(a: IntegerSet) -> IntegerSet:
    """A + A over [2*lo, 2*hi], by shift-accumulate over the members of A."""
    acc = 0
    mask = a.mask
    lo = a.lo
    for m in a.members().tolist():
        acc |= mask << (m - lo)
    return _set_from_mask(acc, 2 * a.lo, 2 * a.hi)


def diffset(a: IntegerSet) -> IntegerSet:
    """A - A over [lo - hi, hi - lo]; symmetric about 0."""
    acc = 0
    mask = a.mask
    hi = a.hi
    for m in a.members().tolist():
        acc |= mask << (hi - m)
    return _set_from_mask(acc, a.lo - a.hi, a.hi - a.lo)


def form_image(a: IntegerSet, form: LinearForm) -> IntegerSet:
    """{u1*a1 + ... + uk*ak : ai in A} over its exact representable interval."""
    if form.arity == 2:
        return _binary_image(a, form)
    return _kary_image(a, form)


def _image_interval(a: IntegerSet, coeffs: tuple[int, ...]) -> tuple[int, int]:
    lo = sum(min(c * a.lo, c * a.hi) for c in coeffs)
    hi = sum(max(c * a.lo, c * a.hi) for c in coeffs)
    return lo, hi


def _binary_image(a: IntegerSet, form: LinearForm) -> IntegerSet:
    u, v = form.coeffs
    lo, hi = _image_interval(a, (u, v))
    width = hi - lo + 1
    marks = np.zeros(width, dtype=bool)
    if a.count:
        left = u * a.members()
        right = v * a.members()
        step = max(1, _CHUNK_ENTRIES // a.count)
        for i in range(0, a.count, step):
            vals = (left[i : i + step, None] + right[None, :]).ravel()
            marks[vals - lo] = True
    return IntegerSet.from_bool(marks, lo)


def _kary_image(a: IntegerSet, form: LinearForm) -> IntegerSet:
    if a.count ** form.arity > PAIR_BUDGET:
        raise ResourceBudgetError(
            f"k-ary image needs |A|^k = {a.count}^{form.arity} > {PAIR_BUDGET} operations"
        )
    lo, hi = _image_interval(a, form.coeffs)
    if a.count == 0:
        return IntegerSet.from_bool(np.zeros(hi - lo + 1, dtype=bool), lo)
    vals = form.coeffs[0] * a.members()
    for c in form.coeffs[1:]:
        vals = np.unique((vals[:, None] + c * a.members()[None, :]).ravel())
    marks = np.zeros(hi - lo + 1, dtype=bool)
    marks[vals - lo] = True
    return IntegerSet.from_bool(marks, lo)


def _set_from_mask(mask: int, lo: int, hi: int) -> IntegerSet:
    width = hi - lo + 1
    raw = np.frombuffer(mask.to_bytes((width + 7) // 8, "little"), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")[:width].astype(bool)
    return IntegerSet.from_bool(bits, lo)


def _pair_bincount(left: np.ndarray, right: np.ndarray, lo: int, width: int) -> np.ndarray:
    counts = np.zeros(width, dtype=np.int64)
    if left.size == 0 or right.size == 0:
        return counts
    step = max(1, _CHUNK_ENTRIES // right.size)
    for i in range(0, left.size, step):
        vals = (left[i : i + step, None] + right[None, :]).ravel()
        counts += np.bincount(vals - lo, minlength=width)
    return counts


def rep_histogram(a: IntegerSet, kind: str, form: LinearForm | None = None) -> RepHistogram:
    """Representation histogram of A under the given operation."""
    if a.count * a.count > PAIR_BUDGET:
        raise ResourceBudgetError(
            f"histogram needs |A|^2 = {a.count}^2 > {PAIR_BUDGET} pair operations"
        )
    members = a.members()
    if kind == "sum":
        lo, hi = 2 * a.lo, 2 * a.hi
        ordered = _pair_bincount(members, members, lo, hi - lo + 1)
        diag = np.zeros(hi - lo + 1, dtype=np.int64)
        if members.size:
            diag[2 * members - lo] = 1
        return RepHistogram("sum", lo, hi, (ordered + diag) // 2)
    if kind == "diff":
        lo, hi = a.lo - a.hi, a.hi - a.lo
        counts = _pair_bincount(members, -members, lo, hi - lo + 1)
        return RepHistogram("diff", lo, hi, counts)
    if kind == "form":
        if form is None:
            raise ValueError("kind='form' requires a LinearForm")
        if form.arity != 2:
            raise ValueError("histograms are defined for binary forms only")
        u, v = form.coeffs
        lo, hi = _image_interval(a, (u, v))
        counts = _pair_bincount(u * members, v * members, lo, hi - lo + 1)
        return RepHistogram("form", lo, hi, counts, form=form)
    raise ValueError(f"unknown histogram kind {kind!r}")


def _effective_counts(hist: RepHistogram) -> np.ndarray:
    """Counts over the effective domain (zero difference excluded for diff)."""
    if hist.kind == "diff" and hist.domain_lo <= 0 <= hist.domain_hi:
        counts = hist.counts.copy()
        counts[0 - hist.domain_lo] = 0
        return counts
    return hist.counts


def tuple_statistic(hist: RepHistogram, k: int) -> int:
    """Number of k-element sets of pairs sharing one representation value.

    Sum over values v of C(R(v), k), with v = 0 excluded for diff
    histograms.  Exact integer arithmetic (results can exceed 64 bits).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = _effective_counts(hist)
    relevant = counts[counts >= k]
    if relevant.size == 0:
        return 0
    total = 0
    for r, times in zip(*np.unique(relevant, return_counts=True)):
        total += math.comb(int(r), k) * int(times)
    return total


def multiplicity_profile(hist: RepHistogram) -> dict[int, int]:
    """tau_i = number of values with exactly i representations, i >= 1."""
    counts = _effective_counts(hist)
    positive = counts[counts > 0]
    if positive.size == 0:
        return {}
    sizes, times = np.unique(positive, return_counts=True)
    return {int(i): int(t) for i, t in zip(sizes, times)}


def repeated_gap_pairs(hist: RepHistogram) -> int:
    """Pairs of distinct positive-gap member pairs sharing one gap.

    Sum over d > 0 of C(R(d), 2); by the R(d) = R(-d) symmetry this is
    half of tuple_statistic(hist, 2).  Exact integers throughout.
    """
    if hist.kind != "diff":
        raise ValueError("gap collisions are defined on difference histograms")
    start = max(0, 1 - hist.domain_lo)
    positive = hist.counts[start:]
    relevant = positive[positive >= 2]
    total = 0
    for r, times in zip(*np.unique(relevant, return_counts=True)):
        total += math.comb(int(r), 2) * int(times)
    return total


@dataclass(frozen=True)
class Classification:
    label: str  # sum-dominated | balanced | difference-dominated
    sumset_size: int
    diffset_size: int
    missing_sums: int
    missing_diffs: int


def classify(a: IntegerSet) -> Classification:
    """Compare |A+A| with |A-A| for A over I_N = [0, N] (N = a.hi)."""
    if a.lo != 0:
        raise ValueError("classification is defined for sets over [0, N]")
    n = a.hi
    s = sumset(a).count
    d = diffset(a).count
    if s > d:
        label = "sum-dominated"
    elif s == d:
        label = "balanced"
    else:
        label = "difference-dominated"
    return Classification(label, s, d, (2 * n + 1) - s, (2 * n + 1) - d)
