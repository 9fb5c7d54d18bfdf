import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumdiff import (
    IntegerSet,
    LinearForm,
    ResourceBudgetError,
    classify,
    diffset,
    form_image,
    make_set,
    multiplicity_profile,
    rep_histogram,
    repeated_gap_pairs,
    sumset,
    tuple_statistic,
)

from oracles import (
    diff_rep_counts,
    diffset_oracle,
    form_image_oracle,
    form_rep_counts,
    repeated_gap_pairs_oracle,
    sum_rep_counts,
    sumset_oracle,
    tuple_statistic_oracle,
)

small_sets = st.lists(st.integers(0, 12), max_size=13).map(lambda xs: make_set(xs, 0, 12))


# --- construction


def test_make_set_collapses_duplicates():
    a = make_set([0, 2, 2], 0, 13)
    assert list(a) == [0, 2]
    assert a.count == 2


def test_make_set_empty():
    a = make_set([], 0, 10)
    assert a.count == 0
    assert list(a) == []


def test_make_set_full_interval():
    a = make_set(range(15), 0, 14)
    assert a.count == 15


def test_make_set_rejects_out_of_range():
    with pytest.raises(ValueError):
        make_set([0, 15], 0, 14)
    with pytest.raises(ValueError):
        make_set([-1], 0, 5)


def test_make_set_rejects_bad_interval():
    with pytest.raises(ValueError):
        make_set([], 3, 2)


def test_membership_and_equality():
    a = make_set([1, 5, 9], 0, 10)
    assert 5 in a and 4 not in a and 11 not in a
    assert a == make_set([9, 5, 1, 1], 0, 10)
    assert a != make_set([1, 5, 9], 0, 11)
    assert len(a) == 3
    assert "n=3" in repr(a)


# --- linear forms


def test_form_kinds():
    assert LinearForm((1, 1)).kind == "binary-sum"
    assert LinearForm((1, -1)).kind == "binary-difference"
    assert LinearForm((4, -3)).kind == "binary-difference"
    assert LinearForm((1, 1, -1)).kind == "k-ary"


@pytest.mark.parametrize("coeffs", [(1,), (0, 1), (2, 0), (1, 2), (2, -4), (2, 2), (2, 4, 6)])
def test_form_validation_rejects(coeffs):
    with pytest.raises(ValueError):
        LinearForm(coeffs)


def test_form_weight_and_label():
    f = LinearForm((4, -3))
    assert (f.u, f.v, f.weight) == (4, -3, 7)
    assert f.label() == "(4,-3)"


# --- images


def test_sumset_example():
    a = make_set([0, 1, 3], 0, 3)
    s = sumset(a)
    assert list(s) == [0, 1, 2, 3, 4, 6]
    assert s.count == 6
    assert (s.lo, s.hi) == (0, 6)


def test_sumset_trivial_cases():
    assert list(sumset(make_set([0], 0, 5))) == [0]
    assert sumset(make_set([], 0, 5)).count == 0


def test_diffset_example():
    a = make_set([0, 1, 3], 0, 3)
    d = diffset(a)
    assert list(d) == [-3, -2, -1, 0, 1, 2, 3]
    assert (d.lo, d.hi) == (-3, 3)


def test_diffset_trivial_cases():
    assert list(diffset(make_set([5], 0, 5))) == [0]
    assert diffset(make_set([], 0, 5)).count == 0


def test_form_image_example():
    a = make_set([0, 1, 3], 0, 3)
    img = form_image(a, LinearForm((2, -1)))
    assert list(img) == [-3, -1, 0, 1, 2, 3, 5, 6]
    assert img.count == 8


def test_form_image_ternary():
    a = make_set([0, 1], 0, 1)
    img = form_image(a, LinearForm((1, 1, 1)))
    assert list(img) == [0, 1, 2, 3]


def test_form_image_kary_budget():
    a = make_set(range(2200), 0, 2200)  # 2200^3 > 10^10
    with pytest.raises(ResourceBudgetError):
        form_image(a, LinearForm((1, 1, 1)))


def test_images_on_shifted_interval():
    a = make_set([2, 3, 5], 2, 5)
    s = sumset(a)
    assert (s.lo, s.hi) == (4, 10)
    assert list(s) == [4, 5, 6, 7, 8, 10]
    d = diffset(a)
    assert (d.lo, d.hi) == (-3, 3)
    assert list(d) == [-3, -2, -1, 0, 1, 2, 3]
    img = form_image(a, LinearForm((2, -1)))
    assert (img.lo, img.hi) == (-1, 8)
    assert list(img) == [-1, 1, 2, 3, 4, 5, 7, 8]
    # negative-lo input (e.g. a difference set) round-trips through sumset
    dd = sumset(d)
    assert (dd.lo, dd.hi) == (-6, 6)
    assert list(dd) == list(range(-6, 7))


@given(small_sets)
@settings(max_examples=60, deadline=None)
def test_images_match_bruteforce(a):
    elems = list(a)
    assert list(sumset(a)) == sumset_oracle(elems)
    assert list(diffset(a)) == diffset_oracle(elems)
    assert list(form_image(a, LinearForm((2, -1)))) == form_image_oracle(elems, (2, -1))
    assert list(form_image(a, LinearForm((3, 2)))) == form_image_oracle(elems, (3, 2))


@given(small_sets)
@settings(max_examples=40, deadline=None)
def test_form_image_definitional_identities(a):
    assert form_image(a, LinearForm((1, -1))) == diffset(a)
    assert form_image(a, LinearForm((1, 1))) == sumset(a)


@given(small_sets)
@settings(max_examples=60, deadline=None)
def test_size_bounds_and_symmetry(a):
    n = a.count
    if n == 0:
        return
    s, d = sumset(a), diffset(a)
    assert 2 * n - 1 <= s.count <= min(n * (n + 1) // 2, 2 * 12 + 1)
    assert 2 * n - 1 <= d.count <= min(n * (n - 1) + 1, 2 * 12 + 1)
    assert 0 in d
    members = list(d)
    assert members == [-m for m in reversed(members)]


# --- histograms


def test_sum_histogram_example():
    h = rep_histogram(make_set([0, 1, 2], 0, 2), "sum")
    assert dict(h.nonzero_items()) == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}
    assert h.total() == 6  # |A|(|A|+1)/2


def test_diff_histogram_example():
    h = rep_histogram(make_set([0, 1, 2], 0, 2), "diff")
    assert dict(h.nonzero_items()) == {-2: 1, -1: 2, 0: 3, 1: 2, 2: 1}
    assert h.total() == 9  # |A|^2


def test_empty_histogram():
    h = rep_histogram(make_set([], 0, 5), "sum")
    assert h.total() == 0
    assert dict(h.nonzero_items()) == {}


def test_form_histogram_requires_binary_form():
    a = make_set([0, 1], 0, 1)
    with pytest.raises(ValueError):
        rep_histogram(a, "form")
    with pytest.raises(ValueError):
        rep_histogram(a, "form", LinearForm((1, 1, 1)))
    with pytest.raises(ValueError):
        rep_histogram(a, "nonsense")


def test_histogram_budget():
    a = make_set(range(200_001), 0, 200_001)
    with pytest.raises(ResourceBudgetError):
        rep_histogram(a, "diff")


@given(small_sets)
@settings(max_examples=40, deadline=None)
def test_histograms_match_counters(a):
    elems = list(a)
    hs = rep_histogram(a, "sum")
    assert dict(hs.nonzero_items()) == dict(sum_rep_counts(elems))
    hd = rep_histogram(a, "diff")
    assert dict(hd.nonzero_items()) == dict(diff_rep_counts(elems))
    hf = rep_histogram(a, "form", LinearForm((3, -2)))
    assert dict(hf.nonzero_items()) == dict(form_rep_counts(elems, 3, -2))
    assert hd.total() == hf.total() == len(elems) ** 2


# --- tuple statistics and profiles


def test_tuple_statistic_examples():
    hs = rep_histogram(make_set([0, 1, 2], 0, 2), "sum")
    assert tuple_statistic(hs, 1) == 6
    assert tuple_statistic(hs, 2) == 1
    hd = rep_histogram(make_set([0, 1, 2], 0, 2), "diff")
    assert tuple_statistic(hd, 2) == 2  # d=1 and d=-1; d=0 excluded
    assert tuple_statistic(hd, 9) == 0
    with pytest.raises(ValueError):
        tuple_statistic(hs, 0)


def test_multiplicity_profile_examples():
    hs = rep_histogram(make_set([0, 1, 2], 0, 2), "sum")
    assert multiplicity_profile(hs) == {1: 4, 2: 1}
    hd = rep_histogram(make_set([0, 1, 2], 0, 2), "diff")
    assert multiplicity_profile(hd) == {1: 2, 2: 2}
    assert multiplicity_profile(rep_histogram(make_set([], 0, 3), "sum")) == {}


@given(small_sets, st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_tuple_statistic_matches_bruteforce(a, k):
    elems = list(a)
    for kind, form in (("sum", None), ("diff", None), ("form", LinearForm((2, -1)))):
        h = rep_histogram(a, kind, form)
        expected = tuple_statistic_oracle(elems, kind, k, form=(2, -1) if form else None)
        assert tuple_statistic(h, k) == expected


@given(small_sets)
@settings(max_examples=40, deadline=None)
def test_profile_consistency(a):
    for kind, form in (("sum", None), ("diff", None), ("form", LinearForm((2, -1)))):
        h = rep_histogram(a, kind, form)
        tau = multiplicity_profile(h)
        image = rep_histogram(a, kind, form).support_size()
        if kind == "diff" and a.count:
            image -= 1  # zero gap excluded from the partition
        assert sum(tau.values()) == image
        for k in (1, 2, 3):
            assert sum(math.comb(i, k) * t for i, t in tau.items()) == tuple_statistic(h, k)


@given(small_sets, st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_partial_sum_identity(a, m):
    """||image| - alternating partial sum| <= X_m, for sums, gaps and forms."""
    if a.count == 0:
        return
    cases = (
        ("sum", None, sumset(a).count, 0),
        ("diff", None, diffset(a).count, 1),
        ("form", LinearForm((2, -1)), form_image(a, LinearForm((2, -1))).count, 0),
    )
    for kind, form, size, offset in cases:
        h = rep_histogram(a, kind, form)
        xs = [tuple_statistic(h, k) for k in range(1, m + 1)]
        partial = sum(x if k % 2 == 1 else -x for k, x in enumerate(xs, start=1))
        assert abs((size - offset) - partial) <= xs[-1]


# --- gap collisions (Y)


@given(small_sets)
@settings(max_examples=50, deadline=None)
def test_repeated_gap_pairs_matches_quadruple_enumeration(a):
    h = rep_histogram(a, "diff")
    y = repeated_gap_pairs(h)
    assert y == repeated_gap_pairs_oracle(list(a))
    assert y == tuple_statistic(h, 2) // 2


def test_repeated_gap_pairs_larger_interval():
    rng = np.random.default_rng(7)
    for _ in range(10):
        elems = np.flatnonzero(rng.random(31) < 0.4)
        a = make_set(elems.tolist(), 0, 30)
        assert repeated_gap_pairs(rep_histogram(a, "diff")) == repeated_gap_pairs_oracle(
            elems.tolist()
        )


def test_repeated_gap_pairs_requires_diff():
    with pytest.raises(ValueError):
        repeated_gap_pairs(rep_histogram(make_set([0, 1], 0, 1), "sum"))


# --- classification


def test_classify_famous_sum_dominated():
    a = make_set([0, 2, 3, 4, 7, 11, 12, 14], 0, 14)
    result = classify(a)
    assert result.label == "sum-dominated"
    assert result.sumset_size == len(sumset_oracle(list(a)))
    assert result.diffset_size == len(diffset_oracle(list(a)))
    assert result.sumset_size == 26 and result.diffset_size == 25
    assert result.missing_sums == (2 * 14 + 1) - 26
    assert result.missing_diffs == (2 * 14 + 1) - 25


def test_classify_balanced_and_difference_dominated():
    assert classify(make_set([0, 1, 2], 0, 2)).label == "balanced"
    r = classify(make_set([0, 1, 3], 0, 3))
    assert r.label == "difference-dominated"
    assert (r.sumset_size, r.diffset_size) == (6, 7)


def test_classify_trivial_sets_balanced():
    assert classify(make_set([], 0, 5)).label == "balanced"
    assert classify(make_set([3], 0, 5)).label == "balanced"


def test_classify_requires_zero_based_interval():
    with pytest.raises(ValueError):
        classify(IntegerSet([2, 3], 2, 5))
