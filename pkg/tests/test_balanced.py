import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsiaogen.balanced import (
    STRATEGIES,
    DeltaSpec,
    InfeasibleSpec,
    OpCounter,
    SplitPoint,
    all_specs,
    ending_state,
    generate_delta,
    generate_delta_iterative,
    l_condition,
    merge_flip,
    merge_shift,
    split_point,
    verify_balanced,
)


def weight_columns(R, J):
    """Every weight-J column of height R, by enumeration."""
    cols = []
    for support in combinations(range(R), J):
        col = [0] * R
        for r in support:
            col[r] = 1
        cols.append(tuple(col))
    return cols


@st.composite
def feasible_specs(draw, max_R=12):
    R = draw(st.integers(1, max_R))
    J = draw(st.integers(0, R))
    m = draw(st.integers(0, math.comb(R, J)))
    return DeltaSpec(R, J, m)


# -- l_condition -----------------------------------------------------------


@pytest.mark.parametrize(
    "spec, expected",
    [((4, 2, 6), True), ((4, 2, 7), False), ((6, 3, 10), True), ((3, 4, 0), False),
     ((3, -1, 0), False), ((3, 1, -1), False), ((1, 0, 1), True), ((1, 1, 1), True)],
)
def test_l_condition(spec, expected):
    assert l_condition(DeltaSpec(*spec)) is expected


def test_l_condition_exact_for_large_binomials():
    R = 200
    top = math.comb(R, 100)
    assert l_condition(DeltaSpec(R, 100, top))
    assert not l_condition(DeltaSpec(R, 100, top + 1))


def test_spec_rejects_nonpositive_rows():
    with pytest.raises(ValueError):
        DeltaSpec(0, 0, 0)


# -- split_point -----------------------------------------------------------


def test_split_point_full_block():
    assert split_point(DeltaSpec(4, 2, 6)) == SplitPoint(m1=3, r1=0, r2=0, r_prime=0)


def test_split_point_corrects_worked_example_m1():
    # ceil(3*10/6) = 5, not the 6 printed in the worked example
    assert split_point(DeltaSpec(6, 3, 10)).m1 == 5


def test_split_point_children_feasible_5_3_7():
    sp = split_point(DeltaSpec(5, 3, 7))
    assert sp.m1 == 5
    assert 5 <= math.comb(4, 2) and 2 <= math.comb(4, 3)
    assert l_condition(DeltaSpec(4, 2, 5)) and l_condition(DeltaSpec(4, 3, 2))


@pytest.mark.parametrize("spec", [(4, 1, 3), (4, 3, 3), (5, 2, 1), (4, 2, 7)])
def test_split_point_rejects_unsplittable(spec):
    with pytest.raises(ValueError):
        split_point(DeltaSpec(*spec))


def test_split_point_children_satisfy_l_condition_exhaustive():
    for spec in all_specs(12):
        R, J, m = spec
        if not (2 <= J <= R - 2 and m >= 2):
            continue
        sp = split_point(spec)
        assert l_condition(DeltaSpec(R - 1, J - 1, sp.m1))
        assert l_condition(DeltaSpec(R - 1, J, m - sp.m1))
        assert 0 <= sp.r1 < R - 1 and 0 <= sp.r2 < R - 1
        assert sp.r_prime == max(0, sp.r1 + sp.r2 - (R - 1))


def test_divisible_parent_can_still_leave_heavy_rows_below():
    # R | mJ does not imply R-1 divides the children's ones
    found = [
        s for s in all_specs(8)
        if 2 <= s.J <= s.R - 2 and s.m >= 2 and (s.m * s.J) % s.R == 0
        and (split_point(s).r1 or split_point(s).r2)
    ]
    assert found
    for spec in found:
        assert verify_balanced(generate_delta(spec), spec.J).max_row_delta == 0


# -- ending states ---------------------------------------------------------


def test_ending_state_zero_weight():
    np.testing.assert_array_equal(ending_state(DeltaSpec(3, 0, 1)), [[0], [0], [0]])


def test_ending_state_single_column():
    np.testing.assert_array_equal(ending_state(DeltaSpec(5, 3, 1)).ravel(), [1, 1, 1, 0, 0])


def test_ending_state_complement_of_identity():
    expected = [[1, 1, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]]
    np.testing.assert_array_equal(ending_state(DeltaSpec(4, 3, 3)), expected)


def test_ending_state_identity_keeps_zero_rows_at_bottom():
    got = ending_state(DeltaSpec(5, 1, 3))
    np.testing.assert_array_equal(got, np.vstack((np.eye(3), np.zeros((2, 3)))))


def test_ending_state_empty_and_full():
    assert ending_state(DeltaSpec(4, 2, 0)).shape == (4, 0)
    np.testing.assert_array_equal(ending_state(DeltaSpec(3, 3, 1)), [[1], [1], [1]])


def test_ending_state_not_applicable():
    assert ending_state(DeltaSpec(6, 3, 10)) is None


def test_ending_state_priority_m1_before_identity():
    # (R=2, J=1, m=1) matches items 4, 5 and 6; all give (1,0)
    np.testing.assert_array_equal(ending_state(DeltaSpec(2, 1, 1)).ravel(), [1, 0])


def test_ending_states_satisfy_balance_contract():
    for spec in all_specs(9):
        mat = ending_state(spec)
        if mat is None:
            continue
        rep = verify_balanced(mat, spec.J)
        assert rep.balanced and rep.heavy_rows_on_top, spec
        assert rep.heavy_rows == (spec.m * spec.J) % spec.R, spec


# -- merges ----------------------------------------------------------------


def test_merge_flip_with_empty_right_is_identity():
    left = np.array([[1, 0, 1]], dtype=np.uint8)
    np.testing.assert_array_equal(merge_flip(left, np.zeros((1, 0), np.uint8)), left)


def test_merge_flip_identity_and_complement():
    left = ending_state(DeltaSpec(4, 1, 2))
    right = ending_state(DeltaSpec(4, 3, 2))
    out = merge_flip(left, right)
    assert out.shape == (4, 4)
    assert out.sum(axis=1).tolist() == [2, 2, 2, 2]


def test_merge_flip_row_mismatch():
    with pytest.raises(ValueError):
        merge_flip(np.zeros((3, 1), np.uint8), np.zeros((4, 1), np.uint8))


def test_merge_flip_balances_every_small_pair():
    # every pair of balanced children that the recursion can produce for R-1 <= 6
    for R in range(3, 8):
        for J in range(1, R):
            for m in range(2, math.comb(R, J) + 1):
                if not 2 <= J <= R - 2:
                    continue
                sp = split_point(DeltaSpec(R, J, m))
                left = generate_delta(DeltaSpec(R - 1, J - 1, sp.m1), "flip")
                right = generate_delta(DeltaSpec(R - 1, J, m - sp.m1), "flip")
                out = merge_flip(left, right)
                w = out.sum(axis=1).astype(int)
                assert w.max() - w.min() <= 1
                assert np.all(np.diff(w) <= 0)
                assert sorted(out.sum(axis=0)) == sorted(
                    np.concatenate((left.sum(axis=0), right.sum(axis=0)))
                )


def test_merge_shift_no_heavy_rows_is_plain_concat():
    left = ending_state(DeltaSpec(4, 1, 4))
    right = ending_state(DeltaSpec(4, 3, 4))
    out = merge_shift(left, right, SplitPoint(4, 0, 0, 0))
    np.testing.assert_array_equal(out, np.hstack((left, right)))
    assert set(out.sum(axis=1)) == {4}


def test_merge_shift_disjoint_heavy_rows():
    left = ending_state(DeltaSpec(5, 1, 2))  # weights 1,1,0,0,0
    right = ending_state(DeltaSpec(5, 1, 2))
    counter = OpCounter()
    out = merge_shift(left, right, SplitPoint(2, 2, 2, 0), counter)
    assert out.sum(axis=1).tolist() == [1, 1, 1, 1, 0]
    assert counter.row_moves == 5


def test_merge_shift_overlapping_heavy_rows():
    left = ending_state(DeltaSpec(5, 1, 4))  # weights 1,1,1,1,0
    right = ending_state(DeltaSpec(5, 1, 3))  # weights 1,1,1,0,0
    out = merge_shift(left, right, SplitPoint(4, 4, 3, 2))
    # extras 4+3 = 5 rows + 2 doubled
    assert out.sum(axis=1).tolist() == [2, 2, 1, 1, 1]


def test_merge_shift_rejects_wrong_heavy_count():
    left = ending_state(DeltaSpec(5, 1, 2))
    with pytest.raises(ValueError):
        merge_shift(left, left, SplitPoint(2, 1, 2, 0))


# -- generation ------------------------------------------------------------


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_generate_empty(strategy):
    assert generate_delta(DeltaSpec(5, 2, 0), strategy).shape == (5, 0)


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_generate_full_4_2(strategy):
    mat = generate_delta(DeltaSpec(4, 2, 6), strategy)
    assert {tuple(c) for c in mat.T.tolist()} == set(weight_columns(4, 2))
    assert mat.sum(axis=1).tolist() == [3, 3, 3, 3]


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_generate_worked_example(strategy):
    mat = generate_delta(DeltaSpec(6, 3, 10), strategy)
    rep = verify_balanced(mat, 3)
    assert mat.shape == (6, 10)
    assert rep.column_weight_ok and rep.columns_distinct
    assert rep.row_weights == (5,) * 6


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_top_row_is_split_indicator(strategy):
    mat = generate_delta(DeltaSpec(7, 3, 20), strategy)
    m1 = split_point(DeltaSpec(7, 3, 20)).m1
    assert mat[0].tolist() == [1] * m1 + [0] * (20 - m1)


def test_generate_rejects_infeasible():
    with pytest.raises(InfeasibleSpec, match="C\\(4,2\\)=6"):
        generate_delta(DeltaSpec(4, 2, 7))
    with pytest.raises(InfeasibleSpec):
        generate_delta_iterative(DeltaSpec(4, 5, 0))


def test_generate_rejects_unknown_strategy():
    with pytest.raises(ValueError):
        generate_delta(DeltaSpec(4, 2, 3), "sideways")


def test_iterative_examples():
    assert verify_balanced(generate_delta_iterative(DeltaSpec(4, 2, 6)), 2) == verify_balanced(
        generate_delta(DeltaSpec(4, 2, 6)), 2
    )
    np.testing.assert_array_equal(generate_delta_iterative(DeltaSpec(3, 1, 3)), np.eye(3))
    rep = verify_balanced(generate_delta_iterative(DeltaSpec(8, 5, 8)), 5)
    assert rep.balanced and rep.row_weights == (5,) * 8


@settings(max_examples=200, deadline=None)
@given(feasible_specs())
def test_generated_matrices_are_balanced(spec):
    R, J, m = spec
    summaries = []
    for mat in (generate_delta(spec, "flip"), generate_delta(spec, "shift"),
                generate_delta_iterative(spec)):
        rep = verify_balanced(mat, J)
        assert mat.shape == (R, m)
        assert rep.balanced and rep.heavy_rows_on_top
        assert rep.heavy_rows == (m * J) % R
        if m:
            assert set(rep.row_weights) <= {m * J // R, -(-m * J // R)}
        summaries.append((rep.row_weights, sorted(mat.sum(axis=0).tolist())))
    assert summaries[0] == summaries[1] == summaries[2]


@settings(max_examples=50, deadline=None)
@given(feasible_specs(), st.sampled_from(STRATEGIES))
def test_generation_is_deterministic(spec, strategy):
    np.testing.assert_array_equal(generate_delta(spec, strategy), generate_delta(spec, strategy))


def test_strategies_agree_on_summaries_up_to_8():
    for spec in all_specs(8):
        a = verify_balanced(generate_delta(spec, "flip"), spec.J)
        b = verify_balanced(generate_delta(spec, "shift"), spec.J)
        assert a == b, spec


# -- counters --------------------------------------------------------------


def test_ending_state_counter():
    c = OpCounter()
    generate_delta(DeltaSpec(6, 1, 4), "shift", c)
    assert (c.element_writes, c.row_moves, c.recursion_depth) == (24, 0, 0)


def test_shift_without_moves_writes_each_cell_once():
    c = OpCounter()
    generate_delta(DeltaSpec(8, 4, 70), "shift", c)
    assert c.row_moves == 0
    assert c.element_writes == 8 * 70


def test_counter_reset():
    c = OpCounter(5, 6, 7)
    c.reset()
    assert c == OpCounter()


# -- verify_balanced -------------------------------------------------------


def test_verify_identity():
    rep = verify_balanced(np.eye(4, dtype=np.uint8), 1)
    assert rep.column_weight_ok and rep.columns_distinct and rep.heavy_rows_on_top
    assert rep.row_weights == (1, 1, 1, 1) and rep.max_row_delta == 0


def test_verify_duplicate_columns():
    mat = np.array([[1, 1, 0], [0, 0, 1]], dtype=np.uint8)
    rep = verify_balanced(mat, 1)
    assert not rep.columns_distinct


def test_verify_does_not_mutate():
    mat = generate_delta(DeltaSpec(6, 3, 10))
    before = mat.copy()
    verify_balanced(mat, 3)
    np.testing.assert_array_equal(mat, before)


def test_verify_reports_spread_and_order():
    mat = np.array([[0, 0], [1, 1], [1, 0]], dtype=np.uint8)
    rep = verify_balanced(mat, 1)
    assert rep.max_row_delta == 2
    assert not rep.heavy_rows_on_top
    assert not rep.column_weight_ok
