import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffconcepts.core import QualifiedToken, Token
from diffconcepts.encoder import (AttributedInterval, FormalContext, Interval, SampleSeries,
                                  breakpoints, context_of, encode, encode_intervals,
                                  iterate_union_prune, preprocess, prune_redundant,
                                  union_prune_pass, union_step)
from diffconcepts.errors import (CapacityError, InvalidArgumentError, InvalidValueError,
                                 SchemaError)

from goldens import (UNIT_CONTEXT, UNIT_COLUMNS, PASS_COLUMNS, PASS_UNIONS, PASS_PRUNED,
                     FINAL_CONTEXT, FINAL_COLUMNS, context_rows, parse_table)
from generators import random_series
from oracles import breakpoints_bruteforce, interval_notation, unit_chars


def unit(j, **tokens):
    return AttributedInterval(
        Interval(j, j + 1),
        tuple(QualifiedToken(a, Token.parse(t)) for a, t in tokens.items()),
    )


def labelled(intervals):
    return {tuple(x.interval): {q.text for q in x.notation} for x in intervals}


def test_series_validation():
    with pytest.raises(InvalidValueError):
        SampleSeries("s", ("a",), [[1.0], [math.nan]])
    with pytest.raises(SchemaError):
        SampleSeries("s", ("a", "a"), [[1.0, 2.0]])
    with pytest.raises(SchemaError):
        SampleSeries("s", ("a:b",), [[1.0]])
    with pytest.raises(InvalidArgumentError):
        SampleSeries("s", ("a",), np.zeros((0, 1)))
    s = SampleSeries.from_samples("s", [{"a": 1, "w": 2}, {"a": 3, "w": 4}])
    assert s.sample(1) == {"a": 3.0, "w": 4.0}
    with pytest.raises(SchemaError):
        SampleSeries.from_samples("s", [{"a": 1}, {"w": 2}])


def test_preprocess_unit_context(worked):
    units = preprocess(worked, ["a", "w"], eps=0)
    assert len(units) == 16
    assert labelled(units) == parse_table(UNIT_CONTEXT, UNIT_COLUMNS)
    assert labelled(units[:1]) == {(0, 1): {"a:=", "w:>"}}
    assert labelled(units[9:10]) == {(9, 10): {"a:=", "w:="}}


def test_preprocess_degenerate():
    assert preprocess(SampleSeries("one", ("a", "b"), [[1, 2]])) == []
    units = preprocess(SampleSeries("flat", ("a", "b"), [[1, 2], [1, 2]]))
    assert labelled(units) == {(0, 1): {"a:=", "b:="}}


def test_preprocess_unknown_attribute(worked):
    with pytest.raises(SchemaError, match="'z'"):
        preprocess(worked, ["a", "z"])


def test_breakpoints_examples(worked):
    assert breakpoints(preprocess(worked, ["a", "w"], eps=0)) == [0, 2, 6, 9, 11, 15, 16]
    flat = [unit(j, a="=") for j in range(5)]
    assert breakpoints(flat, 5) == [0, 5]
    alternating = [unit(0, a=">"), unit(1, a="<"), unit(2, a=">")]
    assert breakpoints(alternating, 3) == [0, 1, 2, 3]
    assert breakpoints([], 0) == []


def test_encode_final_context(worked):
    ctx = encode(worked, ["a", "w"], eps=0)
    assert len(ctx.objects) == 21
    assert len(ctx.attributes) == 12
    assert context_rows(ctx) == parse_table(FINAL_CONTEXT, FINAL_COLUMNS)
    assert context_rows(ctx)[(0, 16)] == {"w:>=", "a:=>=>="}
    assert context_rows(ctx)[(6, 9)] == {"w:>", "a:="}


def test_encode_attribute_order_is_canonical(worked):
    a = encode(worked, ["a", "w"], eps=0)
    b = encode(worked, ["w", "a"], eps=0)
    assert a.objects == b.objects and a.attributes == b.attributes
    assert [q.text for q in a.attributes] == sorted(q.text for q in a.attributes)


def test_encode_monotone_collapses_to_one_object():
    for m in (2, 3, 17):
        ctx = encode(SampleSeries("up", ("v",), np.arange(m, dtype=float)))
        assert ctx.objects == (Interval(0, m - 1),)
        assert [q.text for q in ctx.attributes] == ["v:>"]


def test_encode_degenerate_series():
    assert encode(SampleSeries("one", ("a",), [[4.0]])) == FormalContext.empty()
    ctx = encode(SampleSeries("flat", ("a", "b"), [[1, 1]] * 6))
    assert ctx.objects == (Interval(0, 5),)
    assert [q.text for q in ctx.attributes] == ["a:=", "b:="]


def test_breakpoint_cap():
    zigzag = SampleSeries("z", ("v",), [(-1) ** j for j in range(40)])
    with pytest.raises(CapacityError, match="cap of 10"):
        encode(zigzag, max_breakpoints=10)
    assert len(encode(zigzag, max_breakpoints=40).objects) == math.comb(40, 2)


def test_union_step_and_prune_single_pass(worked):
    units = preprocess(worked, ["a", "w"], eps=0)
    enlarged = union_step(units)
    assert len(enlarged) == 31
    expected = parse_table(UNIT_CONTEXT, UNIT_COLUMNS) | parse_table(PASS_UNIONS, PASS_COLUMNS)
    assert labelled(enlarged) == expected
    pruned = union_prune_pass(units)
    assert labelled(pruned) == parse_table(PASS_PRUNED, PASS_COLUMNS)
    assert (15, 16) in labelled(pruned)


def test_union_prune_small_cases():
    one = [unit(3, a=">")]
    assert union_prune_pass(one) == one
    twins = [unit(0, a="=", b=">"), unit(1, a="=", b=">")]
    assert labelled(union_prune_pass(twins)) == {(0, 2): {"a:=", "b:>"}}


def test_union_prune_rejects_mixed_schemas():
    with pytest.raises(InvalidArgumentError):
        union_step([unit(0, a="="), unit(1, b="=")])
    with pytest.raises(InvalidArgumentError):
        prune_redundant([unit(0, a="="), unit(0, a=">")])


def test_literal_loop_cannot_rebuild_6_9(worked):
    # both decompositions of [6,9] lose a part in the first prune
    final, rounds = iterate_union_prune(preprocess(worked, ["a", "w"], eps=0))
    got = labelled(final)
    assert (6, 9) not in got
    assert set(got) != set(parse_table(FINAL_CONTEXT, FINAL_COLUMNS))
    assert rounds > 1


def test_context_of_tables(worked, unit_context):
    assert context_rows(unit_context) == parse_table(UNIT_CONTEXT, UNIT_COLUMNS)
    assert unit_context.shape == (16, 4)
    assert context_of([]) == FormalContext.empty()
    ctx = context_of(encode_intervals(worked, ["a", "w"], eps=0))
    assert context_rows(ctx) == parse_table(FINAL_CONTEXT, FINAL_COLUMNS)
    with pytest.raises(InvalidArgumentError):
        context_of([unit(0, a="="), unit(1, a="=", b="=")])


def test_formal_context_validation():
    q = [QualifiedToken.parse("a:="), QualifiedToken.parse("a:>")]
    with pytest.raises(InvalidArgumentError):
        FormalContext(((1, 2), (0, 1)), tuple(q), ((0,), (1,)))
    with pytest.raises(InvalidArgumentError):
        FormalContext(((0, 1),), tuple(reversed(q)), ((0,),))
    with pytest.raises(InvalidArgumentError):
        FormalContext(((0, 1),), tuple(q), ((5,),))


def check_against_oracle(series, eps=0.0):
    """Token correctness, completeness and non-redundancy of ``encode``."""
    ctx = encode(series, eps=eps)
    rows = series.values.tolist()
    units = unit_chars(rows, eps)
    n = len(rows) - 1
    bps = breakpoints_bruteforce(units, n)
    expected = {(i, j) for p, i in enumerate(bps) for j in bps[p + 1:]}
    got = context_rows(ctx)
    assert set(got) == expected
    assert len(got) == math.comb(len(bps), 2)
    names = series.attributes
    for (i, j), labels in got.items():
        want = {f"{a}:{t}" for a, t in zip(names, interval_notation(units, i, j))}
        assert labels == want
    # no object nested in a distinct one with the same notation
    objs = sorted(got)
    if objs:
        starts = np.array([o[0] for o in objs])
        ends = np.array([o[1] for o in objs])
        ids = {}
        note = np.array([ids.setdefault(frozenset(got[o]), len(ids)) for o in objs])
        nested = (starts[:, None] >= starts[None, :]) & (ends[:, None] <= ends[None, :])
        np.fill_diagonal(nested, False)
        same = note[:, None] == note[None, :]
        assert not np.any(nested & same)
    return ctx, units, bps


def test_encode_matches_oracle_on_random_series():
    rng = random.Random(7)
    for _ in range(150):
        check_against_oracle(random_series(rng))


def test_hull_redundancy_on_random_series():
    rng = random.Random(11)
    for _ in range(100):
        s = random_series(rng)
        rows = s.values.tolist()
        units = unit_chars(rows, 0.0)
        n = len(rows) - 1
        if n == 0:
            continue
        bps = breakpoints_bruteforce(units, n)
        for _ in range(10):
            i = rng.randint(0, n - 1)
            j = rng.randint(i + 1, n)
            lo = max(b for b in bps if b <= i)
            hi = min(b for b in bps if b >= j)
            assert interval_notation(units, i, j) == interval_notation(units, lo, hi)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=30), st.data())
def test_encode_invariant_under_increasing_transform(ints, data):
    base = SampleSeries("s", ("a", "w"), np.column_stack([ints, ints[::-1]]).astype(float))
    shift = data.draw(st.floats(-1e3, 1e3))
    scale = data.draw(st.floats(0.01, 100))
    moved = SampleSeries("s", ("a", "w"), np.column_stack([
        np.array(ints, dtype=float) * scale + shift,
        np.exp(np.array(ints[::-1], dtype=float)),
    ]))
    assert encode(base, eps=0) == encode(moved, eps=0)


def test_encode_is_deterministic(worked):
    from diffconcepts.export import context_to_json
    assert context_to_json(encode(worked, eps=0)) == context_to_json(encode(worked, eps=0))
