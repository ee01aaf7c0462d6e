import dataclasses
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diamond.profile import (
    BadKnots,
    BadSpec,
    DiscontinuousAtKnot,
    NegativeCoefficient,
    NonIntegerKnot,
    NonPositiveFirstSlope,
    OutOfRange,
    Profile,
    ProfileError,
    builtin_elaborated,
    builtin_quasioptimal,
    builtin_simple,
    eval_r,
    heuristic_r,
    lint,
    parse_spec,
    total_points,
    validate,
)


def brute_total(prof):
    return 2 + sum(eval_r(prof, j) for j in range(1, 2 * prof.M))


def test_simple_profile_valid():
    validate(builtin_simple(4, 20))


def test_first_piece_must_start_at_zero():
    bad = Profile(M=5, knots=(0, 5), pieces=((1, 4),))
    with pytest.raises(NonPositiveFirstSlope):
        validate(bad)


def test_discontinuity_detected():
    q = builtin_quasioptimal(1)
    pieces = list(q.pieces)
    pieces[1] = (pieces[1][0], pieces[1][1] + 1)  # breaks continuity at t = 2m
    with pytest.raises(DiscontinuousAtKnot):
        validate(dataclasses.replace(q, pieces=tuple(pieces)))


def test_non_integer_knot():
    with pytest.raises(NonIntegerKnot):
        validate(Profile(M=4, knots=(0, 2.5, 4), pieces=((0, 2), (0, 2))))


def test_zero_first_slope():
    with pytest.raises(NonPositiveFirstSlope):
        validate(Profile(M=3, knots=(0, 3), pieces=((0, 0),)))


def test_negative_coefficient():
    with pytest.raises(NegativeCoefficient):
        validate(Profile(M=4, knots=(0, 2, 4), pieces=((0, 3), (-2, 4))))


@pytest.mark.parametrize(
    "prof, j, expected",
    [
        (builtin_simple(4, 20), 5, 20),
        (builtin_quasioptimal(1), 7, 27),
        (builtin_quasioptimal(1), 9, 24),
        (builtin_quasioptimal(1), 5, 24),
        (builtin_elaborated(1), 3, 15),
        (builtin_quasioptimal(1), 4, 21),
    ],
)
def test_eval_r(prof, j, expected):
    assert eval_r(prof, j) == expected


def test_quasioptimal_mirror_piece_agrees():
    # r(9) from the mirrored piece 42m - 2x at m = 1
    assert eval_r(builtin_quasioptimal(1), 9) == 42 - 18


@pytest.mark.parametrize(
    "prof, knot",
    [(builtin_elaborated(1), 3), (builtin_quasioptimal(1), 4), (builtin_quasioptimal(3), 12)],
)
def test_knot_evaluates_same_from_both_pieces(prof, knot):
    ell = prof.knots.index(knot)
    left = prof.pieces[ell - 1][0] + prof.pieces[ell - 1][1] * knot
    right = prof.pieces[ell][0] + prof.pieces[ell][1] * knot
    assert left == right == eval_r(prof, knot)


@pytest.mark.parametrize("j", [0, 40, -1])
def test_eval_r_out_of_range(j):
    with pytest.raises(OutOfRange):
        eval_r(builtin_simple(4, 20), j)


@pytest.mark.parametrize(
    "prof, N",
    [
        (builtin_simple(4, 20), 1602),
        (builtin_elaborated(4), 1314),
        (builtin_quasioptimal(2), 958),
        (builtin_simple(1, 1), 3),
        (builtin_simple(4, 2), 18),
        (builtin_elaborated(1), 84),
        (builtin_quasioptimal(1), 241),
    ],
)
def test_total_points(prof, N):
    assert total_points(prof) == N
    assert brute_total(prof) == N


def test_simple_k4_m2_counts():
    assert builtin_simple(4, 2).counts() == [4, 8, 4]


def test_total_points_closed_forms():
    for K in range(1, 11):
        for M in range(1, 101):
            assert total_points(builtin_simple(K, M)) == 2 + K * M * M
    for m in range(1, 51):
        assert total_points(builtin_elaborated(m)) == 82 * m * m + 2
        assert total_points(builtin_quasioptimal(m)) == 239 * m * m + 2
    for m in (1, 7, 13):
        assert brute_total(builtin_quasioptimal(m)) == 239 * m * m + 2


@pytest.mark.parametrize("factory", [builtin_elaborated, builtin_quasioptimal, lambda m: builtin_simple(3, m)])
@pytest.mark.parametrize("m", [1, 2, 5])
def test_builtin_symmetry(factory, m):
    prof = factory(m)
    for j in range(1, 2 * prof.M):
        assert eval_r(prof, j) == eval_r(prof, 2 * prof.M - j)


def test_heuristic_r():
    p = 99
    assert heuristic_r(0.7, p, 50) == pytest.approx(0.7 * math.pi / math.sin(math.pi / 200), rel=1e-15)
    for j in range(1, p + 1):
        assert heuristic_r(3 / math.pi, p, j) == pytest.approx(heuristic_r(3 / math.pi, p, p + 1 - j), rel=1e-12)
    big = 10**6
    assert heuristic_r(3 / math.pi, big, 3) / 3 == pytest.approx(6.0, rel=1e-9)


def test_lint():
    assert lint(builtin_simple(4, 20)) == {"A": 4.0, "c": 1.0}
    q = lint(builtin_quasioptimal(2))
    assert q["A"] == 6.0 and q["c"] == pytest.approx(2 / 7)


def test_json_round_trip():
    q = builtin_quasioptimal(3)
    back = Profile.from_json(q.to_json())
    assert back.to_dict() == q.to_dict()
    with pytest.raises(ProfileError):
        Profile.from_json('{"M": 2}')


@pytest.mark.parametrize(
    "spec, N",
    [("simple:K=4,M=20", 1602), ("elaborated:m=4", 1314), ("quasioptimal:m=2", 958), (" quasioptimal:m=1 ", 241)],
)
def test_parse_spec(spec, N):
    assert total_points(parse_spec(spec)) == N


@pytest.mark.parametrize(
    "spec",
    ["simple:K=0,M=5", "simple:K=4", "simple:K=4,M=2,x=1", "nope:m=1", "quasioptimal", "quasioptimal:m=x", "elaborated:m=-1",
     "simple:K=4,K=5"],
)
def test_parse_spec_rejects(spec):
    with pytest.raises(BadSpec):
        parse_spec(spec)


# property: single-field mutations that break an invariant are rejected

@st.composite
def valid_profiles(draw):
    n = draw(st.integers(1, 5))
    widths = draw(st.lists(st.integers(1, 6), min_size=n, max_size=n))
    knots = [0]
    for w in widths:
        knots.append(knots[-1] + w)
    pieces = [(0, draw(st.integers(1, 8)))]
    for ell in range(1, n):
        t = knots[ell]
        a_prev, b_prev = pieces[-1]
        val = a_prev + b_prev * t
        beta = draw(st.integers(0, min(b_prev, val // max(t, 1))))
        pieces.append((val - beta * t, beta))
    return Profile(M=knots[-1], knots=tuple(knots), pieces=tuple(pieces))


@given(valid_profiles())
def test_generated_profiles_valid(prof):
    validate(prof)
    assert total_points(prof) == brute_total(prof)


@settings(max_examples=200)
@given(valid_profiles(), st.data())
def test_mutations_rejected(prof, data):
    kind = data.draw(st.sampled_from(["alpha1", "beta1", "continuity", "knot_float", "knot_order", "M"]))
    pieces = list(prof.pieces)
    knots = list(prof.knots)
    M = prof.M
    if kind == "alpha1":
        pieces[0] = (data.draw(st.integers(1, 5)), pieces[0][1])
        expected = NonPositiveFirstSlope
    elif kind == "beta1":
        pieces[0] = (0, 0)
        expected = (NonPositiveFirstSlope,)
    elif kind == "continuity":
        if len(pieces) < 2:
            pieces[0] = (1, pieces[0][1])
            expected = NonPositiveFirstSlope
        else:
            ell = data.draw(st.integers(1, len(pieces) - 1))
            a, b = pieces[ell]
            pieces[ell] = (a + data.draw(st.integers(1, 3)), b)
            expected = DiscontinuousAtKnot
    elif kind == "knot_float":
        knots[-1] = knots[-1] + 0.5
        expected = NonIntegerKnot
    elif kind == "knot_order":
        if len(knots) < 3:
            knots[-1] = 0
        else:
            knots[1] = knots[2]
        expected = BadKnots
    else:
        M = M + 1
        expected = BadKnots
    with pytest.raises(expected):
        validate(Profile(M=M, knots=tuple(knots), pieces=tuple(pieces)))
