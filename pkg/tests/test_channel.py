from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from delsym.bitstring import BitString, parse, render
from delsym.channel import (
    BDC,
    BSC,
    ChannelParam,
    output_distribution,
    output_entropy,
    rank_exact,
    sample_output,
    sample_outputs,
    sampling_check,
    transition_matrix,
)
from delsym.errors import InputError
from delsym.report import matrix_csv, matrix_json, parse_matrix_csv
from delsym.symmetry import KLEIN_GROUP, apply


def law(dist):
    return {render(y): p for y, p in dist.mass.items()}


def test_param_validation():
    assert ChannelParam.bdc("2/4").value == F(1, 2)
    assert ChannelParam.bsc("0.11").value == F(11, 100)
    for bad in ("0", "1", "3/2", "-1/3", "x"):
        with pytest.raises(InputError):
            ChannelParam.bdc(bad)
    with pytest.raises(InputError):
        ChannelParam("BEC", F(1, 2))


@pytest.mark.parametrize(
    "param, x, expected",
    [
        (ChannelParam.bdc("1/2"), "0", {"": F(1, 2), "0": F(1, 2)}),
        (ChannelParam.bdc("1/2"), "00", {"": F(1, 4), "0": F(1, 2), "00": F(1, 4)}),
        (ChannelParam.bsc("1/3"), "0", {"0": F(2, 3), "1": F(1, 3)}),
    ],
)
def test_output_distribution_examples(param, x, expected):
    assert law(output_distribution(parse(x), param)) == expected


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="01", max_size=8), st.sampled_from(["1/2", "1/3", "2/3", "1/7"]))
def test_bdc_law_matches_deletion_patterns(x, d):
    assert law(output_distribution(parse(x), ChannelParam.bdc(d))) == oracles.deletion_law(x, F(d))


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="01", max_size=7), st.sampled_from(["1/4", "1/3", "2/5"]))
def test_bsc_law_matches_error_patterns(x, p):
    assert law(output_distribution(parse(x), ChannelParam.bsc(p))) == oracles.flip_law(x, F(p))


@given(st.text(alphabet="01", max_size=9))
def test_mass_conservation_and_support(x):
    dist = output_distribution(parse(x), ChannelParam.bdc("2/5"))
    assert sum(dist.mass.values()) == 1
    for y, p in dist.mass.items():
        assert p > 0
        assert oracles.embeddings(x, render(y)) > 0
    # every subsequence is in the support
    assert len(dist.mass) == sum(
        1 for k in range(len(x) + 1) for y in oracles.strings(k) if oracles.embeddings(x, y)
    )


def test_transition_matrix_examples(half):
    m = transition_matrix(1, half)
    assert [render(c) for c in m.columns] == ["", "0", "1"]
    assert m.row(parse("0")) == [F(1, 2), F(1, 2), 0]
    assert m.row(parse("1")) == [F(1, 2), 0, F(1, 2)]

    bsc = transition_matrix(1, ChannelParam.bsc("1/3"))
    assert [bsc.row(x) for x in bsc.rows] == [[F(2, 3), F(1, 3)], [F(1, 3), F(2, 3)]]

    m2 = transition_matrix(2, half)
    assert [render(c) for c in m2.columns] == ["", "0", "1", "00", "01", "10", "11"]
    assert m2.row(parse("00")) == [F(1, 4), F(1, 2), 0, F(1, 4), 0, 0, 0]


def test_transition_matrix_range(half):
    with pytest.raises(InputError):
        transition_matrix(0, half)
    with pytest.raises(InputError):
        transition_matrix(13, half)


@pytest.mark.parametrize("param", [ChannelParam.bdc("1/2"), ChannelParam.bdc("3/7"), ChannelParam.bsc("1/4")])
def test_rows_are_exact_output_laws(param):
    n = 4
    m = transition_matrix(n, param)
    assert all(s == 1 for s in m.row_sums_exact())
    for x in m.rows:
        dist = output_distribution(x, param)
        assert {y: m.entry(x, y) for y in m.columns if m.entry(x, y)} == dict(dist.mass)


def test_large_denominator_falls_back_to_python_ints():
    param = ChannelParam.bdc(F(1, 10**7))
    m = transition_matrix(3, param)
    assert m.numerators.dtype == object
    assert all(s == 1 for s in m.row_sums_exact())
    assert rank_exact(m) == 8


def test_bsc_is_a_kronecker_power():
    param = ChannelParam.bsc("2/7")
    one = np.array(transition_matrix(1, param).numerators, dtype=object)
    power = one
    for n in range(2, 7):
        power = np.kron(power, one)
        assert np.array_equal(transition_matrix(n, param).numerators.astype(object), power)


@pytest.mark.parametrize(
    "param, n, expected",
    [(ChannelParam.bdc("1/2"), 1, 2), (ChannelParam.bdc("1/2"), 3, 8), (ChannelParam.bsc("1/3"), 4, 16)],
)
def test_rank_examples(param, n, expected):
    assert rank_exact(transition_matrix(n, param)) == expected


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("param", [ChannelParam.bdc("2/3"), ChannelParam.bsc("1/5"), ChannelParam.bsc("3/4")])
def test_full_rank(n, param):
    assert rank_exact(transition_matrix(n, param)) == 2**n


def test_bsc_half_is_rank_one():
    # the full-rank statement needs p != 1/2; at 1/2 every row is uniform
    assert rank_exact(transition_matrix(3, ChannelParam.bsc("1/2"))) == 1


def test_entropy_examples(half):
    assert output_entropy(parse("0"), half) == 1.0
    assert output_entropy(parse("00"), half) == 1.5
    # values from the 40-digit oracle on enumerated deletion patterns
    assert output_entropy(parse("00000"), half) == pytest.approx(2.198192411043098, abs=1e-13)
    assert output_entropy(parse("01010"), half) == pytest.approx(4.093139062229566, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="01", max_size=9), st.sampled_from(["1/2", "1/3"]))
def test_entropy_against_high_precision_oracle(x, d):
    expected = oracles.entropy_bits(oracles.deletion_law(x, F(d)))
    assert output_entropy(parse(x), ChannelParam.bdc(d)) == pytest.approx(expected, abs=1e-12)


@given(st.text(alphabet="01", min_size=1, max_size=9))
def test_entropy_invariance_under_flip_reversal(x):
    half = ChannelParam.bdc("1/2")
    base = Counter(output_distribution(parse(x), half).mass.values())
    for g in KLEIN_GROUP:
        gx = apply(g, parse(x))
        assert Counter(output_distribution(gx, half).mass.values()) == base


def test_sampling_support_and_determinism(half):
    x = parse("0110")
    subsequences = set(output_distribution(x, half).mass)
    draws = sample_outputs(x, half, 500, seed=11)
    assert set(draws) <= subsequences
    assert draws == sample_outputs(x, half, 500, seed=11)
    assert sample_output(x, half, 11) == draws[0]
    bsc = sample_outputs(x, ChannelParam.bsc("1/3"), 200, seed=3)
    assert all(y.length == 4 for y in bsc)


def test_sampling_check_within_three_sigma(half):
    rows = sampling_check(parse("01"), half, 1_000_000, seed=0)
    assert [r["output"] for r in rows] == ["-", "0", "1", "01"]
    assert all(r["exact"] == 0.25 for r in rows)
    assert all(r["within"] for r in rows)


def test_matrix_exports_round_trip(half):
    m = transition_matrix(2, half)
    text = matrix_csv(m)
    assert text.splitlines()[0] == "input,-,0,1,00,01,10,11"
    assert "\r" not in text
    columns, rows = parse_matrix_csv(text)
    assert columns == ["-", "0", "1", "00", "01", "10", "11"]
    assert rows["00"] == m.row(parse("00"))
    js = matrix_json(m)
    assert js["kind"] == BDC and js["param"] == "1/2" and js["n"] == 2
    assert js["rows"]["11"] == ["1/4", "0/1", "1/2", "0/1", "0/1", "0/1", "1/4"]
    assert matrix_json(transition_matrix(1, ChannelParam.bsc("1/3")))["kind"] == BSC


def test_entry_rejects_wrong_length(half):
    with pytest.raises(InputError):
        transition_matrix(2, half).entry(BitString(3, 0), parse("0"))
