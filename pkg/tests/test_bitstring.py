from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from delsym.bitstring import (
    MAX_N,
    BitString,
    all_strings,
    all_subsequence_counts,
    count_embeddings,
    distinct_outputs_of_length,
    parse,
    render,
    subsequence_count_table,
)
from delsym.errors import InputError

bits = st.text(alphabet="01", max_size=9)
short_bits = st.text(alphabet="01", max_size=7)


def test_parse_examples():
    x = parse("01010")
    assert x.length == 5
    assert x.bits() == (0, 1, 0, 1, 0)
    assert parse("").length == 0
    with pytest.raises(InputError):
        parse("2")


def test_parse_rejects_over_length():
    parse("1" * MAX_N)
    with pytest.raises(InputError):
        parse("1" * (MAX_N + 1))
    with pytest.raises(InputError):
        BitString(MAX_N + 1, 0)


def test_value_must_fit():
    with pytest.raises(InputError):
        BitString(2, 4)


@given(bits)
def test_parse_render_round_trip(text):
    assert render(parse(text)) == text
    assert BitString.from_code(parse(text).code) == parse(text)


def test_indexing_is_one_based_from_the_left():
    x = parse("100")
    assert x.bit(1) == 1 and x.bit(3) == 0
    assert x.substring(2, 3) == parse("00")
    with pytest.raises(InputError):
        x.bit(0)


def test_column_order_is_length_then_lexicographic():
    labels = ["", "0", "1", "00", "01", "10", "11"]
    assert sorted(parse(s) for s in reversed(labels)) == [parse(s) for s in labels]


@pytest.mark.parametrize(
    "x, y, expected",
    [("00000", "0000", 5), ("0101", "01", 3), ("01010", "1010", 1), ("0110", "", 1), ("", "", 1), ("01", "10", 0)],
)
def test_count_embeddings_examples(x, y, expected):
    assert count_embeddings(parse(x), parse(y)) == expected
    assert oracles.embeddings(x, y) == expected


@given(short_bits, short_bits)
def test_count_embeddings_matches_brute_force(x, y):
    assert count_embeddings(parse(x), parse(y)) == oracles.embeddings(x, y)


@given(st.text(alphabet="01", min_size=1, max_size=9), st.text(alphabet="01", min_size=1, max_size=9))
def test_embedding_recurrence(x, y):
    head = int(x[0] == y[0])
    expected = count_embeddings(parse(x[1:]), parse(y)) + head * count_embeddings(parse(x[1:]), parse(y[1:]))
    assert count_embeddings(parse(x), parse(y)) == expected


@given(bits)
def test_row_sum_identity(x):
    counts = all_subsequence_counts(parse(x))
    for k in range(len(x) + 1):
        assert sum(v for y, v in counts.items() if y.length == k) == comb(len(x), k)


@given(bits, bits)
def test_symmetry_transport(x, y):
    a, b = parse(x), parse(y)
    base = count_embeddings(a, b)
    assert count_embeddings(a.flip(), b.flip()) == base
    assert count_embeddings(a.reverse(), b.reverse()) == base


@given(bits)
def test_subsequence_key_count_bounds(x):
    keys = all_subsequence_counts(parse(x))
    n = len(x)
    assert n + 1 <= len(keys) <= 2 ** (n + 1) - 1
    constant = len(set(x)) <= 1
    assert (len(keys) == n + 1) == constant


@pytest.mark.parametrize(
    "x, expected",
    [("00", {"": 1, "0": 2, "00": 1}), ("01", {"": 1, "0": 1, "1": 1, "01": 1}), ("", {"": 1})],
)
def test_all_subsequence_counts_examples(x, expected):
    got = {render(k): v for k, v in all_subsequence_counts(parse(x)).items()}
    assert got == expected


@given(short_bits)
def test_all_subsequence_counts_against_enumeration(x):
    brute = {}
    for k in range(len(x) + 1):
        for y in oracles.strings(k):
            c = oracles.embeddings(x, y)
            if c:
                brute[y] = c
    got = {render(k): v for k, v in all_subsequence_counts(parse(x)).items()}
    assert got == brute


@pytest.mark.parametrize("x, k, expected", [("00000", 4, 1), ("01010", 4, 5), ("01010", 5, 1)])
def test_distinct_outputs_examples(x, k, expected):
    assert distinct_outputs_of_length(parse(x), k) == expected


def test_distinct_outputs_range():
    with pytest.raises(InputError):
        distinct_outputs_of_length(parse("01"), 3)
    with pytest.raises(InputError):
        distinct_outputs_of_length(parse("01"), -1)


def test_batched_table_matches_single_rows():
    n = 6
    table = subsequence_count_table(range(1 << n), n)
    for x in all_strings(n):
        row = table[x.value]
        for code, v in enumerate(row):
            if code == 0:
                assert v == 0
                continue
            assert v == count_embeddings(x, BitString.from_code(code))


@settings(max_examples=3, deadline=None)
@given(st.integers(min_value=0, max_value=(1 << MAX_N) - 1))
def test_counts_fit_at_max_length(value):
    x = BitString(MAX_N, value)
    counts = all_subsequence_counts(x)
    assert max(counts.values()) <= comb(MAX_N, MAX_N // 2)
    assert counts[x] == 1
