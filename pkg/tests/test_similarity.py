import numpy as np
import pytest
from hypothesis import given, strategies as st

from semqg import is_similar

from oracles import brute_similar

WORDS = ["airport", "hoonah", "pago", "member", "movement", "leading", "old", "town", "x"]


def test_rule1_equality():
    assert is_similar(["hoonah", "airport"], ["hoonah", "airport"])


def test_rule2_containment():
    assert is_similar(["a", "leading", "member"], ["leading", "member"])
    assert is_similar(["leading", "member"], ["a", "leading", "member"])


def test_rule3_boundary_false():
    # overlap=1, min=2 -> 1 > 1 is false
    assert not is_similar(["pago", "pago", "international", "airport"], ["hoonah", "airport"])


def test_rule3_true():
    # overlap=2 > 3/2
    assert is_similar(["native", "american", "movement"], ["american", "movement", "leader"])


def test_multiset_overlap_counts_duplicates_once_per_occurrence():
    # "pago" twice in each side: overlap 2 > min(2,3)/2
    assert is_similar(["pago", "pago"], ["pago", "pago", "airport"])


def test_not_transitive_counterexample():
    # containment chains do not compose: a ⊂ b and c ⊂ b, yet a and c share nothing
    a = ["alpha"]
    b = ["alpha", "gamma"]
    c = ["gamma"]
    assert is_similar(a, b) and is_similar(b, c)
    assert not is_similar(a, c)


tokens = st.lists(st.sampled_from(WORDS), min_size=1, max_size=5)


@given(tokens, tokens)
def test_matches_brute_force(a, b):
    assert is_similar(a, b) == brute_similar(a, b)


@given(tokens, tokens)
def test_symmetric(a, b):
    assert is_similar(a, b) == is_similar(b, a)


@given(tokens)
def test_reflexive(a):
    assert is_similar(a, a)


def test_acceptance_style_500_random_pairs():
    rng = np.random.default_rng(20240817)
    for _ in range(500):
        la, lb = rng.integers(1, 7, size=2)
        a = [WORDS[i] for i in rng.integers(0, len(WORDS), la)]
        b = [WORDS[i] for i in rng.integers(0, len(WORDS), lb)]
        assert is_similar(a, b) == brute_similar(a, b), (a, b)


def test_empty_inputs_not_similar():
    assert not is_similar([], ["x"])
    assert not is_similar(["x"], [])
