import itertools
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_word_f
from markov_spectra.algebraic import QuadSurd
from markov_spectra.cantor import load_spec, preset
from markov_spectra.exceptions import ValidationError
from markov_spectra.spectra import (ALPHA_INF_WORD, B_INF_LOWER_WORD, B_INF_UPPER_WORD,
                                    FIXTURE_WORDS, CylinderFunction, QuadraticForm,
                                    SpectrumApprox, dynamical_spectra, form_minimum,
                                    markov_value_of_fixture, named_constants, spectrum_below_3,
                                    truncated_f_table)
from markov_spectra.values import continuity_modulus, f_value, markov_value
from markov_spectra.words import BiWord

SQRT5, SQRT2 = QuadSurd.sqrt(5), QuadSurd.sqrt(2)


def test_spectrum_head():
    s = spectrum_below_3(3)
    assert list(s.values) == [SQRT5, 2 * SQRT2, QuadSurd(0, 1, 221, 5)]
    assert list(spectrum_below_3(1).values) == [SQRT5]
    assert all(v < 3 for v in spectrum_below_3(12))


@pytest.mark.parametrize("z", [1, 2, 5])
def test_fixture_words_match(z):
    s = spectrum_below_3(3)
    assert markov_value_of_fixture(z) in s
    assert markov_value(FIXTURE_WORDS[z]) == s.values[[1, 2, 5].index(z)]


def test_named_constants_digits():
    table = {c.name: c for c in named_constants(20)}
    assert table["c_F"].decimal.startswith("4.52782956616")
    assert table["b_inf"].decimal.startswith("3.2930442439")
    assert table["B_inf"].decimal.startswith("3.2930444814")
    assert table["c"].decimal.startswith("3.29304447990138")
    assert table["sigma"].decimal == "3.1181"
    assert table["b_inf"].cross_check < 1e-9
    assert table["B_inf"].cross_check < 1e-9


def test_constant_words_against_oracle():
    for w in (ALPHA_INF_WORD, B_INF_LOWER_WORD, B_INF_UPPER_WORD):
        exact = f_value(w).enclosure(200).mid
        approx = mp_word_f(w)
        assert abs(mpmath.mpf(exact.numerator) / exact.denominator - approx) < mpmath.mpf(10) ** -40


def test_named_constants_precision_guard():
    with pytest.raises(ValidationError):
        named_constants(3)


# -- forms -------------------------------------------------------------------------

def test_form_minimum_golden():
    m, r = form_minimum(QuadraticForm.normalized(1, 1, -1), 50)
    assert r == SQRT5 and m == SQRT5 / 5


def test_form_minimum_sqrt8():
    m, r = form_minimum(QuadraticForm.normalized(1, 0, -2), 30)
    assert r == 2 * SQRT2


def test_form_errors():
    with pytest.raises(ValidationError):
        form_minimum(QuadraticForm(1, 1, -1), 10)   # discriminant 5
    with pytest.raises(ValidationError):
        form_minimum(QuadraticForm.normalized(1, 0, -1), 5)   # represents zero
    with pytest.raises(ValidationError):
        QuadraticForm(1.0, 1, -1)


@pytest.mark.parametrize("coeffs, true_value", [
    ((1, 1, -1), SQRT5),
    ((1, 0, -2), 2 * SQRT2),
    ((5, 11, -5), QuadSurd(0, 1, 221, 5)),
])
def test_form_reciprocal_monotone_in_box(coeffs, true_value):
    q = QuadraticForm.normalized(*coeffs)
    recips = [form_minimum(q, b)[1] for b in (2, 5, 10, 25)]
    assert all(a <= b for a, b in zip(recips, recips[1:]))
    assert all(r <= true_value for r in recips)


# -- dynamical spectra -------------------------------------------------------------

def test_constant_function():
    M, L = dynamical_spectra(preset("X"), CylinderFunction.constant(7, (1, 2)), 4)
    assert list(M.values) == [7] == list(L.values)


def test_incomplete_table():
    table = {(1,): 1}
    with pytest.raises(ValidationError):
        dynamical_spectra(preset("E2"), table, 3)


def test_truncated_f_recovers_head():
    k = 4
    f = truncated_f_table((1, 2), k)
    M, L = dynamical_spectra(preset("E2"), f, 6)
    mod = continuity_modulus(k)
    for target in (SQRT5, 2 * SQRT2):
        assert any(abs(v - target) <= mod for v in L)
    assert L.issubset(M)
    assert min(M.values) == SQRT5


def test_rotation_invariance():
    f = truncated_f_table((1, 2), 2)
    M, L = dynamical_spectra(preset("E2"), f, 5)
    for v, w in zip(L.values, L.words):
        period = w.right_period
        for k in range(len(period)):
            rot = BiWord.periodic(period[k:] + period[:k])
            assert max(f(rot, n) for n in range(len(period))) == v


def _random_instance(rng):
    spec = load_spec(rng.choice(["E2", "X", "K122", "alphabet=1,2,3; forbidden=33,13",
                                 "alphabet=1,2; forbidden=111"]))
    length = rng.randint(1, 3)
    table = {}
    for w in itertools.product(spec.alphabet, repeat=length):
        table[w] = Fraction(rng.randint(0, 40), rng.randint(1, 7))
    return spec, CylinderFunction.from_table(table)


@pytest.mark.parametrize("seed", range(20))
def test_lagrange_inside_markov(seed):
    rng = random.Random(seed)
    spec, f = _random_instance(rng)
    M, L = dynamical_spectra(spec, f, rng.randint(2, 5))
    assert L.issubset(M)
    assert len(L) >= 1


@given(st.lists(st.fractions(0, 10), min_size=1, max_size=8))
@settings(max_examples=30)
def test_spectrum_approx_sorted_unique(vals):
    s = SpectrumApprox.build("markov", [(v, None) for v in vals])
    assert list(s.values) == sorted(set(vals))


def test_spectrum_kind_checked():
    with pytest.raises(ValidationError):
        SpectrumApprox("other", ())
