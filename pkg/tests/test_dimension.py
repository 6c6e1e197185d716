import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_spectra.algebraic import QuadSurd
from markov_spectra.cantor import load_spec, preset, validate
from markov_spectra.dimension import (DimensionEstimate, WeightedSFT, certified_automaton,
                                      cover_dim_lower, cover_dim_upper, dimension_function_lower,
                                      estimate_dimension, thermo_dimension, window_sup)
from markov_spectra.exceptions import ValidationError
from markov_spectra.values import f_value, markov_value
from markov_spectra.words import BiWord

# published high-precision value of the Hausdorff dimension of E2
E2_REFERENCE = 0.5312805062772051


def _moran_estimate(alphabet, n):
    """Solve sum |I_w|^s = 1 over all length-n words, cylinder lengths
    1/(q_n (q_n + q_{n-1})) from the plain recurrence."""
    logs = []
    for w in itertools.product(alphabet, repeat=n):
        q0, q1 = 1, w[0]
        for a in w[1:]:
            q0, q1 = q1, a * q1 + q0
        logs.append(-math.log(q1 * (q1 + q0)))
    logs = np.array(logs)
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if np.exp(mid * logs).sum() > 1 else (lo, mid)
    return lo


def test_single_point_has_dimension_zero():
    one = validate("alphabet=1")
    assert cover_dim_upper(one, 6) == 0.0
    assert cover_dim_lower(one, 6) == 0.0


def test_e2_bounds():
    lo, hi = cover_dim_lower(preset("E2"), 8), cover_dim_upper(preset("E2"), 8)
    assert lo >= 0.51
    assert lo <= E2_REFERENCE <= hi
    assert hi - lo < 1e-4
    assert lo == pytest.approx(0.531268, abs=5e-6)
    assert hi == pytest.approx(0.531303, abs=5e-6)
    assert 0.53 < cover_dim_upper(preset("E2"), 10) < 0.56


def test_e2_against_cylinder_sums():
    # the cylinder-sum estimate overshoots slightly at finite n but converges
    m = _moran_estimate((1, 2), 14)
    assert abs(m - cover_dim_upper(preset("E2"), 8)) < 0.02


def test_k122_bracket():
    k = preset("K122")
    lo, hi = cover_dim_lower(k, 8), cover_dim_upper(k, 8)
    assert 0.353 < lo <= hi < 0.35792


def test_affine_closed_form():
    d = thermo_dimension(WeightedSFT.affine([1 / 3, 1 / 3]), tol=1e-11)
    assert abs(d - math.log(2) / math.log(3)) < 1e-8
    d = thermo_dimension(WeightedSFT.affine([1 / 4] * 3), tol=1e-11)
    assert abs(d - math.log(3) / math.log(4)) < 1e-8


def test_thermo_x():
    d = thermo_dimension(WeightedSFT.from_spec(preset("X"), 8))
    assert abs(d - 0.4816) <= 0.005


def test_thermo_e2_sandwiched():
    d = thermo_dimension(WeightedSFT.from_spec(preset("E2"), 8))
    assert cover_dim_lower(preset("E2"), 8) <= d <= cover_dim_upper(preset("E2"), 8)


def test_thermo_rejects_disconnected():
    g = WeightedSFT(2, [0, 1], [0, 1], [0.3, 0.3])
    with pytest.raises(ValidationError):
        thermo_dimension(g)
    with pytest.raises(ValidationError):
        WeightedSFT.affine([1.5])


def test_estimate_object():
    est = estimate_dimension(preset("K122"), depth=6, word_len=6)
    assert est.lower <= est.point <= est.upper
    assert set(est.to_dict()) == {"lower", "upper", "point", "methods", "depth", "word_len"}
    with pytest.raises(ValidationError):
        DimensionEstimate(0.5, 0.4, None, ("cover",))


SPECS = ["C4", "E2", "X", "K122", "C(3)", "alphabet=1,2,3; forbidden=33,13",
         "alphabet=1,2; forbidden=22", "alphabet=1,2,3; blocks=1|23|3_2",
         "alphabet=2,3", "alphabet=1,2; forbidden=111,222"]


@pytest.mark.parametrize("text", SPECS)
def test_bounds_monotone_in_depth(text):
    spec = load_spec(text)
    depths = (2, 3, 4, 5)
    lows = [cover_dim_lower(spec, d) for d in depths]
    ups = [cover_dim_upper(spec, d) for d in depths]
    for lo, hi in zip(lows, ups):
        assert 0 <= lo <= hi <= 1
    assert all(a <= b + 1e-9 for a, b in zip(lows, lows[1:]))
    assert all(a + 1e-9 >= b for a, b in zip(ups, ups[1:]))


# -- dimension function ------------------------------------------------------------------

def test_alternating_word_is_maximal():
    w = BiWord.periodic([2, 1])
    assert f_value(w) == QuadSurd.sqrt(12)
    assert markov_value(w) == QuadSurd.sqrt(12)
    assert window_sup((2, 1, 2, 1, 2), 2) == QuadSurd.sqrt(12)
    assert window_sup((2, 2, 2), 1) <= QuadSurd.sqrt(12)


def test_d_lb_endpoints():
    assert dimension_function_lower(Fraction(22, 10), 7) == 0.0
    assert dimension_function_lower(3, 7) == 0.0
    assert dimension_function_lower(QuadSurd.sqrt(12), 7) == 1.0


def test_certified_language_empty_below_sqrt5():
    assert certified_automaton(Fraction(22, 10), 5) is None
    assert certified_automaton(QuadSurd.sqrt(12), 5).n_states > 1


@given(st.lists(st.fractions(Fraction(29, 10), Fraction(36, 10)), min_size=2, max_size=4))
@settings(max_examples=10)
def test_d_lb_monotone(ts):
    ts = sorted(ts)
    vals = [dimension_function_lower(t, 6) for t in ts]
    assert all(0 <= v <= 1 for v in vals)
    assert all(a <= b for a, b in zip(vals, vals[1:]))
