import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_spectra.algebraic import QuadSurd
from markov_spectra.cantor import (P_WORDS, SubshiftSpec, cylinder, cylinder_cover, expand_word,
                                   format_word, hull_and_max_gap, load_spec, preset,
                                   restricted_hull, thickness_bound, validate)
from markov_spectra.cf import PeriodicCF, periodic_value
from markov_spectra.exceptions import (EmptyLanguageError, ResourceError,
                                       UndefinedThicknessError, ValidationError)


# -- word notation -----------------------------------------------------------------

@pytest.mark.parametrize("text, word", [
    ("21212", (2, 1, 2, 1, 2)),
    ("2121_3", (2, 1, 2, 1, 1, 1)),
    ("2_3121_22_21", (2, 2, 2, 1, 2, 1, 1, 2, 2, 1)),
    ("1_{12}", (1,) * 12),
    ("[12]_2", (12, 12)),
])
def test_expand_word(text, word):
    assert expand_word(text) == word


def test_format_round_trip():
    for w in P_WORDS:
        assert expand_word(format_word(expand_word(w))) == expand_word(w)


# -- specs -------------------------------------------------------------------------

def test_validate_presets(presets):
    assert presets["C4"].alphabet == (1, 2, 3, 4)
    assert len(presets["X"].forbidden) == 9


def test_empty_language():
    with pytest.raises(EmptyLanguageError):
        validate(SubshiftSpec((1,), [(1,)]))
    with pytest.raises(EmptyLanguageError):
        validate("alphabet=1,2; forbidden=1,2")


def test_bad_specs():
    for text in ["alphabet=", "alphabet=1,2; forbidden=3", "colour=red", "alphabet=a"]:
        with pytest.raises(ValidationError):
            validate(text)


def test_redundant_forbidden_dropped():
    s = validate("alphabet=1,2; forbidden=11,211,1_3")
    assert s.forbidden == ((1, 1),)


def test_spec_text_round_trip(presets, tmp_path):
    for spec in presets.values():
        assert validate(spec.to_text()) == spec
        path = tmp_path / "s.spec"
        path.write_text(spec.to_text().replace("; ", "\n") + "\n# trailing comment\n")
        assert load_spec(str(path)) == spec


def test_missing_spec_file_falls_back_to_preset():
    assert load_spec("nowhere/X.spec") == preset("X")
    with pytest.raises(ValidationError):
        load_spec("nowhere/unknown.spec")


def _brute_count(spec, n, horizon=18):
    """Words of length n that extend to a forbidden-free word of length n+horizon."""
    forb = [tuple(w) for w in spec.forbidden]

    def clean_suffix(w):
        return not any(len(w) >= len(f) and w[-len(f):] == f for f in forb)

    def extends(w, left):
        if left == 0:
            return True
        return any(clean_suffix(w + (a,)) and extends(w + (a,), left - 1) for a in spec.alphabet)

    count = 0
    for w in itertools.product(spec.alphabet, repeat=n):
        if all(clean_suffix(w[:k]) for k in range(1, n + 1)) and extends(w, horizon):
            count += 1
    return count


def test_x_word_counts_match_brute_force(presets):
    X = presets["X"]
    for n in range(1, 7):
        assert len(cylinder_cover(X, n)) == _brute_count(X, n)


def test_k122_counts_are_fibonacci(presets):
    counts = [len(cylinder_cover(presets["K122"], n)) for n in range(1, 9)]
    assert all(c == a + b for a, b, c in zip(counts, counts[1:], counts[2:]))


# -- covers ------------------------------------------------------------------------

def test_depth_one_cylinders(presets):
    cov = cylinder_cover(presets["E2"], 1)
    got = {iv.word: (iv.lo, iv.hi) for iv in cov}
    assert got == {(1,): (Fraction(1, 2), Fraction(1)), (2,): (Fraction(1, 3), Fraction(1, 2))}


def test_single_letter_cover_shrinks():
    spec = validate("alphabet=1")
    golden = QuadSurd(-1, 1, 5, 2)
    widths = []
    for n in (1, 5, 10, 20):
        cov = cylinder_cover(spec, n)
        assert len(cov) == 1
        (iv,) = cov
        assert iv.lo <= golden <= iv.hi
        widths.append(iv.hi - iv.lo)
    assert widths == sorted(widths, reverse=True) and widths[-1] < Fraction(1, 10**7)


def test_cover_budget():
    with pytest.raises(ResourceError):
        cylinder_cover(preset("C4"), 8, budget=1000)


def test_cover_csv(presets):
    text = cylinder_cover(presets["E2"], 2).to_csv()
    assert text.splitlines()[0] == "word,lo,hi" and len(text.splitlines()) == 5


SPECS = ["C4", "E2", "X", "K122", "C(3)", "alphabet=1,2,3; forbidden=33,13",
         "alphabet=1,2; forbidden=22", "alphabet=1,2,3; blocks=1|23|3_2",
         "alphabet=2,3", "alphabet=1,2; forbidden=111,222"]


@given(st.sampled_from(SPECS), st.integers(1, 5))
@settings(max_examples=40)
def test_cover_nesting_and_length(text, n):
    spec = load_spec(text)
    outer, inner = cylinder_cover(spec, n), cylinder_cover(spec, n + 1)
    assert inner.total_length <= outer.total_length
    for iv in inner:
        parents = [o for o in outer if o.lo <= iv.lo and iv.hi <= o.hi]
        assert len(parents) == 1 and parents[0].word == iv.word[:n]


@given(st.sampled_from(SPECS), st.lists(st.integers(1, 4), min_size=1, max_size=6), st.integers(1, 6))
@settings(max_examples=60)
def test_periodic_points_inside_cover(text, period, n):
    spec = load_spec(text)
    if not spec.is_admissible(period * 30):
        return
    # admissible for a long stretch is not enough; require a cycle of the automaton
    auto = spec.automaton
    s = auto.run(period * auto.n_states)
    if s is None or auto.run(period * (auto.n_states + 1)) is None:
        return
    x = periodic_value(PeriodicCF([0], period))
    iv = cylinder_cover(spec, n).locate(x)
    assert iv is not None and iv.word == tuple((period * n)[:n])


def test_cylinder_endpoints():
    assert cylinder((1, 2)) == (Fraction(2, 3), Fraction(3, 4))


# -- hulls and thickness -------------------------------------------------------------

def test_c4_hull_exact():
    (lo, hi), gap = hull_and_max_gap(preset("C4"))
    assert lo == (QuadSurd.sqrt(2) - 1) / 2
    assert hi == 2 * QuadSurd.sqrt(2) - 2
    assert 0 < gap < 0.1


def test_restricted_hull_nests(presets):
    X = presets["X"]
    lo, hi = restricted_hull(X, (1, 1))
    a, b = cylinder((1, 1))
    assert a <= lo <= hi <= b


def test_thickness_examples():
    assert thickness_bound(preset("C4"), 4) >= 1
    assert thickness_bound(preset("C(2)"), 8) == pytest.approx(0.3660254037844386, abs=1e-12)
    with pytest.raises(UndefinedThicknessError):
        thickness_bound(validate("alphabet=1"), 3)


def test_thickness_monotone_in_depth(presets):
    for name in ("X", "K122", "C4"):
        vals = [thickness_bound(presets[name], d) for d in range(1, 6)]
        assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:])), (name, vals)
        assert vals[0] > 0


def _finite_thickness(spec, n):
    """Thickness of the union of exact restricted hulls of all depth-n words.

    Every gap of this union is a gap of the Cantor set, and bridges computed
    from fewer gaps can only be longer, so this is an upper bound for the
    set's thickness.
    """
    ivs = sorted(
        (float(lo), float(hi))
        for lo, hi in (restricted_hull(spec, iv.word) for iv in cylinder_cover(spec, n))
    )
    merged = []
    for lo, hi in ivs:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    gaps = [(merged[i][1], merged[i + 1][0]) for i in range(len(merged) - 1)]
    a, b = merged[0][0], merged[-1][1]
    best = float("inf")
    for i, (g0, g1) in enumerate(gaps):
        size = g1 - g0
        left = max([gaps[j][1] for j in range(i) if gaps[j][1] - gaps[j][0] >= size], default=a)
        right = min([gaps[j][0] for j in range(i + 1, len(gaps)) if gaps[j][1] - gaps[j][0] >= size],
                    default=b)
        best = min(best, (g0 - left) / size, (right - g1) / size)
    return best


@pytest.mark.parametrize("name", ["C4", "E2", "X", "K122", "alphabet=1,2,3; forbidden=33,13"])
def test_thickness_bound_below_finite_oracle(name):
    spec = load_spec(name)
    for n in (2, 4):
        assert thickness_bound(spec, n) <= _finite_thickness(spec, 6) + 1e-12
