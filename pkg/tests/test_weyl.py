"""Generator-algebra tests: Weyl products, trig reductions, expectations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoatom.states import BilinearData, ModeCouplings, vacuum_from_modes
from twoatom.weyl import (
    COS,
    SIN,
    CombinedSmearing,
    WeylCombination,
    cos_combination,
    expect_word,
    quasifree_expectation,
    reduce_product,
    sin_combination,
    trig_to_weyl,
    weyl_multiply,
)


class CommutatorOnly:
    """Bilinear commutator form over integer labels, nothing else.

    Enough for the pure algebra: products only ever consult
    ``causal_form``.
    """

    def __init__(self, e_matrix: np.ndarray):
        self.e = np.asarray(e_matrix, dtype=float)

    def causal_form(self, h1: CombinedSmearing, h2: CombinedSmearing) -> float:
        total = 0.0
        for i, m in h1.items():
            for j, n in h2.items():
                total += m * n * self.e[i, j]
        return total


def antisym(n: int, values) -> np.ndarray:
    e = np.zeros((n, n))
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            e[i, j] = values[k]
            e[j, i] = -values[k]
            k += 1
    return e


F0 = CombinedSmearing.of(0)
F1 = CombinedSmearing.of(1)


def test_single_product_phase():
    data = CommutatorOnly(antisym(2, [0.3]))
    coeff, arg = weyl_multiply((1.0, F0), (1.0, F1), data)
    assert arg == F0 + F1
    assert coeff == np.exp(-0.15j)


def test_product_reverses_phase():
    data = CommutatorOnly(antisym(2, [0.3]))
    coeff, _ = weyl_multiply((1.0, F1), (1.0, F0), data)
    assert coeff == np.exp(+0.15j)


def test_smearing_arithmetic():
    assert (F0 + F0) == CombinedSmearing.of(0, 2)
    assert (F0 - F0).is_zero
    assert -(F0 + F1) == F0.scaled(-1) + F1.scaled(-1)
    assert CombinedSmearing.of(0, 0).is_zero
    with pytest.raises(ValueError):
        CombinedSmearing(((0, 0),))


def test_sin_squared_reduces_to_cos_double():
    data = CommutatorOnly(antisym(1, []))
    reduced = reduce_product(SIN, F0, SIN, F0, data)
    # sin^2 Y = (1 - cos 2Y) / 2
    expected = WeylCombination.identity().scaled(0.5) + cos_combination(
        CombinedSmearing.of(0, 2)
    ).scaled(-0.5)
    assert reduced.max_abs_delta(expected) == 0.0


def test_four_letter_word_has_sixteen_terms():
    data = CommutatorOnly(antisym(4, np.linspace(0.1, 0.6, 6)))
    word = [
        (COS, CombinedSmearing.of(0)),
        (SIN, CombinedSmearing.of(1)),
        (COS, CombinedSmearing.of(2)),
        (SIN, CombinedSmearing.of(3)),
    ]
    combination = trig_to_weyl(word, data)
    assert len(combination.terms) == 16
    assert abs(sum(c for _, c in combination.terms)) < 1.0


def test_classical_limit_product_to_sum():
    data = CommutatorOnly(np.zeros((2, 2)))
    fsum, fdiff = F0 + F1, F0 - F1
    cases = {
        (COS, COS): [(fsum, 0.5), (fdiff, 0.5)],
        (SIN, SIN): [(fsum, -0.5), (fdiff, 0.5)],
        (COS, SIN): [(fsum, 0.5), (fdiff, -0.5)],
        (SIN, COS): [(fsum, 0.5), (fdiff, 0.5)],
    }
    for (k1, k2), parts in cases.items():
        reduced = reduce_product(k1, F0, k2, F1, data)
        expected = WeylCombination()
        for arg, scale in parts:
            base = cos_combination(arg) if k1 == k2 else sin_combination(arg)
            expected = expected + base.scaled(scale)
        assert reduced.max_abs_delta(expected) < 1e-14


@st.composite
def smearings(draw, labels=3):
    coeffs = draw(
        st.lists(
            st.tuples(
                st.integers(0, labels - 1),
                st.integers(-3, 3).filter(lambda m: m != 0),
            ),
            min_size=1,
            max_size=labels,
            unique_by=lambda t: t[0],
        )
    )
    return CombinedSmearing.from_mapping(dict(coeffs))


@st.composite
def commutator_data(draw, labels=3):
    values = draw(
        st.lists(
            st.floats(-np.pi, np.pi, allow_nan=False),
            min_size=labels * (labels - 1) // 2,
            max_size=labels * (labels - 1) // 2,
        )
    )
    return CommutatorOnly(antisym(labels, values))


@given(commutator_data(), smearings(), smearings(), smearings())
def test_weyl_product_associative(data, h1, h2, h3):
    left = weyl_multiply(weyl_multiply((1.0, h1), (1.0, h2), data), (1.0, h3), data)
    right = weyl_multiply((1.0, h1), weyl_multiply((1.0, h2), (1.0, h3), data), data)
    assert left[1] == right[1]
    assert abs(left[0] - right[0]) < 1e-12


@st.composite
def words(draw, labels=3, max_len=4):
    length = draw(st.integers(1, max_len))
    return [
        (draw(st.sampled_from([COS, SIN])), draw(smearings(labels)))
        for _ in range(length)
    ]


@given(commutator_data(), words())
def test_reduction_matches_letterwise_expansion(data, word):
    if len(word) != 2:
        return
    (k1, h1), (k2, h2) = word
    reduced = reduce_product(k1, h1, k2, h2, data)
    expanded = trig_to_weyl(word, data)
    assert reduced.max_abs_delta(expanded) == 0.0


@given(commutator_data(), words())
def test_adjoint_reverses_word(data, word):
    forward = trig_to_weyl(word, data)
    backward = trig_to_weyl(list(reversed(word)), data)
    assert forward.adjoint().max_abs_delta(backward) < 1e-14


@st.composite
def mode_states(draw, labels=3, modes=2):
    entries = draw(
        st.lists(
            st.floats(-0.8, 0.8, allow_nan=False),
            min_size=2 * labels * modes,
            max_size=2 * labels * modes,
        )
    )
    flat = np.array(entries)
    g = (flat[: labels * modes] + 1j * flat[labels * modes :]).reshape(
        labels, modes
    )
    couplings = ModeCouplings(
        labels=tuple(range(labels)), omegas=np.ones(modes), g=g
    )
    return vacuum_from_modes(couplings)


@settings(max_examples=40)
@given(mode_states(), words())
def test_odd_sine_words_have_zero_expectation(state, word):
    sines = sum(1 for kind, _ in word if kind == SIN)
    if sines % 2 == 0:
        return
    assert abs(expect_word(word, state)) < 1e-13


@settings(max_examples=40)
@given(mode_states(), words())
def test_palindrome_expectation_is_nonnegative(state, word):
    value = expect_word(list(word) + list(reversed(word)), state)
    assert abs(value.imag) < 1e-13
    assert value.real > -1e-13


@settings(max_examples=40)
@given(mode_states(), words())
def test_expectation_bounded_by_one_norm(state, word):
    combination = trig_to_weyl(word, state)
    value = quasifree_expectation(combination, state)
    bound = sum(abs(c) for _, c in combination.terms)
    assert abs(value) <= bound + 1e-12


def test_expectation_of_identity_word():
    state = vacuum_from_modes(
        ModeCouplings(labels=(0,), omegas=np.ones(1), g=np.array([[0.5 + 0.1j]]))
    )
    w00 = state.data.w_entry(0, 0).real
    # w(cos Y) = exp(-W/2); w(sin Y) = 0
    assert abs(expect_word([(COS, F0)], state) - np.exp(-0.5 * w00)) < 1e-15
    assert abs(expect_word([(SIN, F0)], state)) < 1e-15


def test_trig_to_weyl_rejects_unknown_kind():
    data = CommutatorOnly(np.zeros((1, 1)))
    with pytest.raises(ValueError):
        trig_to_weyl([("tan", F0)], data)
    with pytest.raises(ValueError):
        reduce_product("tan", F0, COS, F0, data)


def test_string_labels_are_supported():
    data = BilinearData(
        labels=("A", "B"),
        w=np.array([[0.25, 0.1 - 0.05j], [0.1 + 0.05j, 0.3]]),
        e=np.array([[0.0, -0.1], [0.1, 0.0]]),
    )
    f_a, f_b = CombinedSmearing.of("A"), CombinedSmearing.of("B")
    value = data.causal_form(f_a, f_b)
    assert value == -0.1
    assert (f_a + f_b).items
