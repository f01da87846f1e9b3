"""Symbolic algebra of exponentiated field operators.

A delta-coupled detector contributes unitaries built from ``cos Y`` and
``sin Y`` where ``Y`` is a smeared field operator.  Products of such
factors never need an explicit Hilbert space: the exponentials ``V(h) =
exp(i Y_h)`` close under multiplication up to a phase set by the
commutator form ``E``,

    V(h1) V(h2) = exp(-i E(h1, h2) / 2) V(h1 + h2),
    V(h)^dag    = V(-h),

where ``h`` ranges over integer combinations of registered smearing
functions and ``E`` extends bilinearly.  Expanding every trig factor into
two exponentials reduces any finite word to a canonical complex
combination of generators, which a quasifree state evaluates termwise via

    w(V(h)) = exp(-W(h, h) / 2).

The module is purely symbolic; the numbers ``E`` and ``W`` come from a
bilinear-data object (see :mod:`twoatom.states`) that exposes
``causal_form(h1, h2)`` and ``symmetric_form(h)``.

Exactness note: the two-factor reduction :func:`reduce_product` and the
general expansion :func:`trig_to_weyl` are arranged to produce bit-for-bit
identical combinations.  All scalings are by powers of two (exact in IEEE
arithmetic), both paths evaluate identical phase arguments, and merging of
equal generators is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

#: coefficients below this magnitude are dropped during canonicalization
PRUNE_TOL = 1e-14

COS = "cos"
SIN = "sin"


@dataclass(frozen=True)
class CombinedSmearing:
    """Integer combination of registered smearing functions.

    ``coeffs`` is a sorted tuple of ``(label, multiplicity)`` pairs with
    every multiplicity nonzero; the empty tuple is the zero combination
    (whose exponential is the identity operator).  Labels are opaque but
    must be hashable and mutually sortable.
    """

    coeffs: tuple = ()

    def __post_init__(self) -> None:
        for _, mult in self.coeffs:
            if mult == 0:
                raise ValueError("zero multiplicity must be omitted")
        if list(self.coeffs) != sorted(self.coeffs, key=lambda p: p[0]):
            raise ValueError("coefficients must be sorted by label")

    @staticmethod
    def of(label, multiplicity: int = 1) -> "CombinedSmearing":
        if multiplicity == 0:
            return CombinedSmearing()
        return CombinedSmearing(((label, int(multiplicity)),))

    @staticmethod
    def zero() -> "CombinedSmearing":
        return CombinedSmearing()

    @staticmethod
    def from_mapping(mapping: Mapping) -> "CombinedSmearing":
        items = tuple(
            sorted((k, int(v)) for k, v in mapping.items() if v != 0)
        )
        return CombinedSmearing(items)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self.coeffs)

    def __add__(self, other: "CombinedSmearing") -> "CombinedSmearing":
        total: dict[int, int] = dict(self.coeffs)
        for label, mult in other.coeffs:
            new = total.get(label, 0) + mult
            if new == 0:
                total.pop(label, None)
            else:
                total[label] = new
        return CombinedSmearing.from_mapping(total)

    def __neg__(self) -> "CombinedSmearing":
        return CombinedSmearing(tuple((label, -mult) for label, mult in self.coeffs))

    def __sub__(self, other: "CombinedSmearing") -> "CombinedSmearing":
        return self + (-other)

    def scaled(self, factor: int) -> "CombinedSmearing":
        if factor == 0:
            return CombinedSmearing()
        return CombinedSmearing(
            tuple((label, factor * mult) for label, mult in self.coeffs)
        )


#: a single trig factor: ("cos" | "sin", CombinedSmearing)
TrigFactor = tuple[str, CombinedSmearing]
#: a finite product of trig factors, leftmost factor first
TrigWord = tuple[TrigFactor, ...]


@dataclass(frozen=True)
class WeylCombination:
    """Canonical finite complex combination of Weyl generators.

    ``terms`` is sorted by generator argument, merged, and pruned at
    :data:`PRUNE_TOL`.  Use :meth:`from_terms` to build instances.
    """

    terms: tuple[tuple[CombinedSmearing, complex], ...] = ()

    @staticmethod
    def from_terms(
        terms: Iterable[tuple[CombinedSmearing, complex]],
    ) -> "WeylCombination":
        merged: dict[tuple[tuple[int, int], ...], complex] = {}
        for arg, coeff in terms:
            key = arg.coeffs
            if key in merged:
                merged[key] = merged[key] + coeff
            else:
                merged[key] = complex(coeff)
        kept = tuple(
            (CombinedSmearing(key), coeff)
            for key, coeff in sorted(merged.items())
            if abs(coeff) >= PRUNE_TOL
        )
        return WeylCombination(kept)

    @staticmethod
    def identity() -> "WeylCombination":
        return WeylCombination(((CombinedSmearing.zero(), 1.0 + 0.0j),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, arg: CombinedSmearing) -> complex:
        for term_arg, coeff in self.terms:
            if term_arg == arg:
                return coeff
        return 0.0 + 0.0j

    def scaled(self, factor: complex) -> "WeylCombination":
        return WeylCombination.from_terms(
            (arg, factor * coeff) for arg, coeff in self.terms
        )

    def __add__(self, other: "WeylCombination") -> "WeylCombination":
        return WeylCombination.from_terms(list(self.terms) + list(other.terms))

    def adjoint(self) -> "WeylCombination":
        """Hermitian adjoint: V(h) -> V(-h) with conjugated coefficients."""
        return WeylCombination.from_terms(
            (-arg, np.conj(coeff)) for arg, coeff in self.terms
        )

    def max_abs_delta(self, other: "WeylCombination") -> float:
        """Largest coefficient difference between two combinations."""
        args = {arg for arg, _ in self.terms} | {arg for arg, _ in other.terms}
        if not args:
            return 0.0
        return max(abs(self.coefficient(a) - other.coefficient(a)) for a in args)


def _phase(e_value: float) -> complex:
    """Weyl multiplication phase exp(-i e / 2) from the commutator value."""
    return np.exp(-0.5j * e_value)


def weyl_multiply(
    a: tuple[complex, CombinedSmearing],
    b: tuple[complex, CombinedSmearing],
    data,
) -> tuple[complex, CombinedSmearing]:
    """Multiply two scaled Weyl generators.

    Parameters
    ----------
    a, b : (complex, CombinedSmearing)
        Scaled generators ``c V(h)``.
    data
        Bilinear-data object providing ``causal_form(h1, h2)``.

    Returns
    -------
    (complex, CombinedSmearing)
        ``(c_a c_b exp(-i E(h_a, h_b)/2), h_a + h_b)``.
    """
    coeff_a, arg_a = a
    coeff_b, arg_b = b
    phase = _phase(data.causal_form(arg_a, arg_b))
    return (coeff_a * coeff_b * phase, arg_a + arg_b)


def cos_combination(arg: CombinedSmearing) -> WeylCombination:
    """cos Y_h = (V(h) + V(-h)) / 2, with cos of the zero smearing = identity."""
    if arg.is_zero:
        return WeylCombination.identity()
    return WeylCombination.from_terms([(arg, 0.5 + 0.0j), (-arg, 0.5 + 0.0j)])


def sin_combination(arg: CombinedSmearing) -> WeylCombination:
    """sin Y_h = (V(h) - V(-h)) / (2i), zero for the zero smearing."""
    if arg.is_zero:
        return WeylCombination()
    return WeylCombination.from_terms([(arg, -0.5j), (-arg, 0.5j)])


def trig_to_weyl(word: Sequence[TrigFactor], data) -> WeylCombination:
    """Expand a product of cos/sin factors into a canonical combination.

    Factors are multiplied left to right; each factor contributes its two
    exponentials and every partial product picks up the Weyl phase from
    ``data.causal_form``.

    Parameters
    ----------
    word : sequence of ("cos" | "sin", CombinedSmearing)
    data
        Bilinear-data object providing ``causal_form(h1, h2)``.
    """
    terms: list[tuple[CombinedSmearing, complex]] = [
        (CombinedSmearing.zero(), 1.0 + 0.0j)
    ]
    for kind, arg in word:
        if kind == COS:
            factor = cos_combination(arg)
        elif kind == SIN:
            factor = sin_combination(arg)
        else:
            raise ValueError(f"unknown trig kind {kind!r}")
        new_terms: list[tuple[CombinedSmearing, complex]] = []
        for left_arg, left_coeff in terms:
            for right_arg, right_coeff in factor.terms:
                coeff, arg_sum = weyl_multiply(
                    (left_coeff, left_arg), (right_coeff, right_arg), data
                )
                new_terms.append((arg_sum, coeff))
        terms = new_terms
    return WeylCombination.from_terms(terms)


def reduce_product(
    kind1: str,
    arg1: CombinedSmearing,
    kind2: str,
    arg2: CombinedSmearing,
    data,
) -> WeylCombination:
    """Two-factor product-to-sum reduction.

    Implements the twisted analogues of the classical identities, with
    ``e12 = E(h1, h2)`` and phases ``exp(-+ i e12 / 2)``:

        2 cos cos =  C(h1+h2) p- + C(h1-h2) p+
        2 sin sin = -C(h1+h2) p- + C(h1-h2) p+
        2 cos sin =  S(h1+h2) p- - S(h1-h2) p+
        2 sin cos =  S(h1+h2) p- + S(h1-h2) p+

    Agrees bit-for-bit with :func:`trig_to_weyl` on the same word.
    """
    for kind in (kind1, kind2):
        if kind not in (COS, SIN):
            raise ValueError(f"unknown trig kind {kind!r}")
    e12 = data.causal_form(arg1, arg2)
    phase_minus = _phase(e12)
    phase_plus = _phase(-e12)
    arg_sum = arg1 + arg2
    arg_diff = arg1 - arg2

    if kind1 == kind2:
        part_sum = cos_combination(arg_sum)
        part_diff = cos_combination(arg_diff)
    else:
        part_sum = sin_combination(arg_sum)
        part_diff = sin_combination(arg_diff)

    if (kind1, kind2) == (COS, COS):
        scale_sum, scale_diff = 0.5 * phase_minus, 0.5 * phase_plus
    elif (kind1, kind2) == (SIN, SIN):
        scale_sum, scale_diff = -0.5 * phase_minus, 0.5 * phase_plus
    elif (kind1, kind2) == (COS, SIN):
        scale_sum, scale_diff = 0.5 * phase_minus, -0.5 * phase_plus
    else:  # (SIN, COS)
        scale_sum, scale_diff = 0.5 * phase_minus, 0.5 * phase_plus

    return WeylCombination.from_terms(
        [(arg, scale_sum * coeff) for arg, coeff in part_sum.terms]
        + [(arg, scale_diff * coeff) for arg, coeff in part_diff.terms]
    )


def quasifree_expectation(combination: WeylCombination, state) -> complex:
    """Evaluate a Weyl combination in a quasifree state.

    Each generator contributes ``exp(-W(h, h)/2)`` where ``W(h, h)`` is the
    (real) diagonal of the two-point form, supplied by
    ``state.symmetric_form(h)``.
    """
    total = 0.0 + 0.0j
    for arg, coeff in combination.terms:
        total += coeff * np.exp(-0.5 * state.symmetric_form(arg))
    return total


def expect_word(word: Sequence[TrigFactor], state) -> complex:
    """Quasifree expectation of a product of trig factors."""
    return quasifree_expectation(trig_to_weyl(word, state), state)
