"""Selective energy measurement of the first detector, and its effect on
the second.

The first qubit is prepared excited, kicked, then measured in its energy
basis.  Finding it in the ground state happens with probability
``w(S_A^2) = (1 - nu_A)/2`` and leaves the field in the non-quasifree
conditioned functional ``w~(X) = w(S_A X S_A) / w(S_A^2)``; the excited
outcome conditions with ``C_A`` instead.  The second qubit's kick then
sees the conditioned functional, giving the outcome-dependent channel

    Phi~(rho) = w~(C_B^2) rho + w~(S_B^2) mu rho mu
                + i w~(S_B C_B) rho mu - i w~(C_B S_B) mu rho.

Both sine/cosine factors of the second detector are functions of the one
operator ``Y_B``, so the two cross coefficients coincide and the map is
trace preserving for any field state.  Averaging the unnormalized
conditioned channels over outcomes reproduces the unconditioned channel
identically; :func:`averaged_channel` evaluates that sum through the
sandwich words so the identity can be checked against the moment route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import CPTP_TOL, QubitChannel, _check_cptp, _real_coefficient
from .errors import DomainError, NullEventError
from .weyl import COS, SIN, CombinedSmearing, expect_word

GROUND = "ground"
EXCITED = "excited"
_OUTCOMES = (GROUND, EXCITED)

#: outcome probabilities below this are treated as null events
NULL_EVENT_TOL = 1e-14

_KICK_KIND = {GROUND: SIN, EXCITED: COS}


def _require_outcome(outcome: str) -> str:
    if outcome not in _OUTCOMES:
        raise DomainError(
            f"unknown outcome {outcome!r}; expected one of {_OUTCOMES}"
        )
    return outcome


def outcome_probability(state, label_a, outcome: str) -> float:
    """Probability of the energy-measurement outcome on the kicked qubit.

    Evaluated through the generator algebra; for quasifree states it
    equals ``(1 -+ nu_A)/2`` for ground/excited.
    """
    kind = _KICK_KIND[_require_outcome(outcome)]
    f_a = CombinedSmearing.of(label_a)
    value = expect_word(((kind, f_a), (kind, f_a)), state)
    return float(value.real)


def conditioned_expectation(state, label_a, outcome: str, word) -> complex:
    """Conditioned functional ``w~`` applied to a trig word.

    The word is sandwich-evaluated between the outcome's kick factors and
    normalized by the outcome probability.
    """
    kind = _KICK_KIND[_require_outcome(outcome)]
    f_a = CombinedSmearing.of(label_a)
    kick = (kind, f_a)
    denom = expect_word((kick, kick), state).real
    if denom < NULL_EVENT_TOL:
        raise NullEventError(
            f"outcome {outcome!r} has probability {denom:.3e}; "
            "cannot condition on a null event"
        )
    numer = expect_word((kick, *tuple(word), kick), state)
    return complex(numer) / denom


@dataclass(frozen=True)
class UpdatedState:
    """Field functional conditioned on the first qubit's outcome."""

    state: object
    label_a: object
    outcome: str

    def __post_init__(self) -> None:
        _require_outcome(self.outcome)

    @property
    def probability(self) -> float:
        return outcome_probability(self.state, self.label_a, self.outcome)

    def expect_word(self, word) -> complex:
        return conditioned_expectation(
            self.state, self.label_a, self.outcome, word
        )


def _sandwich_coefficients(state, label_a, label_b, outcome: str):
    """Unnormalized conditioned coefficients and the outcome probability."""
    kind = _KICK_KIND[_require_outcome(outcome)]
    kick = (kind, CombinedSmearing.of(label_a))
    f_b = CombinedSmearing.of(label_b)
    cos_b, sin_b = (COS, f_b), (SIN, f_b)
    prob = expect_word((kick, kick), state).real
    coeffs = tuple(
        expect_word((kick, first, second, kick), state)
        for first, second in (
            (cos_b, cos_b),
            (sin_b, sin_b),
            (sin_b, cos_b),
            (cos_b, sin_b),
        )
    )
    return prob, coeffs


def tilde_channel(
    state,
    label_a,
    label_b,
    outcome: str,
    mu_b: np.ndarray,
    *,
    cptp_tol: float = CPTP_TOL,
) -> QubitChannel:
    """Second-qubit channel conditioned on the measurement outcome."""
    prob, coeffs = _sandwich_coefficients(state, label_a, label_b, outcome)
    if prob < NULL_EVENT_TOL:
        raise NullEventError(
            f"outcome {outcome!r} has probability {prob:.3e}; "
            "cannot condition on a null event"
        )
    a, b, c_plus, c_minus = (value / prob for value in coeffs)
    channel = QubitChannel(
        a=_real_coefficient("a", a, cptp_tol),
        b=_real_coefficient("b", b, cptp_tol),
        c_plus=_real_coefficient("c_plus", c_plus, cptp_tol),
        c_minus=_real_coefficient("c_minus", c_minus, cptp_tol),
        mu=mu_b,
    )
    return _check_cptp(channel, cptp_tol)


def averaged_channel(
    state,
    label_a,
    label_b,
    mu_b: np.ndarray,
    *,
    cptp_tol: float = CPTP_TOL,
) -> QubitChannel:
    """Outcome average ``sum_o p_o Phi~_o`` through the sandwich words.

    Equals the unconditioned channel identically; computing it this way
    keeps the route independent from the moment-tensor construction.
    """
    totals = [0.0 + 0.0j] * 4
    for outcome in _OUTCOMES:
        _, coeffs = _sandwich_coefficients(state, label_a, label_b, outcome)
        totals = [t + c for t, c in zip(totals, coeffs)]
    a, b, c_plus, c_minus = totals
    channel = QubitChannel(
        a=_real_coefficient("a", a, cptp_tol),
        b=_real_coefficient("b", b, cptp_tol),
        c_plus=_real_coefficient("c_plus", c_plus, cptp_tol),
        c_minus=_real_coefficient("c_minus", c_minus, cptp_tol),
        mu=mu_b,
    )
    return _check_cptp(channel, cptp_tol)
