"""Exact qubit channel on the second of two instantaneously kicked detectors.

Two qubits couple to the field through delta kicks ``exp(-i mu_j Y_j)``.
Tracing out the field and the first qubit leaves an affine map on the
second qubit's state determined by sixteen four-factor trig moments

    gamma[ijkl] = w(X_A^i X_B^j X_B^k X_A^l),   i..l in {c, s},

where ``X^c = cos Y`` and ``X^s = sin Y``.  In terms of these and the
first-qubit overlap ``alpha = tr(mu_A rho_A)`` the map reads

    Phi(rho) = a rho + b mu rho mu + i c+ rho mu - i c- mu rho

with ``mu`` the second detector's monopole matrix.  For quasifree field
states every odd-sine moment vanishes and the coefficients collapse to
the closed form of :func:`quasifree_channel`; the general route stays
valid for any state supplying the two-point forms, so the two builders
provide independent evaluations of the same channel.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InternalConsistencyError
from .weyl import COS, SIN, CombinedSmearing, expect_word

#: default tolerance for complete positivity / trace preservation checks
CPTP_TOL = 1e-8
#: entries below this are emitted as exact zeros in payloads
EMIT_PRUNE_TOL = 1e-14

_KINDS = {"c": COS, "s": SIN}


# ---------------------------------------------------------------------------
# qubit states and monopole matrices;  |g> = index 0, |e> = index 1
# ---------------------------------------------------------------------------

def ground_state() -> np.ndarray:
    return np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def excited_state() -> np.ndarray:
    return np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def plus_state() -> np.ndarray:
    """Equal superposition (|g> + |e>) / sqrt(2) as a density matrix."""
    return np.full((2, 2), 0.5, dtype=complex)


def bloch_state(x: float, y: float, z: float) -> np.ndarray:
    """Density matrix with the given Bloch vector."""
    if x * x + y * y + z * z > 1.0 + 1e-12:
        raise DomainError("Bloch vector must have norm at most one")
    return 0.5 * np.array(
        [[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]], dtype=complex
    )


def validate_density(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DomainError(f"qubit state must be 2x2, got {rho.shape}")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DomainError("qubit state must have unit trace")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise DomainError("qubit state must be Hermitian")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise DomainError("qubit state must be positive semidefinite")
    return rho


@dataclass(frozen=True)
class Monopole:
    """Interaction-picture monopole moment of a gap-``gap`` qubit.

    At kick time ``tau`` the matrix is ``|e><g| e^{i gap tau} + h.c.``.
    """

    gap: float
    tau: float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        phase = self.gap * self.tau
        return np.array(
            [[0.0, np.exp(-1j * phase)], [np.exp(1j * phase), 0.0]],
            dtype=complex,
        )


def monopole_matrix(mu) -> np.ndarray:
    """Coerce a :class:`Monopole` or an explicit 2x2 array to a matrix."""
    matrix = getattr(mu, "matrix", None)
    return np.asarray(mu if matrix is None else matrix, dtype=complex)


def alpha_overlap(mu, rho: np.ndarray) -> float:
    """First-qubit overlap ``tr(mu rho)``; real for Hermitian inputs."""
    value = complex(np.trace(monopole_matrix(mu) @ np.asarray(rho)))
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise DomainError(
            f"overlap tr(mu rho) = {value} is not real; "
            "check that mu and rho are Hermitian"
        )
    return float(value.real)


# ---------------------------------------------------------------------------
# the four-factor moment tensor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaTensor:
    """The sixteen moments ``w(X_A^i X_B^j X_B^k X_A^l)``.

    Keys are four-letter strings over ``{c, s}`` in the operator order
    ``A B B A``.  Adjoint symmetry ``gamma[ijkl] = conj(gamma[lkji])`` is
    enforced at construction.
    """

    values: tuple[tuple[str, complex], ...]

    @staticmethod
    def from_state(
        state,
        label_a,
        label_b,
        *,
        check_tol: float = 1e-12,
    ) -> "GammaTensor":
        f_a = CombinedSmearing.of(label_a)
        f_b = CombinedSmearing.of(label_b)
        values = {}
        for key in itertools.product("cs", repeat=4):
            word = (
                (_KINDS[key[0]], f_a),
                (_KINDS[key[1]], f_b),
                (_KINDS[key[2]], f_b),
                (_KINDS[key[3]], f_a),
            )
            values["".join(key)] = complex(expect_word(word, state))
        tensor = GammaTensor(tuple(sorted(values.items())))
        defect = tensor.adjoint_defect()
        if defect > check_tol:
            raise InternalConsistencyError(
                f"moment tensor violates adjoint symmetry by {defect:.3e}"
            )
        return tensor

    def __getitem__(self, key: str) -> complex:
        for stored, value in self.values:
            if stored == key:
                return value
        raise KeyError(key)

    def adjoint_defect(self) -> float:
        """Largest violation of ``gamma[ijkl] = conj(gamma[lkji])``."""
        return max(
            abs(value - np.conj(self[key[::-1]])) for key, value in self.values
        )


# ---------------------------------------------------------------------------
# the channel
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QubitChannel:
    """Affine qubit map ``a rho + b mu rho mu + i c+ rho mu - i c- mu rho``.

    ``nu_b`` and ``e_ab`` are carried when the closed quasifree route built
    the channel; the general-moment route leaves them ``None``.
    """

    a: float
    b: float
    c_plus: float
    c_minus: float
    mu: np.ndarray
    nu_b: float | None = None
    e_ab: float | None = None

    def __post_init__(self) -> None:
        mu = monopole_matrix(self.mu).copy()
        if mu.shape != (2, 2):
            raise DomainError(f"monopole matrix must be 2x2, got {mu.shape}")
        object.__setattr__(self, "mu", mu)
        self.mu.setflags(write=False)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        mu = self.mu
        return (
            self.a * rho
            + self.b * (mu @ rho @ mu)
            + 1j * self.c_plus * (rho @ mu)
            - 1j * self.c_minus * (mu @ rho)
        )

    def choi(self) -> np.ndarray:
        """Trace-2 Choi matrix ``C[(i,k),(j,l)] = Phi(E_ij)[k,l]``."""
        out = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[i, j] = 1.0
                out += np.kron(unit, self.apply(unit))
        return out

    def excitation_probability(self, rho: np.ndarray) -> float:
        """Population of |e> after the channel acts on ``rho``."""
        return float(self.apply(validate_density(rho))[1, 1].real)

    def diagnostics(self) -> dict:
        eigs = np.linalg.eigvalsh(self.choi())
        tp = max(
            abs(self.a + self.b - 1.0), abs(self.c_plus - self.c_minus)
        )
        return {
            "trace_defect": tp,
            "positivity_defect": max(0.0, -float(eigs.min())),
            "choi_eigenvalues": [float(x) for x in eigs],
        }

    def to_payload(self) -> dict:
        def emit(x: float) -> float:
            return 0.0 if abs(x) < EMIT_PRUNE_TOL else float(x)

        payload = {
            "picture": "interaction",
            "coeffs": {
                "a": emit(self.a),
                "b": emit(self.b),
                "c_plus": emit(self.c_plus),
                "c_minus": emit(self.c_minus),
            },
            "choi": [
                [[emit(v.real), emit(v.imag)] for v in row]
                for row in self.choi()
            ],
        }
        if self.nu_b is not None:
            payload["nu_B"] = float(self.nu_b)
        if self.e_ab is not None:
            payload["E_AB"] = float(self.e_ab)
        return payload


def _real_coefficient(name: str, value: complex, tol: float) -> float:
    if abs(value.imag) > tol:
        raise InternalConsistencyError(
            f"channel coefficient {name} = {value} has imaginary part "
            f"beyond {tol:.1e}"
        )
    return float(value.real)


def _check_cptp(channel: QubitChannel, tol: float) -> QubitChannel:
    diag = channel.diagnostics()
    if diag["trace_defect"] > tol:
        raise InternalConsistencyError(
            f"channel is not trace preserving: defect "
            f"{diag['trace_defect']:.3e} exceeds {tol:.1e}"
        )
    if diag["positivity_defect"] > tol:
        raise InternalConsistencyError(
            f"channel is not completely positive: Choi eigenvalue "
            f"-{diag['positivity_defect']:.3e} below -{tol:.1e}"
        )
    return channel


def general_channel(
    gamma: GammaTensor,
    alpha: float,
    mu: np.ndarray,
    *,
    cptp_tol: float = CPTP_TOL,
) -> QubitChannel:
    """Channel from the moment tensor, valid for any field state.

    ``alpha`` is the first-qubit overlap ``tr(mu_A rho_A)``.  The built
    channel is validated to be completely positive and trace preserving
    within ``cptp_tol``.
    """
    g = gamma.__getitem__
    ia = 1j * alpha
    a = g("cccc") + g("sccs") + ia * (g("sccc") - g("cccs"))
    b = g("cssc") + g("ssss") + ia * (g("sssc") - g("csss"))
    c_plus = g("cscc") + g("sscs") + ia * (g("sscc") - g("cscs"))
    c_minus = g("ccsc") + g("scss") + ia * (g("scsc") - g("ccss"))
    channel = QubitChannel(
        a=_real_coefficient("a", a, cptp_tol),
        b=_real_coefficient("b", b, cptp_tol),
        c_plus=_real_coefficient("c_plus", c_plus, cptp_tol),
        c_minus=_real_coefficient("c_minus", c_minus, cptp_tol),
        mu=mu,
    )
    return _check_cptp(channel, cptp_tol)


def quasifree_channel(
    nu_b: float,
    e_ab: float,
    mu: np.ndarray,
    *,
    cptp_tol: float = CPTP_TOL,
) -> QubitChannel:
    """Closed-form channel for a quasifree field state.

    ``nu_b = exp(-2 W_BB)`` and ``e_ab`` is the commutator form between
    the two kicks.  Valid for the reference first-qubit preparation with
    unit overlap (``alpha = 1``):

        Phi(rho) = (1 + nu cos 2E)/2 rho + (1 - nu cos 2E)/2 mu rho mu
                   - i nu sin(2E)/2 [rho, mu]
    """
    if not 0.0 <= nu_b <= 1.0:
        raise DomainError(f"nu_b must lie in [0, 1], got {nu_b}")
    cos2e = math.cos(2.0 * e_ab)
    sin2e = math.sin(2.0 * e_ab)
    channel = QubitChannel(
        a=0.5 * (1.0 + nu_b * cos2e),
        b=0.5 * (1.0 - nu_b * cos2e),
        c_plus=-0.5 * nu_b * sin2e,
        c_minus=-0.5 * nu_b * sin2e,
        mu=mu,
        nu_b=nu_b,
        e_ab=e_ab,
    )
    return _check_cptp(channel, cptp_tol)


def channel_from_state(
    state,
    label_a,
    label_b,
    mu_a: np.ndarray,
    mu_b: np.ndarray,
    rho_a: np.ndarray,
    *,
    cptp_tol: float = CPTP_TOL,
    check_tol: float = 1e-12,
) -> QubitChannel:
    """Moment-route channel for registered smearings and a prepared qubit."""
    rho_a = validate_density(rho_a)
    gamma = GammaTensor.from_state(
        state, label_a, label_b, check_tol=check_tol
    )
    alpha = alpha_overlap(mu_a, rho_a)
    return general_channel(gamma, alpha, mu_b, cptp_tol=cptp_tol)
