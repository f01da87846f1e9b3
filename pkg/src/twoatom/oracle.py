"""Dense truncated-Fock validator for the qubit-pair channel.

Everything here is deliberately brute force: the two qubits and a
truncated multimode Fock space are evolved as one dense matrix with the
kick unitaries ``U_j = 1 (x) cos Y_j - i mu_j (x) sin Y_j`` assembled by
eigendecomposition, and the second qubit's channel is read off by
tomography of the four basis inputs.  None of the generator algebra or
quasifree moment formulas are reused, so agreement with the analytic
routes is an independent check.

Tensor ordering is fixed as (first qubit) (x) (second qubit) (x)
(mode_1 (x) ... (x) mode_N); the Choi matrix convention matches
:meth:`twoatom.channel.QubitChannel.choi`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import monopole_matrix, validate_density
from .errors import AccuracyError, DomainError, InternalConsistencyError
from .states import ModeCouplings, thermal_occupation

#: unitarity / hermiticity residuals above this abort the run
UNITARITY_TOL = 1e-10

#: truncated thermal tail mass allowed in an accepted report
TAIL_TOL = 1e-10

#: dense evolution is refused above this total Hilbert dimension
DIM_CEILING = 4096

_FIELD_KINDS = ("vacuum", "thermal")


@dataclass(frozen=True)
class TruncatedField:
    """Fock truncation of the mode expansion, with its field state.

    ``cutoff`` is the Fock dimension kept per mode.  The thermal state is
    built mode-wise as a geometric distribution renormalized after
    truncation; ``tail_defect`` reports the discarded mass so accepted
    runs can be required to have a faithful truncation.
    """

    modes: ModeCouplings
    cutoff: int
    kind: str = "vacuum"
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.cutoff < 2:
            raise DomainError(f"Fock cutoff must be at least 2, got {self.cutoff}")
        if self.kind not in _FIELD_KINDS:
            raise DomainError(
                f"unknown field state {self.kind!r}; expected one of {_FIELD_KINDS}"
            )
        if self.kind == "thermal":
            if self.beta is None or self.beta <= 0:
                raise DomainError(
                    "thermal field state needs a positive inverse temperature"
                )
        elif self.beta is not None:
            raise DomainError("beta is only meaningful for the thermal state")

    @property
    def n_modes(self) -> int:
        return len(self.modes.omegas)

    @property
    def field_dim(self) -> int:
        return self.cutoff**self.n_modes

    @property
    def tail_defect(self) -> float:
        """Probability mass lost to the truncation, before renormalizing."""
        if self.kind == "vacuum":
            return 0.0
        ratio = np.exp(-self.beta * np.asarray(self.modes.omegas, dtype=float))
        kept = -np.expm1(self.cutoff * np.log(ratio))
        return float(1.0 - np.prod(kept))

    def annihilators(self) -> list[np.ndarray]:
        """Per-mode lowering operators embedded in the full field space."""
        c = self.cutoff
        a = np.diag(np.sqrt(np.arange(1, c, dtype=float)), 1).astype(complex)
        eye = np.eye(c, dtype=complex)
        ops = []
        for k in range(self.n_modes):
            full = np.array([[1.0 + 0.0j]])
            for pos in range(self.n_modes):
                full = np.kron(full, a if pos == k else eye)
            ops.append(full)
        return ops

    def density(self) -> np.ndarray:
        """Field density matrix on the truncated space, trace one."""
        if self.kind == "vacuum":
            rho = np.zeros((self.field_dim, self.field_dim), dtype=complex)
            rho[0, 0] = 1.0
            return rho
        weights = np.array([1.0])
        levels = np.arange(self.cutoff, dtype=float)
        for omega in np.asarray(self.modes.omegas, dtype=float):
            p = np.exp(-self.beta * omega * levels)
            weights = np.kron(weights, p / p.sum())
        return np.diag(weights.astype(complex))


def build_y(field: TruncatedField, label) -> np.ndarray:
    """Smeared field operator ``sum_k g_k a_k + conj(g_k) a_k^dag``."""
    row = field.modes.row(label)
    y = np.zeros((field.field_dim, field.field_dim), dtype=complex)
    for g_k, a_k in zip(row, field.annihilators()):
        y += g_k * a_k + np.conj(g_k) * a_k.conj().T
    return y


def _trig_pair(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(cos Y, sin Y)`` by eigendecomposition; Y must be Hermitian."""
    defect = np.abs(y - y.conj().T).max() if y.size else 0.0
    if defect > UNITARITY_TOL:
        raise InternalConsistencyError(
            f"smeared operator is not Hermitian: defect {defect:.3e}"
        )
    w, v = np.linalg.eigh(y)
    vh = v.conj().T
    return (v * np.cos(w)) @ vh, (v * np.sin(w)) @ vh


def delta_unitary(y: np.ndarray, mu) -> np.ndarray:
    """Kick unitary ``1 (x) cos Y - i mu (x) sin Y`` on qubit (x) field."""
    cos_y, sin_y = _trig_pair(y)
    u = np.kron(np.eye(2, dtype=complex), cos_y) - 1j * np.kron(
        monopole_matrix(mu), sin_y
    )
    defect = np.abs(u @ u.conj().T - np.eye(u.shape[0])).max()
    if defect > UNITARITY_TOL:
        raise InternalConsistencyError(
            f"kick unitary fails unitarity by {defect:.3e}"
        )
    return u


def kick_unitaries(
    field: TruncatedField, mu_a, mu_b
) -> tuple[np.ndarray, np.ndarray]:
    """Both kicks embedded in the full qubit (x) qubit (x) field space."""
    eye2 = np.eye(2, dtype=complex)
    label_a, label_b = field.modes.labels
    unitaries = []
    for label, mu, slot in ((label_a, mu_a, 0), (label_b, mu_b, 1)):
        cos_y, sin_y = _trig_pair(build_y(field, label))
        mu_mat = monopole_matrix(mu)
        if slot == 0:
            u = np.kron(eye2, np.kron(eye2, cos_y)) - 1j * np.kron(
                mu_mat, np.kron(eye2, sin_y)
            )
        else:
            u = np.kron(eye2, np.kron(eye2, cos_y)) - 1j * np.kron(
                eye2, np.kron(mu_mat, sin_y)
            )
        defect = np.abs(u @ u.conj().T - np.eye(u.shape[0])).max()
        if defect > UNITARITY_TOL:
            raise InternalConsistencyError(
                f"kick unitary fails unitarity by {defect:.3e}"
            )
        unitaries.append(u)
    return unitaries[0], unitaries[1]


@dataclass(frozen=True)
class OracleReport:
    """Converged tomography result."""

    choi: np.ndarray
    cutoff_used: int
    convergence_residual: float

    def to_payload(self) -> dict:
        return {
            "choi_re": self.choi.real.tolist(),
            "choi_im": self.choi.imag.tolist(),
            "cutoff_used": self.cutoff_used,
            "convergence_residual": self.convergence_residual,
        }


def choi_at_cutoff(
    field: TruncatedField, mu_a, mu_b, rho_a: np.ndarray
) -> np.ndarray:
    """Choi matrix of the second qubit's channel at a fixed cutoff."""
    rho_a = validate_density(rho_a)
    total_dim = 4 * field.field_dim
    if total_dim > DIM_CEILING:
        raise AccuracyError(
            f"dense evolution needs dimension {total_dim} > {DIM_CEILING}; "
            "reduce the cutoff or the mode count"
        )
    u_a, u_b = kick_unitaries(field, mu_a, mu_b)
    u = u_b @ u_a
    uh = u.conj().T
    rho_f = field.density()
    dim_f = field.field_dim
    eye = np.eye(2)
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            basis = np.outer(eye[i], eye[j])
            rho0 = np.kron(np.kron(rho_a, basis), rho_f)
            out = u @ rho0 @ uh
            block = np.einsum(
                "aifajf->ij", out.reshape(2, 2, dim_f, 2, 2, dim_f)
            )
            choi[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = block
    return choi


def cutoff_schedule(start: int, ceiling: int) -> list[int]:
    """Increasing cutoffs: start, then x1.5 rounded up, capped at ceiling."""
    if start < 2 or ceiling < start:
        raise DomainError("need 2 <= cutoff_start <= cutoff_ceiling")
    schedule = [start]
    while schedule[-1] < ceiling:
        schedule.append(min(math.ceil(1.5 * schedule[-1]), ceiling))
    return schedule


def oracle_channel(
    modes: ModeCouplings,
    mu_a,
    mu_b,
    rho_a: np.ndarray,
    *,
    kind: str = "vacuum",
    beta: float | None = None,
    adaptive_tol: float = 1e-6,
    cutoff_start: int = 8,
    cutoff_ceiling: int = 64,
) -> OracleReport:
    """Tomography with the cutoff raised until the Choi matrix settles.

    Convergence requires the Frobenius change between consecutive cutoffs
    to drop below ``adaptive_tol`` and the truncated field state to hold
    all but ``TAIL_TOL`` of its mass.  Exhausting the schedule, or hitting
    the dense-dimension ceiling first, raises an accuracy error carrying
    the last residual.
    """
    previous = None
    residual = math.inf
    for cutoff in cutoff_schedule(cutoff_start, cutoff_ceiling):
        field = TruncatedField(modes=modes, cutoff=cutoff, kind=kind, beta=beta)
        if 4 * field.field_dim > DIM_CEILING:
            raise AccuracyError(
                f"cutoff {cutoff} needs dense dimension {4 * field.field_dim} "
                f"> {DIM_CEILING} before reaching tolerance "
                f"{adaptive_tol:.1e}; last residual {residual:.3e}",
                estimate=residual,
            )
        choi = choi_at_cutoff(field, mu_a, mu_b, rho_a)
        if previous is not None:
            residual = float(np.linalg.norm(choi - previous))
            if residual < adaptive_tol and field.tail_defect <= TAIL_TOL:
                return OracleReport(
                    choi=choi, cutoff_used=cutoff, convergence_residual=residual
                )
        previous = choi
    raise AccuracyError(
        f"cutoff ceiling {cutoff_ceiling} reached with residual "
        f"{residual:.3e} above tolerance {adaptive_tol:.1e}",
        estimate=residual,
    )
