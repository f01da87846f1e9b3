"""Quasifree field states reduced to their two-point data.

A quasifree state is fixed on the detector algebra by two bilinear forms
over the registered smearing functions:

* ``W_ij`` -- the two-point correlator ``w(Y_i Y_j)``, Hermitian with
  positive-semidefinite real part;
* ``E_ij`` -- the commutator form ``-i [Y_i, Y_j]``, real and
  antisymmetric, state independent, and tied to ``W`` by
  ``E_ij = 2 Im W_ij``.

Everything downstream (Weyl reduction phases, expectation values, channel
coefficients) consumes only these matrices, so a state is represented by a
:class:`BilinearData` plus a descriptive tag.  Constructors are provided
for vacuum and thermal states over a finite mode expansion,

    W_ij(vacuum)  = sum_k g_ik conj(g_jk),
    W_ij(thermal) = sum_k (1 + n_k) g_ik conj(g_jk) + n_k conj(g_ik) g_jk,

with occupation numbers ``n_k = 1/(exp(beta w_k) - 1)``.  The thermal
constructor reuses the vacuum commutator matrix verbatim, so state
independence of ``E`` holds exactly, not merely to rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnregisteredSmearingError
from .weyl import CombinedSmearing

#: tolerance for the symmetry/consistency relations of bilinear data
VALIDATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BilinearData:
    """Correlator and commutator matrices over registered smearings.

    Parameters
    ----------
    labels : tuple
        Registered smearing labels (hashable), one per matrix row.
    w : complex ndarray, shape (n, n)
        Two-point correlator matrix.
    e : real ndarray, shape (n, n)
        Commutator form.  Must equal ``2 Im w`` within the validation
        tolerance and be exactly antisymmetric up to it.
    """

    labels: tuple
    w: np.ndarray
    e: np.ndarray
    validation_tol: float = VALIDATION_TOL
    _pos: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        w = np.array(self.w, dtype=complex)
        e = np.array(self.e, dtype=float)
        n = len(labels)
        if len(set(labels)) != n:
            raise DomainError("duplicate smearing labels")
        if w.shape != (n, n) or e.shape != (n, n):
            raise DomainError(
                f"matrix shapes {w.shape}, {e.shape} do not match {n} labels"
            )
        tol = self.validation_tol
        scale = max(1.0, float(np.abs(w).max()) if n else 1.0)
        if n:
            if np.abs(w - w.conj().T).max() > tol * scale:
                raise DomainError("correlator matrix is not Hermitian")
            if np.abs(e + e.T).max() > tol * scale:
                raise DomainError("commutator form is not antisymmetric")
            if np.abs(e - 2.0 * w.imag).max() > tol * scale:
                raise DomainError("commutator form does not equal 2 Im W")
            eigs = np.linalg.eigvalsh(w.real)
            if eigs.min() < -tol * scale:
                raise DomainError(
                    f"Re W has negative eigenvalue {eigs.min():.3e}"
                )
            diag = w.real.diagonal()
            bound = 4.0 * np.outer(diag, diag)
            if (e**2 - bound).max() > tol * scale**2:
                raise DomainError(
                    "commutator entry exceeds the correlator uncertainty bound"
                )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "_pos", {lab: i for i, lab in enumerate(labels)})
        self.w.setflags(write=False)
        self.e.setflags(write=False)

    # -- label-level access ------------------------------------------------
    def index_of(self, label) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise UnregisteredSmearingError(
                f"smearing label {label!r} is not registered "
                f"(known: {list(self._pos)})"
            ) from None

    def w_entry(self, label_i, label_j) -> complex:
        return complex(self.w[self.index_of(label_i), self.index_of(label_j)])

    def e_entry(self, label_i, label_j) -> float:
        return float(self.e[self.index_of(label_i), self.index_of(label_j)])

    # -- bilinear extension to integer combinations ------------------------
    def causal_form(self, arg1: CombinedSmearing, arg2: CombinedSmearing) -> float:
        """E(h1, h2) extended bilinearly to integer combinations."""
        total = 0.0
        for label_i, mult_i in arg1.items():
            row = self.e[self.index_of(label_i)]
            for label_j, mult_j in arg2.items():
                total += (mult_i * mult_j) * row[self.index_of(label_j)]
        return total

    def symmetric_form(self, arg: CombinedSmearing) -> float:
        """W(h, h) for an integer combination; real by Hermiticity."""
        total = 0.0
        for label_i, mult_i in arg.items():
            row = self.w[self.index_of(label_i)]
            for label_j, mult_j in arg.items():
                total += (mult_i * mult_j) * row[self.index_of(label_j)].real
        return total

    def correlator(self, arg1: CombinedSmearing, arg2: CombinedSmearing) -> complex:
        """W(h1, h2) extended bilinearly (complex in general)."""
        total = 0.0 + 0.0j
        for label_i, mult_i in arg1.items():
            row = self.w[self.index_of(label_i)]
            for label_j, mult_j in arg2.items():
                total += (mult_i * mult_j) * row[self.index_of(label_j)]
        return total

    # -- serialization -----------------------------------------------------
    def to_payload(self) -> dict:
        """JSON-ready dict: W as [re, im] pairs, E as real entries."""
        return {
            "labels": list(self.labels),
            "W": [
                [[float(v.real), float(v.imag)] for v in row] for row in self.w
            ],
            "E": [[float(v) for v in row] for row in self.e],
        }

    @staticmethod
    def from_payload(payload: dict) -> "BilinearData":
        try:
            labels = tuple(payload["labels"])
            w = np.array(
                [[complex(re, im) for re, im in row] for row in payload["W"]],
                dtype=complex,
            )
            e = np.array(payload["E"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed bilinear-data payload: {exc}") from exc
        return BilinearData(labels=labels, w=w, e=e)

    def to_json(self) -> str:
        return json.dumps(self.to_payload())

    @staticmethod
    def from_json(text: str) -> "BilinearData":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON: {exc}") from exc
        return BilinearData.from_payload(payload)


@dataclass(frozen=True, eq=False)
class ModeCouplings:
    """Discrete mode expansion of the smeared field operators.

    ``Y_j = sum_k g_jk a_k + conj(g_jk) a_k^dag`` with mode frequencies
    ``omegas``.  Row ``j`` of ``g`` belongs to ``labels[j]``.
    """

    labels: tuple
    omegas: np.ndarray
    g: np.ndarray

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise DomainError("duplicate detector labels")
        omegas = np.array(self.omegas, dtype=float)
        g = np.array(self.g, dtype=complex)
        if omegas.ndim != 1:
            raise DomainError("omegas must be one-dimensional")
        if np.any(omegas <= 0):
            raise DomainError("mode frequencies must be positive")
        if g.shape != (len(labels), omegas.size):
            raise DomainError(
                f"coupling matrix shape {g.shape} does not match "
                f"{len(labels)} detectors x {omegas.size} modes"
            )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "g", g)
        self.omegas.setflags(write=False)
        self.g.setflags(write=False)

    @property
    def n_modes(self) -> int:
        return int(self.omegas.size)

    def row(self, label) -> np.ndarray:
        try:
            return self.g[self.labels.index(label)]
        except ValueError:
            raise UnregisteredSmearingError(
                f"label {label!r} has no coupling row"
            ) from None


def _vacuum_matrices(modes: ModeCouplings) -> tuple[np.ndarray, np.ndarray]:
    w = modes.g @ modes.g.conj().T
    e = 2.0 * w.imag
    return w, e


def vacuum_from_modes(modes: ModeCouplings) -> "QuasifreeState":
    """Vacuum two-point data ``W = g g^dag`` over the given modes."""
    w, e = _vacuum_matrices(modes)
    data = BilinearData(labels=modes.labels, w=w, e=e)
    return QuasifreeState(data=data, kind="vacuum")


def thermal_occupation(beta: float, omegas: np.ndarray) -> np.ndarray:
    """Bose occupation 1/(exp(beta w) - 1), stable for small and large beta w."""
    x = beta * np.asarray(omegas, dtype=float)
    return np.exp(-x) / (-np.expm1(-x))


def thermal_from_modes(modes: ModeCouplings, beta: float) -> "QuasifreeState":
    """Thermal two-point data at inverse temperature ``beta``.

    The commutator form is copied from the vacuum construction, making the
    state independence of ``E`` exact by construction.
    """
    if beta <= 0:
        raise DomainError("inverse temperature must be positive")
    occ = thermal_occupation(beta, modes.omegas)
    g = modes.g
    w = ((1.0 + occ) * g) @ g.conj().T + (occ * g.conj()) @ g.T
    _, e_vac = _vacuum_matrices(modes)
    data = BilinearData(labels=modes.labels, w=w, e=e_vac)
    return QuasifreeState(data=data, kind="thermal", beta=float(beta))


@dataclass(frozen=True, eq=False)
class QuasifreeState:
    """A quasifree state identified by its bilinear data.

    Delegates the form accessors so it can be passed directly to the
    algebra routines in :mod:`twoatom.weyl`.
    """

    data: BilinearData
    kind: str = "custom"
    beta: float | None = None

    def causal_form(self, arg1: CombinedSmearing, arg2: CombinedSmearing) -> float:
        return self.data.causal_form(arg1, arg2)

    def symmetric_form(self, arg: CombinedSmearing) -> float:
        return self.data.symmetric_form(arg)

    def nu_factor(self, label: int) -> float:
        """Displacement damping w(V(2 h_j)) = exp(-2 W_jj), in (0, 1]."""
        return float(np.exp(-2.0 * self.data.w_entry(label, label).real))
