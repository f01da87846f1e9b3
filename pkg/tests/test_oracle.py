"""Truncated-Fock oracle tests.

The oracle is itself a validator, so these tests pin its building blocks
to closed expressions and check its failure modes, then compare full runs
against the analytic channel on small mode sets.
"""

import numpy as np
import pytest
from scipy.linalg import expm

from twoatom.channel import Monopole, channel_from_state, plus_state
from twoatom.errors import AccuracyError, DomainError
from twoatom.oracle import (
    DIM_CEILING,
    OracleReport,
    TruncatedField,
    build_y,
    choi_at_cutoff,
    cutoff_schedule,
    delta_unitary,
    kick_unitaries,
    oracle_channel,
)
from twoatom.states import ModeCouplings, thermal_from_modes, vacuum_from_modes

MU_A = Monopole(gap=0.8, tau=0.0)
MU_B = Monopole(gap=1.3, tau=0.4)


def pair_modes(*columns: tuple) -> ModeCouplings:
    g = np.array(columns, dtype=complex).T
    return ModeCouplings(
        labels=("A", "B"),
        omegas=np.linspace(1.0, 1.0 + 0.5 * (g.shape[1] - 1), g.shape[1]),
        g=g,
    )


def test_build_y_single_mode_is_quadrature():
    modes = pair_modes((1.0, 0.0))
    field = TruncatedField(modes=modes, cutoff=2)
    assert np.array_equal(build_y(field, "A"), np.array([[0, 1], [1, 0]]))
    assert np.abs(build_y(field, "B")).max() == 0.0


def test_build_y_hermitian():
    modes = pair_modes((0.4 + 0.2j, -0.3j), (0.1 - 0.5j, 0.25))
    field = TruncatedField(modes=modes, cutoff=6)
    for label in ("A", "B"):
        y = build_y(field, label)
        assert np.abs(y - y.conj().T).max() < 1e-15


def test_vacuum_cross_moment_matches_bilinear_data():
    modes = pair_modes((0.4 + 0.2j, -0.3j), (0.1 - 0.5j, 0.25))
    field = TruncatedField(modes=modes, cutoff=5)
    y_a, y_b = build_y(field, "A"), build_y(field, "B")
    vec0 = np.zeros(field.field_dim, dtype=complex)
    vec0[0] = 1.0
    value = vec0 @ y_a @ y_b @ vec0
    expected = vacuum_from_modes(modes).data.w_entry("A", "B")
    assert abs(value - expected) < 1e-14


def test_delta_unitary_against_exponential():
    rng = np.random.default_rng(7)
    raw = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    y = raw + raw.conj().T
    mu = np.array(Monopole(gap=1.1, tau=0.3).matrix)
    direct = delta_unitary(y, mu)
    reference = expm(-1j * np.kron(mu, y))
    assert np.abs(direct - reference).max() < 1e-12
    assert np.abs(delta_unitary(np.zeros((4, 4)), mu) - np.eye(8)).max() == 0.0


def test_interior_commutator_is_central():
    modes = pair_modes((0.4 + 0.2j, -0.3j), (0.1 - 0.5j, 0.25))
    field = TruncatedField(modes=modes, cutoff=12)
    y_a, y_b = build_y(field, "A"), build_y(field, "B")
    comm = -1j * (y_a @ y_b - y_b @ y_a)
    e_ab = vacuum_from_modes(modes).data.e_entry("A", "B")
    full_defect = np.abs(comm - e_ab * np.eye(field.field_dim)).max()
    assert full_defect > 1e-3  # truncation edge never becomes central

    levels = np.indices((12, 12)).reshape(2, -1)
    mask = (levels < 11).all(axis=0)
    block = comm[np.ix_(mask, mask)]
    defect = np.abs(block - e_ab * np.eye(mask.sum())).max()
    assert defect < 1e-12


def test_thermal_commutator_leakage_decreases():
    modes = pair_modes((0.5, 0.3 + 0.2j))
    e_ab = vacuum_from_modes(modes).data.e_entry("A", "B")
    leakages = []
    for cutoff in (4, 8, 16):
        field = TruncatedField(modes=modes, cutoff=cutoff, kind="thermal", beta=1.0)
        comm = -1j * (
            build_y(field, "A") @ build_y(field, "B")
            - build_y(field, "B") @ build_y(field, "A")
        )
        sqrt_rho = np.sqrt(field.density().real.diagonal())
        defect = (comm - e_ab * np.eye(field.field_dim)) * sqrt_rho[None, :]
        leakages.append(np.linalg.norm(defect))
    assert leakages[0] > leakages[1] > leakages[2]


def test_oracle_matches_analytic_vacuum():
    modes = pair_modes((0.5 + 0.2j, -0.3 + 0.4j))
    report = oracle_channel(modes, MU_A, MU_B, plus_state())
    analytic = channel_from_state(
        vacuum_from_modes(modes), "A", "B", MU_A, MU_B, plus_state()
    ).choi()
    assert np.linalg.norm(report.choi - analytic) < 1e-6
    assert report.cutoff_used <= 32
    assert report.convergence_residual < 1e-6


def test_oracle_matches_analytic_thermal():
    modes = pair_modes((0.5 + 0.2j, -0.3 + 0.4j))
    report = oracle_channel(modes, MU_A, MU_B, plus_state(), kind="thermal", beta=1.2)
    analytic = channel_from_state(
        thermal_from_modes(modes, beta=1.2), "A", "B", MU_A, MU_B, plus_state()
    ).choi()
    assert np.linalg.norm(report.choi - analytic) < 1e-6
    field = TruncatedField(
        modes=modes, cutoff=report.cutoff_used, kind="thermal", beta=1.2
    )
    assert field.tail_defect <= 1e-10


def test_oracle_dimension_ceiling():
    g = 0.1 * np.ones((2, 4), dtype=complex)
    modes = ModeCouplings(
        labels=("A", "B"), omegas=np.array([1.0, 1.5, 2.0, 2.5]), g=g
    )
    with pytest.raises(AccuracyError, match="dimension"):
        oracle_channel(modes, MU_A, MU_B, plus_state())
    field = TruncatedField(modes=modes, cutoff=9)
    assert 4 * field.field_dim > DIM_CEILING
    with pytest.raises(AccuracyError):
        choi_at_cutoff(field, MU_A, MU_B, plus_state())


def test_oracle_schedule_exhaustion():
    modes = pair_modes((0.5, 0.3))
    with pytest.raises(AccuracyError) as excinfo:
        oracle_channel(
            modes, MU_A, MU_B, plus_state(),
            adaptive_tol=1e-30, cutoff_ceiling=12,
        )
    assert excinfo.value.estimate is not None
    assert excinfo.value.estimate > 0.0


def test_truncated_field_validation():
    modes = pair_modes((0.5, 0.3))
    with pytest.raises(DomainError):
        TruncatedField(modes=modes, cutoff=1)
    with pytest.raises(DomainError):
        TruncatedField(modes=modes, cutoff=4, kind="thermal")
    with pytest.raises(DomainError):
        TruncatedField(modes=modes, cutoff=4, kind="vacuum", beta=2.0)
    with pytest.raises(DomainError):
        TruncatedField(modes=modes, cutoff=4, kind="squeezed")


def test_tail_defect_matches_direct_sum():
    modes = pair_modes((0.4, 0.1), (0.2, 0.3))
    field = TruncatedField(modes=modes, cutoff=6, kind="thermal", beta=0.9)
    x = np.exp(-0.9 * np.asarray(modes.omegas))
    direct = 1.0 - np.prod(1.0 - x**6)
    assert field.tail_defect == pytest.approx(direct, rel=1e-12)
    assert TruncatedField(modes=modes, cutoff=6).tail_defect == 0.0


def test_thermal_density_is_renormalized_geometric():
    modes = pair_modes((0.4, 0.1))
    field = TruncatedField(modes=modes, cutoff=5, kind="thermal", beta=1.1)
    rho = field.density()
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)
    p = np.exp(-1.1 * 1.0 * np.arange(5))
    assert np.allclose(rho.diagonal().real, p / p.sum())


def test_cutoff_schedule_values():
    assert cutoff_schedule(8, 64) == [8, 12, 18, 27, 41, 62, 64]
    assert cutoff_schedule(8, 8) == [8]
    with pytest.raises(DomainError):
        cutoff_schedule(1, 8)
    with pytest.raises(DomainError):
        cutoff_schedule(8, 4)


def test_kick_unitaries_are_unitary():
    modes = pair_modes((0.4 + 0.2j, -0.3j), (0.1 - 0.5j, 0.25))
    field = TruncatedField(modes=modes, cutoff=6)
    u_a, u_b = kick_unitaries(field, MU_A, MU_B)
    dim = 4 * field.field_dim
    for u in (u_a, u_b):
        assert u.shape == (dim, dim)
        assert np.abs(u @ u.conj().T - np.eye(dim)).max() < 1e-12


def test_report_payload():
    choi = np.array([[1.0, 0.5j], [-0.5j, 1.0]])
    report = OracleReport(choi=choi, cutoff_used=12, convergence_residual=3e-8)
    payload = report.to_payload()
    assert payload["cutoff_used"] == 12
    assert payload["convergence_residual"] == 3e-8
    assert payload["choi_re"][0][0] == 1.0
    assert payload["choi_im"][0][1] == 0.5
