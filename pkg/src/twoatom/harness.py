"""Experiment orchestration: single points, sweeps, measurement
scenarios, and oracle cross-checks.

Everything here consumes an :class:`~twoatom.config.ExperimentConfig`
and emits plain rows and payload dictionaries; file and process concerns
stay in :mod:`twoatom.cli`.  Sweep grid points are independent, so they
may be evaluated by a process pool; results are always reported in axis
order.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import (
    Monopole,
    QubitChannel,
    bloch_state,
    channel_from_state,
    excited_state,
    ground_state,
    plus_state,
)
from .config import (
    BOX,
    CONTINUUM,
    THERMAL,
    VACUUM,
    ExperimentConfig,
)
from .errors import DomainError, InternalConsistencyError, TwoAtomError
from .geometry import (
    DetectorSpec,
    box_mode_couplings,
    classify_pair,
    detector_pair_data,
)
from .measurement import (
    EXCITED,
    GROUND,
    averaged_channel,
    outcome_probability,
    tilde_channel,
)
from .oracle import oracle_channel
from .states import (
    ModeCouplings,
    QuasifreeState,
    thermal_from_modes,
    vacuum_from_modes,
)

CSV_COLUMNS = (
    "d",
    "dt",
    "E_AB",
    "W_BB",
    "nu_B",
    "a",
    "b",
    "c_plus",
    "c_minus",
    "p_exc",
    "causal_flag",
    "quadrature_error",
    "error",
)


def initial_density(init) -> np.ndarray:
    """Qubit density matrix from a detector's init tag."""
    if init == "ground":
        return ground_state()
    if init == "excited":
        return excited_state()
    if init == "plus":
        return plus_state()
    if isinstance(init, tuple) and len(init) == 3 and init[0] == "bloch":
        _, theta, phi = init
        return bloch_state(
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )
    raise DomainError(f"unknown detector init {init!r}")


@dataclass(frozen=True)
class PointResult:
    """One evaluated configuration: channel plus its summary row."""

    d: float
    dt: float
    e_ab: float
    w_bb: float
    nu_b: float
    channel: QubitChannel
    p_exc: float
    causal_flag: str
    quadrature_error: float

    def row(self) -> dict:
        return {
            "d": self.d,
            "dt": self.dt,
            "E_AB": self.e_ab,
            "W_BB": self.w_bb,
            "nu_B": self.nu_b,
            "a": self.channel.a,
            "b": self.channel.b,
            "c_plus": self.channel.c_plus,
            "c_minus": self.channel.c_minus,
            "p_exc": self.p_exc,
            "causal_flag": self.causal_flag,
            "quadrature_error": self.quadrature_error,
            "error": "",
        }

    def to_payload(self) -> dict:
        payload = self.row()
        del payload["error"]
        payload["channel"] = self.channel.to_payload()
        payload["diagnostics"] = {
            k: v
            for k, v in self.channel.diagnostics().items()
            if k != "choi_eigenvalues"
        }
        return payload


def _field_state(cfg: ExperimentConfig):
    """Quasifree state and (label_a, label_b, quadrature_error) for a config."""
    a, b = cfg.detector_a, cfg.detector_b
    if cfg.backend == CONTINUUM:
        if cfg.field_kind == THERMAL:
            raise DomainError(
                "thermal field data needs a discrete mode expansion; "
                "use geometry.backend = box"
            )
        pair = detector_pair_data(a, b, tol=cfg.quadrature_tol)
        state = QuasifreeState(data=pair.bilinear, kind="vacuum")
        return state, pair.label_a, pair.label_b, pair.quadrature_error
    modes = box_mode_couplings(cfg.box, {"A": a, "B": b})
    if cfg.field_kind == VACUUM:
        state = vacuum_from_modes(modes)
    else:
        state = thermal_from_modes(modes, beta=cfg.beta)
    return state, "A", "B", 0.0


def _check_ordering(cfg: ExperimentConfig) -> None:
    geometry = classify_pair(cfg.detector_a, cfg.detector_b)
    if not geometry.spacelike and cfg.detector_b.time <= cfg.detector_a.time:
        raise DomainError(
            "second kick must come after the first unless the supports "
            f"are spacelike; got relation {geometry.relation!r} with "
            f"time gap {geometry.time_gap!r}"
        )


def run_point(cfg: ExperimentConfig) -> PointResult:
    """Geometry -> bilinear data -> channel for one configuration."""
    _check_ordering(cfg)
    a, b = cfg.detector_a, cfg.detector_b
    geometry = classify_pair(a, b)
    state, label_a, label_b, quad_err = _field_state(cfg)
    mu_a = Monopole(gap=a.gap, tau=a.time)
    mu_b = Monopole(gap=b.gap, tau=b.time)
    channel = channel_from_state(
        state, label_a, label_b, mu_a, mu_b, initial_density(a.init)
    )
    return PointResult(
        d=geometry.separation,
        dt=geometry.time_gap,
        e_ab=state.data.e_entry(label_a, label_b),
        w_bb=state.data.w_entry(label_b, label_b).real,
        nu_b=state.nu_factor(label_b),
        channel=channel,
        p_exc=channel.excitation_probability(ground_state()),
        causal_flag=geometry.relation,
        quadrature_error=quad_err,
    )


def _sweep_config(cfg: ExperimentConfig, value: float) -> ExperimentConfig:
    axis = cfg.sweep.axis
    a, b = cfg.detector_a, cfg.detector_b
    if axis == "separation":
        center = (a.center[0] + value, a.center[1], a.center[2])
        b = dataclasses.replace(b, center=center)
    elif axis == "time_gap":
        b = dataclasses.replace(b, time=a.time + value)
    elif axis == "lambda_a":
        a = dataclasses.replace(a, coupling=value)
    elif axis == "sigma_a":
        a = dataclasses.replace(a, sigma=value)
    else:  # pragma: no cover - SweepBlock validates the axis
        raise DomainError(f"unknown sweep axis {axis!r}")
    return dataclasses.replace(cfg, detector_a=a, detector_b=b, sweep=None)


def _error_row(message: str) -> dict:
    row = {name: math.nan for name in CSV_COLUMNS}
    row["causal_flag"] = ""
    row["error"] = message
    return row


def _evaluate_sweep_point(args) -> dict:
    cfg, value = args
    try:
        return run_point(_sweep_config(cfg, value)).row()
    except TwoAtomError as exc:
        return _error_row(f"{type(exc).__name__}: {exc}")


def sweep_values(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.sweep is None:
        raise DomainError("config has no sweep block")
    return np.linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.count)


def run_sweep(cfg: ExperimentConfig, jobs: int = 1) -> list[dict]:
    """One result row per grid point, in axis order.

    Failures are captured per row in the ``error`` column rather than
    aborting the whole grid.
    """
    tasks = [(cfg, float(v)) for v in sweep_values(cfg)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_evaluate_sweep_point, tasks))
    else:
        rows = [_evaluate_sweep_point(task) for task in tasks]
    return rows


def format_csv(rows: list[dict]) -> str:
    """Deterministic CSV text: fixed column order, repr floats."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        cells = []
        for name in CSV_COLUMNS:
            value = row[name]
            cells.append(repr(value) if isinstance(value, float) else str(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _coefficient_deltas(lhs: QubitChannel, rhs: QubitChannel) -> dict:
    return {
        "a": lhs.a - rhs.a,
        "b": lhs.b - rhs.b,
        "c_plus": lhs.c_plus - rhs.c_plus,
        "c_minus": lhs.c_minus - rhs.c_minus,
    }


def run_measure(cfg: ExperimentConfig) -> dict:
    """Measurement scenario report.

    The first detector must be prepared excited; its energy measurement
    happens between the kicks.  ``measure.outcome`` selects either one
    conditioned channel or the outcome-averaged one, which is compared
    against the unconditioned channel.
    """
    if cfg.measure is None:
        raise DomainError("config has no measure block")
    if cfg.detector_a.init != "excited":
        raise DomainError(
            "measurement scenario needs detector_a.init = excited"
        )
    _check_ordering(cfg)
    geometry = classify_pair(cfg.detector_a, cfg.detector_b)
    state, label_a, label_b, quad_err = _field_state(cfg)
    mu_a = Monopole(gap=cfg.detector_a.gap, tau=cfg.detector_a.time)
    mu_b = Monopole(gap=cfg.detector_b.gap, tau=cfg.detector_b.time)
    unconditioned = channel_from_state(
        state, label_a, label_b, mu_a, mu_b, excited_state()
    )
    p_ground = outcome_probability(state, label_a, GROUND)
    p_excited = outcome_probability(state, label_a, EXCITED)
    report = {
        "outcome": cfg.measure.outcome,
        "causal_flag": geometry.relation,
        "bob_in_future": geometry.bob_in_future,
        "quadrature_error": quad_err,
        "probabilities": {
            GROUND: p_ground,
            EXCITED: p_excited,
            "sum_defect": abs(p_ground + p_excited - 1.0),
        },
        "unconditioned_channel": unconditioned.to_payload(),
    }
    if cfg.measure.outcome == "average":
        averaged = averaged_channel(state, label_a, label_b, mu_b)
        deltas = _coefficient_deltas(averaged, unconditioned)
        report["averaged_channel"] = averaged.to_payload()
        report["mixture_residual"] = max(abs(v) for v in deltas.values())
    else:
        conditioned = tilde_channel(
            state, label_a, label_b, cfg.measure.outcome, mu_b
        )
        deltas = _coefficient_deltas(conditioned, unconditioned)
        report["conditioned_channel"] = conditioned.to_payload()
        report["coefficient_deltas"] = deltas
        report["max_coefficient_delta"] = max(abs(v) for v in deltas.values())
    return report


def run_oracle_check(cfg: ExperimentConfig) -> dict:
    """Analytic channel vs dense truncated-Fock tomography.

    Raises an internal-consistency error when the two Choi matrices
    disagree beyond the oracle tolerance.
    """
    if cfg.oracle is None:
        raise DomainError("config has no oracle block")
    blk = cfg.oracle
    modes = ModeCouplings(
        labels=("A", "B"),
        omegas=np.asarray(blk.omegas, dtype=float),
        g=np.array([blk.couplings_a, blk.couplings_b]),
    )
    if cfg.field_kind == VACUUM:
        state = vacuum_from_modes(modes)
        kind, beta = "vacuum", None
    else:
        state = thermal_from_modes(modes, beta=cfg.beta)
        kind, beta = "thermal", cfg.beta
    mu_a = Monopole(gap=cfg.detector_a.gap, tau=cfg.detector_a.time)
    mu_b = Monopole(gap=cfg.detector_b.gap, tau=cfg.detector_b.time)
    rho_a = initial_density(cfg.detector_a.init)
    analytic = channel_from_state(state, "A", "B", mu_a, mu_b, rho_a)
    report = oracle_channel(
        modes,
        mu_a,
        mu_b,
        rho_a,
        kind=kind,
        beta=beta,
        adaptive_tol=blk.tolerance,
        cutoff_start=blk.cutoff_start,
        cutoff_ceiling=blk.cutoff_ceiling,
    )
    mismatch = float(np.abs(report.choi - analytic.choi()).max())
    payload = {
        "analytic_channel": analytic.to_payload(),
        "oracle": report.to_payload(),
        "mismatch": mismatch,
        "tolerance": blk.tolerance,
        "match": mismatch <= blk.tolerance,
    }
    if mismatch > blk.tolerance:
        raise InternalConsistencyError(
            f"oracle Choi deviates from the analytic channel by "
            f"{mismatch:.3e} (tolerance {blk.tolerance:.1e})"
        )
    return payload
