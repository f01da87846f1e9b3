"""Acceptance suite: one test per advertised guarantee.

Each test is named ``test_criterion_<n>_<name>``; the terminal summary
prints one ``ACCEPTANCE <n> <name>: PASS|FAIL`` line per criterion (see
``conftest.py``).  Tolerances here are contractual, not adjustable.
"""

import numpy as np
import pytest

from twoatom.channel import (
    Monopole,
    channel_from_state,
    plus_state,
    quasifree_channel,
)
from twoatom.config import ExperimentConfig, MeasureBlock
from twoatom.geometry import (
    BoxSpec,
    DetectorSpec,
    box_mode_couplings,
    causal_propagator,
    detector_pair_data,
    smeared_wightman,
)
from twoatom.harness import run_measure, run_point
from twoatom.measurement import tilde_channel
from twoatom.oracle import oracle_channel
from twoatom.states import (
    BilinearData,
    ModeCouplings,
    QuasifreeState,
    thermal_from_modes,
    vacuum_from_modes,
)
from twoatom.weyl import (
    COS,
    SIN,
    CombinedSmearing,
    WeylCombination,
    cos_combination,
    reduce_product,
    sin_combination,
    trig_to_weyl,
)

SIGMA = 0.25


def bump(x: float, **kw) -> DetectorSpec:
    kw.setdefault("time", 0.0)
    return DetectorSpec(center=(x, 0.0, 0.0), sigma=SIGMA, profile="bump", **kw)


# ---------------------------------------------------------------------------
# 1: spacelike configurations leave the second qubit untouched by the first
# ---------------------------------------------------------------------------

def test_criterion_1_causality():
    results = []
    for coupling in (0.0, 0.1, 0.5, 1.0):
        for gap in (0.5, 2.0):
            for init in ("ground", "excited", "plus"):
                cfg = ExperimentConfig(
                    detector_a=bump(0.0, coupling=coupling, gap=gap, init=init),
                    detector_b=bump(1.0, coupling=0.7, gap=1.3),
                )
                results.append(run_point(cfg))
    base = results[0]
    assert base.causal_flag == "spacelike"
    for result in results:
        assert result.e_ab == 0.0
        for name in ("a", "b", "c_plus", "c_minus"):
            delta = abs(
                getattr(result.channel, name) - getattr(base.channel, name)
            )
            assert delta <= 1e-12, f"{name} varies with the first detector"
        assert abs(result.p_exc - 0.5 * (1.0 - result.nu_b)) <= 1e-10


# ---------------------------------------------------------------------------
# 2: twisted product-to-sum reduction against letterwise Weyl expansion
# ---------------------------------------------------------------------------

class PairCommutator:
    """Commutator form over labels {0, 1} with one independent entry."""

    def __init__(self, e01: float):
        self.e01 = float(e01)

    def causal_form(self, h1: CombinedSmearing, h2: CombinedSmearing) -> float:
        total = 0.0
        for i, m in h1.items():
            for j, n in h2.items():
                if i != j:
                    total += m * n * (self.e01 if (i, j) == (0, 1) else -self.e01)
        return total


def test_criterion_2_weyl_reduction():
    rng = np.random.default_rng(20260825)
    kinds = (COS, SIN)
    for _ in range(1000):
        data = PairCommutator(rng.uniform(-np.pi, np.pi))
        h1 = CombinedSmearing.of(0, int(rng.choice([-1, 1])))
        h2 = CombinedSmearing.of(1, int(rng.choice([-1, 1])))
        k1, k2 = rng.choice(len(kinds), size=2)
        k1, k2 = kinds[k1], kinds[k2]
        reduced = reduce_product(k1, h1, k2, h2, data)
        expanded = trig_to_weyl([(k1, h1), (k2, h2)], data)
        assert reduced.max_abs_delta(expanded) == 0.0

    # vanishing commutator: the classical product-to-sum identities
    data = PairCommutator(0.0)
    f0, f1 = CombinedSmearing.of(0), CombinedSmearing.of(1)
    fsum, fdiff = f0 + f1, f0 - f1
    cases = {
        (COS, COS): [(cos_combination(fsum), 0.5), (cos_combination(fdiff), 0.5)],
        (SIN, SIN): [(cos_combination(fsum), -0.5), (cos_combination(fdiff), 0.5)],
        (COS, SIN): [(sin_combination(fsum), 0.5), (sin_combination(fdiff), -0.5)],
        (SIN, COS): [(sin_combination(fsum), 0.5), (sin_combination(fdiff), 0.5)],
    }
    for (k1, k2), parts in cases.items():
        reduced = reduce_product(k1, f0, k2, f1, data)
        expected = WeylCombination()
        for base, scale in parts:
            expected = expected + base.scaled(scale)
        assert reduced.max_abs_delta(expected) < 1e-14


# ---------------------------------------------------------------------------
# 3: closed quasifree channel against the general moment route
# ---------------------------------------------------------------------------

def test_criterion_3_quasifree_routes():
    rng = np.random.default_rng(333)
    mu_a = Monopole(gap=0.8, tau=0.0)
    mu_b = Monopole(gap=1.3, tau=0.4)
    for _ in range(200):
        nu = float(rng.uniform(0.02, 1.0))
        e_ab = float(rng.uniform(-np.pi, np.pi))
        w_bb = -0.5 * np.log(nu)
        w_aa = max(1.0, 1.05 * e_ab * e_ab / (4.0 * w_bb))
        w = np.array([[w_aa, 0.5j * e_ab], [-0.5j * e_ab, w_bb]])
        state = QuasifreeState(data=BilinearData(labels=(0, 1), w=w, e=2 * w.imag))

        closed = quasifree_channel(nu, e_ab, mu_b)
        moment = channel_from_state(state, 0, 1, mu_a, mu_b, plus_state())
        for name in ("a", "b", "c_plus", "c_minus"):
            assert abs(getattr(closed, name) - getattr(moment, name)) <= 1e-12

        diag = closed.diagnostics()
        assert diag["positivity_defect"] <= 1e-10
        assert diag["trace_defect"] <= 1e-12


# ---------------------------------------------------------------------------
# 4: analytic channel against dense truncated-Fock tomography
# ---------------------------------------------------------------------------

FROZEN_MODES = ModeCouplings(
    labels=("A", "B"),
    omegas=np.array([1.0, 3.0]),
    g=np.array(
        [[0.55 + 0.20j, -0.35 + 0.10j], [0.40 - 0.25j, 0.50 + 0.15j]]
    ),
)


@pytest.mark.parametrize("kind,beta", [("vacuum", None), ("thermal", 1.0)])
def test_criterion_4_fock_oracle(kind, beta):
    assert np.abs(FROZEN_MODES.g).max() <= 0.8
    mu_a, mu_b = Monopole(gap=0.8, tau=0.0), Monopole(gap=1.3, tau=0.4)
    if kind == "vacuum":
        state = vacuum_from_modes(FROZEN_MODES)
    else:
        state = thermal_from_modes(FROZEN_MODES, beta=beta)
    analytic = channel_from_state(
        state, "A", "B", mu_a, mu_b, plus_state()
    ).choi()
    report = oracle_channel(
        FROZEN_MODES, mu_a, mu_b, plus_state(), kind=kind, beta=beta
    )
    assert np.abs(report.choi - analytic).max() <= 1e-6
    assert report.cutoff_used <= 32


# ---------------------------------------------------------------------------
# 5: commutator geometry, both routes and null-cone localization
# ---------------------------------------------------------------------------

def test_criterion_5_commutator_geometry():
    # closed-form commutator vs quadrature imaginary part, random pairs
    rng = np.random.default_rng(555)
    for _ in range(50):
        a = DetectorSpec(
            center=rng.normal(scale=0.6, size=3),
            time=float(rng.uniform(-1.0, 1.0)),
            sigma=float(rng.uniform(0.2, 0.7)),
        )
        b = DetectorSpec(
            center=rng.normal(scale=0.6, size=3),
            time=float(rng.uniform(-1.0, 1.0)),
            sigma=float(rng.uniform(0.2, 0.7)),
        )
        w = smeared_wightman(a, b, method="quadrature")
        e = causal_propagator(a, b, method="closed")
        budget = w.error + 0.5 * e.error
        assert budget <= 1e-10
        assert abs(w.value.imag - 0.5 * e.value) <= max(budget, 1e-12)

    # compact profiles at ten widths: the commutator lives on the cone
    d = 10 * SIGMA
    a = bump(0.0)
    grid = np.arange(d - 7 * SIGMA, d + 7 * SIGMA + 1e-12, SIGMA / 4)
    values = np.array(
        [abs(causal_propagator(a, bump(d, time=t)).value) for t in grid]
    )
    peak = values.max()
    assert peak > 0.0
    assert abs(grid[values.argmax()] - d) <= SIGMA / 4 + 1e-12
    far = np.abs(grid - d) > 5 * SIGMA
    assert far.any()
    assert (values[far] < 1e-9 * peak).all()


# ---------------------------------------------------------------------------
# 6: measurement back-action without signalling
# ---------------------------------------------------------------------------

def test_criterion_6_measurement_backaction():
    # spacelike: averaging the outcomes reproduces the unconditioned map
    spacelike = ExperimentConfig(
        detector_a=bump(0.0, coupling=0.8, init="excited"),
        detector_b=bump(1.0, coupling=0.7, gap=1.3),
        measure=MeasureBlock(outcome="average"),
    )
    report = run_measure(spacelike)
    assert report["causal_flag"] == "spacelike"
    assert report["probabilities"]["sum_defect"] < 1e-12
    assert report["mixture_residual"] < 1e-12

    # reference configuration: second detector strictly inside the first's
    # future but off the null cone, so the commutator form vanishes while
    # the conditioned channel still shifts
    ref_a = bump(0.0, coupling=0.1, init="excited")
    ref_b = bump(0.0, time=0.51, coupling=0.555, gap=1.3)
    point = run_point(
        ExperimentConfig(detector_a=ref_a, detector_b=ref_b)
    )
    assert point.causal_flag == "future"
    assert point.e_ab == 0.0

    conditioned = run_measure(
        ExperimentConfig(
            detector_a=ref_a,
            detector_b=ref_b,
            measure=MeasureBlock(outcome="ground"),
        )
    )
    assert conditioned["probabilities"]["sum_defect"] < 1e-12
    assert conditioned["max_coefficient_delta"] > 1e-3

    pair = detector_pair_data(ref_a, ref_b)
    state = QuasifreeState(data=pair.bilinear)
    mu_b = Monopole(gap=1.3, tau=0.51)
    for outcome in ("ground", "excited"):
        tilde = tilde_channel(
            state, pair.label_a, pair.label_b, outcome, mu_b, cptp_tol=1e-10
        )
        diag = tilde.diagnostics()
        assert diag["trace_defect"] < 1e-10
        assert diag["positivity_defect"] < 1e-10


# ---------------------------------------------------------------------------
# 7: Dirichlet-box mode sum against the continuum self-correlation
# ---------------------------------------------------------------------------

def test_criterion_7_box_convergence():
    length = 40 * SIGMA
    box = BoxSpec(length=length, n_max=30, mass=0.0)
    spec = DetectorSpec(
        center=(length / 2, length / 2, length / 2), time=0.0, sigma=SIGMA
    )
    modes = box_mode_couplings(box, {"A": spec})
    w_box = vacuum_from_modes(modes).data.w_entry("A", "A").real
    closed = 1.0 / (8.0 * np.pi**2 * SIGMA**2)
    deviation = abs(w_box - closed) / closed
    assert deviation < 0.01
    assert deviation > 1e-4  # genuinely a truncated sum, not the closed form
