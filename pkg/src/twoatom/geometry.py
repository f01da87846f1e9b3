"""Smeared two-point data for static detectors in flat spacetime.

Couplings are instantaneous: detector ``j`` switches on at one instant
``t_j`` with a spatial profile ``F_j`` centered at ``c_j``, so its smeared
field operator is ``Y_j = lam_j eta_j phi(t_j, F_j)``.  For the massless
vacuum in three space dimensions the two-point form between two such
operators depends only on the center separation ``d = |c_a - c_b|`` and
the time gap, through the radial Fourier transforms ``Ft`` of the unit-
normalized profiles:

    W_ab = pref / (4 pi^2 d) Int_0^inf Ft_a Ft_b sin(k d) e^{-i k q} dk
    W_ab = pref / (4 pi^2)   Int_0^inf k Ft_a Ft_b e^{-i k q} dk   (d = 0)

with ``pref = lam_a lam_b eta_a eta_b`` and ``q = t_a - t_b``.  The
commutator form is ``E_ab = 2 Im W_ab`` and is state independent.

Profiles
--------
``gaussian``
    ``F(x) = (2 pi s^2)^{-3/2} exp(-|x|^2 / 2 s^2)``, ``Ft(k) =
    exp(-s^2 k^2 / 2)``.  Both Wightman and commutator values have closed
    forms in terms of the Dawson function.  The support is not compact;
    causal statements use an effective radius of five widths and are
    flagged as approximate.
``bump``
    ``F(x) = N exp(-1 / (1 - |x|^2/s^2))`` for ``|x| < s``, zero outside.
    Compactly supported, so the commutator form vanishes *identically*
    outside the light-cone shell ``| |q| - d | < s_a + s_b``; inside, it
    is evaluated in position space from the overlap geometry of the two
    supports with the sharp null cone, which keeps the outside zeros exact
    instead of at quadrature precision.

The box constructor discretizes the field in a Dirichlet cube, yielding
mode frequencies and detector couplings for the finite-mode state
builders; for any radial profile the mode overlap factorizes as
``Ft(pi |n| / L) prod_d sin(n_d pi c_d / L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import dawsn, erfc

from .errors import AccuracyError, DomainError
from .states import ModeCouplings

DEFAULT_TOL = 1e-10

GAUSSIAN = "gaussian"
BUMP = "bump"
_PROFILES = (GAUSSIAN, BUMP)

#: effective support radius of a gaussian profile, in widths
GAUSSIAN_SUPPORT_WIDTHS = 5.0
#: truncation radius used when a gaussian enters a position-space overlap
_GAUSSIAN_TRUNC_WIDTHS = 9.0
#: per-factor Fourier envelope threshold for momentum-integral cutoffs
_ENVELOPE_EPS = 1e-18


@dataclass(frozen=True)
class DetectorSpec:
    """Static detector with an instantaneous switching.

    Parameters
    ----------
    center : 3-sequence of float
        Spatial center of the profile.
    time : float
        Switching instant.
    sigma : float
        Profile width (gaussian) or support radius (bump).
    coupling : float
        Detector coupling strength; may be zero.
    field_scale : float
        Overall field-coupling scale multiplying the profile.
    gap : float
        Energy gap of the detector qubit.
    profile : str
        ``"gaussian"`` or ``"bump"``.
    init : str or tuple
        Initial qubit state tag: ``"ground"``, ``"excited"``, ``"plus"``,
        or ``("bloch", theta, phi)``.
    """

    center: tuple[float, float, float]
    time: float
    sigma: float
    coupling: float = 1.0
    field_scale: float = 1.0
    gap: float = 1.0
    profile: str = GAUSSIAN
    init: object = "ground"

    def __post_init__(self) -> None:
        center = tuple(float(x) for x in self.center)
        if len(center) != 3:
            raise DomainError("detector center must have three components")
        if self.sigma <= 0:
            raise DomainError("profile width must be positive")
        if self.profile not in _PROFILES:
            raise DomainError(
                f"unknown profile {self.profile!r}; expected one of {_PROFILES}"
            )
        object.__setattr__(self, "center", center)

    @property
    def strength(self) -> float:
        """Product of detector coupling and field scale."""
        return self.coupling * self.field_scale

    @property
    def support_radius(self) -> float:
        """Exact support radius (bump) or effective radius (gaussian)."""
        if self.profile == BUMP:
            return self.sigma
        return GAUSSIAN_SUPPORT_WIDTHS * self.sigma

    @property
    def support_is_exact(self) -> bool:
        return self.profile == BUMP


def separation(a: DetectorSpec, b: DetectorSpec) -> float:
    return math.dist(a.center, b.center)


# ---------------------------------------------------------------------------
# profile Fourier transforms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _bump_nodes(n_nodes: int = 800) -> tuple[np.ndarray, np.ndarray, float]:
    """Gauss-Legendre data for the radial bump transform on [0, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    u = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    core = u * np.exp(-1.0 / (1.0 - u * u))
    norm = float(np.sum(w * u * core))  # Int_0^1 u^2 exp(-1/(1-u^2)) du
    return u, w * core, norm


def bump_profile_constant() -> float:
    """Normalization integral ``Int_0^1 u^2 exp(-1/(1-u^2)) du``."""
    return _bump_nodes()[2]


def _bump_fourier(x) -> np.ndarray:
    """Radial Fourier transform of the unit bump at dimensionless k*sigma."""
    u, wcore, norm = _bump_nodes()
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    small = np.abs(flat) < 1e-8
    xs = np.where(small, 1.0, flat)
    vals = np.empty_like(xs)
    # chunked so the (points x nodes) sine table stays small
    for i0 in range(0, xs.size, 4096):
        block = xs[i0 : i0 + 4096]
        vals[i0 : i0 + 4096] = np.sin(np.outer(block, u)) @ wcore / (
            norm * block
        )
    out = np.where(small, 1.0, vals)
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape)


def profile_fourier(spec: DetectorSpec):
    """Vectorized radial Fourier transform ``Ft(k)`` of the unit profile."""
    sig = spec.sigma
    if spec.profile == GAUSSIAN:
        return lambda k: np.exp(-0.5 * (sig * np.asarray(k, dtype=float)) ** 2)
    return lambda k: _bump_fourier(sig * np.asarray(k, dtype=float))


def _fourier_cutoff(spec: DetectorSpec) -> float:
    """Momentum beyond which this profile's transform stays below the envelope eps."""
    if spec.profile == GAUSSIAN:
        # exp(-s^2 k^2 / 2) < eps
        return math.sqrt(-2.0 * math.log(_ENVELOPE_EPS)) / spec.sigma
    return _bump_tail_cutoff() / spec.sigma


#: largest dimensionless argument the 800-node transform rule resolves;
#: beyond ~4 nodes per oscillation the rule aliases and returns garbage
_BUMP_X_MAX = 1200.0


@lru_cache(maxsize=1)
def _bump_tail_cutoff() -> float:
    """Dimensionless x beyond which |bump Ft| stays below the envelope eps."""
    grid = np.linspace(1.0, _BUMP_X_MAX, 4800)
    vals = np.abs(_bump_fourier(grid))
    suffix = np.maximum.accumulate(vals[::-1])[::-1]
    idx = int(np.searchsorted(-suffix, -_ENVELOPE_EPS))
    if idx >= grid.size:
        return _BUMP_X_MAX
    return float(grid[idx])


def _position_profile(spec: DetectorSpec):
    """Unit-normalized radial profile F(r) and its truncation radius."""
    sig = spec.sigma
    if spec.profile == GAUSSIAN:
        norm = (2.0 * math.pi * sig * sig) ** -1.5

        def fg(r: np.ndarray) -> np.ndarray:
            r = np.asarray(r, dtype=float)
            return norm * np.exp(-0.5 * (r / sig) ** 2)

        return fg, _GAUSSIAN_TRUNC_WIDTHS * sig
    const = bump_profile_constant()
    amp = 1.0 / (4.0 * math.pi * sig**3 * const)

    def fb(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        inside = r < sig
        ratio = np.where(inside, r / sig, 0.0)
        return np.where(inside, amp * np.exp(-1.0 / (1.0 - ratio * ratio)), 0.0)

    return fb, sig


# ---------------------------------------------------------------------------
# momentum-space quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _pair_cutoff(profile_a: str, sig_a: float, profile_b: str, sig_b: float) -> float:
    """First momentum beyond which the envelope product stays below eps.

    The per-profile cutoffs bound each factor alone; scanning the computed
    product tightens the range a lot for slowly decaying transforms.
    """
    spec_a = DetectorSpec((0.0, 0.0, 0.0), 0.0, sig_a, profile=profile_a)
    spec_b = DetectorSpec((0.0, 0.0, 0.0), 0.0, sig_b, profile=profile_b)
    hard = min(_fourier_cutoff(spec_a), _fourier_cutoff(spec_b))
    fa = profile_fourier(spec_a)
    fb = profile_fourier(spec_b)
    grid = np.linspace(0.0, hard, 4001)[1:]
    vals = np.abs(fa(grid) * fb(grid))
    suffix = np.maximum.accumulate(vals[::-1])[::-1]
    idx = int(np.searchsorted(-suffix, -_ENVELOPE_EPS))
    if idx >= grid.size:
        return hard
    return float(grid[idx])


def _pair_envelope(a: DetectorSpec, b: DetectorSpec):
    fa = profile_fourier(a)
    fb = profile_fourier(b)
    kmax = _pair_cutoff(a.profile, a.sigma, b.profile, b.sigma)
    hard = min(_fourier_cutoff(a), _fourier_cutoff(b))
    return (lambda k: fa(k) * fb(k)), kmax, hard


def _panel_nodes(kmax: float, freq_max: float, n: int):
    """Composite Gauss-Legendre grid on [0, kmax], about one trig period per
    panel so an n-node rule resolves every oscillation present."""
    count = max(8, int(math.ceil(kmax * freq_max / 6.0)))
    edges = np.linspace(0.0, kmax, count + 1)
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (edges[1] - edges[0])
    mid = 0.5 * (edges[1:] + edges[:-1])
    k = half * nodes[None, :] + mid[:, None]
    w = half * np.broadcast_to(weights, k.shape)
    return k.ravel(), w.ravel()


@dataclass(frozen=True)
class PairValue:
    """A computed two-point quantity with its accuracy estimate."""

    value: complex
    error: float


def _wightman_quadrature(a: DetectorSpec, b: DetectorSpec, tol: float) -> PairValue:
    pref = a.strength * b.strength
    if pref == 0.0:
        return PairValue(0.0 + 0.0j, 0.0)
    env, kmax, hard = _pair_envelope(a, b)
    d = separation(a, b)
    q = a.time - b.time
    sigma_min = min(a.sigma, b.sigma)
    eps = _ENVELOPE_EPS
    if d < 1e-4 * sigma_min:
        # Taylor in d: sin(kd)/d = k - k^3 d^2/6 + O((kd)^4 k)
        scale = pref / (4.0 * math.pi**2)
        moments = []
        for n in (12, 18):
            k, w = _panel_nodes(kmax, max(1.0, abs(q)), n)
            base = w * env(k)
            cq, sq = np.cos(q * k), np.sin(q * k)
            k3 = k * k * k
            moments.append(
                (
                    float(np.sum(base * k * cq)),
                    float(np.sum(base * k * sq)),
                    float(np.sum(base * k3 * cq)),
                    float(np.sum(base * k3 * sq)),
                )
            )
        re1, im1, re3, im3 = moments[1]
        diffs = [abs(x - y) for x, y in zip(*moments)]
        value = scale * (
            (re1 - d * d / 6.0 * re3) - 1j * (im1 - d * d / 6.0 * im3)
        )
        # quartic Taylor remainder bounded via the k^3 moment
        taylor = (d**4 / 120.0) * abs(re3 + 1j * im3) * kmax**2
        tail = eps * hard**2 + d * d / 6.0 * eps * hard**4
        err = abs(scale) * (
            diffs[0] + diffs[1] + d * d / 6.0 * (diffs[2] + diffs[3])
            + taylor
            + tail
        )
    else:
        # sin(kd) e^{-ikq} split into single-frequency trig sums
        ws, wd = d + q, d - q
        scale = pref / (8.0 * math.pi**2 * d)
        sums = []
        for n in (12, 18):
            k, w = _panel_nodes(kmax, max(1.0, abs(ws), abs(wd)), n)
            base = w * env(k)
            sums.append(
                (
                    float(np.sum(base * np.sin(ws * k))),
                    float(np.sum(base * np.sin(wd * k))),
                    float(np.sum(base * np.cos(wd * k))),
                    float(np.sum(base * np.cos(ws * k))),
                )
            )
        s1, s2, c1, c2 = sums[1]
        diffs = [abs(x - y) for x, y in zip(*sums)]
        value = scale * ((s1 + s2) - 1j * (c1 - c2))
        err = abs(scale) * (sum(diffs) + 2.0 * eps * hard)
    if err > max(tol, 64.0 * abs(value) * 1e-16):
        raise AccuracyError(
            f"momentum quadrature error {err:.2e} exceeds tolerance {tol:.2e}",
            estimate=err,
        )
    return PairValue(value, err)


def _gaussian_pair_w(d: float, q: float, sa: float, sb: float) -> complex:
    """Closed-form unit-prefactor Wightman value for two gaussians."""
    p = 0.5 * (sa * sa + sb * sb)
    rp = math.sqrt(p)
    if d < 1e-6 * rp:
        x = q / (2.0 * rp)
        re = (1.0 - 2.0 * x * dawsn(x)) / (8.0 * math.pi**2 * p)
        im = -q * math.sqrt(math.pi / p) * math.exp(-x * x) / (
            16.0 * math.pi**2 * p
        )
        return re + 1j * im
    up = (d + q) / (2.0 * rp)
    um = (d - q) / (2.0 * rp)
    re = (dawsn(up) + dawsn(um)) / (8.0 * math.pi**2 * d * rp)
    im = math.sqrt(math.pi / p) * (
        math.exp(-up * up) - math.exp(-um * um)
    ) / (16.0 * math.pi**2 * d)
    return re + 1j * im


def smeared_wightman(
    a: DetectorSpec,
    b: DetectorSpec,
    *,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
) -> PairValue:
    """Vacuum Wightman value ``W_ab = w(Y_a Y_b)`` for two detectors.

    ``method`` selects the evaluation route: ``"closed"`` (gaussian pairs
    only), ``"quadrature"`` (any profiles), or ``"auto"``.
    """
    if method not in ("auto", "closed", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    both_gaussian = a.profile == GAUSSIAN and b.profile == GAUSSIAN
    if method == "closed" and not both_gaussian:
        raise DomainError("closed-form route requires gaussian profiles")
    if method == "quadrature" or not both_gaussian:
        return _wightman_quadrature(a, b, tol)
    pref = a.strength * b.strength
    value = pref * _gaussian_pair_w(
        separation(a, b), a.time - b.time, a.sigma, b.sigma
    )
    return PairValue(value, 8.0 * abs(value) * 1e-16)


# ---------------------------------------------------------------------------
# commutator form
# ---------------------------------------------------------------------------

def _overlap_radial(fa, ra, fb, rb, n: int):
    """Evaluator for the radial cross-correlation of two profiles.

    ``G(s) = Int d^3u F_a(|u|) F_b(|u - s zhat|)`` computed with n-node
    Gauss-Legendre rules in both layers, vectorized over the inner layer.
    The u-integral is split at u = s where the inner integral loses
    smoothness, so both panels stay spectrally convergent.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n)

    def panel(lo_u: float, hi_u: float, s: float) -> float:
        u = 0.5 * (hi_u - lo_u) * nodes + 0.5 * (hi_u + lo_u)
        uw = 0.5 * (hi_u - lo_u) * weights
        lo = np.abs(u - s)
        hi = np.minimum(u + s, rb)
        width = np.clip(hi - lo, 0.0, None)
        t = 0.5 * width[:, None] * nodes[None, :] + 0.5 * (hi + lo)[:, None]
        inner = 0.5 * width * np.sum(weights[None, :] * t * fb(t), axis=1)
        return float(np.sum(uw * u * fa(u) * inner))

    def g_of(s: float) -> float:
        if s < 1e-14 * (ra + rb):
            u = 0.5 * ra * (nodes + 1.0)
            uw = 0.5 * ra * weights
            return float(np.sum(uw * 4.0 * math.pi * u * u * fa(u) * fb(u)))
        if s < ra:
            total = panel(0.0, s, s) + panel(s, ra, s)
        else:
            total = panel(0.0, ra, s)
        return (2.0 * math.pi / s) * total

    return g_of


def _shell_average(a: DetectorSpec, b: DetectorSpec, d: float, r: float, n: int) -> float:
    """P(r) / (4 pi r): the null-shell average of the profile overlap.

    ``P(r) = (2 pi r / d) Int s G(s) ds`` over the s-range where a sphere
    of radius ``r`` about one center meets the overlap support; for
    coincident centers ``P(r) = 4 pi r^2 G(r)``.
    """
    fa, ra = _position_profile(a)
    fb, rb = _position_profile(b)
    g_of = _overlap_radial(fa, ra, fb, rb, n)
    smax = ra + rb
    if d < 1e-12 * smax:
        if r >= smax:
            return 0.0
        return r * g_of(r)
    lo, hi = abs(r - d), min(r + d, smax)
    if hi <= lo:
        return 0.0
    nodes, weights = np.polynomial.legendre.leggauss(n)
    s = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    g_vals = np.array([g_of(si) for si in s])
    integral = 0.5 * (hi - lo) * float(np.sum(weights * s * g_vals))
    return integral / (2.0 * d)


def _commutator_position(a: DetectorSpec, b: DetectorSpec, tol: float) -> PairValue:
    pref = a.strength * b.strength
    d = separation(a, b)
    gap = a.time - b.time
    radius_sum = _position_profile(a)[1] + _position_profile(b)[1]
    if pref == 0.0 or gap == 0.0 or abs(abs(gap) - d) >= radius_sum:
        return PairValue(0.0, 0.0)
    r = abs(gap)
    coarse = _shell_average(a, b, d, r, 120)
    fine = _shell_average(a, b, d, r, 176)
    sign = 1.0 if gap < 0.0 else -1.0
    value = sign * pref * fine
    err = abs(pref) * abs(fine - coarse) + 1e-18 * abs(pref) + 1e-15 * abs(value)
    if err > max(tol, 64.0 * abs(value) * 1e-16):
        raise AccuracyError(
            f"overlap quadrature error {err:.2e} exceeds tolerance {tol:.2e}",
            estimate=err,
        )
    return PairValue(value, err)


def causal_propagator(
    a: DetectorSpec,
    b: DetectorSpec,
    *,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
) -> PairValue:
    """Commutator form ``E_ab = -i [Y_a, Y_b]`` (a real number).

    Positive when ``b`` sits inside the future light cone of ``a`` near
    the outgoing branch.  For bump profiles the value is identically zero
    whenever the supports are out of causal contact; the zero is returned
    exactly, without quadrature.

    ``method``: ``"closed"`` (gaussian pairs), ``"position"`` (position-
    space overlap; exact outside zeros for compact supports), ``"auto"``.
    """
    if method not in ("auto", "closed", "position"):
        raise DomainError(f"unknown method {method!r}")
    both_gaussian = a.profile == GAUSSIAN and b.profile == GAUSSIAN
    if method == "closed" and not both_gaussian:
        raise DomainError("closed-form route requires gaussian profiles")
    if method == "auto":
        method = "closed" if both_gaussian else "position"
    if method == "closed":
        pref = a.strength * b.strength
        w = _gaussian_pair_w(separation(a, b), a.time - b.time, a.sigma, b.sigma)
        value = pref * 2.0 * w.imag
        return PairValue(value, 8.0 * abs(value) * 1e-16)
    return _commutator_position(a, b, tol)


# ---------------------------------------------------------------------------
# causal classification and pair assembly
# ---------------------------------------------------------------------------

SPACELIKE = "spacelike"
FUTURE = "future"
PAST = "past"
CONTACT = "contact"


@dataclass(frozen=True)
class PairGeometry:
    """Causal relation of two detector supports.

    ``relation`` is ``"spacelike"``, ``"future"`` (b meets the causal
    future of a), ``"past"``, or ``"contact"`` (overlapping supports at
    equal time).  When any profile is gaussian the supports are effective
    (five widths) and ``approximate`` is set.
    """

    separation: float
    time_gap: float
    relation: str
    support_radius_a: float
    support_radius_b: float
    approximate: bool

    @property
    def spacelike(self) -> bool:
        return self.relation == SPACELIKE

    @property
    def bob_in_future(self) -> bool:
        return self.relation == FUTURE


def classify_pair(a: DetectorSpec, b: DetectorSpec) -> PairGeometry:
    """Classify the causal relation between the supports of ``a`` and ``b``."""
    d = separation(a, b)
    gap = b.time - a.time
    ra, rb = a.support_radius, b.support_radius
    if d > abs(gap) + ra + rb:
        relation = SPACELIKE
    elif gap > 0.0:
        relation = FUTURE
    elif gap < 0.0:
        relation = PAST
    else:
        relation = CONTACT
    return PairGeometry(
        separation=d,
        time_gap=gap,
        relation=relation,
        support_radius_a=ra,
        support_radius_b=rb,
        approximate=not (a.support_is_exact and b.support_is_exact),
    )


@dataclass(frozen=True)
class PairData:
    """Assembled two-detector bilinear data with provenance."""

    bilinear: "BilinearData"
    geometry: PairGeometry
    label_a: int
    label_b: int
    quadrature_error: float

    @property
    def e_ab(self) -> float:
        return self.bilinear.e_entry(self.label_a, self.label_b)

    @property
    def w_bb(self) -> float:
        return self.bilinear.w_entry(self.label_b, self.label_b).real


def detector_pair_data(
    a: DetectorSpec,
    b: DetectorSpec,
    *,
    tol: float = DEFAULT_TOL,
    labels: tuple[int, int] = (0, 1),
) -> PairData:
    """Compute the vacuum bilinear data for a detector pair.

    The cross Wightman entry is assembled from the real part of the
    momentum-space value and the commutator route, ``W_ab = Re W_ab +
    i E_ab / 2``, so the data's internal consistency relation holds by
    construction while both numbers keep their own accuracy estimates.
    """
    from .states import BilinearData

    label_a, label_b = labels
    w_aa = smeared_wightman(a, a, tol=tol)
    w_bb = smeared_wightman(b, b, tol=tol)
    w_ab = smeared_wightman(a, b, tol=tol)
    e_ab = causal_propagator(a, b, tol=tol)
    w_cross = w_ab.value.real + 0.5j * e_ab.value
    w = np.array(
        [
            [w_aa.value.real + 0.0j, w_cross],
            [np.conj(w_cross), w_bb.value.real + 0.0j],
        ]
    )
    e = np.array([[0.0, e_ab.value], [-e_ab.value, 0.0]])
    total_err = w_aa.error + w_bb.error + w_ab.error + e_ab.error
    data = BilinearData(labels=(label_a, label_b), w=w, e=e)
    return PairData(
        bilinear=data,
        geometry=classify_pair(a, b),
        label_a=label_a,
        label_b=label_b,
        quadrature_error=total_err,
    )


# ---------------------------------------------------------------------------
# Dirichlet box modes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxSpec:
    """Cubic Dirichlet cavity ``[0, L]^3`` with a per-axis mode cap."""

    length: float
    n_max: int
    mass: float = 0.0

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise DomainError("box length must be positive")
        if self.n_max < 1:
            raise DomainError("n_max must be at least 1")
        if self.mass < 0:
            raise DomainError("mass must be nonnegative")


def box_modes(box: BoxSpec) -> tuple[np.ndarray, np.ndarray]:
    """Integer mode triples (lexicographic) and their frequencies."""
    n = np.arange(1, box.n_max + 1)
    n1, n2, n3 = np.meshgrid(n, n, n, indexing="ij")
    triples = np.stack(
        [n1.ravel(), n2.ravel(), n3.ravel()], axis=1
    ).astype(int)
    ksq = (np.pi / box.length) ** 2 * (triples**2).sum(axis=1)
    omegas = np.sqrt(box.mass**2 + ksq)
    return triples, omegas


def _outside_box_mass(spec: DetectorSpec, box: BoxSpec) -> float:
    """Upper bound on the profile mass outside the box (per-axis union)."""
    if spec.profile == BUMP:
        for c in spec.center:
            if c - spec.sigma <= 0.0 or c + spec.sigma >= box.length:
                return 1.0
        return 0.0
    total = 0.0
    root2 = math.sqrt(2.0)
    for c in spec.center:
        total += 0.5 * erfc(c / (spec.sigma * root2))
        total += 0.5 * erfc((box.length - c) / (spec.sigma * root2))
    return total


def box_mode_couplings(box: BoxSpec, specs) -> ModeCouplings:
    """Detector couplings to the Dirichlet modes of the box.

    ``specs`` maps detector labels to their specifications.  Each row is

    ``g_jn = lam_j eta_j N_n exp(-i w_n t_j) Ft_j(pi |n| / L)
    prod_d sin(n_d pi c_d / L)``

    with the canonical mode normalization ``N_n = (2/L)^{3/2} /
    sqrt(2 w_n)``.  Raises a domain error when more than ``1e-10`` of any
    profile's mass lies outside the box.
    """
    for label, spec in specs.items():
        leak = _outside_box_mass(spec, box)
        if leak > 1e-10:
            raise DomainError(
                f"profile mass of {label!r} outside the box ({leak:.2e}) "
                "exceeds 1e-10; enlarge the box or shrink the profile"
            )
    triples, omegas = box_modes(box)
    knorm = np.pi * np.sqrt((triples.astype(float) ** 2).sum(axis=1)) / box.length
    norm = (2.0 / box.length) ** 1.5 / np.sqrt(2.0 * omegas)
    rows = []
    for spec in specs.values():
        ft = profile_fourier(spec)(knorm)
        sines = np.prod(
            np.sin(triples * np.pi * np.asarray(spec.center) / box.length),
            axis=1,
        )
        rows.append(
            spec.strength
            * norm
            * np.exp(-1j * omegas * spec.time)
            * ft
            * sines
        )
    return ModeCouplings(
        labels=tuple(specs.keys()), omegas=omegas, g=np.array(rows)
    )
