"""Quantum tomograms: amplitude closed forms, oscillatory-quadrature
routes, Wigner-function maps, and the inverse reconstructions back to
Wigner functions and density matrices.

For a pure state the tomogram is |A|^2 / (2 pi hbar |nu|) with the
amplitude

    A(X, mu, nu) = int psi(y) exp(i mu y^2/(2 hbar nu) - i X y/(hbar nu)) dy

(nu != 0); nu = 0 and mu = 0 reduce exactly to the position and momentum
marginals and (mu, nu) = (0, 0) to the unit atom delta(X).  Oscillator
closed forms come from the Gaussian generating function J(s) with
zeta = varpi*nu + i*mu; all fractional powers of zeta-ratios are taken
so the amplitudes agree with the defining integral in every (mu, nu)
quadrant (regression-tested against quadrature).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .chirp import _GL_NODES, _GL_WEIGHTS, chirp_integral
from .classical import RadonFamily, characteristic_quadrature, radon_line_integral
from .kernel import (
    DeltaAtom,
    GridFunction2D,
    TomographyFrame,
    Tomogram,
    TomogramError,
    bilinear_interp,
)
from .states import (
    BoxEigen,
    CatEven,
    CatOdd,
    Coherent,
    CustomGrid,
    HOEigen,
    StateSpec,
    Superposition,
    cat_normalization,
    coherent_center,
    momentum_wavefunction,
    natural_scales,
    position_extent,
    position_wavefunction,
)

__all__ = [
    "TomogramAmplitude",
    "amplitude_generating",
    "hermite_amplitude",
    "coherent_amplitude",
    "tomogram_amplitude",
    "hermite_tomogram",
    "coherent_tomogram",
    "coherent_tomogram_peak",
    "superposition_tomogram",
    "superposition_cross_term",
    "cat_tomogram",
    "cat_interference",
    "tomogram_from_wavefunction",
    "state_tomogram",
    "default_x_grid",
    "momentum_extent",
    "box_tomogram",
    "box_tomogram_stationary_phase",
    "box_x_extent",
    "ehrenfest_hbar",
    "rho_grid",
    "wigner_from_density",
    "wigner_grid_from_density",
    "exact_wigner",
    "tomogram_from_wigner",
    "build_state_family",
    "wigner_from_tomogram",
    "wigner_from_tomogram_grid",
    "TomogramSlices",
    "build_state_slices",
    "density_from_tomogram",
    "density_grid_from_tomogram",
]


# ---------------------------------------------------------------------------
# amplitude closed forms
# ---------------------------------------------------------------------------

def _zeta(frame: TomographyFrame, varpi: float) -> complex:
    return complex(varpi * frame.nu, frame.mu)


def _require_nu(frame: TomographyFrame, who: str) -> None:
    if frame.nu == 0.0:
        raise TomogramError(f"{who} requires nu != 0 (nu = 0 is the exact position branch)")


def amplitude_generating(s: complex, frame: TomographyFrame, X: float,
                         hbar: float, varpi: float = 1.0) -> complex:
    """Generating function of the oscillator amplitudes,

        J(s) = (varpi/pi hbar)^(1/4) sqrt(2 pi hbar nu / zeta*)
               * exp[ zeta s^2/(2 zeta*) - i sqrt(2 varpi/hbar) X s / zeta*
                      - X^2/(2 hbar nu zeta*) ],

    whose Taylor coefficients are A_n / sqrt(n!).  Principal branch of the
    complex square root; entire in s.
    """
    _require_nu(frame, "amplitude_generating")
    z = _zeta(frame, varpi)
    zc = z.conjugate()
    pref = (varpi / (math.pi * hbar)) ** 0.25 * cmath.sqrt(2.0 * math.pi * hbar * frame.nu / zc)
    expo = (
        z * s * s / (2.0 * zc)
        - 1j * math.sqrt(2.0 * varpi / hbar) * X * s / zc
        - X * X / (2.0 * hbar * frame.nu * zc)
    )
    return pref * cmath.exp(expo)


def hermite_amplitude(n: int, frame: TomographyFrame, X, hbar: float,
                      varpi: float = 1.0):
    """Closed-form amplitude A_n of the n-th oscillator eigenstate.

    Written with the same prefactor as J(s) and the unimodular factor
    (-i e^{i arg zeta})^n, which keeps the branch consistent with the
    defining integral for nu < 0 as well; |A_n|^2/(2 pi hbar |nu|)
    reproduces the Hermite tomogram.  Accepts scalar or array X.
    """
    from .specfun import hermite_phi

    _require_nu(frame, "hermite_amplitude")
    z = _zeta(frame, varpi)
    zc = z.conjugate()
    kappa = varpi / (hbar * (z * zc).real)
    scalar = np.isscalar(X)
    Xv = np.asarray(X, dtype=float)
    Q = np.sqrt(kappa) * Xv
    pref = (varpi / (math.pi * hbar)) ** 0.25 * cmath.sqrt(2.0 * math.pi * hbar * frame.nu / zc)
    # exp(-X^2/(2 hbar nu zeta*)) = (unit phase) * exp(-Q^2/2); the decay is
    # folded into phi_n(Q) so nothing overflows at large |X|
    phase = np.exp(-Xv * Xv / (2.0 * hbar * frame.nu * zc) + 0.5 * Q * Q)
    root = cmath.exp(1j * math.atan2(frame.mu, varpi * frame.nu))
    out = pref * phase * (-1j * root) ** n * math.pi ** 0.25 * hermite_phi(n, Q)
    return complex(out) if scalar else out


def coherent_amplitude(alpha: complex, frame: TomographyFrame, X, hbar: float,
                       varpi: float = 1.0):
    """Amplitude of the coherent state |alpha>: A_alpha = e^{-|alpha|^2/2} J(alpha).

    The damping is folded into the exponent before exponentiating: the
    combined real part is <= 0 for every alpha, so Ehrenfest-sized
    |alpha| ~ 1/sqrt(hbar) cannot overflow.
    """
    _require_nu(frame, "coherent_amplitude")
    scalar = np.isscalar(X)
    Xv = np.asarray(X, dtype=float)
    z = _zeta(frame, varpi)
    zc = z.conjugate()
    pref = (varpi / (math.pi * hbar)) ** 0.25 * cmath.sqrt(2.0 * math.pi * hbar * frame.nu / zc)
    expo = (
        -0.5 * abs(alpha) ** 2
        + z * alpha * alpha / (2.0 * zc)
        - 1j * math.sqrt(2.0 * varpi / hbar) * Xv * alpha / zc
        - Xv * Xv / (2.0 * hbar * frame.nu * zc)
    )
    out = pref * np.exp(expo)
    return complex(out) if scalar else out


@dataclass(frozen=True)
class TomogramAmplitude:
    """One amplitude sample; |value|^2/(2 pi hbar |nu|) is the tomogram density."""

    value: complex
    frame: TomographyFrame
    X: float
    hbar: float

    def density(self) -> float:
        return abs(self.value) ** 2 / (2.0 * math.pi * self.hbar * abs(self.frame.nu))


def _box_amplitudes(state: BoxEigen, frame: TomographyFrame, X: float, hbar: float):
    """The pair (A_-, A_+) of finite-interval chirped integrals whose
    difference gives the box amplitude."""
    a = frame.mu / (2.0 * hbar * frame.nu)
    k = state.n * math.pi / state.L
    env_scale = state.L / max(8.0, state.n / 4.0)
    ones = lambda y: np.ones_like(y)
    b0 = -X / (hbar * frame.nu)
    am = chirp_integral(ones, a, b0 + k, 0.0, state.L, env_scale=env_scale)
    ap = chirp_integral(ones, a, b0 - k, 0.0, state.L, env_scale=env_scale)
    return am, ap


def tomogram_amplitude(state: StateSpec, frame: TomographyFrame, X: float,
                       hbar: float) -> complex:
    """Amplitude A_psi(X, mu, nu) for any catalog state (nu != 0).

    Oscillator-family states use the closed forms; box and custom-grid
    states fall back to phase-resolved oscillatory quadrature of the
    defining integral.
    """
    _require_nu(frame, "tomogram_amplitude")
    if isinstance(state, HOEigen):
        return complex(hermite_amplitude(state.n, frame, X, hbar, state.varpi))
    if isinstance(state, Coherent):
        return complex(coherent_amplitude(state.alpha, frame, X, hbar, state.varpi))
    if isinstance(state, Superposition):
        an = hermite_amplitude(state.n, frame, X, hbar, state.varpi)
        am = hermite_amplitude(state.m, frame, X, hbar, state.varpi)
        return complex((an + am) / math.sqrt(2.0))
    if isinstance(state, (CatEven, CatOdd)):
        sign = 1.0 if isinstance(state, CatEven) else -1.0
        N = cat_normalization(state.alpha, "even" if sign > 0 else "odd")
        aa = coherent_amplitude(state.alpha, frame, X, hbar, state.varpi)
        ab = coherent_amplitude(-state.alpha, frame, X, hbar, state.varpi)
        return complex(N * (aa + sign * ab))
    if isinstance(state, BoxEigen):
        am, ap = _box_amplitudes(state, frame, X, hbar)
        return complex(math.sqrt(2.0 / state.L) * (am - ap) / 2j)
    if isinstance(state, CustomGrid):
        psi = position_wavefunction(state, hbar)
        lo, hi = position_extent(state, hbar)
        a = frame.mu / (2.0 * hbar * frame.nu)
        b = -X / (hbar * frame.nu)
        dx = float(state.x_grid[1] - state.x_grid[0])
        return chirp_integral(psi, a, b, lo, hi, env_scale=2.0 * dx)
    raise TypeError(f"unknown state spec {state!r}")


# ---------------------------------------------------------------------------
# closed-form tomograms
# ---------------------------------------------------------------------------

def _kappa(frame: TomographyFrame, hbar: float, varpi: float) -> float:
    d = varpi ** 2 * frame.nu ** 2 + frame.mu ** 2
    if d == 0.0:
        raise TomogramError("closed-form tomogram rejected for the zero frame")
    return varpi / (hbar * d)


def hermite_tomogram(n: int, frame: TomographyFrame, X, hbar: float,
                     varpi: float = 1.0):
    """Tomogram of the n-th oscillator eigenstate,

        W_n(X) = sqrt(kappa) * phi_n(sqrt(kappa) X)^2,
        kappa  = varpi / (hbar (varpi^2 nu^2 + mu^2)),

    the squared scaled Hermite function with its normalizing Jacobian.
    """
    from .specfun import hermite_phi

    kappa = _kappa(frame, hbar, varpi)
    Xv = np.asarray(X, dtype=float)
    out = math.sqrt(kappa) * hermite_phi(n, math.sqrt(kappa) * Xv) ** 2
    return float(out) if np.isscalar(X) else out


def coherent_tomogram_peak(alpha: complex, frame: TomographyFrame, hbar: float,
                           varpi: float = 1.0) -> float:
    """Peak location mu*<q> + nu*<p> of the coherent-state tomogram."""
    qbar, pbar = coherent_center(alpha, hbar, varpi)
    return frame.mu * qbar + frame.nu * pbar


def coherent_tomogram(alpha: complex, frame: TomographyFrame, X, hbar: float,
                      varpi: float = 1.0):
    """Gaussian tomogram of |alpha>:

        sqrt(varpi/(pi hbar (varpi^2 nu^2 + mu^2)))
        * exp[-(sqrt(varpi) X - mu sqrt(2 hbar) Re alpha
               - varpi nu sqrt(2 hbar) Im alpha)^2 / (hbar (varpi^2 nu^2 + mu^2))]
    """
    d = varpi ** 2 * frame.nu ** 2 + frame.mu ** 2
    if d == 0.0:
        raise TomogramError("closed-form tomogram rejected for the zero frame")
    Xv = np.asarray(X, dtype=float)
    shift = (
        frame.mu * math.sqrt(2.0 * hbar) * alpha.real
        + varpi * frame.nu * math.sqrt(2.0 * hbar) * alpha.imag
    )
    out = math.sqrt(varpi / (math.pi * hbar * d)) * np.exp(
        -((math.sqrt(varpi) * Xv - shift) ** 2) / (hbar * d)
    )
    return float(out) if np.isscalar(X) else out


def superposition_cross_term(n: int, m: int, frame: TomographyFrame, X,
                             hbar: float, varpi: float = 1.0):
    """Interference term Re(A_n A_m*) / (2 pi hbar |nu|) of (|n>+|m>)/sqrt2."""
    _require_nu(frame, "superposition_cross_term")
    an = hermite_amplitude(n, frame, X, hbar, varpi)
    am = hermite_amplitude(m, frame, X, hbar, varpi)
    out = (an * np.conj(am)).real / (2.0 * math.pi * hbar * abs(frame.nu))
    return float(out) if np.isscalar(X) else out


def superposition_tomogram(n: int, m: int, frame: TomographyFrame, X,
                           hbar: float, varpi: float = 1.0):
    """Tomogram of (|n> + |m>)/sqrt2: the half-half mixture plus the
    amplitude interference term; nu = 0 falls back to the exact position
    marginal of the superposed wave function."""
    if n == m:
        raise TomogramError("superposition requires distinct eigenstates")
    if frame.is_zero:
        raise TomogramError("closed-form tomogram rejected for the zero frame")
    from .specfun import hermite_phi

    Xv = np.asarray(X, dtype=float)
    if frame.nu == 0.0:
        s = math.sqrt(varpi / hbar)
        y = Xv / frame.mu
        psi2 = 0.5 * s * (hermite_phi(n, s * y) + hermite_phi(m, s * y)) ** 2
        out = psi2 / abs(frame.mu)
    else:
        out = (
            0.5 * hermite_tomogram(n, frame, Xv, hbar, varpi)
            + 0.5 * hermite_tomogram(m, frame, Xv, hbar, varpi)
            + superposition_cross_term(n, m, frame, Xv, hbar, varpi)
        )
        out = np.maximum(out, 0.0)
    return float(out) if np.isscalar(X) else out


def cat_interference(alpha: complex, frame: TomographyFrame, X, hbar: float,
                     varpi: float = 1.0):
    """Interference term I = 2 Re(A_alpha A_{-alpha}*)/(2 pi hbar |nu|) of a
    cat state; its integral is 2 exp(-2|alpha|^2) independent of hbar."""
    Xv = np.asarray(X, dtype=float)
    if frame.nu == 0.0:
        if frame.mu == 0.0:
            raise TomogramError("cat interference rejected for the zero frame")
        from .states import _coherent_psi

        y = Xv / frame.mu
        pa = _coherent_psi(alpha, hbar, varpi, y)
        pb = _coherent_psi(-alpha, hbar, varpi, y)
        out = 2.0 * (pa * np.conj(pb)).real / abs(frame.mu)
    else:
        aa = coherent_amplitude(alpha, frame, Xv, hbar, varpi)
        ab = coherent_amplitude(-alpha, frame, Xv, hbar, varpi)
        out = 2.0 * (aa * np.conj(ab)).real / (2.0 * math.pi * hbar * abs(frame.nu))
    return float(out) if np.isscalar(X) else out


def cat_tomogram(alpha: complex, parity: str, frame: TomographyFrame, X,
                 hbar: float, varpi: float = 1.0):
    """Even/odd cat tomogram N^2 [W_alpha + W_{-alpha} +- I]."""
    if parity not in ("even", "odd"):
        raise TomogramError(f"cat parity must be 'even' or 'odd', got {parity!r}")
    if frame.is_zero:
        raise TomogramError("closed-form tomogram rejected for the zero frame")
    sign = 1.0 if parity == "even" else -1.0
    N2 = cat_normalization(alpha, parity) ** 2
    Xv = np.asarray(X, dtype=float)
    out = N2 * (
        coherent_tomogram(alpha, frame, Xv, hbar, varpi)
        + coherent_tomogram(-alpha, frame, Xv, hbar, varpi)
        + sign * cat_interference(alpha, frame, Xv, hbar, varpi)
    )
    out = np.maximum(out, 0.0)
    return float(out) if np.isscalar(X) else out


# ---------------------------------------------------------------------------
# quadrature route (representation-dispatched) and grid helpers
# ---------------------------------------------------------------------------

def _env_scale_position(state: StateSpec, hbar: float) -> float:
    if isinstance(state, (HOEigen, Superposition)):
        nmax = state.n if isinstance(state, HOEigen) else max(state.n, state.m)
        return math.sqrt(hbar / state.varpi) / math.sqrt(2.0 * nmax + 1.0)
    if isinstance(state, (Coherent, CatEven, CatOdd)):
        _, pbar = coherent_center(state.alpha, hbar, state.varpi)
        return min(math.sqrt(hbar / state.varpi), hbar / (abs(pbar) + 1e-30))
    if isinstance(state, CustomGrid):
        return 2.0 * float(state.x_grid[1] - state.x_grid[0])
    if isinstance(state, BoxEigen):
        return state.L / max(8.0, state.n)
    raise TypeError(f"unknown state spec {state!r}")


def momentum_extent(state: StateSpec, hbar: float, tails: float = 8.0,
                    mass_tol: float = 1e-6) -> tuple[float, float]:
    """Interval of p outside which |psihat| is negligible (box states have
    power-law momentum tails sized from the requested mass tolerance)."""
    if isinstance(state, (HOEigen, Superposition)):
        nmax = state.n if isinstance(state, HOEigen) else max(state.n, state.m)
        r = math.sqrt(hbar * state.varpi) * (math.sqrt(2.0 * nmax + 1.0) + tails)
        return -r, r
    if isinstance(state, Coherent):
        _, pbar = coherent_center(state.alpha, hbar, state.varpi)
        r = tails * math.sqrt(hbar * state.varpi)
        return pbar - r, pbar + r
    if isinstance(state, (CatEven, CatOdd)):
        _, pbar = coherent_center(state.alpha, hbar, state.varpi)
        r = abs(pbar) + tails * math.sqrt(hbar * state.varpi)
        return -r, r
    if isinstance(state, BoxEigen):
        k = state.n * math.pi / state.L
        core = hbar * k
        tail = (8.0 * k * k * hbar ** 3 / (3.0 * math.pi * state.L * mass_tol)) ** (1.0 / 3.0)
        r = core + 1.5 * tail
        return -r, r
    if isinstance(state, CustomGrid):
        # spectral radius holding all but mass_tol of the sampled momentum density
        dx = float(state.x_grid[1] - state.x_grid[0])
        psd = np.abs(np.fft.fft(state.psi)) ** 2
        k = 2.0 * math.pi * np.fft.fftfreq(state.psi.size, d=dx)
        order = np.argsort(np.abs(k))
        cum = np.cumsum(psd[order])
        idx = int(np.searchsorted(cum, (1.0 - 0.1 * mass_tol) * cum[-1]))
        r = hbar * abs(k[order][min(idx, k.size - 1)]) * 1.5 + hbar * 2.0 * math.pi / (dx * state.psi.size)
        return -r, r
    raise TypeError(f"unknown state spec {state!r}")


def ehrenfest_hbar(n: int, L: float = 1.0) -> float:
    """hbar pinned by unit energy for the box eigenstate: sqrt2 L/(n pi)."""
    return math.sqrt(2.0) * L / (n * math.pi)


def box_x_extent(state: BoxEigen, frame: TomographyFrame, hbar: float,
                 mass_tol: float = 1e-4) -> tuple[float, float]:
    """X interval capturing the box tomogram mass to ~mass_tol.

    The smooth support is mu*[0, L] broadened by nu times the momentum
    spread; beyond it the tomogram decays like 1/X^4 (sharp-wall
    diffraction), so the pad is sized from that power law.
    """
    plo, phi = momentum_extent(state, hbar, mass_tol=mass_tol / 4.0)
    corners = [frame.mu * q + frame.nu * p for q in (0.0, state.L) for p in (plo, phi)]
    return min(corners) - 0.5, max(corners) + 0.5


def box_tomogram(n: int, L: float, frame: TomographyFrame, x_grid,
                 hbar: float) -> Tomogram:
    """Box-eigenstate tomogram by oscillatory quadrature of the two chirped
    interval integrals A_-+; W = |A_- - A_+|^2 / (4 pi L hbar |nu|).

    nu = 0 uses the exact position marginal |psi_n(X/mu)|^2/|mu|; the
    quadrature refuses (ChirpResolutionError) rather than under-resolve
    the phase.
    """
    state = BoxEigen(n, L)
    x = np.asarray(x_grid, dtype=float)
    if frame.is_zero:
        return Tomogram(frame, x, np.zeros_like(x), (DeltaAtom(1.0, 0.0),))
    if frame.nu == 0.0:
        psi = position_wavefunction(state, hbar)
        vals = np.abs(psi(x / frame.mu)) ** 2 / abs(frame.mu)
        return Tomogram(frame, x, vals)
    pref = 1.0 / (4.0 * math.pi * L * hbar * abs(frame.nu))
    a = frame.mu / (2.0 * hbar * frame.nu)
    slope = -1.0 / (hbar * frame.nu)
    k = n * math.pi / L
    ones = lambda y: np.ones_like(y)
    # the +-k sine components shift the linear phase, i.e. offset X by -+k/slope
    am = _ladder_amplitudes(ones, a, slope, x + k / slope, 0.0, L, L / 8.0)
    ap = _ladder_amplitudes(ones, a, slope, x - k / slope, 0.0, L, L / 8.0)
    return Tomogram(frame, x, pref * np.abs(am - ap) ** 2)


def _box_phase(n: int, L: float, frame: TomographyFrame, X: float, y, branch: int):
    # F_-+(y) = (pi/L) [ mu y^2/(2 sqrt2 nu) - (X/(sqrt2 nu) -+ 1) y ]
    s2 = math.sqrt(2.0)
    return (math.pi / L) * (
        frame.mu * y * y / (2.0 * s2 * frame.nu)
        - (X / (s2 * frame.nu) - branch) * y
    )


def box_tomogram_stationary_phase(n: int, L: float, frame: TomographyFrame, X):
    """Large-n stationary-phase form of the box tomogram at the
    unit-energy hbar = sqrt2 L/(n pi):

        [chi(Qs-) + chi(Qs+) - 2 chi(Qs-) chi(Qs+) cos n(F_-(Qs-) - F_+(Qs+))]
        / (2 |mu| L),

    Qs-+ = X/mu -+ sqrt2 nu/mu.  Vanishes when both stationary points
    leave [0, L]; requires mu != 0, nu != 0 and n >= 10.
    """
    if frame.mu == 0.0 or frame.nu == 0.0:
        raise TomogramError("stationary-phase route requires mu != 0 and nu != 0")
    if n < 10:
        raise TomogramError(f"stationary phase validated for n >= 10, got {n}")
    Xv = np.asarray(X, dtype=float)
    s2 = math.sqrt(2.0)
    qm = Xv / frame.mu - s2 * frame.nu / frame.mu
    qp = Xv / frame.mu + s2 * frame.nu / frame.mu
    chim = ((qm >= 0.0) & (qm <= L)).astype(float)
    chip = ((qp >= 0.0) & (qp <= L)).astype(float)
    fm = _box_phase(n, L, frame, Xv, qm, +1)
    fp = _box_phase(n, L, frame, Xv, qp, -1)
    out = (chim + chip - 2.0 * chim * chip * np.cos(n * (fm - fp))) / (2.0 * abs(frame.mu) * L)
    return float(out) if np.isscalar(X) else out


def _ladder_amplitudes(env, a: float, slope: float, x: np.ndarray,
                       y0: float, y1: float, env_scale: float) -> np.ndarray:
    """Amplitudes int env(y) e^{i(a y^2 + b_k y)} dy for the whole uniform
    family b_k = slope * x_k, sharing one Gauss-Legendre panel set.

    Panels are sized for the worst |2 a y + b| over the family, then each
    X differs only by the linear phase, applied as a running per-node
    complex multiplication (a geometric "ladder"): two complex
    exponentials per node total instead of one per (node, X) pair.  The
    accumulated phase rounding after nX steps is ~nX * eps, far below the
    quadrature tolerance.
    """
    x = np.asarray(x, dtype=float)
    bmax = max(abs(slope * x[0]), abs(slope * x[-1]))
    # conservative single panel set: the stationary point sweeps with X, so
    # size the panels for the frequency envelope 2|a||y| + bmax
    ncoarse = 64
    coarse = np.linspace(y0, y1, ncoarse + 1)
    prim = coarse * np.abs(coarse)  # antiderivative of 2|y|
    dphase = abs(a) * np.abs(np.diff(prim)) + bmax * np.diff(coarse)
    cell_w = (y1 - y0) / ncoarse
    nsplit = np.maximum(
        np.maximum(np.ceil(dphase / (math.pi / 4.0)),
                   np.ceil(cell_w / (0.5 * env_scale))),
        1,
    ).astype(int)
    total = int(nsplit.sum())
    if total > 4_000_000:
        from .chirp import ChirpResolutionError

        raise ChirpResolutionError(total, 4_000_000)
    edges = np.empty(int(nsplit.sum()) + 1)
    edges[0] = y0
    pos = 0
    for j in range(ncoarse):
        k = int(nsplit[j])
        edges[pos + 1 : pos + k + 1] = np.linspace(coarse[j], coarse[j + 1], k + 1)[1:]
        pos += k
    centers = 0.5 * (edges[1:] + edges[:-1])
    halves = 0.5 * (edges[1:] - edges[:-1])
    nodes = (centers[:, None] + halves[:, None] * _GL_NODES[None, :]).ravel()
    weights = (halves[:, None] * _GL_WEIGHTS[None, :]).ravel()
    g = env(nodes) * np.exp(1j * a * nodes * nodes) * weights
    cur = g * np.exp(1j * slope * x[0] * nodes)
    step = np.exp(1j * slope * (x[1] - x[0]) * nodes) if x.size > 1 else None
    out = np.empty(x.size, dtype=complex)
    for k in range(x.size):
        out[k] = np.add.reduce(cur)
        if step is not None and k + 1 < x.size:
            cur *= step
    return out


def tomogram_from_wavefunction(state: StateSpec, frame: TomographyFrame,
                               x_grid, hbar: float) -> Tomogram:
    """Tomogram by quadrature of the defining amplitude integral.

    Exact branches: nu = 0 -> |psi(X/mu)|^2/|mu|; mu = 0 ->
    |psihat(X/nu)|^2/|nu|; the zero frame -> unit atom at X = 0.
    Otherwise the representation is chosen so the 1/|nu| (position route)
    or 1/|mu| (momentum route) prefactor stays bounded: the position
    integral is used when |nu|*sigma_p >= |mu|*sigma_q (ties included)
    with the state's natural scales, else the Fourier-side integral.
    Box and custom-grid states always integrate on the position side,
    where their support is compact.
    """
    x = np.asarray(x_grid, dtype=float)
    if frame.is_zero:
        return Tomogram(frame, x, np.zeros_like(x), (DeltaAtom(1.0, 0.0),))
    if frame.nu == 0.0:
        psi = position_wavefunction(state, hbar)
        vals = np.abs(psi(x / frame.mu)) ** 2 / abs(frame.mu)
        return Tomogram(frame, x, vals)
    if frame.mu == 0.0:
        ft = momentum_wavefunction(state, hbar)
        vals = np.abs(ft(x / frame.nu)) ** 2 / abs(frame.nu)
        return Tomogram(frame, x, vals)
    if isinstance(state, BoxEigen):
        return box_tomogram(state.n, state.L, frame, x, hbar)
    sq, sp = natural_scales(state, hbar)
    position_side = isinstance(state, CustomGrid) or (
        abs(frame.nu) * sp >= abs(frame.mu) * sq
    )
    if position_side:
        env = position_wavefunction(state, hbar)
        lo, hi = position_extent(state, hbar)
        a = frame.mu / (2.0 * hbar * frame.nu)
        slope = -1.0 / (hbar * frame.nu)
        scale = _env_scale_position(state, hbar)
        pref = 1.0 / (2.0 * math.pi * hbar * abs(frame.nu))
    else:
        env = momentum_wavefunction(state, hbar)
        lo, hi = momentum_extent(state, hbar)
        a = -frame.nu / (2.0 * hbar * frame.mu)
        slope = 1.0 / (hbar * frame.mu)
        scale = _env_scale_position(state, hbar) * sp / sq
        pref = 1.0 / (2.0 * math.pi * hbar * abs(frame.mu))
    amps = _ladder_amplitudes(env, a, slope, x, lo, hi, scale)
    return Tomogram(frame, x, pref * np.abs(amps) ** 2)


def default_x_grid(state: StateSpec, frame: TomographyFrame, hbar: float,
                   count: int = 2001, tails: float = 8.0) -> np.ndarray:
    """Uniform X grid covering mu*[q support] + nu*[p support]."""
    if isinstance(state, BoxEigen):
        lo, hi = box_x_extent(state, frame, hbar)
        return np.linspace(lo, hi, count)
    qlo, qhi = position_extent(state, hbar, tails)
    plo, phi = momentum_extent(state, hbar, tails)
    corners = [frame.mu * q + frame.nu * p for q in (qlo, qhi) for p in (plo, phi)]
    lo, hi = min(corners), max(corners)
    if hi - lo < 1e-9:
        lo -= 1.0
        hi += 1.0
    return np.linspace(lo, hi, count)


def state_tomogram(state: StateSpec, frame: TomographyFrame, x_grid,
                   hbar: float, method: str = "auto") -> Tomogram:
    """Tomogram of a catalog state: closed forms when available
    (method='auto' or 'closed'), otherwise the quadrature route."""
    x = np.asarray(x_grid, dtype=float)
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "quadrature":
        return tomogram_from_wavefunction(state, frame, x, hbar)
    if frame.is_zero:
        return Tomogram(frame, x, np.zeros_like(x), (DeltaAtom(1.0, 0.0),))
    if isinstance(state, HOEigen):
        return Tomogram(frame, x, hermite_tomogram(state.n, frame, x, hbar, state.varpi))
    if isinstance(state, Coherent):
        return Tomogram(frame, x, coherent_tomogram(state.alpha, frame, x, hbar, state.varpi))
    if isinstance(state, (CatEven, CatOdd)):
        parity = "even" if isinstance(state, CatEven) else "odd"
        return Tomogram(frame, x, cat_tomogram(state.alpha, parity, frame, x, hbar, state.varpi))
    if isinstance(state, Superposition):
        return Tomogram(frame, x, superposition_tomogram(state.n, state.m, frame, x, hbar, state.varpi))
    if method == "closed":
        raise TomogramError(f"no closed form for {state!r}")
    return tomogram_from_wavefunction(state, frame, x, hbar)


# ---------------------------------------------------------------------------
# Wigner maps
# ---------------------------------------------------------------------------

def rho_grid(state: StateSpec, hbar: float, x_grid) -> GridFunction2D:
    """Pure-state density matrix rho(x, x') = psi(x) psi*(x') on a grid."""
    x = np.asarray(x_grid, dtype=float)
    psi = position_wavefunction(state, hbar)(x)
    return GridFunction2D(x, x, np.outer(psi, np.conj(psi)))


def _check_hermitian(rho: GridFunction2D) -> None:
    if rho.values.shape[0] != rho.values.shape[1] or not np.array_equal(rho.x_grid, rho.y_grid):
        raise TomogramError("density matrix grid must be square with equal axes")
    scale = max(1.0, float(np.max(np.abs(rho.values))))
    resid = float(np.max(np.abs(rho.values - rho.values.conj().T)))
    if resid > 1e-6 * scale:
        raise TomogramError(f"density matrix is non-Hermitian (residual {resid:.3e})")


def wigner_from_density(rho: GridFunction2D, p: float, q: float,
                        hbar: float) -> float:
    """W(p, q) = int rho(q + u/2, q - u/2) e^{-i p u/hbar} du (real part;
    the imaginary residual of a Hermitian input is at roundoff level)."""
    vals = _wigner_values(rho, np.asarray([float(q)]), np.asarray([float(p)]), hbar)
    return float(vals[0, 0].real)


def wigner_grid_from_density(rho: GridFunction2D, q_grid, p_grid,
                             hbar: float) -> tuple[GridFunction2D, float]:
    """Wigner samples W[iq, ip] plus the worst imaginary residual."""
    q = np.asarray(q_grid, dtype=float)
    p = np.asarray(p_grid, dtype=float)
    out = _wigner_values(rho, q, p, hbar)
    resid = float(np.max(np.abs(out.imag))) if out.size else 0.0
    return GridFunction2D(q, p, out.real), resid


def _wigner_values(rho: GridFunction2D, q: np.ndarray, p: np.ndarray,
                   hbar: float) -> np.ndarray:
    _check_hermitian(rho)
    pmax = float(np.max(np.abs(p))) if p.size else 0.0
    du = rho.dx * 0.5
    if pmax > 0:
        du = min(du, math.pi * hbar / (8.0 * pmax))
    out = np.zeros((q.size, p.size), dtype=complex)
    x0, x1 = rho.x_grid[0], rho.x_grid[-1]
    for i, qq in enumerate(q):
        umax = 2.0 * min(qq - x0, x1 - qq)
        if umax <= 0:
            continue
        nu_pts = int(math.ceil(2.0 * umax / du)) + 1
        u = np.linspace(-umax, umax, nu_pts)
        vals = bilinear_interp(rho.x_grid, rho.y_grid, rho.values, qq + 0.5 * u, qq - 0.5 * u)
        w = np.ones_like(u)
        w[0] = w[-1] = 0.5
        kernel = np.exp(-1j * np.outer(p, u) / hbar)
        out[i, :] = (u[1] - u[0]) * (kernel @ (vals * w))
    return out


def exact_wigner(state: StateSpec, hbar: float):
    """Analytic Wigner function (p, q) -> W for the states that have one
    in closed form here (oscillator eigenstates and coherent states);
    returns None otherwise."""
    if isinstance(state, HOEigen):
        n, w = state.n, state.varpi

        def w_fock(p, q):
            r2 = w * np.asarray(q, float) ** 2 / hbar + np.asarray(p, float) ** 2 / (w * hbar)
            # Laguerre L_n(2 r^2) by upward recurrence
            z = 2.0 * r2
            l0 = np.ones_like(z)
            if n == 0:
                ln = l0
            else:
                l1 = 1.0 - z
                ln = l1
                for k in range(1, n):
                    l0, ln = ln, ((2 * k + 1 - z) * ln - k * l0) / (k + 1)
            return 2.0 * (-1.0) ** n * ln * np.exp(-r2)

        return w_fock
    if isinstance(state, Coherent):
        qbar, pbar = coherent_center(state.alpha, hbar, state.varpi)
        w = state.varpi

        def w_coh(p, q):
            return 2.0 * np.exp(
                -w * (np.asarray(q, float) - qbar) ** 2 / hbar
                - (np.asarray(p, float) - pbar) ** 2 / (w * hbar)
            )

        return w_coh
    return None


def tomogram_from_wigner(w: GridFunction2D, frame: TomographyFrame, x_grid,
                         hbar: float) -> Tomogram:
    """Radon transform of a Wigner grid, (1/2 pi hbar) int W delta(X - mu q - nu p);
    the zero frame returns the unit atom delta(X)."""
    x = np.asarray(x_grid, dtype=float)
    if frame.is_zero:
        return Tomogram(frame, x, np.zeros_like(x), (DeltaAtom(1.0, 0.0),))
    line = radon_line_integral(w, frame, x) / (2.0 * math.pi * hbar)
    np.maximum(line, 0.0, out=line)
    return Tomogram(frame, x, line)


# ---------------------------------------------------------------------------
# tomogram families and the inverse maps
# ---------------------------------------------------------------------------

def _support_slice(state: StateSpec, frame: TomographyFrame, hbar: float,
                   x: np.ndarray) -> slice:
    """Index window of x where the state's tomogram can be nonzero
    (mu*[q support] + nu*[p support], padded by one width unit)."""
    if isinstance(state, BoxEigen):
        lo, hi = box_x_extent(state, frame, hbar, mass_tol=1e-6)
    else:
        qlo, qhi = position_extent(state, hbar, tails=10.0)
        plo, phi = momentum_extent(state, hbar, tails=10.0)
        corners = [frame.mu * q + frame.nu * p for q in (qlo, qhi) for p in (plo, phi)]
        lo, hi = min(corners) - 0.5, max(corners) + 0.5
    i0 = int(np.searchsorted(x, lo))
    i1 = int(np.searchsorted(x, hi)) + 1
    return slice(max(i0 - 1, 0), min(i1 + 1, x.size))


def build_state_family(state: StateSpec, hbar: float, mu_grid, nu_grid,
                       x_grid, method: str = "auto") -> RadonFamily:
    """Tomograms of one state over a rectangular (mu, nu) grid with a
    common X grid, for the Wigner-reconstruction integral.

    Each frame is only evaluated inside its own support window on the
    common grid (the tomogram vanishes beyond mu*[q support] +
    nu*[p support]), which keeps quadrature-route states affordable.
    """
    mu_grid = np.asarray(mu_grid, dtype=float)
    nu_grid = np.asarray(nu_grid, dtype=float)
    x = np.asarray(x_grid, dtype=float)
    vals = np.zeros((mu_grid.size, nu_grid.size, x.size))
    mask = np.zeros((mu_grid.size, nu_grid.size), dtype=bool)
    for i, mu in enumerate(mu_grid):
        for j, nu in enumerate(nu_grid):
            if mu == 0.0 and nu == 0.0:
                mask[i, j] = True
                continue
            fr = TomographyFrame(mu, nu)
            win = _support_slice(state, fr, hbar, x)
            tom = state_tomogram(state, fr, x[win], hbar, method)
            vals[i, j, win] = tom.values
    # declared alias radii: 4-sigma support is what the Nyquist check needs,
    # not the 8-sigma quadrature padding
    qlo, qhi = position_extent(state, hbar, tails=4.0)
    plo, phi = momentum_extent(state, hbar, tails=4.0)
    q_extent = max(abs(qlo), abs(qhi))
    p_extent = max(abs(plo), abs(phi))
    return RadonFamily(mu_grid, nu_grid, x, vals, mask, q_extent, p_extent)


def wigner_from_tomogram(family: RadonFamily, p: float, q: float,
                         hbar: float) -> float:
    """W(p, q) = (hbar/2 pi) * int W(X, mu, nu) e^{i(X - mu q - nu p)} dX dmu dnu."""
    acc = characteristic_quadrature(family, np.asarray([float(q)]), np.asarray([float(p)]))
    return float(acc[0, 0].real * hbar / (2.0 * math.pi))


def wigner_from_tomogram_grid(family: RadonFamily, q_grid, p_grid,
                              hbar: float) -> tuple[GridFunction2D, float]:
    """Wigner reconstruction W[iq, ip] plus the worst imaginary residual."""
    q = np.asarray(q_grid, dtype=float)
    p = np.asarray(p_grid, dtype=float)
    acc = characteristic_quadrature(family, q, p)
    acc *= hbar / (2.0 * math.pi)
    return GridFunction2D(q, p, acc.real), float(np.max(np.abs(acc.imag)))


@dataclass(frozen=True)
class TomogramSlices:
    """Tomograms over (X, mu) at a fixed set of nu slices, the sampling
    needed by the density-matrix reconstruction where nu = (x - x')/hbar.

    char[inu, imu] caches int W(X) e^{iX} dX per frame (atoms included).
    """

    nu_values: np.ndarray
    mu_grid: np.ndarray
    x_grid: np.ndarray
    values: np.ndarray  # (nnu, nmu, nX)
    char: np.ndarray    # (nnu, nmu) complex

    def slice_index(self, nu: float) -> int:
        tol = 1e-9 * max(1.0, abs(nu))
        idx = int(np.argmin(np.abs(self.nu_values - nu)))
        if abs(self.nu_values[idx] - nu) > tol:
            raise TomogramError(
                f"missing tomogram slice: nu = {nu!r} not sampled "
                f"(nearest available {self.nu_values[idx]!r})"
            )
        return idx


def build_state_slices(state: StateSpec, hbar: float, nu_values, mu_grid,
                       x_grid, method: str = "auto") -> TomogramSlices:
    nu_values = np.asarray(nu_values, dtype=float)
    mu_grid = np.asarray(mu_grid, dtype=float)
    x = np.asarray(x_grid, dtype=float)
    vals = np.zeros((nu_values.size, mu_grid.size, x.size))
    char = np.zeros((nu_values.size, mu_grid.size), dtype=complex)
    dx = float(x[1] - x[0])
    w = np.ones_like(x)
    w[0] = w[-1] = 0.5
    kernel = np.exp(1j * x) * w * dx
    for i, nu in enumerate(nu_values):
        for j, mu in enumerate(mu_grid):
            if mu == 0.0 and nu == 0.0:
                char[i, j] = 1.0  # unit atom at X = 0
                continue
            fr = TomographyFrame(mu, nu)
            win = _support_slice(state, fr, hbar, x)
            tom = state_tomogram(state, fr, x[win], hbar, method)
            vals[i, j, win] = tom.values
            char[i, j] = np.dot(vals[i, j], kernel)
    return TomogramSlices(nu_values, mu_grid, x, vals, char)


def density_from_tomogram(slices: TomogramSlices, x: float, xprime: float,
                          hbar: float) -> complex:
    """rho(x, x') = (1/2 pi) int W(X, mu, (x - x')/hbar)
                                e^{i(X - mu (x + x')/2)} dX dmu."""
    nu = (x - xprime) / hbar
    i = slices.slice_index(nu)
    mu = slices.mu_grid
    dmu = float(mu[1] - mu[0])
    if dmu * abs(x + xprime) / 2.0 > math.pi:
        raise TomogramError(
            f"mu grid too coarse for |x + x'|/2 = {abs(x + xprime) / 2:.3f} "
            f"(need dmu <= {math.pi / (abs(x + xprime) / 2):.3f})"
        )
    w = np.ones_like(mu)
    w[0] = w[-1] = 0.5
    integrand = slices.char[i] * np.exp(-1j * mu * (x + xprime) / 2.0) * w
    return complex(np.sum(integrand) * dmu / (2.0 * math.pi))


def density_grid_from_tomogram(slices: TomogramSlices, x_points,
                               hbar: float) -> tuple[np.ndarray, float]:
    """rho on the pairwise grid of x_points; returns (matrix, Hermiticity residual)."""
    xs = np.asarray(x_points, dtype=float)
    n = xs.size
    rho = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            rho[i, j] = density_from_tomogram(slices, xs[i], xs[j], hbar)
    resid = float(np.max(np.abs(rho - rho.conj().T)))
    return rho, resid
