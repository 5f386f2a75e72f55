"""Quantum state catalog and the descriptor mini-language.

Each state is a small immutable spec; position wave functions psi(y) and
their hbar-scaled Fourier transforms

    psihat(p) = (2*pi*hbar)^(-1/2) * int psi(y) exp(-i*p*y/hbar) dy

are evaluated on demand.  hbar is always passed alongside the spec so
one spec can be swept through Planck/Ehrenfest families.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Union

import numpy as np

from .specfun import hermite_phi

__all__ = [
    "HOEigen",
    "Coherent",
    "CatEven",
    "CatOdd",
    "Superposition",
    "BoxEigen",
    "CustomGrid",
    "StateSpec",
    "DescriptorError",
    "parse_state",
    "state_descriptor",
    "cat_normalization",
    "coherent_center",
    "position_wavefunction",
    "momentum_wavefunction",
    "natural_scales",
    "position_extent",
    "planck_scaled_state",
]


@dataclass(frozen=True)
class HOEigen:
    """Harmonic-oscillator eigenstate |n> with mass*frequency varpi."""

    n: int
    varpi: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"oscillator quantum number must be >= 0, got {self.n}")
        if not self.varpi > 0:
            raise ValueError(f"varpi must be positive, got {self.varpi}")


@dataclass(frozen=True)
class Coherent:
    """Coherent state |alpha> of the varpi oscillator."""

    alpha: complex
    varpi: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not self.varpi > 0:
            raise ValueError(f"varpi must be positive, got {self.varpi}")


@dataclass(frozen=True)
class CatEven:
    """Even coherent superposition N+ (|alpha> + |-alpha>)."""

    alpha: complex
    varpi: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))


@dataclass(frozen=True)
class CatOdd:
    """Odd coherent superposition N- (|alpha> - |-alpha>)."""

    alpha: complex
    varpi: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))


@dataclass(frozen=True)
class Superposition:
    """Equal-weight superposition (|n> + |m>)/sqrt(2) of oscillator eigenstates."""

    n: int
    m: int
    varpi: float = 1.0

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("superposition orders must be nonnegative")
        if self.n == self.m:
            raise ValueError("superposition requires two distinct eigenstates")


@dataclass(frozen=True)
class BoxEigen:
    """Eigenstate n of the infinite square well on [0, L] (mass 1)."""

    n: int
    L: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"box quantum number must be >= 1, got {self.n}")
        if not self.L > 0:
            raise ValueError(f"box width must be positive, got {self.L}")


class CustomGrid:
    """Arbitrary normalized wave function sampled on a uniform grid.

    Samples are interpolated linearly and treated as zero outside the
    grid.  The L2 norm must be 1 within 1e-8.
    """

    def __init__(self, x_grid, psi):
        x = np.array(x_grid, dtype=float)
        v = np.array(psi, dtype=complex)
        if x.ndim != 1 or v.shape != x.shape or x.size < 4:
            raise ValueError("CustomGrid needs matching 1D arrays of at least 4 samples")
        d = np.diff(x)
        if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-9):
            raise ValueError("CustomGrid x-grid must be uniform increasing")
        norm = math.sqrt(float(np.trapezoid(np.abs(v) ** 2, x)))
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"CustomGrid wave function has L2 norm {norm!r}, expected 1")
        x.setflags(write=False)
        v.setflags(write=False)
        self.x_grid = x
        self.psi = v

    def __repr__(self):
        return f"CustomGrid(n={self.x_grid.size}, span=[{self.x_grid[0]}, {self.x_grid[-1]}])"


StateSpec = Union[HOEigen, Coherent, CatEven, CatOdd, Superposition, BoxEigen, CustomGrid]


def cat_normalization(alpha: complex, parity: str) -> float:
    """N_+- = 1/sqrt(2(1 +- exp(-2|alpha|^2)))."""
    a2 = abs(alpha) ** 2
    sign = 1.0 if parity == "even" else -1.0
    return 1.0 / math.sqrt(2.0 * (1.0 + sign * math.exp(-2.0 * a2)))


def coherent_center(alpha: complex, hbar: float, varpi: float = 1.0) -> tuple[float, float]:
    """Phase-space mean (q, p) of |alpha>: alpha = (sqrt(varpi) q + i p/sqrt(varpi)) / sqrt(2 hbar)."""
    qbar = math.sqrt(2.0 * hbar / varpi) * alpha.real
    pbar = math.sqrt(2.0 * hbar * varpi) * alpha.imag
    return qbar, pbar


def _coherent_psi(alpha: complex, hbar: float, varpi: float, y: np.ndarray) -> np.ndarray:
    qbar, pbar = coherent_center(alpha, hbar, varpi)
    amp = (varpi / (math.pi * hbar)) ** 0.25
    return amp * np.exp(
        -varpi * (y - qbar) ** 2 / (2.0 * hbar)
        + 1j * pbar * y / hbar
        - 0.5j * pbar * qbar / hbar
    )


def _coherent_psihat(alpha: complex, hbar: float, varpi: float, p: np.ndarray) -> np.ndarray:
    qbar, pbar = coherent_center(alpha, hbar, varpi)
    amp = (1.0 / (math.pi * hbar * varpi)) ** 0.25
    return amp * np.exp(
        -((p - pbar) ** 2) / (2.0 * hbar * varpi)
        - 1j * qbar * p / hbar
        + 0.5j * pbar * qbar / hbar
    )


def position_wavefunction(state: StateSpec, hbar: float):
    """Vectorized psi(y) for the given state at the given hbar."""
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    if isinstance(state, HOEigen):
        s = math.sqrt(state.varpi / hbar)
        n = state.n
        return lambda y: math.sqrt(s) * hermite_phi(n, s * np.asarray(y, dtype=float)) + 0j
    if isinstance(state, Coherent):
        return lambda y: _coherent_psi(state.alpha, hbar, state.varpi, np.asarray(y, dtype=float))
    if isinstance(state, (CatEven, CatOdd)):
        sign = 1.0 if isinstance(state, CatEven) else -1.0
        N = cat_normalization(state.alpha, "even" if sign > 0 else "odd")
        a, w = state.alpha, state.varpi

        def cat_psi(y):
            y = np.asarray(y, dtype=float)
            return N * (_coherent_psi(a, hbar, w, y) + sign * _coherent_psi(-a, hbar, w, y))

        return cat_psi
    if isinstance(state, Superposition):
        s = math.sqrt(state.varpi / hbar)
        n, m = state.n, state.m

        def sup_psi(y):
            y = np.asarray(y, dtype=float)
            return math.sqrt(s / 2.0) * (hermite_phi(n, s * y) + hermite_phi(m, s * y)) + 0j

        return sup_psi
    if isinstance(state, BoxEigen):
        k = state.n * math.pi / state.L
        amp = math.sqrt(2.0 / state.L)
        L = state.L

        def box_psi(y):
            y = np.asarray(y, dtype=float)
            inside = (y >= 0.0) & (y <= L)
            return np.where(inside, amp * np.sin(k * y), 0.0) + 0j

        return box_psi
    if isinstance(state, CustomGrid):
        xg, pg = state.x_grid, state.psi

        def custom_psi(y):
            y = np.asarray(y, dtype=float)
            re = np.interp(y, xg, pg.real, left=0.0, right=0.0)
            im = np.interp(y, xg, pg.imag, left=0.0, right=0.0)
            return re + 1j * im

        return custom_psi
    raise TypeError(f"unknown state spec {state!r}")


def momentum_wavefunction(state: StateSpec, hbar: float):
    """Vectorized psihat(p) in the hbar-scaled Fourier convention."""
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    if isinstance(state, HOEigen):
        s = math.sqrt(1.0 / (state.varpi * hbar))
        n = state.n
        phase = (-1j) ** n
        return lambda p: phase * math.sqrt(s) * hermite_phi(n, s * np.asarray(p, dtype=float))
    if isinstance(state, Coherent):
        return lambda p: _coherent_psihat(state.alpha, hbar, state.varpi, np.asarray(p, dtype=float))
    if isinstance(state, (CatEven, CatOdd)):
        sign = 1.0 if isinstance(state, CatEven) else -1.0
        N = cat_normalization(state.alpha, "even" if sign > 0 else "odd")
        a, w = state.alpha, state.varpi

        def cat_ft(p):
            p = np.asarray(p, dtype=float)
            return N * (_coherent_psihat(a, hbar, w, p) + sign * _coherent_psihat(-a, hbar, w, p))

        return cat_ft
    if isinstance(state, Superposition):
        s = math.sqrt(1.0 / (state.varpi * hbar))
        n, m = state.n, state.m

        def sup_ft(p):
            p = np.asarray(p, dtype=float)
            return math.sqrt(s / 2.0) * (
                (-1j) ** n * hermite_phi(n, s * p) + (-1j) ** m * hermite_phi(m, s * p)
            )

        return sup_ft
    if isinstance(state, BoxEigen):
        k = state.n * math.pi / state.L
        L = state.L
        alt = (-1.0) ** state.n
        amp = math.sqrt(2.0 / L) / math.sqrt(2.0 * math.pi * hbar)

        def box_ft(p):
            p = np.asarray(p, dtype=float)
            q = p / hbar
            denom = k * k - q * q
            near = np.abs(denom) < 1e-9 * k * k
            denom_safe = np.where(near, 1.0, denom)
            main = k * (1.0 - alt * np.exp(-1j * q * L)) / denom_safe
            resonant = np.where(q > 0, -0.5j * L, 0.5j * L)
            return amp * np.where(near, resonant, main)

        return box_ft
    if isinstance(state, CustomGrid):
        xg, pg = state.x_grid, state.psi
        pref = 1.0 / math.sqrt(2.0 * math.pi * hbar)

        def custom_ft(p):
            p = np.atleast_1d(np.asarray(p, dtype=float))
            ker = np.exp(-1j * np.outer(p, xg) / hbar)
            out = pref * np.trapezoid(ker * pg[None, :], xg, axis=1)
            return out if out.size > 1 else out[0]

        return custom_ft
    raise TypeError(f"unknown state spec {state!r}")


def natural_scales(state: StateSpec, hbar: float) -> tuple[float, float]:
    """(position width, momentum width) used for representation dispatch."""
    if isinstance(state, (HOEigen, Coherent, CatEven, CatOdd, Superposition)):
        w = state.varpi
        return math.sqrt(hbar / w), math.sqrt(hbar * w)
    if isinstance(state, BoxEigen):
        return state.L / 2.0, hbar * state.n * math.pi / state.L
    if isinstance(state, CustomGrid):
        dens = np.abs(state.psi) ** 2
        mass = np.trapezoid(dens, state.x_grid)
        mean = np.trapezoid(state.x_grid * dens, state.x_grid) / mass
        var = np.trapezoid((state.x_grid - mean) ** 2 * dens, state.x_grid) / mass
        sq = max(math.sqrt(max(var, 0.0)), 1e-6)
        return sq, hbar / sq
    raise TypeError(f"unknown state spec {state!r}")


def position_extent(state: StateSpec, hbar: float, tails: float = 8.0) -> tuple[float, float]:
    """Interval [ymin, ymax] outside which |psi| is negligible."""
    if isinstance(state, HOEigen):
        r = math.sqrt(hbar / state.varpi) * (math.sqrt(2.0 * state.n + 1.0) + tails)
        return -r, r
    if isinstance(state, Superposition):
        nmax = max(state.n, state.m)
        r = math.sqrt(hbar / state.varpi) * (math.sqrt(2.0 * nmax + 1.0) + tails)
        return -r, r
    if isinstance(state, Coherent):
        qbar, _ = coherent_center(state.alpha, hbar, state.varpi)
        r = tails * math.sqrt(hbar / state.varpi)
        return qbar - r, qbar + r
    if isinstance(state, (CatEven, CatOdd)):
        qbar, _ = coherent_center(state.alpha, hbar, state.varpi)
        r = abs(qbar) + tails * math.sqrt(hbar / state.varpi)
        return -r, r
    if isinstance(state, BoxEigen):
        return 0.0, state.L
    if isinstance(state, CustomGrid):
        return float(state.x_grid[0]), float(state.x_grid[-1])
    raise TypeError(f"unknown state spec {state!r}")


def planck_scaled_state(profile: CustomGrid, gamma: float, hbar: float,
                        x0: float = 0.0) -> CustomGrid:
    """Apply the scaling law psi(x) = hbar^(gamma/2) * Psi(hbar^gamma * (x - x0)).

    The profile grid is stretched by hbar^(-gamma) so the scaled state
    stays exactly normalized; gamma in [-1, 0] is the validated range.
    """
    if not -1.0 <= gamma <= 0.0:
        raise ValueError(f"scaling exponent gamma must lie in [-1, 0], got {gamma}")
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    scale = hbar ** (-gamma)
    return CustomGrid(profile.x_grid * scale + x0, profile.psi * hbar ** (gamma / 2.0))


# ---------------------------------------------------------------------------
# descriptor mini-language
# ---------------------------------------------------------------------------

class DescriptorError(ValueError):
    """State descriptor parse failure; carries the offending position."""

    def __init__(self, text: str, pos: int, message: str):
        self.text = text
        self.pos = pos
        marker = " " * pos + "^"
        super().__init__(f"{message}\n  {text}\n  {marker}")


def _parse_kv(text: str, body: str, offset: int, allowed: dict[str, type],
              required: tuple[str, ...]) -> dict:
    out: dict = {}
    pos = offset
    for token in body.split(","):
        if not token:
            raise DescriptorError(text, pos, "empty descriptor field")
        if "=" not in token:
            raise DescriptorError(text, pos, f"expected key=value, got {token!r}")
        key, val = token.split("=", 1)
        if key not in allowed:
            raise DescriptorError(text, pos, f"unknown key {key!r} (allowed: {', '.join(sorted(allowed))})")
        if key in out:
            raise DescriptorError(text, pos, f"duplicate key {key!r}")
        try:
            out[key] = allowed[key](val)
        except ValueError:
            raise DescriptorError(text, pos + len(key) + 1,
                                  f"cannot parse {val!r} as {allowed[key].__name__}") from None
        pos += len(token) + 1
    for key in required:
        if key not in out:
            raise DescriptorError(text, len(text), f"missing required key {key!r}")
    return out


def parse_state(text: str) -> StateSpec:
    """Parse a state descriptor:

        ho:n=<int>[,varpi=<f>]       coherent:re=<f>,im=<f>
        cat:even|odd,re=<f>,im=<f>   superpos:n=<int>,m=<int>
        box:n=<int>,L=<f>            custom:<path.csv>
    """
    if ":" not in text:
        raise DescriptorError(text, 0, "descriptor must look like kind:args")
    kind, body = text.split(":", 1)
    off = len(kind) + 1
    if kind == "ho":
        kv = _parse_kv(text, body, off, {"n": int, "varpi": float}, ("n",))
        return HOEigen(kv["n"], kv.get("varpi", 1.0))
    if kind == "coherent":
        kv = _parse_kv(text, body, off, {"re": float, "im": float}, ())
        return Coherent(complex(kv.get("re", 0.0), kv.get("im", 0.0)))
    if kind == "cat":
        parts = body.split(",", 1)
        parity = parts[0]
        if parity not in ("even", "odd"):
            raise DescriptorError(text, off, f"cat parity must be even or odd, got {parity!r}")
        kv = _parse_kv(text, parts[1] if len(parts) > 1 else "", off + len(parity) + 1,
                       {"re": float, "im": float}, ()) if len(parts) > 1 else {}
        alpha = complex(kv.get("re", 0.0), kv.get("im", 0.0))
        return CatEven(alpha) if parity == "even" else CatOdd(alpha)
    if kind == "superpos":
        kv = _parse_kv(text, body, off, {"n": int, "m": int}, ("n", "m"))
        return Superposition(kv["n"], kv["m"])
    if kind == "box":
        kv = _parse_kv(text, body, off, {"n": int, "L": float}, ("n",))
        return BoxEigen(kv["n"], kv.get("L", 1.0))
    if kind == "custom":
        path = body
        if not os.path.exists(path):
            raise DescriptorError(text, off, f"custom state file not found: {path!r}")
        data = np.genfromtxt(path, delimiter=",", names=True)
        names = data.dtype.names or ()
        if "x" not in names or "re" not in names:
            raise DescriptorError(text, off, "custom CSV needs header x,re[,im]")
        im = data["im"] if "im" in names else np.zeros_like(data["x"])
        return CustomGrid(data["x"], data["re"] + 1j * im)
    raise DescriptorError(text, 0, f"unknown state kind {kind!r}")


def state_descriptor(state: StateSpec) -> str:
    """Inverse of parse_state for catalog states (used in JSON sidecars)."""
    if isinstance(state, HOEigen):
        return f"ho:n={state.n},varpi={state.varpi:g}"
    if isinstance(state, Coherent):
        return f"coherent:re={state.alpha.real:g},im={state.alpha.imag:g}"
    if isinstance(state, CatEven):
        return f"cat:even,re={state.alpha.real:g},im={state.alpha.imag:g}"
    if isinstance(state, CatOdd):
        return f"cat:odd,re={state.alpha.real:g},im={state.alpha.imag:g}"
    if isinstance(state, Superposition):
        return f"superpos:n={state.n},m={state.m}"
    if isinstance(state, BoxEigen):
        return f"box:n={state.n},L={state.L:g}"
    if isinstance(state, CustomGrid):
        return "custom:<grid>"
    raise TypeError(f"unknown state spec {state!r}")
