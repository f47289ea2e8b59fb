"""Classical scattering from the uniform dielectric slab on [-L, L].

Reflection/transmission coefficients, interior amplitudes, the three-region
mode functions for left and right incidence, the closed forms at bare
resonances (where the interior index vanishes), and the outgoing-wave
Green's function built from the two mode functions.

The textbook coefficient expressions contain sin/cos of the complex interior
phase 2*kappa*L, which overflow deep inside absorption bands.  Everything
here is evaluated with the growing exponential factored out, so only the
bounded factor P = exp(2i*kappa*L) (|P| <= 1 for decaying evanescent waves)
ever appears.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import PoleDivergentFrequency
from .medium import BandKind, MediumSpec, refractive_index

REGION_I = "I"
REGION_II = "II"
REGION_III = "III"

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class ScatterSolution:
    """Scattering data at one frequency.

    R and T are the reflection and transmission coefficients; the B fields
    are the interior plane-wave amplitudes for left/right incidence.  The
    denominator D is reported as defined by the unfactored expressions and
    vanishes in the resonance limit n0 -> 0, where R, T and the interior
    amplitudes are the analytic limits of the general formulas.
    """

    omega: float
    k: float
    kappa: complex
    n0: complex
    half_length_L: float
    R: complex
    T: complex
    B_r_left: complex
    B_l_left: complex
    B_r_right: complex
    B_l_right: complex
    D: complex
    band_kind: BandKind


@dataclass(frozen=True)
class ModeFunctionSample:
    x: float
    value: complex
    derivative: complex
    region: str


@dataclass(frozen=True)
class GreensValue:
    x: float
    x_src: float
    value: complex
    derivative: complex | None = None


def resonance_coefficients(omega: float, half_length_L: float, c: float = 1.0) -> tuple[complex, complex]:
    """R and T in the zero-index limit reached at each bare resonance.

        T = c e^{-2i omega L / c} / (c - i omega L)
        R = i omega L e^{-2i omega L / c} / (c - i omega L)

    |R|^2 + |T|^2 = 1 holds algebraically.  ``c`` defaults to scaled units.
    """
    if not omega > 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    theta = omega * half_length_L / c
    phase = cmath.exp(-2j * theta)
    denom = 1.0 - 1j * theta
    return (1j * theta) * phase / denom, phase / denom


def _scaled_parameters(medium: MediumSpec, omega: float) -> tuple[float, complex, BandKind]:
    """(scaled frequency, interior index, band kind); rejects index poles."""
    index = refractive_index(medium, omega)
    if index.band_kind is BandKind.POLE_DIVERGENT:
        raise PoleDivergentFrequency(
            f"omega={omega} sits exactly on a band-edge index pole; "
            "sample band interiors instead"
        )
    return omega / medium.omega_scale, index.n, index.band_kind


class _SlabWave:
    """Evaluator for u_left, u_right and u_left/T at one frequency.

    Works in scaled units (c = 1, L = 1) internally; the owning functions
    convert positions and derivatives at the boundary.  All region-II
    expressions keep every exponential bounded for Im(kappa) >= 0.
    """

    def __init__(self, medium: MediumSpec, omega: float):
        w, n0, kind = _scaled_parameters(medium, omega)
        self.medium = medium
        self.omega = omega
        self.w = w  # scaled frequency = scaled vacuum wavenumber
        self.n0 = n0
        self.band_kind = kind
        self.at_resonance = kind is BandKind.RESONANCE_ZERO
        self.kappa = n0 * w
        if self.at_resonance:
            denom = 1.0 - 1j * w
            self.T = cmath.exp(-2j * w) / denom
            self.R = 1j * w * cmath.exp(-2j * w) / denom
            self.interior_value = 0.5 * cmath.exp(-1j * w) / denom
            self.B_r = self.interior_value
            self.B_l = self.interior_value
            self.D = 0j
        else:
            P = cmath.exp(2j * self.kappa)
            up = (n0 + 1.0) ** 2
            dn = (n0 - 1.0) ** 2
            denom = up - dn * P * P
            E2 = cmath.exp(-2j * w)
            E1 = cmath.exp(-1j * w)
            self.P = P
            self.denom = denom
            self.T = 4.0 * n0 * E2 * P / denom
            self.R = (n0 * n0 - 1.0) * (1.0 - P * P) * E2 / denom
            self.B_r = 2.0 * n0 * (n0 + 1.0) * E1 * cmath.exp(1j * self.kappa) / denom
            self.B_l = -2.0 * n0 * (n0 - 1.0) * E1 * cmath.exp(3j * self.kappa) / denom
            try:
                self.D = 0.5 * (up / P - dn * P)
            except ZeroDivisionError:  # P underflowed: D is beyond float range
                self.D = complex("inf")

    def region(self, x: float) -> str:
        if x < -1.0:
            return REGION_I
        if x > 1.0:
            return REGION_III
        return REGION_II

    def interior(self, side: str, x: float) -> tuple[complex, complex]:
        """u and du/dx inside the slab, -1 <= x <= 1 (scaled)."""
        if self.at_resonance:
            return 2.0 * self.interior_value, 0j
        n0, kap = self.n0, self.kappa
        E1 = cmath.exp(-1j * self.w)
        if side == LEFT:
            ea = cmath.exp(1j * kap * (x + 1.0))
            eb = cmath.exp(1j * kap * (3.0 - x))
        else:
            ea = cmath.exp(1j * kap * (1.0 - x))
            eb = cmath.exp(1j * kap * (3.0 + x))
        pref = 2.0 * n0 * E1 / self.denom
        value = pref * ((n0 + 1.0) * ea - (n0 - 1.0) * eb)
        sign = 1.0 if side == LEFT else -1.0
        deriv = sign * 1j * kap * pref * ((n0 + 1.0) * ea + (n0 - 1.0) * eb)
        return value, deriv

    def sample(self, side: str, x: float) -> tuple[complex, complex, str]:
        """(u, du/dx, region) at scaled position x; seams evaluate as region II."""
        region = self.region(x)
        w = self.w
        if region == REGION_II:
            value, deriv = self.interior(side, x)
            return value, deriv, region
        if side == LEFT:
            if region == REGION_I:
                ep = cmath.exp(1j * w * x)
                em = cmath.exp(-1j * w * x)
                return ep + self.R * em, 1j * w * (ep - self.R * em), region
            ep = cmath.exp(1j * w * x)
            return self.T * ep, 1j * w * self.T * ep, region
        if region == REGION_III:
            ep = cmath.exp(1j * w * x)
            em = cmath.exp(-1j * w * x)
            return em + self.R * ep, 1j * w * (-em + self.R * ep), region
        em = cmath.exp(-1j * w * x)
        return self.T * em, -1j * w * self.T * em, region

    def left_over_T(self, x: float) -> tuple[complex, complex]:
        """u_left(x)/T and its derivative; finite even where T underflows in III."""
        region = self.region(x)
        w = self.w
        if region == REGION_III:
            ep = cmath.exp(1j * w * x)
            return ep, 1j * w * ep
        if self.at_resonance and region == REGION_II:
            return cmath.exp(1j * w), 0j
        value, deriv, _ = self.sample(LEFT, x)
        return value / self.T, deriv / self.T


def scatter_coefficients(medium: MediumSpec, omega: float) -> ScatterSolution:
    """Solve the slab scattering problem at one frequency.

    Field matching (continuous u and continuous u'/n^2 across x = +/-L)
    yields, with kappa = n0 omega/c and D = 2 n0 cos(2 kappa L)
    - i (n0^2+1) sin(2 kappa L):

        R = -i (n0^2 - 1) sin(2 kappa L) e^{-2ikL} / D
        T = 2 n0 e^{-2ikL} / D

    plus the four interior amplitudes.  |R|^2 + |T|^2 = 1 at every real
    frequency, including inside absorption bands where kappa is imaginary.
    At bare resonances (n0 = 0) the analytic limits are used.

    Raises
    ------
    PoleDivergentFrequency
        Exactly at a band-edge pole of the refractive index.
    """
    wave = _SlabWave(medium, omega)
    k = omega / medium.c
    return ScatterSolution(
        omega=omega,
        k=k,
        kappa=wave.n0 * k,
        n0=wave.n0,
        half_length_L=medium.half_length_L,
        R=wave.R,
        T=wave.T,
        B_r_left=wave.B_r,
        B_l_left=wave.B_l,
        B_r_right=wave.B_l,
        B_l_right=wave.B_r,
        D=wave.D,
        band_kind=wave.band_kind,
    )


def mode_function(medium: MediumSpec, omega: float, side: str, x: float) -> ModeFunctionSample:
    """Evaluate the scattering mode function u(x) and its derivative.

    ``side`` selects incidence from the ``"left"`` (unit wave moving right)
    or ``"right"``.  Positions exactly at the seams x = +/-L return the
    region-II values.
    """
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    wave = _SlabWave(medium, omega)
    L = medium.half_length_L
    value, deriv, region = wave.sample(side, x / L)
    return ModeFunctionSample(x=x, value=value, derivative=deriv / L, region=region)


def greens_function(
    medium: MediumSpec,
    omega: float,
    x: float,
    x_src: float,
    with_derivative: bool = False,
) -> GreensValue:
    """Outgoing-wave Green's function of the slab Helmholtz problem.

    G(x, x') = u_left(x_>) u_right(x_<) / (2 i omega c T), which satisfies
    d/dx[(c^2/n^2) dG/dx] + omega^2 G = delta(x - x'), radiates outward at
    +/-infinity, and is symmetric under x <-> x'.  The derivative (optional)
    is with respect to ``x``; it is undefined at x = x_src and rejected there.
    """
    wave = _SlabWave(medium, omega)
    L = medium.half_length_L
    xs, ss = x / L, x_src / L
    lo, hi = (xs, ss) if xs <= ss else (ss, xs)
    wl, dwl = wave.left_over_T(hi)
    ur, dur, _ = wave.sample(RIGHT, lo)
    scale = 1.0 / (2j * wave.w)
    value = scale * wl * ur * (L / medium.c**2)
    if not with_derivative:
        return GreensValue(x=x, x_src=x_src, value=value)
    if xs == ss:
        raise ValueError("the Green's-function derivative is undefined at x == x_src")
    if xs > ss:
        deriv_scaled = scale * dwl * ur
    else:
        deriv_scaled = scale * wl * dur
    return GreensValue(x=x, x_src=x_src, value=value, derivative=deriv_scaled / medium.c**2)
