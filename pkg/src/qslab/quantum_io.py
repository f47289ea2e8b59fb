"""Quantum input-output layer: per-frequency S-matrix and pulse photodetection.

The scattering relates in- and out-mode annihilation operators through the
unitary, symmetric matrix [[T, R], [R, T]] at each frequency.  Because the
model is linear and the map unitary, coherent-state amplitudes transform
classically and carry complete information for the implemented observables;
normal-ordered detection correlators reduce to squared classical amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DetectorInsideMedium
from .medium import TOL_OMEGA, MediumSpec, band_edges
from .slab import scatter_coefficients

HBAR = 1.054571817e-34  # J s
EPSILON_0 = 8.8541878128e-12  # F/m

PREFACTOR_NORMALIZED = "normalized"
PREFACTOR_PHYSICAL = "physical"

# Pole-adjacent grid frequencies are nudged into the band interior by this
# relative amount; the pole set has measure zero.
POLE_NUDGE = 1e-8

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class SMatrix:
    """Unitary 2x2 map from (a_{+k}, a_{-k}) in-amplitudes to out-amplitudes."""

    omega: float
    matrix: np.ndarray

    @property
    def T(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def R(self) -> complex:
        return complex(self.matrix[0, 1])


@dataclass(frozen=True)
class PulseSpectrum:
    """Complex spectral amplitude f(k) sampled on an ascending positive k grid.

    f is used as-is: sum |f|^2 dk sets the photon-number scale, and no
    implicit normalization is applied.
    """

    k_grid: np.ndarray
    f_values: np.ndarray

    def __post_init__(self) -> None:
        k = np.asarray(self.k_grid, dtype=float)
        f = np.asarray(self.f_values, dtype=complex)
        if k.ndim != 1 or k.size < 2:
            raise ValueError("k_grid must be a 1-D array with at least two points")
        if f.shape != k.shape:
            raise ValueError("f_values must match k_grid in shape")
        if not np.all(k > 0.0):
            raise ValueError("all k_grid entries must be positive (f vanishes for k < 0)")
        if not np.all(np.diff(k) > 0.0):
            raise ValueError("k_grid must be strictly ascending")
        if not (np.all(np.isfinite(k)) and np.all(np.isfinite(f.real)) and np.all(np.isfinite(f.imag))):
            raise ValueError("pulse spectrum contains non-finite entries")
        object.__setattr__(self, "k_grid", k)
        object.__setattr__(self, "f_values", f)

    def trapezoid_weights(self) -> np.ndarray:
        k = self.k_grid
        w = np.empty_like(k)
        w[0] = 0.5 * (k[1] - k[0])
        w[-1] = 0.5 * (k[-1] - k[-2])
        w[1:-1] = 0.5 * (k[2:] - k[:-2])
        return w


@dataclass(frozen=True)
class DetectionTrace:
    """Photodetection rate versus time at a fixed detector position."""

    detector_x: float
    t_grid: np.ndarray
    rate_values: np.ndarray
    prefactor_mode: str
    nudged_frequencies: tuple[tuple[float, float], ...] = field(default_factory=tuple)


def s_matrix(medium: MediumSpec, omega: float) -> SMatrix:
    """Assemble the S-matrix [[T, R], [R, T]] at one frequency.

    Unitarity is checked at construction; it holds at every real frequency,
    including inside the band gaps where the interior field is evanescent.
    """
    sol = scatter_coefficients(medium, omega)
    m = np.array([[sol.T, sol.R], [sol.R, sol.T]], dtype=complex)
    defect = np.abs(m.conj().T @ m - np.eye(2)).max()
    if defect > UNITARITY_TOL:
        raise ArithmeticError(
            f"S-matrix unitarity defect {defect:.3e} exceeds {UNITARITY_TOL} at omega={omega}"
        )
    return SMatrix(omega=omega, matrix=m)


def transform_coherent(s: SMatrix, alpha_in: tuple[complex, complex]) -> tuple[complex, complex]:
    """Scatter a coherent amplitude pair; the total mean photon flux is conserved."""
    out = s.matrix @ np.asarray(alpha_in, dtype=complex)
    return complex(out[0]), complex(out[1])


def _nudge_pole_adjacent(omega: float, edges: tuple[float, ...]) -> tuple[float, bool]:
    for edge in edges:
        if abs(omega - edge) < TOL_OMEGA * edge:
            if omega < edge:
                return omega * (1.0 - POLE_NUDGE), True
            return omega * (1.0 + POLE_NUDGE), True
    return omega, False


def coefficients_on_grid(
    medium: MediumSpec, k_grid: np.ndarray
) -> tuple[np.ndarray, np.ndarray, tuple[tuple[float, float], ...]]:
    """T(ck) and R(ck) on a wavenumber grid, nudging pole-adjacent points.

    Returns (T array, R array, ((k, nudged omega), ...)).  Frequencies within
    the resonance tolerance of a band-edge index pole are shifted by a 1e-8
    relative amount into the adjacent band interior and recorded.
    """
    edges = band_edges(medium)
    c = medium.c
    t_vals = np.empty(len(k_grid), dtype=complex)
    r_vals = np.empty(len(k_grid), dtype=complex)
    nudged: list[tuple[float, float]] = []
    for j, k in enumerate(np.asarray(k_grid, dtype=float)):
        omega, was_nudged = _nudge_pole_adjacent(c * k, edges)
        if was_nudged:
            nudged.append((float(k), float(omega)))
        sol = scatter_coefficients(medium, omega)
        t_vals[j] = sol.T
        r_vals[j] = sol.R
    return t_vals, r_vals, tuple(nudged)


def _prefactor(medium: MediumSpec, mode: str) -> float:
    if mode == PREFACTOR_NORMALIZED:
        return 1.0
    if mode == PREFACTOR_PHYSICAL:
        if medium.unit_mode != "SI":
            raise ValueError("the physical detection prefactor requires unit_mode='SI'")
        return HBAR * medium.c * EPSILON_0 / (4.0 * np.pi * medium.cross_section_A)
    raise ValueError(f"unknown prefactor_mode {mode!r}")


def detection_rate(
    medium: MediumSpec,
    pulse: PulseSpectrum,
    detector_x: float,
    t_grid,
    prefactor_mode: str = PREFACTOR_NORMALIZED,
) -> DetectionTrace:
    """Photodetection rate of a transmitted coherent pulse versus time.

    For a detector in region III the rate is proportional to
    |int dk f(k) T(ck) e^{i k (x - c t)}|^2; the integral is evaluated by the
    trapezoidal rule on the pulse's own k grid (the grid is the caller's
    resolution contract).  Spectral components inside absorption bands are
    suppressed by |T|^2: they are reflected, not absorbed.
    """
    if not detector_x > medium.half_length_L:
        raise DetectorInsideMedium(
            f"detector_x={detector_x} must lie beyond the slab face at "
            f"x=+{medium.half_length_L}"
        )
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-D array")
    pref = _prefactor(medium, prefactor_mode)
    c = medium.c
    k = pulse.k_grid
    t_vals, _, nudged = coefficients_on_grid(medium, k)
    base = pulse.trapezoid_weights() * pulse.f_values * t_vals * np.exp(1j * k * detector_x)
    rates = np.empty(t_grid.shape, dtype=float)
    for i, t in enumerate(t_grid):
        amplitude = np.dot(base, np.exp(-1j * k * c * t))
        rates[i] = pref * (amplitude.real**2 + amplitude.imag**2)
    return DetectionTrace(
        detector_x=detector_x,
        t_grid=t_grid,
        rate_values=rates,
        prefactor_mode=prefactor_mode,
        nudged_frequencies=nudged,
    )


def energy_budget(medium: MediumSpec, pulse: PulseSpectrum) -> dict[str, float]:
    """k-space energy bookkeeping: incident, transmitted and reflected sums.

    Unitarity makes transmitted + reflected equal the incident sum exactly,
    pulse shape by pulse shape.
    """
    w = pulse.trapezoid_weights()
    f2 = np.abs(pulse.f_values) ** 2
    t_vals, r_vals, _ = coefficients_on_grid(medium, pulse.k_grid)
    incident = float(np.sum(f2 * w))
    transmitted = float(np.sum(f2 * np.abs(t_vals) ** 2 * w))
    reflected = float(np.sum(f2 * np.abs(r_vals) ** 2 * w))
    return {"incident": incident, "transmitted": transmitted, "reflected": reflected}


def gaussian_pulse(k_center: float, sigma_k: float, points: int = 2001, span: float = 6.0) -> PulseSpectrum:
    """Gaussian spectral envelope on a symmetric grid, clipped to k > 0."""
    if not (k_center > 0.0 and sigma_k > 0.0):
        raise ValueError("k_center and sigma_k must be positive")
    lo = max(k_center - span * sigma_k, 1e-12 * k_center)
    hi = k_center + span * sigma_k
    k = np.linspace(lo, hi, points)
    f = np.exp(-((k - k_center) ** 2) / (2.0 * sigma_k**2))
    return PulseSpectrum(k_grid=k, f_values=f.astype(complex))
