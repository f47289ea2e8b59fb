"""Independent brute-force verifiers for the slab scattering solution.

Three mutually independent routes cross-check the closed forms:

* ``transfer_matrix_rt`` composes 2x2 interface and propagation matrices.
* ``ode_scatter`` integrates the frequency-domain field equation on a
  smoothed index profile, realizing the sharp-boundary answer in the
  ramp-width -> 0 limit.
* ``source_integral_check`` measures the matter-source integral that must
  vanish at the bare resonances.

None of these reuse the slab module's algebra.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StiffnessFailure
from .medium import MediumSpec, OscillatorSpecies, refractive_index
from .slab import scatter_coefficients

RAMP_LINEAR = "linear"
RAMP_SMOOTHSTEP = "smoothstep"

ODE_RTOL = 1e-10
ODE_ATOL = 1e-14

# Interior index used in place of an exact zero on resonance profiles; the
# flux variable (c^2/n^2) d_x u is formally singular at n = 0 itself.
RESONANCE_INTERIOR_INDEX = 1e-6

SOURCE_GRID_MIN_POINTS = 10_000
SOURCE_RAMP_REFINEMENT = 4


def _mat2_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat2_inv(a):
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return (
        (a[1][1] / det, -a[0][1] / det),
        (-a[1][0] / det, a[0][0] / det),
    )


def _field_matrix(n: complex, k: float, x0: float):
    """Columns evaluate (u, u'/n^2) for the local e^{+i kappa x}, e^{-i kappa x} basis."""
    kappa = n * k
    ep = cmath.exp(1j * kappa * x0)
    em = cmath.exp(-1j * kappa * x0)
    # kappa / n^2 = k / n
    slope = 1j * k / n
    return ((ep, em), (slope * ep, -slope * em))


def transfer_matrix_rt(n0: complex, k: float, half_length_L: float) -> tuple[complex, complex]:
    """R and T of the slab by interface-matrix composition.

    Plane-wave coefficients are anchored at absolute positions, so the
    result carries the same phase convention as the closed forms (including
    their e^{-2ikL} factors).  Matching conditions: u continuous and
    u'/n^2 continuous at both faces.

    Like any transfer-matrix composition, this amplifies roundoff by roughly
    exp(4 |Im kappa| L) when the interior wave is evanescent: the answer is
    assembled from cancelling growing exponentials.  Agreement at the 1e-10
    level therefore holds for |Im n0| k L up to about 8; immediately above a
    band-edge pole the composition is the wrong tool, which is itself a
    useful property for an independent oracle (no shared failure modes with
    the factored closed forms).
    """
    if not k > 0.0:
        raise ValueError(f"k must be positive, got {k}")
    L = half_length_L
    into_slab = _mat2_mul(_mat2_inv(_field_matrix(n0, k, -L)), _field_matrix(1.0, k, -L))
    out_of_slab = _mat2_mul(_mat2_inv(_field_matrix(1.0, k, L)), _field_matrix(n0, k, L))
    m = _mat2_mul(out_of_slab, into_slab)
    # (T, 0) = m @ (1, R)
    refl = -m[1][0] / m[1][1]
    trans = m[0][0] + m[0][1] * refl
    return refl, trans


def _smoothstep(t: float) -> float:
    return t * t * (3.0 - 2.0 * t)


@dataclass(frozen=True)
class SmoothedProfile:
    """Index profile with continuous ramps of width delta outside the slab.

    For a real interior index the ramp interpolates n(x) itself.  For an
    imaginary interior index (absorption band) a straight-line ramp of the
    complex n would make n^2 complex and break the self-adjoint,
    flux-conserving form of the field equation, so there the ramp
    interpolates the (real, sign-changing) squared index instead.
    ``source_amplitude`` is the matched unit-amplitude ramp used for the
    matter-source check.
    """

    half_length_L: float
    delta: float
    n_inside: complex
    ramp_shape: str = RAMP_LINEAR
    c: float = 1.0

    def __post_init__(self) -> None:
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.delta > self.half_length_L / 10.0 * (1.0 + 1e-12):
            raise ValueError(
                f"delta={self.delta} must not exceed half_length_L/10="
                f"{self.half_length_L / 10.0}"
            )
        eps = self.n_inside**2
        if abs(eps.imag) > 1e-12 * max(1.0, abs(eps)):
            raise ValueError(
                f"n_inside^2 must be real (purely real or purely imaginary index), "
                f"got n_inside={self.n_inside}"
            )
        if self.ramp_shape not in (RAMP_LINEAR, RAMP_SMOOTHSTEP):
            raise ValueError(f"unknown ramp_shape {self.ramp_shape!r}")

    @classmethod
    def for_medium(
        cls,
        medium: MediumSpec,
        omega: float,
        delta: float,
        ramp_shape: str = RAMP_LINEAR,
    ) -> "SmoothedProfile":
        n0 = refractive_index(medium, omega).n
        return cls(
            half_length_L=medium.half_length_L,
            delta=delta,
            n_inside=n0,
            ramp_shape=ramp_shape,
            c=medium.c,
        )

    @classmethod
    def resonance(
        cls,
        half_length_L: float,
        delta: float,
        ramp_shape: str = RAMP_LINEAR,
        c: float = 1.0,
    ) -> "SmoothedProfile":
        """Profile with the interior index driven to (regularized) zero."""
        return cls(
            half_length_L=half_length_L,
            delta=delta,
            n_inside=complex(RESONANCE_INTERIOR_INDEX, 0.0),
            ramp_shape=ramp_shape,
            c=c,
        )

    @property
    def eps_inside(self) -> float:
        return (self.n_inside**2).real

    @property
    def index_is_real(self) -> bool:
        return self.eps_inside >= 0.0

    def _ramp(self, t: float) -> float:
        return _smoothstep(t) if self.ramp_shape == RAMP_SMOOTHSTEP else t

    def ramp_fraction(self, x: float) -> float:
        """0 outside the support, 1 on the flat interior, ramp value in between."""
        L, d = self.half_length_L, self.delta
        ax = abs(x)
        if ax >= L + d:
            return 0.0
        if ax <= L:
            return 1.0
        return self._ramp((L + d - ax) / d)

    def eps_of_x(self, x: float) -> float:
        """Real squared refractive index at position x."""
        s = self.ramp_fraction(x)
        if self.index_is_real:
            n = 1.0 + (self.n_inside.real - 1.0) * s
            return n * n
        return 1.0 + (self.eps_inside - 1.0) * s

    def n_of_x(self, x: float) -> complex:
        """Index with the Im >= 0 branch (evanescent decay)."""
        if self.index_is_real:
            return complex(1.0 + (self.n_inside.real - 1.0) * self.ramp_fraction(x), 0.0)
        eps = self.eps_of_x(x)
        if eps >= 0.0:
            return complex(math.sqrt(eps), 0.0)
        return complex(0.0, math.sqrt(-eps))

    def source_amplitude(self, x: float) -> float:
        """Unit-amplitude matter-source shape F(x), following the sqrt(g) ramp."""
        return self.ramp_fraction(x)

    def breakpoints(self) -> tuple[float, float, float, float]:
        L, d = self.half_length_L, self.delta
        return (-L - d, -L, L, L + d)


def _integrate_legs(profile: SmoothedProfile, omega: float, x_start: float, y_start, legs):
    """Chain solve_ivp across smooth legs; returns per-leg dense solutions."""
    c = profile.c
    omega_sq = omega * omega

    def rhs(x, y):
        lam, psi = y
        return [profile.eps_of_x(x) / (c * c) * psi, -omega_sq * lam]

    solutions = []
    y = np.asarray(y_start, dtype=complex)
    x0 = x_start
    for x1 in legs:
        sol = solve_ivp(
            rhs,
            (x0, x1),
            y,
            method="DOP853",
            rtol=ODE_RTOL,
            atol=ODE_ATOL,
            dense_output=True,
        )
        if not sol.success:
            raise StiffnessFailure(
                f"integrator failed on leg ({x0}, {x1}) at omega={omega}: {sol.message}"
            )
        solutions.append(sol)
        y = sol.y[:, -1]
        x0 = x1
    return solutions, y


class _ProfileSolution:
    """Dense (Lambda, Psi) solution across the whole profile support."""

    def __init__(self, solutions, scale: complex):
        self.solutions = solutions
        self.scale = scale
        self.spans = [sorted((s.t[0], s.t[-1])) for s in solutions]

    def __call__(self, x: float) -> tuple[complex, complex]:
        for sol, (lo, hi) in zip(self.solutions, self.spans):
            if lo - 1e-12 <= x <= hi + 1e-12:
                lam, psi = sol.sol(min(max(x, lo), hi))
                return lam * self.scale, psi * self.scale
        raise ValueError(f"x={x} outside the integrated span")


def ode_scatter(profile: SmoothedProfile, omega: float) -> tuple[complex, complex]:
    """R and T by direct integration of the smoothed-profile field equation.

    The equation d/dx[(c^2/n^2) d_x u] + omega^2 u = 0 is integrated as the
    first-order system in (u, Psi) with Psi = (c^2/n^2) d_x u, the continuous
    flux variable.  Integration starts from a pure outgoing wave on the right
    and runs to the left edge, where the field is decomposed into incident
    plus reflected plane waves.
    """
    if not omega > 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    c = profile.c
    k = omega / c
    xl, x_in_l, x_in_r, xr = profile.breakpoints()
    y0 = (cmath.exp(1j * k * xr), 1j * k * c * c * cmath.exp(1j * k * xr))
    _, y_end = _integrate_legs(profile, omega, xr, y0, [x_in_r, x_in_l, xl])
    lam, psi = y_end
    plane = psi / (1j * k * c * c)
    a = 0.5 * (lam + plane) * cmath.exp(-1j * k * xl)
    b = 0.5 * (lam - plane) * cmath.exp(1j * k * xl)
    return b / a, 1.0 / a


def right_incident_solution(profile: SmoothedProfile, omega: float) -> _ProfileSolution:
    """Dense u_r across the profile, normalized to unit incidence from the right."""
    if not omega > 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    c = profile.c
    k = omega / c
    xl, x_in_l, x_in_r, xr = profile.breakpoints()
    y0 = (cmath.exp(-1j * k * xl), -1j * k * c * c * cmath.exp(-1j * k * xl))
    solutions, y_end = _integrate_legs(profile, omega, xl, y0, [x_in_l, x_in_r, xr])
    lam, psi = y_end
    plane = psi / (1j * k * c * c)
    a_in = 0.5 * (lam - plane) * cmath.exp(1j * k * xr)
    return _ProfileSolution(solutions, 1.0 / a_in)


def source_grid(profile: SmoothedProfile) -> np.ndarray:
    """Quadrature grid over the profile support, ramps refined x4."""
    xl, x_in_l, x_in_r, xr = profile.breakpoints()
    span = xr - xl
    density = SOURCE_GRID_MIN_POINTS / span
    n_ramp = max(int(SOURCE_RAMP_REFINEMENT * density * profile.delta), 200)
    n_mid = max(int(density * (x_in_r - x_in_l)), 200)
    pieces = [
        np.linspace(xl, x_in_l, n_ramp, endpoint=False),
        np.linspace(x_in_l, x_in_r, n_mid, endpoint=False),
        np.linspace(x_in_r, xr, n_ramp),
    ]
    return np.concatenate(pieces)


@dataclass(frozen=True)
class SourceFunction:
    """Unit-amplitude matter-source shape F(x) sampled on a quadrature grid.

    F follows the sqrt(g) ramp of its profile: zero outside the support,
    one on the flat interior, continuous for any positive ramp width.
    """

    xs: np.ndarray
    values: np.ndarray

    @classmethod
    def for_profile(cls, profile: SmoothedProfile) -> "SourceFunction":
        xs = source_grid(profile)
        values = np.array([profile.source_amplitude(x) for x in xs])
        return cls(xs=xs, values=values)

    def derivative(self) -> np.ndarray:
        return np.gradient(self.values, self.xs)


def source_integral_check(profile: SmoothedProfile, resonance_omega: float) -> complex:
    """The matter-source overlap integral I(delta) = int u_r(x) F'(x) dx.

    At a bare resonance on the zero-interior-index profile the two ramp
    contributions cancel against each other as delta -> 0, so |I(delta)|
    measures how well the matter terms decouple from the out-field.  F' is
    taken by finite differences on the quadrature grid, matching how the
    source would be sampled.
    """
    u_r = right_incident_solution(profile, resonance_omega)
    source = SourceFunction.for_profile(profile)
    values = np.array([u_r(x)[0] for x in source.xs])
    return complex(np.trapezoid(values * source.derivative(), source.xs))


def write_golden_fixture(
    path: str | Path,
    medium: MediumSpec,
    omegas,
    tolerance: float = 1e-10,
    note: str = "",
) -> dict:
    """Emit transfer-matrix golden values for later closed-form comparison.

    The file is human-readable JSON with a provenance header recording the
    medium, the oracle identity, and the agreement tolerance the consumer
    should enforce.
    """
    entries = []
    for omega in omegas:
        n0 = refractive_index(medium, omega).n
        refl, trans = transfer_matrix_rt(n0, omega / medium.c, medium.half_length_L)
        entries.append(
            {
                "omega": omega,
                "R": [refl.real, refl.imag],
                "T": [trans.real, trans.imag],
            }
        )
    payload = {
        "format_version": 1,
        "provenance": {
            "oracle": "transfer_matrix_rt (2x2 interface/propagation composition)",
            "tolerance": tolerance,
            "note": note,
            "medium": {
                "unit_mode": medium.unit_mode,
                "half_length_L": medium.half_length_L,
                "cross_section_A": medium.cross_section_A,
                "oscillators": [
                    {"omega_res": s.omega_res, "coupling_g": s.coupling_g}
                    for s in medium.species
                ],
            },
        },
        "entries": entries,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return payload


def read_golden_fixture(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def check_golden_fixture(path: str | Path) -> tuple[float, float]:
    """Compare fixture R, T against the closed forms; returns (max_err, tolerance)."""
    payload = read_golden_fixture(path)
    prov = payload["provenance"]
    spec = prov["medium"]
    medium = MediumSpec(
        species=tuple(
            OscillatorSpecies(o["omega_res"], o["coupling_g"]) for o in spec["oscillators"]
        ),
        half_length_L=spec["half_length_L"],
        cross_section_A=spec["cross_section_A"],
        unit_mode=spec["unit_mode"],
    )
    worst = 0.0
    for entry in payload["entries"]:
        sol = scatter_coefficients(medium, entry["omega"])
        refl = complex(*entry["R"])
        trans = complex(*entry["T"])
        worst = max(worst, abs(sol.R - refl), abs(sol.T - trans))
    return worst, float(prov["tolerance"])
