"""Multi-resonance dielectric medium: Sellmeir index, dispersion, band structure.

The medium is a collection of harmonic-oscillator species with bare angular
frequencies Omega_nu and squared-frequency couplings g_nu.  Its refractive
index is

    n(omega) = [1 - sum_nu g_nu / (Omega_nu^2 - omega^2)]^(-1/2),

which is purely real inside transmission bands and purely imaginary inside
absorption bands.  All computations run in scaled units (c = 1, lengths in
units of the slab half-length L); SI inputs are converted at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import EdgeNotFound, PoleAtResonance, RootBracketingFailure

C_LIGHT = 299792458.0  # m/s, used only in SI mode

# Relative half-width of the window around each Omega_nu that is classified
# as an exact resonance (exact float equality is meaningless).
TOL_OMEGA = 1e-9

# Relative width to which band edges and dispersion roots are bisected.
EDGE_BISECTION_TOL = 1e-13

# Relative residual allowed in the dispersion relation omega^2 = (kc)^2 * bracket.
TOL_DISP = 1e-10


class BandKind(Enum):
    TRANSMISSION = "transmission"
    ABSORPTION = "absorption"
    RESONANCE_ZERO = "resonance_zero"
    POLE_DIVERGENT = "pole_divergent"


@dataclass(frozen=True)
class OscillatorSpecies:
    """One oscillator species: bare frequency and coupling g = q^2 rho / (m eps0)."""

    omega_res: float
    coupling_g: float

    def __post_init__(self) -> None:
        if not self.omega_res > 0.0:
            raise ValueError(f"omega_res must be positive, got {self.omega_res}")
        if not self.coupling_g > 0.0:
            raise ValueError(f"coupling_g must be positive, got {self.coupling_g}")
        if not self.coupling_g < self.omega_res**2:
            raise ValueError(
                f"coupling_g={self.coupling_g} must be < omega_res^2="
                f"{self.omega_res**2} (isolated-species band edge must be real)"
            )


@dataclass(frozen=True)
class MediumSpec:
    """Immutable physical model: species, slab half-length, cross-section, units.

    Species are sorted ascending by resonance frequency at construction.
    ``unit_mode`` is ``"scaled"`` (c = 1, all quantities dimensionless) or
    ``"SI"`` (rad/s, meters); either way the internal computations normalize
    frequencies by c/L and positions by L.
    """

    species: tuple[OscillatorSpecies, ...] = ()
    half_length_L: float = 1.0
    cross_section_A: float = 1.0
    unit_mode: str = "scaled"

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.species, key=lambda s: s.omega_res))
        object.__setattr__(self, "species", ordered)
        for a, b in zip(ordered, ordered[1:]):
            if not a.omega_res < b.omega_res:
                raise ValueError(
                    f"species resonance frequencies must be strictly distinct, "
                    f"got {a.omega_res} twice"
                )
        if not self.half_length_L > 0.0:
            raise ValueError(f"half_length_L must be positive, got {self.half_length_L}")
        if not self.cross_section_A > 0.0:
            raise ValueError(f"cross_section_A must be positive, got {self.cross_section_A}")
        if self.unit_mode not in ("scaled", "SI"):
            raise ValueError(f"unit_mode must be 'scaled' or 'SI', got {self.unit_mode!r}")

    @property
    def c(self) -> float:
        """Speed of light in the spec's unit system."""
        return C_LIGHT if self.unit_mode == "SI" else 1.0

    @property
    def omega_scale(self) -> float:
        """Frequency unit c/L: omega_internal = omega / omega_scale."""
        return self.c / self.half_length_L

    def scaled_species(self) -> tuple[tuple[float, float], ...]:
        """Species as (Omega, g) pairs in internal units (c = 1, L = 1)."""
        w0 = self.omega_scale
        return tuple((s.omega_res / w0, s.coupling_g / w0**2) for s in self.species)

    def resonances(self) -> tuple[float, ...]:
        """Bare resonance frequencies, ascending, in the spec's units."""
        return tuple(s.omega_res for s in self.species)


@dataclass(frozen=True)
class IndexValue:
    """Complex refractive index at one frequency plus its band classification."""

    n: complex
    band_kind: BandKind


@dataclass(frozen=True)
class Band:
    lo: float
    hi: float
    kind: BandKind

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"band must have lo < hi, got ({self.lo}, {self.hi})")
        if self.kind not in (BandKind.TRANSMISSION, BandKind.ABSORPTION):
            raise ValueError("bands are transmission or absorption intervals")


def _near_resonance(omega_s: float, species_s: tuple[tuple[float, float], ...]) -> bool:
    return any(abs(omega_s - w) < TOL_OMEGA * w for w, _ in species_s)


def _bracket_scaled(omega_s: float, species_s: tuple[tuple[float, float], ...]) -> float:
    # (Omega - w)(Omega + w) instead of Omega^2 - w^2 keeps precision near resonance
    total = 1.0
    for w_res, g in species_s:
        total -= g / ((w_res - omega_s) * (w_res + omega_s))
    return total


def sellmeir_bracket(medium: MediumSpec, omega: float) -> float:
    """Evaluate 1 - sum_nu g_nu / (Omega_nu^2 - omega^2).

    Positive inside transmission bands, negative inside absorption bands,
    zero exactly at the band-edge index poles.

    Raises
    ------
    PoleAtResonance
        If ``omega`` is within the resonance tolerance of some Omega_nu.
    """
    if not omega > 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    omega_s = omega / medium.omega_scale
    species_s = medium.scaled_species()
    for w_res, _ in species_s:
        if abs(omega_s - w_res) < TOL_OMEGA * w_res:
            raise PoleAtResonance(
                f"omega={omega} is within tolerance of resonance "
                f"Omega={w_res * medium.omega_scale}"
            )
    return _bracket_scaled(omega_s, species_s)


def refractive_index(medium: MediumSpec, omega: float) -> IndexValue:
    """Classify ``omega`` and return the complex refractive index there.

    Every positive frequency maps to exactly one of the four band kinds:
    real positive n (transmission), purely imaginary n with Im n > 0
    (absorption, so evanescent waves decay), n = 0 at bare resonances, and
    a divergent-index flag exactly where the Sellmeir bracket vanishes.
    """
    if not omega > 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    omega_s = omega / medium.omega_scale
    species_s = medium.scaled_species()
    if _near_resonance(omega_s, species_s):
        return IndexValue(n=0j, band_kind=BandKind.RESONANCE_ZERO)
    bracket = _bracket_scaled(omega_s, species_s)
    if bracket > 0.0:
        return IndexValue(n=complex(1.0 / math.sqrt(bracket), 0.0), band_kind=BandKind.TRANSMISSION)
    if bracket < 0.0:
        return IndexValue(n=complex(0.0, 1.0 / math.sqrt(-bracket)), band_kind=BandKind.ABSORPTION)
    return IndexValue(n=complex(math.inf, 0.0), band_kind=BandKind.POLE_DIVERGENT)


def _bisect_decreasing(f, lo: float, hi: float, rel_tol: float) -> float:
    """Bisect a root of a function known to be decreasing on (lo, hi).

    Endpoints are approached geometrically until a sign change is isolated;
    the bracket is then halved until its relative width reaches ``rel_tol``.
    """
    width = hi - lo
    a = None
    step = 0.25
    for _ in range(200):
        cand = lo + step * width
        if cand > lo and f(cand) > 0.0:
            a = cand
            break
        step *= 0.5
    if a is None:
        raise EdgeNotFound(
            f"no positive bracket value found just above {lo}; "
            "the coupling configuration admits no band edge here"
        )
    b = None
    step = 0.25
    for _ in range(200):
        cand = hi - step * width
        if cand < hi and f(cand) < 0.0:
            b = cand
            break
        step *= 0.5
    if b is None:
        raise EdgeNotFound(
            f"no negative bracket value found just below {hi}; "
            "the coupling configuration admits no band edge here"
        )
    while (b - a) > rel_tol * b:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if f(mid) > 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def band_edges(medium: MediumSpec) -> tuple[float, ...]:
    """Band-edge (index-pole) frequencies, one just below each resonance.

    The Sellmeir bracket is strictly decreasing between consecutive poles of
    the sum, so each edge is the unique bracket root in its interval and
    bisection is guaranteed.
    """
    species_s = medium.scaled_species()
    edges = []
    prev = 0.0
    for w_res, _ in species_s:
        f = lambda w: _bracket_scaled(w, species_s)  # noqa: E731
        edges.append(_bisect_decreasing(f, prev, w_res, EDGE_BISECTION_TOL))
        prev = w_res
    return tuple(e * medium.omega_scale for e in edges)


def band_structure(medium: MediumSpec, omega_max: float) -> list[Band]:
    """Partition (0, omega_max) into ordered, disjoint transmission/absorption bands.

    Each species contributes one absorption band (edge_nu, Omega_nu); the
    complement is transmission.
    """
    resonances = medium.resonances()
    if resonances and not omega_max > resonances[-1]:
        raise ValueError(
            f"omega_max={omega_max} must exceed the largest resonance {resonances[-1]}"
        )
    if not omega_max > 0.0:
        raise ValueError(f"omega_max must be positive, got {omega_max}")
    edges = band_edges(medium)
    bands: list[Band] = []
    lo = 0.0
    for edge, w_res in zip(edges, resonances):
        bands.append(Band(lo, edge, BandKind.TRANSMISSION))
        bands.append(Band(edge, w_res, BandKind.ABSORPTION))
        lo = w_res
    bands.append(Band(lo, omega_max, BandKind.TRANSMISSION))
    return bands


def _transmission_intervals(
    species_s: tuple[tuple[float, float], ...],
) -> list[tuple[float, float | None]]:
    """Scaled transmission intervals; the last one is unbounded (hi = None)."""
    intervals: list[tuple[float, float | None]] = []
    prev = 0.0
    for w_res, _ in species_s:
        f = lambda w: _bracket_scaled(w, species_s)  # noqa: E731
        edge = _bisect_decreasing(f, prev, w_res, EDGE_BISECTION_TOL)
        intervals.append((prev, edge))
        prev = w_res
    intervals.append((prev, None))
    return intervals


def dispersion_omega_of_k(medium: MediumSpec, k: float) -> list[float]:
    """All positive mode frequencies with wavenumber ``k``.

    Solves omega^2 = (kc)^2 [1 - sum_nu g_nu/(Omega_nu^2 - omega^2)].  There
    is exactly one root per transmission branch (N+1 branches for N species);
    roots are returned ascending.  In each branch omega*n(omega) runs from 0
    up to +infinity, so the sign change of omega*n(omega) - kc is guaranteed.
    """
    if not k > 0.0:
        raise ValueError(f"k must be positive, got {k}")
    species_s = medium.scaled_species()
    k_s = k * medium.half_length_L  # scaled wavenumber (c = 1, L = 1)

    def wavenumber_mismatch(w: float) -> float:
        b = _bracket_scaled(w, species_s)
        # inside a transmission band b > 0; w * n(w) = w / sqrt(b)
        return w / math.sqrt(b) - k_s

    roots: list[float] = []
    for lo, hi in _transmission_intervals(species_s):
        if hi is None:
            # expand upward until omega * n(omega) exceeds k (n -> 1 from below)
            hi = max(2.0 * k_s, 2.0 * lo if lo > 0.0 else 1.0)
            for _ in range(200):
                if _bracket_scaled(hi, species_s) > 0.0 and wavenumber_mismatch(hi) > 0.0:
                    break
                hi *= 2.0
            else:
                raise RootBracketingFailure(
                    f"could not bound the highest dispersion branch for k={k}"
                )
        width = hi - lo
        a = b = None
        step = 0.25
        for _ in range(200):
            cand_a = lo + step * width
            cand_b = hi - step * width
            if a is None and cand_a > lo and wavenumber_mismatch(cand_a) < 0.0:
                a = cand_a
            if b is None and cand_b < hi and wavenumber_mismatch(cand_b) > 0.0:
                b = cand_b
            if a is not None and b is not None:
                break
            step *= 0.5
        if a is None or b is None or not a < b:
            raise RootBracketingFailure(
                f"could not isolate a sign change in branch ({lo}, {hi}) for k={k}"
            )
        while (b - a) > EDGE_BISECTION_TOL * b:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if wavenumber_mismatch(mid) < 0.0:
                a = mid
            else:
                b = mid
        root = 0.5 * (a + b)
        residual = abs(root**2 - k_s**2 * _bracket_scaled(root, species_s))
        if residual > TOL_DISP * root**2:
            raise RootBracketingFailure(
                f"dispersion root at omega={root} has residual {residual:.3e} "
                f"above tolerance"
            )
        roots.append(root * medium.omega_scale)
    return roots
