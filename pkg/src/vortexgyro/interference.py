"""Density of a counter-rotating vortex superposition and its Sagnac rotation.

Under a lab-frame rotation the two components pick up opposite phases,

    Psi = b+ psi_+ exp(+i phi_Omega / 2) + b- psi_- exp(-i phi_Omega / 2),

with ``psi_+- ~ f(rho) exp(-+ i l phi)``.  The density is then

    n = N f^2 [1 + 2 |b+ b-| cos(2 l phi - phi_Omega - arg(b+ conj(b-)))]

(for normalized amplitudes), i.e. the fringe pattern turns rigidly by
``phi_Omega / (2 l)`` in the positive azimuthal sense.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .condensate import SQRT_PI, CondensateProfile, HBAR
from .errors import GridClippingError, InvalidParameter

CLIP_TOLERANCE = 1e-3
# Pixels hold area averages over an odd s x s sub-lattice (odd keeps the
# pixel center as a node); 5 holds lattice aliasing in the 2l-th angular
# moment below 1e-6 rad at 256^2.
DEFAULT_SUPERSAMPLE = 5


def sagnac_phase(l, omega, t):
    """Accumulated Sagnac phase ``2 l Omega t`` of the vortex pair."""
    if int(l) != l or l < 1:
        raise InvalidParameter("l", f"charge magnitude must be a positive integer, got {l!r}")
    if t < 0:
        raise InvalidParameter("t", "time must be non-negative")
    return 2 * l * omega * t


def optical_sagnac_phase(area, omega, wavelength):
    """Round-trip phase ``4 A Omega / (lambda c)`` of an optical loop."""
    return 4 * area * omega / (wavelength * 299_792_458.0)


def matter_wave_sagnac_phase(round_trips, area, mass, omega):
    """Optical formula with ``lambda c -> hbar / m``: ``N 4 A m Omega / hbar``."""
    return round_trips * 4 * area * mass * omega / HBAR


def round_trips(l, mass, area, t):
    """Loops completed in time ``t`` by an atom carrying ``l hbar`` on a ring of area ``area``.

    ``v = l hbar / (m r)`` and ``T = 2 pi r / v`` give ``t / T = t l hbar / (2 m A)``.
    """
    return t * l * HBAR / (2 * mass * area)


def pattern_rotation_angle(phi_omega, l):
    """Rigid rotation of the fringe pattern produced by a Sagnac phase."""
    if l < 1:
        raise InvalidParameter("l", "charge magnitude must be >= 1")
    return phi_omega / (2 * l)


@dataclass(frozen=True)
class VortexSuperposition:
    b_plus: complex
    b_minus: complex
    charge_magnitude: int
    sagnac_phase: float = 0.0
    profile: CondensateProfile | None = field(default=None, repr=False)

    def __post_init__(self):
        norm = abs(self.b_plus) ** 2 + abs(self.b_minus) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise InvalidParameter("b_plus", f"|b+|^2 + |b-|^2 must be 1, got {norm!r}")
        if int(self.charge_magnitude) != self.charge_magnitude or self.charge_magnitude < 1:
            raise InvalidParameter("charge_magnitude", "must be a positive integer")
        if not math.isfinite(self.sagnac_phase):
            raise InvalidParameter("sagnac_phase", "must be finite")

    @classmethod
    def equal(cls, l, profile=None, sagnac_phase=0.0):
        amp = 1 / math.sqrt(2)
        return cls(amp, amp, int(l), sagnac_phase, profile)

    @classmethod
    def from_weights(cls, plus_fraction, l, profile=None, relative_phase=0.0):
        return cls(
            math.sqrt(plus_fraction) * np.exp(1j * relative_phase),
            math.sqrt(1 - plus_fraction), int(l), 0.0, profile,
        )

    def with_sagnac_phase(self, phi):
        return replace(self, sagnac_phase=float(phi))

    def with_profile(self, profile):
        return replace(self, profile=profile)

    @property
    def visibility(self):
        return 2 * abs(self.b_plus) * abs(self.b_minus)


@dataclass(frozen=True)
class PixelGrid:
    """Square-pixel lattice centered on the trap axis.

    Pixel centers sit at ``(i + 1/2) dx - half_width``.  ``mode`` selects a
    ``z = 0`` slice (atoms/m^3) or the column density (atoms/m^2).
    """

    nx: int = 256
    ny: int = 256
    half_width_x: float = 3.6e-6
    half_width_y: float = 3.6e-6
    mode: str = "slice"
    length_scale: float = 2.4e-6

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise InvalidParameter("nx", "grid needs at least 2 x 2 pixels")
        if self.half_width_x <= 0 or self.half_width_y <= 0:
            raise InvalidParameter("half_width_x", "extent must be positive")
        if self.mode not in ("slice", "column"):
            raise InvalidParameter("mode", f"must be 'slice' or 'column', got {self.mode!r}")

    @classmethod
    def for_trap(cls, trap, n=256, span=1.5, mode="slice"):
        return cls(n, n, span * trap.L_x, span * trap.L_y, mode, trap.L_x)

    @property
    def dx(self):
        return 2 * self.half_width_x / self.nx

    @property
    def dy(self):
        return 2 * self.half_width_y / self.ny

    @property
    def x(self):
        return (np.arange(self.nx) + 0.5) * self.dx - self.half_width_x

    @property
    def y(self):
        return (np.arange(self.ny) + 0.5) * self.dy - self.half_width_y

    @property
    def center(self):
        return (0.0, 0.0)

    def mesh(self):
        """Coordinates ``(X, Y)`` with shape ``(ny, nx)``; rows run along y."""
        return np.meshgrid(self.x, self.y)


@dataclass(frozen=True)
class DensityField:
    grid: PixelGrid
    values: np.ndarray
    axial_length: float

    def total_atoms(self):
        total = float(self.values.sum()) * self.grid.dx * self.grid.dy
        if self.grid.mode == "slice":
            # Separable Gaussian axial profile exp(-z^2 / L_z^2).
            total *= SQRT_PI * self.axial_length
        return total


def density_at(superposition: VortexSuperposition, x, y, mode="slice"):
    """Atom density of the rotated superposition at transverse points ``(x, y)``."""
    profile = superposition.profile
    if profile is None:
        raise InvalidParameter("profile", "superposition carries no condensate profile")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rho = np.hypot(x, y)
    phi = np.arctan2(y, x)
    l = superposition.charge_magnitude
    half = 0.5 * superposition.sagnac_phase
    f = profile.radial_factor(rho)
    plus = superposition.b_plus * np.exp(-1j * (l * phi - half))
    minus = superposition.b_minus * np.exp(1j * (l * phi - half))
    values = profile.trap.atom_count * f**2 * np.abs(plus + minus) ** 2
    if mode == "column":
        values = values * SQRT_PI * profile.trap.axial_length
    return values


def density(superposition: VortexSuperposition, grid: PixelGrid | None = None,
            supersample=DEFAULT_SUPERSAMPLE, rotate_by=0.0):
    """Render the superposition density on a pixel grid.

    Each pixel holds the mean density over an ``s x s`` sub-lattice, as a
    detector pixel integrates over its area; ``supersample=1`` gives plain
    point samples at pixel centers.  ``rotate_by`` turns the whole field
    rigidly about the trap axis (positive = counter-clockwise) before
    sampling.
    """
    profile = superposition.profile
    if profile is None:
        raise InvalidParameter("profile", "superposition carries no condensate profile")
    if grid is None:
        grid = PixelGrid.for_trap(profile.trap)
    clipped = profile.norm_fraction_outside(min(grid.half_width_x, grid.half_width_y))
    if clipped > CLIP_TOLERANCE:
        raise GridClippingError(
            f"grid half-width clips {clipped:.2e} of the condensate norm "
            f"(limit {CLIP_TOLERANCE:.0e}); enlarge the grid"
        )
    s = int(supersample)
    if s < 1:
        raise InvalidParameter("supersample", "must be >= 1")
    X, Y = grid.mesh()
    cos_a, sin_a = math.cos(rotate_by), math.sin(rotate_by)

    def sample(x, y):
        # Field rotated by +a, evaluated at (x, y) = original field at R(-a)(x, y).
        return density_at(superposition, cos_a * x + sin_a * y, -sin_a * x + cos_a * y, grid.mode)

    if s == 1:
        values = sample(X, Y)
    else:
        offsets = (np.arange(s) + 0.5) / s - 0.5
        values = np.zeros_like(X)
        for ox in offsets:
            for oy in offsets:
                values += sample(X + ox * grid.dx, Y + oy * grid.dy)
        values /= s * s
    return DensityField(grid, values, profile.trap.axial_length)
