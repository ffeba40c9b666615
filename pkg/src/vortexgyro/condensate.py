"""Thomas-Fermi condensate in a Mexican-hat ("Sombrero") ring trap.

Lengths are SI at the interface.  Internally the transverse coordinate is
measured in units of the transverse oscillator length ``a_rho`` whenever it
appears raised to the vortex charge, and the axial coordinate in units of
``L_z``, so that the charge-``l`` factor ``rho**|l| / sqrt(|l|!)`` is
dimensionless.  All charge-dependent factors are evaluated in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants, optimize

from .errors import InvalidParameter, TrapTooShallowError

HBAR = constants.hbar
RB87_MASS = 1.44316e-25
RB87_SCATTERING_LENGTH = 5.3e-9

SQRT_PI = math.sqrt(math.pi)

# The Thomas-Fermi integrand is analytic on its support (polynomial times a
# Gaussian), so a fixed high-order Gauss-Legendre rule is exact to rounding.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(512)


def _support_integral(func, a, b):
    half = 0.5 * (b - a)
    return half * float(np.dot(_GL_WEIGHTS, func(a + half * (_GL_NODES + 1.0))))


@dataclass(frozen=True)
class TrapConfig:
    """Trap geometry, potential and species constants (SI units)."""

    atom_mass: float = RB87_MASS
    scattering_length: float = RB87_SCATTERING_LENGTH
    atom_count: int = 1_000_000
    L_x: float = 2.4e-6
    L_y: float = 2.4e-6
    L_z: float = 0.8e-6
    omega_rho: float = 2 * math.pi * 3500.0
    barrier_height: float = 4.0e-28
    barrier_width: float = 0.35e-6

    def __post_init__(self):
        for name in ("atom_mass", "scattering_length", "L_x", "L_y", "L_z",
                     "omega_rho", "barrier_width"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidParameter(name, f"must be strictly positive, got {value!r}")
        if not (np.isfinite(self.barrier_height) and self.barrier_height >= 0):
            raise InvalidParameter("barrier_height", f"must be non-negative, got {self.barrier_height!r}")
        if int(self.atom_count) != self.atom_count or self.atom_count < 1:
            raise InvalidParameter("atom_count", f"must be a positive integer, got {self.atom_count!r}")

    @property
    def eta(self):
        """Interaction parameter ``4 pi hbar a / m`` (m^3/s)."""
        return 4 * math.pi * HBAR * self.scattering_length / self.atom_mass

    @property
    def coupling(self):
        """Contact coupling ``g = hbar * eta`` (J m^3), used for densities in atoms/m^3."""
        return HBAR * self.eta

    @property
    def radial_length(self):
        """Transverse oscillator length ``sqrt(hbar / (m omega_rho))``."""
        return math.sqrt(HBAR / (self.atom_mass * self.omega_rho))

    @property
    def axial_length(self):
        return self.L_z

    @property
    def energy_scale(self):
        return HBAR * self.omega_rho


def trap_potential(cfg: TrapConfig, rho):
    """Harmonic confinement plus a central Gaussian barrier.

    ``V = m w^2 rho^2 / 2 + V0 exp(-rho^2 / (2 sigma_b^2))``
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise InvalidParameter("rho", "radial coordinate must be non-negative")
    v = 0.5 * cfg.atom_mass * cfg.omega_rho**2 * rho**2
    v = v + cfg.barrier_height * np.exp(-rho**2 / (2 * cfg.barrier_width**2))
    return v if v.ndim else float(v)


def potential_minimum(cfg: TrapConfig):
    """Radius of the potential minimum (0 when the barrier is too weak for a ring)."""
    stiffness = cfg.atom_mass * cfg.omega_rho**2 * cfg.barrier_width**2
    if cfg.barrier_height <= stiffness:
        return 0.0
    return cfg.barrier_width * math.sqrt(2 * math.log(cfg.barrier_height / stiffness))


def tf_support(cfg: TrapConfig, mu):
    """Inner and outer radius of the region where ``mu >= V(rho)``.

    Returns ``None`` if ``mu`` lies below the potential minimum.
    """
    r_min = potential_minimum(cfg)
    v_min = trap_potential(cfg, r_min)
    if mu < v_min:
        return None
    if mu == v_min:
        return r_min, r_min

    def excess(r):
        return trap_potential(cfg, r) - mu

    r_hi = max(r_min, cfg.radial_length)
    while excess(r_hi) < 0:
        r_hi *= 2
    r_out = optimize.brentq(excess, r_min, r_hi, xtol=1e-18, rtol=1e-15)
    if r_min > 0 and mu < cfg.barrier_height:
        r_in = optimize.brentq(excess, 0.0, r_min, xtol=1e-18, rtol=1e-15)
    else:
        r_in = 0.0
    return r_in, r_out


def _log_charge_factor(cfg, rho, l):
    """``|l| ln(rho / a_rho) - ln(|l|!)/2``, with ``-inf`` at the core for ``l != 0``."""
    l = abs(int(l))
    rho = np.asarray(rho, dtype=float)
    if l == 0:
        return np.zeros_like(rho)
    with np.errstate(divide="ignore"):
        return l * np.log(rho / cfg.radial_length) - 0.5 * math.lgamma(l + 1)


def atom_number(cfg: TrapConfig, mu, l=0):
    """Atoms held at chemical potential ``mu`` by a charge-``l`` Thomas-Fermi cloud.

    ``N = sqrt(pi) L_z * int 2 pi rho (rho/a)^(2|l|)/|l|! (mu - V)/g drho``
    """
    support = tf_support(cfg, mu)
    if support is None or support[1] <= support[0]:
        return 0.0
    r_in, r_out = support
    # Largest log-weight on the support sits at the outer edge.
    shift = 2 * float(_log_charge_factor(cfg, r_out, l))

    def integrand(r):
        w = np.exp(2 * _log_charge_factor(cfg, r, l) - shift)
        return 2 * math.pi * r * w * (mu - trap_potential(cfg, r)) / cfg.coupling

    value = _support_integral(integrand, r_in, r_out)
    with np.errstate(over="ignore"):
        scale = np.exp(shift)
    return float(SQRT_PI * cfg.axial_length * value * scale)


def solve_chemical_potential(cfg: TrapConfig, l=0, mu_max=None):
    """Chemical potential that holds ``cfg.atom_count`` atoms in the charge-``l`` profile.

    Brackets upward from the potential minimum by doubling, then bisects the
    monotone ``N(mu) - atom_count``.
    """
    v_min = trap_potential(cfg, potential_minimum(cfg))
    if mu_max is None:
        mu_max = trap_potential(cfg, 20 * max(cfg.L_x, cfg.L_y))
    unit = cfg.energy_scale
    target = float(cfg.atom_count)

    def residual(x):
        return atom_number(cfg, v_min + x * unit, l) / target - 1.0

    hi = 1e-3
    while residual(hi) < 0:
        hi *= 2
        if v_min + hi * unit > mu_max:
            raise TrapTooShallowError(
                f"trap too shallow for N atoms: N = {cfg.atom_count} not reached below "
                f"mu_max = {mu_max:.4e} J (l = {l})"
            )
    lo = 0.0 if residual(hi / 2) >= 0 else hi / 2
    x = optimize.bisect(residual, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=400)
    return v_min + x * unit


@dataclass(frozen=True)
class CondensateProfile:
    """Normalized charge-``l`` Thomas-Fermi mode, ``int |psi|^2 d^3r = 1``.

    ``radial_amplitude`` tabulates the real radial factor of ``psi`` at
    ``z = 0`` on ``rho_grid``.  ``log_reference`` is the log of the charge
    factor at the outer Thomas-Fermi edge; it is subtracted before
    exponentiating so that large charges stay in floating-point range.
    """

    trap: TrapConfig
    vortex_charge: int
    chemical_potential: float
    rho_grid: np.ndarray = field(repr=False)
    radial_amplitude: np.ndarray = field(repr=False)
    log_reference: float
    norm_constant: float
    support: tuple

    @property
    def charge_magnitude(self):
        return abs(self.vortex_charge)

    def radial_factor(self, rho):
        """Real radial factor of ``psi`` at ``z = 0`` (units m^-3/2)."""
        cfg = self.trap
        rho = np.asarray(rho, dtype=float)
        excess = np.maximum(self.chemical_potential - trap_potential(cfg, np.abs(rho)), 0.0)
        log_amp = _log_charge_factor(cfg, np.abs(rho), self.vortex_charge) - self.log_reference
        with np.errstate(invalid="ignore"):
            core = np.where(excess > 0, np.exp(np.minimum(log_amp, 700.0)), 0.0)
        return self.norm_constant * core * np.sqrt(excess / cfg.eta)

    def radial_density(self, rho):
        """``|psi(rho, phi, z=0)|^2`` in m^-3."""
        return self.radial_factor(rho) ** 2

    def axial_factor(self, z):
        return np.exp(-0.5 * (np.asarray(z, dtype=float) / self.trap.axial_length) ** 2)

    def norm_fraction_outside(self, radius):
        """Share of the normalization carried beyond ``radius``."""
        r_in, r_out = self.support
        if radius >= r_out:
            return 0.0
        lo = max(radius, r_in)
        value = _support_integral(lambda r: 2 * math.pi * r * self.radial_density(r), lo, r_out)
        return float(value * SQRT_PI * self.trap.axial_length)


def build_profile(cfg: TrapConfig, l=0, mu=None, per_charge_mu=False, n_grid=2048):
    """Construct the normalized profile for vortex charge ``l``.

    By default one chemical potential, solved for the non-rotating ``l = 0``
    cloud, is shared by every charge; ``per_charge_mu=True`` solves it with
    the charge factor included instead.
    """
    l = int(l)
    if mu is None:
        mu = solve_chemical_potential(cfg, l if per_charge_mu else 0)
    support = tf_support(cfg, mu)
    if support is None or support[1] <= support[0]:
        raise InvalidParameter("mu", "chemical potential lies below the trap minimum")
    r_in, r_out = support
    log_ref = float(_log_charge_factor(cfg, r_out, l))

    def integrand(r):
        w = np.exp(2 * (_log_charge_factor(cfg, r, l) - log_ref))
        return 2 * math.pi * r * w * (mu - trap_potential(cfg, r)) / cfg.eta

    radial = _support_integral(integrand, r_in, r_out)
    norm = 1.0 / math.sqrt(radial * SQRT_PI * cfg.axial_length)

    r_max = max(4 * max(cfg.L_x, potential_minimum(cfg)), 1.25 * r_out)
    grid = np.linspace(0.0, r_max, n_grid)
    profile = CondensateProfile(
        trap=cfg, vortex_charge=l, chemical_potential=float(mu),
        rho_grid=grid, radial_amplitude=np.empty(0), log_reference=log_ref,
        norm_constant=norm, support=(r_in, r_out),
    )
    table = profile.radial_factor(grid)
    table.flags.writeable = False
    grid.flags.writeable = False
    object.__setattr__(profile, "radial_amplitude", table)
    return profile


def vortex_amplitude(profile: CondensateProfile, rho, phi, z):
    """Complex mode amplitude ``psi(l, rho, phi, z)``; zero outside the TF support."""
    radial = profile.radial_factor(rho) * profile.axial_factor(z)
    return radial * np.exp(-1j * profile.vortex_charge * np.asarray(phi, dtype=float))
