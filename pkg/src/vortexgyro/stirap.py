"""Adiabatic transfer of the condensate into a two-vortex superposition.

The ground rotational state ``|0>`` is coupled by the two OAM pump fields
(``Omega_+`` and ``Omega_-``) to the intermediate states ``|i>`` and
``|i'>``; a common coupling field ``Omega_c`` links those to the vortex
states ``|+>`` and ``|->``.  The result is an M-shaped five-level ladder
driven by a counter-intuitive pulse sequence (coupling first, pumps second).

State vector ordering is ``[|0>, |i>, |+>, |i'>, |->]``.  Amplitudes obey
``i dc/dt = H(t) c`` in the rotating frame with ``hbar = 1``:

    H = [[0,      W+/2,  0,     W-/2,  0   ],
         [W+/2,   D,     Wc/2,  0,     0   ],
         [0,      Wc/2,  s,     0,     0   ],
         [W-/2,   0,     0,     D,     Wc/2],
         [0,      0,     0,     Wc/2,  s   ]]

with one-photon detuning ``D`` and an optional mean-field shift ``s`` on
the vortex states (zero by default).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    IncompleteTransferError,
    IntegrationAccuracyError,
    InvalidParameter,
    StiffnessError,
)
from .interference import VortexSuperposition

OMEGA0 = 2 * math.pi * 1.0e3
PEAK_RABI = 25 * OMEGA0
PULSE_SHAPES = ("gaussian", "sin_squared")
# sin^2 pulses get the same FWHM as a Gaussian of the configured width.
SIN2_DURATION_PER_WIDTH = 4 * math.sqrt(2 * math.log(2))

GROUND, EXCITED_PLUS, PLUS, EXCITED_MINUS, MINUS = range(5)


@dataclass(frozen=True)
class PulseSchedule:
    """Pulse parameters; angular frequencies in rad/s, times in s.

    Defaults realize a 60:40 split of the two vortex populations with
    ``Omega_0 = 2 pi x 1 kHz`` and ``Delta = 100 Omega_0``.
    """

    omega_plus_peak: float = PEAK_RABI * math.sqrt(0.6)
    omega_minus_peak: float = PEAK_RABI * math.sqrt(0.4)
    omega_coupling_peak: float = PEAK_RABI
    omega0: float = OMEGA0
    detuning: float = 100 * OMEGA0
    pulse_shape: str = "gaussian"
    t_stokes_center: float = 8.0e-3
    t_pump_center: float = 12.0e-3
    pulse_width: float = 2.0e-3
    window: float = 20.0e-3
    mean_field_shift: float = 0.0

    def __post_init__(self):
        for name in ("omega_plus_peak", "omega_minus_peak", "omega_coupling_peak"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise InvalidParameter(name, f"must be non-negative, got {value!r}")
        for name in ("omega0", "pulse_width", "window"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidParameter(name, f"must be strictly positive, got {value!r}")
        if not np.isfinite(self.detuning):
            raise InvalidParameter("detuning", "must be finite")
        if self.pulse_shape not in PULSE_SHAPES:
            raise InvalidParameter("pulse_shape", f"must be one of {PULSE_SHAPES}, got {self.pulse_shape!r}")
        if not self.t_stokes_center < self.t_pump_center:
            raise InvalidParameter(
                "t_stokes_center",
                "the coupling (Stokes) pulse must precede the pump pulses "
                f"({self.t_stokes_center!r} >= {self.t_pump_center!r})",
            )

    @classmethod
    def for_split(cls, plus_fraction, **overrides):
        """Schedule whose pump peaks share ``PEAK_RABI`` in the ratio ``p : 1 - p``."""
        if not 0 <= plus_fraction <= 1:
            raise InvalidParameter("plus_fraction", "must lie in [0, 1]")
        total = overrides.pop("pump_peak", PEAK_RABI)
        return cls(
            omega_plus_peak=total * math.sqrt(plus_fraction),
            omega_minus_peak=total * math.sqrt(1 - plus_fraction),
            **overrides,
        )

    def time_grid(self, n=2001):
        return np.linspace(0.0, self.window, n)


def _shape(schedule, center, t):
    t = np.asarray(t, dtype=float)
    if schedule.pulse_shape == "gaussian":
        return np.exp(-((t - center) ** 2) / (2 * schedule.pulse_width**2))
    duration = SIN2_DURATION_PER_WIDTH * schedule.pulse_width
    start = center - duration / 2
    inside = (t >= start) & (t <= start + duration)
    return np.where(inside, np.sin(np.pi * (t - start) / duration) ** 2, 0.0)


def pulse_envelope(schedule: PulseSchedule, which, t):
    """Instantaneous Rabi frequency of ``pump_plus``, ``pump_minus`` or ``coupling``."""
    if which == "pump_plus":
        peak, center = schedule.omega_plus_peak, schedule.t_pump_center
    elif which == "pump_minus":
        peak, center = schedule.omega_minus_peak, schedule.t_pump_center
    elif which == "coupling":
        peak, center = schedule.omega_coupling_peak, schedule.t_stokes_center
    else:
        raise InvalidParameter("which", f"unknown field {which!r}")
    value = peak * _shape(schedule, center, t)
    return value if np.ndim(value) else float(value)


@dataclass(frozen=True)
class AmplitudeTrajectory:
    times: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    excited_i: np.ndarray
    excited_iprime: np.ndarray
    transfer_function: np.ndarray = field(init=False)

    def __post_init__(self):
        f = np.abs(self.alpha) ** 2 - np.abs(self.beta) ** 2 - np.abs(self.gamma) ** 2
        object.__setattr__(self, "transfer_function", f)

    @property
    def populations(self):
        """Dict of population arrays keyed by state name."""
        return {
            "ground": np.abs(self.alpha) ** 2,
            "plus": np.abs(self.beta) ** 2,
            "minus": np.abs(self.gamma) ** 2,
            "excited_i": np.abs(self.excited_i) ** 2,
            "excited_iprime": np.abs(self.excited_iprime) ** 2,
        }

    @property
    def norm(self):
        return sum(self.populations.values())

    def summary(self):
        p = {k: float(v[-1]) for k, v in self.populations.items()}
        return {
            "final_plus": p["plus"],
            "final_minus": p["minus"],
            "residual_ground": p["ground"],
            "final_transfer_function": float(self.transfer_function[-1]),
            "max_excited": float(max(self.populations["excited_i"].max(),
                                     self.populations["excited_iprime"].max())),
            "max_norm_error": float(np.max(np.abs(self.norm - 1.0))),
        }


def evolve_amplitudes(schedule: PulseSchedule, t_grid=None, rtol=1e-9, atol=1e-12,
                      norm_tolerance=1e-4):
    """Integrate the five-level amplitude equations starting from ``|0>``.

    Uses an explicit 8th-order Dormand-Prince integrator with adaptive step
    control; the solution is reported on ``t_grid``.
    """
    t_grid = schedule.time_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2 or np.any(np.diff(t_grid) <= 0):
        raise InvalidParameter("t_grid", "must be a strictly increasing 1-D array with >= 2 points")

    delta, shift = schedule.detuning, schedule.mean_field_shift
    hp, hm, hc = (0.5 * schedule.omega_plus_peak, 0.5 * schedule.omega_minus_peak,
                  0.5 * schedule.omega_coupling_peak)

    def rhs(t, c):
        pump = _shape(schedule, schedule.t_pump_center, t)
        wp, wm, wc = hp * pump, hm * pump, hc * _shape(schedule, schedule.t_stokes_center, t)
        c0, ci, cp, cj, cm = c
        return -1j * np.array([
            wp * ci + wm * cj,
            wp * c0 + delta * ci + wc * cp,
            wc * ci + shift * cp,
            wm * c0 + delta * cj + wc * cm,
            wc * cj + shift * cm,
        ])

    y0 = np.zeros(5, dtype=complex)
    y0[GROUND] = 1.0
    sol = solve_ivp(
        rhs, (t_grid[0], t_grid[-1]), y0, method="DOP853", t_eval=t_grid,
        rtol=rtol, atol=atol, max_step=schedule.pulse_width / 20,
    )
    if sol.status != 0:
        raise StiffnessError(float(sol.t[-1]) if sol.t.size else float(t_grid[0]), f"({sol.message})")

    y = sol.y
    traj = AmplitudeTrajectory(
        times=sol.t, alpha=y[GROUND], beta=y[PLUS], gamma=y[MINUS],
        excited_i=y[EXCITED_PLUS], excited_iprime=y[EXCITED_MINUS],
    )
    drift = float(np.max(np.abs(traj.norm - 1.0)))
    if drift > norm_tolerance:
        raise IntegrationAccuracyError(f"norm drift {drift:.2e} exceeds {norm_tolerance:.1e}")
    return traj


def final_superposition(traj: AmplitudeTrajectory, l, threshold=0.01, profile=None):
    """Vortex amplitudes at the end of a completed transfer, renormalized."""
    residual = float(abs(traj.alpha[-1]) ** 2)
    if residual > threshold:
        raise IncompleteTransferError(residual)
    b_plus, b_minus = complex(traj.beta[-1]), complex(traj.gamma[-1])
    scale = math.sqrt(abs(b_plus) ** 2 + abs(b_minus) ** 2)
    return VortexSuperposition(
        b_plus=b_plus / scale, b_minus=b_minus / scale,
        charge_magnitude=abs(int(l)), sagnac_phase=0.0, profile=profile,
    )
