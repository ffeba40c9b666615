"""Fringe-phase demodulation and rotation-rate estimation.

A fringe pattern ``1 + V cos(2 l phi - phi_Omega)`` is demodulated by its
angular moment of order ``2 l`` about the trap axis, which is the matched
filter for that structure.  A time series of such phases is unwrapped
step by step and fitted with a straight line whose slope is ``2 l Omega``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingError, InvalidParameter, NoSignalError

CONTRAST_FLOOR = 0.05
UNWRAP_MARGIN = 0.3


def wrap_phase(phase):
    """Map phases into ``(-pi, pi]``."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(phase, dtype=float), 2 * np.pi)
    return wrapped if wrapped.ndim else float(wrapped)


@dataclass(frozen=True)
class PhaseEstimate:
    phi_hat: float
    amplitude: float
    n_photons_used: int
    center: tuple = (0.0, 0.0)
    low_contrast: bool = False


@dataclass(frozen=True)
class RateEstimate:
    omega_hat: float
    stderr: float
    n_frames: int
    residual_rms: float
    times: np.ndarray = field(repr=False, default=None)
    unwrapped_phase: np.ndarray = field(repr=False, default=None)


def _weights(image):
    if hasattr(image, "counts"):
        return np.asarray(image.counts, dtype=float)
    return np.asarray(image.values, dtype=float)


def extract_fringe_phase(image, l, center=None, ring=None, contrast_floor=CONTRAST_FLOOR):
    """Estimate the Sagnac phase carried by a fringe image.

    ``image`` is a :class:`~vortexgyro.imaging.FringeImage` or a noiseless
    :class:`~vortexgyro.interference.DensityField`.  ``center`` is a fixed
    ``(x, y)`` in metres; by default the count-weighted centroid is used.
    ``ring = (r_in, r_out)`` restricts the moment to an annulus about the
    center.
    """
    if int(l) != l or l < 1:
        raise InvalidParameter("l", "charge magnitude must be a positive integer")
    w = _weights(image)
    total = w.sum()
    if total <= 0:
        raise NoSignalError("image holds no counts")
    X, Y = image.grid.mesh()
    if center is None:
        center = (float((w * X).sum() / total), float((w * Y).sum() / total))
    dx, dy = X - center[0], Y - center[1]
    if ring is not None:
        r = np.hypot(dx, dy)
        w = np.where((r >= ring[0]) & (r <= ring[1]), w, 0.0)
        total = w.sum()
        if total <= 0:
            raise NoSignalError("no counts inside the ring mask")
    moment = np.sum(w * np.exp(-2j * l * np.arctan2(dy, dx)))
    amplitude = float(abs(moment) / total)
    n_photons = int(round(total)) if hasattr(image, "counts") else 0
    return PhaseEstimate(
        phi_hat=wrap_phase(-np.angle(moment)),
        amplitude=amplitude,
        n_photons_used=n_photons,
        center=tuple(center),
        low_contrast=amplitude < contrast_floor,
    )


def unwrap_sequence(phases, margin=UNWRAP_MARGIN):
    """Nearest-branch unwrapping; refuses steps within ``margin`` of +-pi."""
    phases = np.asarray(phases, dtype=float)
    out = np.empty_like(phases)
    out[0] = phases[0]
    for k in range(1, phases.size):
        step = wrap_phase(phases[k] - phases[k - 1])
        if abs(step) > np.pi - margin:
            raise AliasingError(k, step)
        out[k] = out[k - 1] + step
    return out


def fit_rotation_rate(times, phases, l, margin=UNWRAP_MARGIN):
    """Least-squares rotation rate from wrapped fringe phases sampled at ``times``."""
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise InvalidParameter("frames", "need at least two frames")
    if np.any(np.diff(times) <= 0):
        raise InvalidParameter("frames", "frame times must be strictly increasing")
    unwrapped = unwrap_sequence(phases, margin)
    design = np.column_stack([times - times.mean(), np.ones_like(times)])
    (slope, _), *_ = np.linalg.lstsq(design, unwrapped, rcond=None)
    residuals = unwrapped - design @ np.array([slope, unwrapped.mean()])
    sxx = float(np.sum((times - times.mean()) ** 2))
    dof = times.size - 2
    # Two frames determine the line exactly; no residual-based error is available.
    slope_err = math.sqrt(float(residuals @ residuals) / dof / sxx) if dof > 0 else 0.0
    return RateEstimate(
        omega_hat=float(slope / (2 * l)),
        stderr=slope_err / (2 * l),
        n_frames=int(times.size),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
        times=times,
        unwrapped_phase=unwrapped,
    )


def estimate_rotation_rate(frames, l, margin=UNWRAP_MARGIN, **demod):
    """Rotation rate from ``[(t, image), ...]``; ``demod`` is passed to the demodulator."""
    frames = list(frames)
    if len(frames) < 2:
        raise InvalidParameter("frames", "need at least two frames")
    times = [t for t, _ in frames]
    phases = [extract_fringe_phase(img, l, **demod).phi_hat for _, img in frames]
    return fit_rotation_rate(times, phases, l, margin)
