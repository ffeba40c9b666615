"""Shot-noise-limited phase-contrast readout and the SNR budget."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .interference import DensityField, PixelGrid

MAX_MEAN_COUNTS = 1e12


@dataclass(frozen=True)
class ProbeConfig:
    """Probe settings.

    ``photon_rate`` is the scattered-photon rate reaching the detector (1/s);
    ``loss_scale`` is the rate scale of the exponential atom-loss penalty.
    The defaults put 1e6 photons into a 0.1 ms exposure.
    """

    photon_rate: float = 1e10
    exposure: float = 1e-4
    loss_scale: float = 2e10
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("photon_rate", "exposure", "loss_scale"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidParameter(name, f"must be strictly positive, got {value!r}")
        if int(self.rng_seed) != self.rng_seed or not 0 <= self.rng_seed < 2**64:
            raise InvalidParameter("rng_seed", "must be an integer in [0, 2**64)")

    @property
    def mean_photons(self):
        return self.photon_rate * self.exposure


@dataclass(frozen=True)
class FringeImage:
    grid: PixelGrid
    counts: np.ndarray
    total_detected: int
    seed_used: int


def snapshot(field: DensityField, probe: ProbeConfig, seed=None):
    """Draw a Poisson photon-count image whose mean follows the density.

    Every pixel is independent with mean
    ``photon_rate * exposure * n_pixel / sum(n)``.  ``seed`` overrides
    ``probe.rng_seed``.
    """
    mean_total = probe.mean_photons
    if mean_total > MAX_MEAN_COUNTS:
        raise InvalidParameter(
            "photon_rate", f"mean photons per image {mean_total:.3g} exceeds {MAX_MEAN_COUNTS:.0e}"
        )
    values = np.asarray(field.values, dtype=float)
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise InvalidParameter("values", "density must be finite and non-negative")
    total = values.sum()
    if total <= 0:
        raise InvalidParameter("values", "density field is empty")
    seed = probe.rng_seed if seed is None else int(seed)
    rng = np.random.default_rng(seed)
    counts = rng.poisson(mean_total * values / total).astype(np.int64)
    return FringeImage(field.grid, counts, int(counts.sum()), seed)


def ensemble_seed(base_seed, index):
    """Seed of image ``index`` in an ensemble: ``base + index`` (wrapped to 64 bits)."""
    return (int(base_seed) + int(index)) % 2**64


def snr(phi_omega, n_sc):
    """Sagnac phase over the shot-noise phase floor ``1/sqrt(N_sc)``."""
    n_sc = np.asarray(n_sc, dtype=float)
    if np.any(n_sc <= 0):
        raise InvalidParameter("n_sc", "photon rate must be positive")
    return phi_omega * np.sqrt(n_sc)


def effective_snr(phi_omega, n_sc, loss_scale):
    """SNR penalized by atom loss, ``phi sqrt(N) exp(-N / N0)``; peaks at ``N = N0 / 2``."""
    if loss_scale <= 0:
        raise InvalidParameter("loss_scale", "must be positive")
    return snr(phi_omega, n_sc) * np.exp(-np.asarray(n_sc, dtype=float) / loss_scale)


def sensitivity(l, t, n_sc):
    """Smallest rotation rate resolvable at SNR = 1: ``1 / (2 l t sqrt(N_sc))``."""
    if l <= 0 or t <= 0 or n_sc <= 0:
        raise InvalidParameter("l", "charge, time and photon rate must all be positive")
    return 1.0 / (2 * l * t * np.sqrt(n_sc))


def snr_sweep(phi_omega, n_min, n_max, n_points, loss_scale):
    """Log-spaced photon-rate sweep; returns ``(n_sc, snr, effective_snr)`` arrays."""
    if not 0 < n_min < n_max or n_points < 2:
        raise InvalidParameter("n_min", "need 0 < n_min < n_max and at least two points")
    n = np.geomspace(n_min, n_max, int(n_points))
    return n, snr(phi_omega, n), effective_snr(phi_omega, n, loss_scale)
