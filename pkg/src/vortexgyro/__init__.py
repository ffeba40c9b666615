"""Simulator of a Bose-Einstein-condensate gyroscope built on counter-rotating vortex pairs."""
from .condensate import (
    CondensateProfile,
    TrapConfig,
    build_profile,
    solve_chemical_potential,
    trap_potential,
    vortex_amplitude,
)
from .imaging import FringeImage, ProbeConfig, effective_snr, sensitivity, snapshot, snr
from .interference import (
    DensityField,
    PixelGrid,
    VortexSuperposition,
    density,
    pattern_rotation_angle,
    sagnac_phase,
)
from .readout import PhaseEstimate, RateEstimate, estimate_rotation_rate, extract_fringe_phase
from .stirap import AmplitudeTrajectory, PulseSchedule, evolve_amplitudes, final_superposition, pulse_envelope

__version__ = "0.1.0"
