"""Shared construction helpers for the test suite."""

from fransonsim import FiberSpec, MZIConfig, PathStack, stack

DELTA_T_NS = 4.77


def arm_with_dispersion(d_beta2_ps2=0.0, d_beta3_ps3=0.0, delta_t_ns=DELTA_T_NS, phase_rad=0.0):
    """One-segment arm whose differential moments equal the given values.

    A synthetic 1 mm fiber carries the whole target: beta2 in fs^2/mm terms
    is d_beta2_ps2 * 1e6, beta3 is d_beta3_ps3 * 1e9.
    """
    fiber = FiberSpec(
        name="synthetic",
        beta2_fs2_per_mm=d_beta2_ps2 * 1e6,
        beta3_fs3_per_mm=d_beta3_ps3 * 1e9,
    )
    return MZIConfig(
        long=stack((fiber, 1.0)),
        short=PathStack(()),
        delta_t_ns=delta_t_ns,
        phase_rad=phase_rad,
    )
