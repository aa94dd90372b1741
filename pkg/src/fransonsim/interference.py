"""Two-photon coincidence rate and visibility of a dispersive Franson setup.

Each arm is an unbalanced Mach-Zehnder interferometer; post-selected
coincidences interfere with the summed phase

    theta(omega) = phi_tilde + pump_offset - [phi_s(omega) + phi_i(-omega)]

where phi_tilde is the sum of the two arm phases, the pump offset is the
folded constant carrier phase, and phi_s, phi_i are the arms' differential
dispersion phases evaluated at anticorrelated detunings. The coincidence
rate is the cos^2 average of theta/2 over the biphoton spectral density,

    C(phi_tilde) = integral S(omega) cos^2(theta(omega)/2) domega,

a value in [0, 1]. Fringe visibility is (Cmax - Cmin)/(Cmax + Cmin); it
depends only on the summed dispersion phase, which is what makes nonlocal
cancellation (phi_i = -phi_s) possible, and it is strictly independent of
any dispersion common to both photons before the interferometers.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import DifferentialDispersion, PathStack, differential_phase, stack_moments
from .errors import ConfigurationError, ContractViolationError, DomainError
from .numerics import golden_section_max
from .spectra import JointSpectrum

# the two arms' path delay differences must match to better than the
# biphoton correlation time for the post-selected terms to interfere
DELAY_MATCH_TOL_NS = 1e-3

PHASE_SWEEP = "sweep"
COMPLEX_INTEGRAL = "integral"

_SWEEP_POINTS = 720


@dataclass(frozen=True)
class MZIConfig:
    """One arm: long/short fiber stacks, path delay difference, phase knob."""

    long: PathStack
    short: PathStack
    delta_t_ns: float
    phase_rad: float = 0.0

    def __post_init__(self):
        if not (self.delta_t_ns > 0):
            raise ConfigurationError(f"delta_t must be positive, got {self.delta_t_ns}")
        if not math.isfinite(self.phase_rad):
            raise ConfigurationError("arm phase must be finite")

    def differential(self) -> DifferentialDispersion:
        return stack_moments(self.long, self.short)


@dataclass(frozen=True)
class FransonConfig:
    """Full experiment: two arms, the shared spectrum, folded constants."""

    signal_arm: MZIConfig
    idler_arm: MZIConfig
    spectrum: JointSpectrum
    pump_phase_offset_rad: float = 0.0
    source_common_dispersion: DifferentialDispersion = field(
        default_factory=DifferentialDispersion
    )

    def __post_init__(self):
        mismatch = abs(self.signal_arm.delta_t_ns - self.idler_arm.delta_t_ns)
        if mismatch > DELAY_MATCH_TOL_NS:
            raise ConfigurationError(
                f"arm delays differ by {mismatch * 1e3:.3f} ps; must agree "
                f"within {DELAY_MATCH_TOL_NS * 1e3:.0f} ps"
            )
        if not self.spectrum.is_normalized():
            raise ContractViolationError(
                f"spectrum is not normalized (integral {self.spectrum.integral()!r})"
            )

    def phi_tilde(self) -> float:
        return self.signal_arm.phase_rad + self.idler_arm.phase_rad


@dataclass(frozen=True)
class VisibilityResult:
    """Fringe extrema and contrast of the coincidence rate."""

    visibility: float
    c_max: float
    c_min: float
    phase_at_max_rad: float
    method: str


def total_phase(cfg: FransonConfig, omega):
    """Summed dispersion phase phi_s(omega) + phi_i(-omega); vectorized.

    The anticorrelated idler detuning is what cancels odd dispersion orders
    shared by the arms and lets opposite-sign even orders null each other.
    The source_common_dispersion field never enters: a phase common to every
    ket before the interferometers drops out of the coincidence integrand.
    """
    omega = np.asarray(omega, dtype=float)
    phi = differential_phase(cfg.signal_arm.differential(), omega) + differential_phase(
        cfg.idler_arm.differential(), -omega
    )
    return phi if np.ndim(phi) else float(phi)


def _check_spectrum(cfg):
    if not cfg.spectrum.is_normalized():
        raise ContractViolationError(
            f"spectrum is not normalized (integral {cfg.spectrum.integral()!r})"
        )


def coincidence_rate(cfg: FransonConfig, phi_tilde: float | None = None) -> float:
    """Post-selected coincidence rate at a summed phase setting, in [0, 1].

    When phi_tilde is omitted the arms' configured phases are summed.
    """
    _check_spectrum(cfg)
    if phi_tilde is None:
        phi_tilde = cfg.phi_tilde()
    if not math.isfinite(phi_tilde):
        raise DomainError(f"phi_tilde must be finite, got {phi_tilde}")
    s = cfg.spectrum
    theta = phi_tilde + cfg.pump_phase_offset_rad - total_phase(cfg, s.omega)
    rate = float(s.weights @ (s.density * np.cos(theta / 2.0) ** 2))
    return min(1.0, max(0.0, rate))


def fringe_amplitude(cfg: FransonConfig) -> complex:
    """Complex fringe amplitude Z = integral S(omega) e^{-i total_phase}.

    C(phi_tilde) = 1/2 + Re[e^{i(phi_tilde + offset)} Z] / 2, so |Z| is the
    visibility and -arg(Z) - offset locates the fringe maximum.
    """
    _check_spectrum(cfg)
    s = cfg.spectrum
    return complex(s.weights @ (s.density * np.exp(-1j * total_phase(cfg, s.omega))))


def visibility(cfg: FransonConfig, method: str = COMPLEX_INTEGRAL) -> VisibilityResult:
    """Fringe visibility of the coincidence rate as phi_tilde is scanned.

    "integral": modulus of the complex fringe amplitude (one quadrature).
    "sweep": scan phi_tilde over [0, 2pi) on a 720-point grid and refine the
    extrema by golden-section search, mimicking a fringe measurement.
    The two methods agree to better than 1e-6 and serve as mutual checks.
    """
    if method == COMPLEX_INTEGRAL:
        z = fringe_amplitude(cfg)
        v = min(abs(z), 1.0)  # quadrature rounding can land a few ulp above 1
        c_max = (1.0 + v) / 2.0
        c_min = (1.0 - v) / 2.0
        phase_at_max = float(
            np.mod(-np.angle(z) - cfg.pump_phase_offset_rad, 2.0 * np.pi)
        )
        return VisibilityResult(v, c_max, c_min, phase_at_max, COMPLEX_INTEGRAL)

    if method == PHASE_SWEEP:
        phis = np.linspace(0.0, 2.0 * np.pi, _SWEEP_POINTS, endpoint=False)
        rates = np.array([coincidence_rate(cfg, p) for p in phis])
        step = phis[1] - phis[0]

        def refine(idx, sign):
            lo, hi = phis[idx] - step, phis[idx] + step
            x, fx = golden_section_max(
                lambda p: sign * coincidence_rate(cfg, p), lo, hi
            )
            return x, sign * fx

        p_max, c_max = refine(int(np.argmax(rates)), +1.0)
        p_min, c_min = refine(int(np.argmin(rates)), -1.0)
        if c_max + c_min <= 0:
            raise ContractViolationError("degenerate fringe: Cmax + Cmin <= 0")
        v = (c_max - c_min) / (c_max + c_min)
        return VisibilityResult(
            v, c_max, c_min, float(np.mod(p_max, 2.0 * np.pi)), PHASE_SWEEP
        )

    raise ConfigurationError(f"unknown visibility method {method!r}")
