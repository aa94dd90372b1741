"""Event-level Monte Carlo of gated-detector Franson measurement.

Detection is resolved per detector gate: the path delay difference spans an
integer number m of gating periods (m = 3 at the stock 628.5 MHz rate and
4.77 ns delay), so a photon pair born in gate g produces clicks at gate g
(short path) or g + m (long path). Pair outcomes per generated pair:

  signal short / idler long   prob 1/4   -> histogram offset +m
  signal long / idler short   prob 1/4   -> histogram offset -m
  both same path (post-selected interference) prob 1/2:
      with probability C(phi_tilde) the pair lands in the same gate
      (offset 0, gate g or g + m with equal odds); otherwise it is lost
      to the destructive ports and produces no clicks.

C(phi_tilde) is the analytic coincidence rate, so the offset-0 fringe
follows the full dispersive spectral integral while the +-m side peaks stay
phase independent. Detector imperfections: independent per-photon detection
efficiency, per-gate dark counts, and a single-gate-delayed afterpulse after
any detection (no cascades). Detector timing jitter is carried in the model
for reference but does not move events between gates; at 100 ps rms against
the 1.59 ns gate period it cannot.

Streams are reproducible: a run is a pure function of (config, seed).
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, ContractViolationError, DomainError, StatisticsError
from .interference import FransonConfig, coincidence_rate
from .noise import NoiseModel

GATE_RATIO_TOL = 0.01  # max fractional mismatch of delta_t to a whole gate count


class Detector(str, Enum):
    SIGNAL = "signal"
    IDLER = "idler"


@dataclass(frozen=True)
class DetectorModel:
    """Gated single-photon avalanche photodiode parameters."""

    efficiency: float = 0.20
    gate_rate_mhz: float = 628.5
    dark_prob: float = 2e-6
    afterpulse_prob: float = 0.06
    jitter_rms_ps: float = 100.0

    def __post_init__(self):
        if not (0.0 <= self.efficiency <= 1.0):
            raise DomainError(f"efficiency must be in [0, 1], got {self.efficiency}")
        if not (self.gate_rate_mhz > 0):
            raise DomainError(f"gate rate must be positive, got {self.gate_rate_mhz}")
        if not (0.0 <= self.dark_prob <= 1.0):
            raise DomainError(f"dark_prob must be in [0, 1], got {self.dark_prob}")
        if not (0.0 <= self.afterpulse_prob < 1.0):
            raise DomainError(
                f"afterpulse_prob must be in [0, 1), got {self.afterpulse_prob}"
            )
        if self.jitter_rms_ps < 0:
            raise DomainError(f"jitter must be >= 0, got {self.jitter_rms_ps}")

    def gate_period_ns(self) -> float:
        return 1e3 / self.gate_rate_mhz


@dataclass(frozen=True)
class EventRecord:
    detector: Detector
    gate_index: int


@dataclass(frozen=True, eq=False)
class EventStream:
    """Detection gates per detector, sorted and deduplicated."""

    signal_gates: np.ndarray
    idler_gates: np.ndarray
    n_gates: int

    def __post_init__(self):
        self.signal_gates.setflags(write=False)
        self.idler_gates.setflags(write=False)

    def __len__(self):
        return len(self.signal_gates) + len(self.idler_gates)

    def records(self):
        """Merged record iterator, sorted by gate (signal before idler on ties)."""
        i = j = 0
        s, d = self.signal_gates, self.idler_gates
        while i < len(s) or j < len(d):
            if j >= len(d) or (i < len(s) and s[i] <= d[j]):
                yield EventRecord(Detector.SIGNAL, int(s[i]))
                i += 1
            else:
                yield EventRecord(Detector.IDLER, int(d[j]))
                j += 1

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("detector,gate_index\n")
            for rec in self.records():
                fh.write(f"{rec.detector.value},{rec.gate_index}\n")


@dataclass(frozen=True, eq=False)
class CoincidenceHistogram:
    """Pair counts by gate offset d = idler_gate - signal_gate, |d| <= window."""

    offsets: np.ndarray
    counts: np.ndarray
    total_gates: int
    window: int

    def __post_init__(self):
        self.offsets.setflags(write=False)
        self.counts.setflags(write=False)

    def count(self, offset: int) -> int:
        if abs(offset) > self.window:
            raise DomainError(f"offset {offset} outside window +-{self.window}")
        return int(self.counts[offset + self.window])

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("offset,counts\n")
            for off, cnt in zip(self.offsets, self.counts):
                fh.write(f"{off},{cnt}\n")


def gate_offset(cfg: FransonConfig, det: DetectorModel) -> int:
    """Whole number of gates spanned by the path delay difference."""
    ratio = cfg.signal_arm.delta_t_ns / det.gate_period_ns()
    m = round(ratio)
    if m < 1 or abs(ratio - m) > GATE_RATIO_TOL:
        raise ConfigurationError(
            f"path delay of {ratio:.4f} gates is not a whole gate count "
            f"(tolerance {GATE_RATIO_TOL})"
        )
    return m


def _merge_gates(*arrays):
    parts = [a for a in arrays if len(a)]
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate(parts))


def _detector_events(rng, photon_gates, n_gates, det):
    """Dark counts, merge, afterpulses for one detector. Fixed draw order."""
    dark = np.flatnonzero(rng.random(n_gates) < det.dark_prob).astype(np.int64)
    base = _merge_gates(photon_gates, dark)
    ap = base[rng.random(len(base)) < det.afterpulse_prob] + 1
    ap = ap[ap < n_gates]
    return _merge_gates(base, ap)


def _simulate_stream(cfg, noise, det, n_gates, rng, phi_tilde=None):
    m = gate_offset(cfg, det)
    c_rate = coincidence_rate(cfg, phi_tilde)
    eta = det.efficiency

    pair_g = np.flatnonzero(rng.random(n_gates) < noise.alpha).astype(np.int64)
    n_pairs = len(pair_g)

    u = rng.random(n_pairs)      # outcome class
    v = rng.random(n_pairs)      # interference survival
    w = rng.random(n_pairs)      # short-short vs long-long gate placement
    det_s = rng.random(n_pairs) < eta
    det_i = rng.random(n_pairs) < eta

    sl = u < 0.25
    ls = (u >= 0.25) & (u < 0.5)
    interf = (u >= 0.5) & (v < c_rate)
    late = w < 0.5  # interfering pair lands long-long

    sig_gate = np.where(sl, pair_g, np.where(ls | (interf & late), pair_g + m, pair_g))
    idl_gate = np.where(ls, pair_g, np.where(sl | (interf & late), pair_g + m, pair_g))
    emitted = sl | ls | interf

    sig_photons = sig_gate[emitted & det_s]
    idl_photons = idl_gate[emitted & det_i]
    sig_photons = sig_photons[sig_photons < n_gates]
    idl_photons = idl_photons[idl_photons < n_gates]

    signal = _detector_events(rng, sig_photons, n_gates, det)
    idler = _detector_events(rng, idl_photons, n_gates, det)
    return EventStream(signal_gates=signal, idler_gates=idler, n_gates=n_gates)


def simulate_run(
    cfg: FransonConfig,
    noise: NoiseModel,
    det: DetectorModel,
    n_gates: int,
    seed: int,
    phi_tilde: float | None = None,
) -> EventStream:
    """Simulate one gated acquisition and return the detection stream.

    phi_tilde overrides the summed arm phase when given. Identical arguments
    always produce bit-identical streams.
    """
    if n_gates < 1:
        raise DomainError(f"n_gates must be >= 1, got {n_gates}")
    return _simulate_stream(cfg, noise, det, int(n_gates), np.random.default_rng(seed), phi_tilde)


def count_coincidences(events, window_offsets: int = 3) -> CoincidenceHistogram:
    """Histogram signal-idler gate offsets d = idler - signal, |d| <= window.

    Accepts an EventStream or any iterable of EventRecord sorted by gate
    index; unsorted input raises. Single pass; the working set is one window
    of recent gates per detector.
    """
    k = int(window_offsets)
    if k < 3:
        raise DomainError(f"window_offsets must be >= 3, got {k}")

    n_gates = 0
    if isinstance(events, EventStream):
        n_gates = events.n_gates
        events = events.records()

    counts = np.zeros(2 * k + 1, dtype=np.int64)
    recent = {Detector.SIGNAL: deque(), Detector.IDLER: deque()}
    last_gate = None
    for rec in events:
        g = rec.gate_index
        if last_gate is not None and g < last_gate:
            raise ContractViolationError(
                f"events not sorted by gate_index ({g} after {last_gate})"
            )
        last_gate = g
        for q in recent.values():
            while q and q[0] < g - k:
                q.popleft()
        opposite = recent[
            Detector.IDLER if rec.detector == Detector.SIGNAL else Detector.SIGNAL
        ]
        for other_gate in opposite:
            d = g - other_gate if rec.detector == Detector.IDLER else other_gate - g
            counts[d + k] += 1
        recent[rec.detector].append(g)
        if g >= n_gates:
            n_gates = g + 1

    return CoincidenceHistogram(
        offsets=np.arange(-k, k + 1), counts=counts, total_gates=n_gates, window=k
    )


@dataclass(frozen=True, eq=False)
class VisibilityEstimate:
    """Fringe-fit visibility from batched Monte Carlo runs.

    The fringe estimator is a linear least-squares fit of the offset-0
    counts to A*(1 + V*cos(phi - phi0)); v and sigma_v are the mean and one
    standard deviation of the per-batch fits. per_phase_histogram aggregates
    the full offset histogram over batches for side-peak diagnostics.
    """

    v: float
    sigma_v: float
    batch_visibilities: np.ndarray
    phases: np.ndarray
    per_phase_histogram: np.ndarray
    offsets: np.ndarray
    n_gates_per_phase: int
    fit_method: str = "sinusoidal-least-squares"

    def __iter__(self):  # allow v, sigma = estimate_visibility(...)
        yield self.v
        yield self.sigma_v


def _fit_fringe(phases, counts):
    if not np.any(counts > 0):
        raise StatisticsError("all fringe bins are empty; nothing to fit")
    design = np.column_stack([np.ones_like(phases), np.cos(phases), np.sin(phases)])
    coef, *_ = np.linalg.lstsq(design, counts.astype(float), rcond=None)
    a0, a1, a2 = coef
    if a0 <= 0:
        raise StatisticsError("fringe fit produced a nonpositive mean level")
    return float(np.hypot(a1, a2) / a0)


def estimate_visibility(
    cfg: FransonConfig,
    noise: NoiseModel,
    det: DetectorModel,
    n_gates: int,
    phases=None,
    batches: int = 100,
    seed: int = 0,
) -> VisibilityEstimate:
    """Measure the raw fringe visibility from simulated detection streams.

    Each batch spreads n_gates evenly over the phase grid (default 32
    uniform phases over [0, 2pi)), counts offset-0 coincidences per phase,
    and fits the sinusoidal fringe. Batches use independent substreams
    derived from (seed, batch, phase), so results are reproducible and
    batches could be evaluated in any order.
    """
    if batches < 2:
        raise DomainError(f"need at least 2 batches, got {batches}")
    if phases is None:
        phases = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
    phases = np.asarray(phases, dtype=float)
    if len(phases) < 3:
        raise DomainError("need at least 3 phase points to fit a fringe")
    per_phase = int(n_gates) // len(phases)
    if per_phase < 1:
        raise DomainError(f"n_gates {n_gates} too small for {len(phases)} phases")

    k = max(3, gate_offset(cfg, det))
    offsets = np.arange(-k, k + 1)
    hist_acc = np.zeros((len(phases), 2 * k + 1), dtype=np.int64)
    batch_vs = np.empty(batches)

    for b in range(batches):
        counts0 = np.empty(len(phases))
        for j, phi in enumerate(phases):
            rng = np.random.default_rng([int(seed), b, j])
            stream = _simulate_stream(cfg, noise, det, per_phase, rng, phi_tilde=float(phi))
            hist = count_coincidences(stream, window_offsets=k)
            counts0[j] = hist.count(0)
            hist_acc[j] += hist.counts
        batch_vs[b] = _fit_fringe(phases, counts0)

    return VisibilityEstimate(
        v=float(batch_vs.mean()),
        sigma_v=float(batch_vs.std(ddof=1)),
        batch_visibilities=batch_vs,
        phases=phases,
        per_phase_histogram=hist_acc,
        offsets=offsets,
        n_gates_per_phase=per_phase,
    )
