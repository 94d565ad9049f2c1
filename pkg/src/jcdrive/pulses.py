"""Complex drive envelopes and the linear cavity filter.

Envelopes are complex amplitudes of time in a single rotating frame chosen by
:class:`FrameConfig`; |envelope(t)|^2 is a photon flux (photons per unit
time). The filter kernel is the impulse response of the bare cavity,

    f(t) = sqrt(kappa) * exp(-(i*delta + kappa/2) * t) * Theta(t),

with delta the cavity frequency relative to the frame. The field built up
inside a bare cavity fed an input envelope beta is the causal convolution

    alpha(t) = -(beta * f)(t),

evaluated here by stepping the equivalent first-order ODE

    d(alpha)/dt = -(i*delta + kappa/2) * alpha - sqrt(kappa) * beta(t)

with an exponential integrator (exact propagation of the kernel, high-order
Gauss-Legendre quadrature of the envelope within each step, panels split at
envelope discontinuities). This avoids the periodic-boundary artifacts an
FFT convolution would introduce for pulses.

Derived fields:

    zeta(t) = g * alpha(t) / sqrt(gamma)     equivalent atom drive
    xi(t)   = beta(t) + sqrt(kappa)*alpha(t) homodyne compensation field

All envelope objects are immutable and shareable; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import SystemParams


class GridError(ValueError):
    """Time grid too coarse or inconsistent for the requested operation."""


@dataclass(frozen=True)
class FrameConfig:
    """Rotating frame at ``frame_frequency``.

    All envelopes and all system frequencies handed to the dynamics layer
    must be expressed relative to this one frame. A pulse with carrier
    ``omega_L`` in the lab frame has ``detuning = omega_L - frame_frequency``
    here.
    """

    frame_frequency: float = 0.0

    def params_in_frame(self, params: SystemParams) -> SystemParams:
        """Shift absolute frequencies into this rotating frame."""
        return SystemParams(
            omega_c=params.omega_c - self.frame_frequency,
            omega_a=params.omega_a - self.frame_frequency,
            g=params.g,
            kappa=params.kappa,
            gamma=params.gamma,
        )


def resonant_frame(params: SystemParams) -> FrameConfig:
    """Frame rotating at the cavity frequency (default choice for numerics)."""
    return FrameConfig(frame_frequency=params.omega_c)


class PulseEnvelope:
    """Base class for complex drive envelopes.

    Subclasses implement :meth:`samples` (vectorized evaluation) and may
    report :meth:`breakpoints`, the times where the envelope is not smooth
    (jumps or kinks). Integrators align quadrature panels and stage
    evaluations with these points.
    """

    def samples(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sample(self, t: float) -> complex:
        return complex(self.samples(np.asarray([float(t)]))[0])

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def __add__(self, other):
        if not isinstance(other, PulseEnvelope):
            return NotImplemented
        return SumPulse((self, other))

    def __mul__(self, factor):
        return ScaledPulse(self, complex(factor))

    __rmul__ = __mul__

    def __neg__(self):
        return ScaledPulse(self, -1.0 + 0j)


def _carrier(detuning: float, t: np.ndarray) -> np.ndarray:
    if detuning == 0.0:
        return np.ones_like(t, dtype=complex)
    return np.exp(-1j * detuning * t)


@dataclass(frozen=True)
class GaussianPulse(PulseEnvelope):
    """amplitude * exp(-(t-center)^2 / (2 width^2)) * exp(-i detuning t).

    ``width`` is the Gaussian standard deviation.
    """

    amplitude: complex
    center: float
    width: float
    detuning: float = 0.0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"width must be > 0, got {self.width}")

    def samples(self, t):
        t = np.asarray(t, dtype=float)
        env = self.amplitude * np.exp(-((t - self.center) ** 2) / (2 * self.width**2))
        return env * _carrier(self.detuning, t)


@dataclass(frozen=True)
class SquarePulse(PulseEnvelope):
    """amplitude on [start, stop), zero elsewhere, times exp(-i detuning t)."""

    amplitude: complex
    start: float
    stop: float
    detuning: float = 0.0

    def __post_init__(self):
        if self.stop <= self.start:
            raise ValueError("stop must be later than start")

    def samples(self, t):
        t = np.asarray(t, dtype=float)
        on = (t >= self.start) & (t < self.stop)
        return np.where(on, self.amplitude * _carrier(self.detuning, t), 0.0 + 0j)

    def breakpoints(self):
        return (self.start, self.stop)


@dataclass(frozen=True)
class RampPulse(PulseEnvelope):
    """Zero before ``start``, smooth sin^2 ramp of duration ``ramp``, then
    constant at ``amplitude`` forever (constant-after-ramp, for CW runs)."""

    amplitude: complex
    start: float = 0.0
    ramp: float = 1.0
    detuning: float = 0.0

    def __post_init__(self):
        if self.ramp <= 0:
            raise ValueError(f"ramp duration must be > 0, got {self.ramp}")

    def samples(self, t):
        t = np.asarray(t, dtype=float)
        x = np.clip((t - self.start) / self.ramp, 0.0, 1.0)
        env = self.amplitude * np.sin(0.5 * np.pi * x) ** 2
        return env * _carrier(self.detuning, t)

    def breakpoints(self):
        return (self.start, self.start + self.ramp)


@dataclass(frozen=True)
class ConstantPulse(PulseEnvelope):
    """Constant amplitude for all times (CW drive in its own frame)."""

    amplitude: complex
    detuning: float = 0.0

    def samples(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * _carrier(self.detuning, t)


class TabulatedPulse(PulseEnvelope):
    """Envelope given on a strictly increasing time grid.

    Values are linearly interpolated inside the table and are zero outside.
    """

    def __init__(self, times, values):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=complex)
        if times.ndim != 1 or times.size < 2 or values.shape != times.shape:
            raise ValueError("need matching 1-d time and value tables (>= 2 points)")
        if not np.all(np.diff(times) > 0):
            raise ValueError("tabulated time grid must be strictly increasing")
        self.times = times
        self.values = values
        self.times.setflags(write=False)
        self.values.setflags(write=False)

    def samples(self, t):
        t = np.asarray(t, dtype=float)
        re = np.interp(t, self.times, self.values.real)
        im = np.interp(t, self.times, self.values.imag)
        inside = (t >= self.times[0]) & (t <= self.times[-1])
        return np.where(inside, re + 1j * im, 0.0 + 0j)

    def breakpoints(self):
        # linear interpolation has a kink at every node
        return tuple(self.times)

    def to_csv(self, path):
        """Serialize as CSV rows ``t, re, im``."""
        data = np.column_stack([self.times, self.values.real, self.values.imag])
        np.savetxt(path, data, delimiter=",", header="t,re,im", fmt="%.17g")

    @classmethod
    def from_csv(cls, path):
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        if data.shape[1] != 3:
            raise ValueError(f"expected 3 columns (t, re, im), got {data.shape[1]}")
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])


@dataclass(frozen=True)
class ScaledPulse(PulseEnvelope):
    inner: PulseEnvelope
    factor: complex

    def samples(self, t):
        return self.factor * self.inner.samples(t)

    def breakpoints(self):
        return self.inner.breakpoints()


class SumPulse(PulseEnvelope):
    def __init__(self, parts):
        self.parts = tuple(parts)

    def samples(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for p in self.parts:
            out = out + p.samples(t)
        return out

    def breakpoints(self):
        pts: list[float] = []
        for p in self.parts:
            pts.extend(p.breakpoints())
        return tuple(sorted(set(pts)))


@dataclass(frozen=True)
class FilterKernel:
    """Impulse response of the bare cavity in the chosen frame.

    ``delta`` is the cavity frequency relative to the frame. The kernel has
    unit energy: integral of |f(t)|^2 over t >= 0 equals 1.
    """

    kappa: float
    delta: float

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.sqrt(self.kappa) * np.exp(-(1j * self.delta + 0.5 * self.kappa) * t)
        return np.where(t >= 0.0, out, 0.0 + 0j)

    @property
    def decay_rate(self) -> float:
        return 0.5 * self.kappa


def cavity_filter(params: SystemParams, frame: FrameConfig) -> FilterKernel:
    """Linear filter response of the bare cavity, frame-relative."""
    if params.kappa <= 0:
        raise ValueError(f"cavity filter requires kappa > 0, got {params.kappa}")
    return FilterKernel(kappa=params.kappa, delta=params.omega_c - frame.frame_frequency)


# Gauss-Legendre nodes on [0, 1]; degree-11 exactness per panel keeps the
# in-step quadrature error far below integrator tolerances.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(6)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _panel_integral(kernel_rate, beta, t0, t1, t_end):
    """integral over [t0, t1] of exp(-rate*(t_end - s)) * beta(s) ds."""
    h = t1 - t0
    s = t0 + h * _GL_X
    w = h * _GL_W * np.exp(-kernel_rate * (t_end - s))
    return np.sum(w * beta.samples(s))


def filtered_field(
    beta: PulseEnvelope, kernel: FilterKernel, grid
) -> TabulatedPulse:
    """Field built up in the bare cavity: alpha(t) = -(beta * f)(t).

    ``grid`` must resolve the cavity decay (dt <= 0.1/kappa) and should cover
    the support of beta plus several cavity lifetimes; alpha is the causal
    solution with alpha(t_start) = 0, tabulated on the grid.
    """
    dt = grid.dt
    if dt > 0.1 / kernel.kappa:
        raise GridError(
            f"grid step dt={dt:g} too coarse for kappa={kernel.kappa:g}; "
            f"need dt <= 0.1/kappa = {0.1 / kernel.kappa:g}"
        )
    times = grid.times
    n = times.size
    rate = 1j * kernel.delta + 0.5 * kernel.kappa
    root_kappa = np.sqrt(kernel.kappa)
    decay = np.exp(-rate * dt)

    # locate envelope breakpoints interior to a step; those steps get split
    # quadrature panels, all others share one vectorized evaluation
    interior: dict[int, list[float]] = {}
    for bp in beta.breakpoints():
        k = int(np.floor((bp - times[0]) / dt))
        if 0 <= k < n - 1:
            lo, hi = times[k], times[k] + dt
            if lo + 1e-12 * dt < bp < hi - 1e-12 * dt:
                interior.setdefault(k, []).append(bp)

    # vectorized in-step integrals: I_k = sum_j c_j * beta(t_k + s_j)
    s_nodes = dt * _GL_X
    coeff = dt * _GL_W * np.exp(-rate * (dt - s_nodes))
    eval_times = times[:-1, None] + s_nodes[None, :]
    beta_nodes = beta.samples(eval_times.ravel()).reshape(n - 1, 6)
    integrals = beta_nodes @ coeff

    for k, bps in interior.items():
        edges = [times[k]] + sorted(bps) + [times[k] + dt]
        integrals[k] = sum(
            _panel_integral(rate, beta, lo, hi, times[k] + dt)
            for lo, hi in zip(edges[:-1], edges[1:])
        )

    alpha = np.zeros(n, dtype=complex)
    for k in range(n - 1):
        alpha[k + 1] = decay * alpha[k] - root_kappa * integrals[k]
    return TabulatedPulse(times, alpha)


def compensation_field(
    beta: PulseEnvelope, alpha: PulseEnvelope, params: SystemParams
) -> TabulatedPulse:
    """Homodyne compensation field xi(t) = beta(t) + sqrt(kappa)*alpha(t).

    Feeding xi to the auxiliary beamsplitter port cancels the coherent state
    leaking from the driven cavity.
    """
    if not isinstance(alpha, TabulatedPulse):
        raise TypeError("alpha must be a tabulated envelope (from filtered_field)")
    if isinstance(beta, TabulatedPulse) and not (
        beta.times.shape == alpha.times.shape and np.allclose(beta.times, alpha.times)
    ):
        raise GridError("beta and alpha are tabulated on different grids")
    xi = beta.samples(alpha.times) + np.sqrt(params.kappa) * alpha.values
    return TabulatedPulse(alpha.times, xi)


def equivalent_atom_drive(
    alpha: PulseEnvelope, params: SystemParams
) -> PulseEnvelope:
    """Atom drive with the same effect as the intracavity field alpha:
    zeta(t) = g * alpha(t) / sqrt(gamma).

    Undefined for gamma = 0 (the drive rate the envelope is measured against
    vanishes); raises ValueError in that case.
    """
    if params.gamma <= 0:
        raise ValueError("equivalent atom drive undefined for gamma = 0")
    factor = params.g / np.sqrt(params.gamma)
    if isinstance(alpha, TabulatedPulse):
        return TabulatedPulse(alpha.times, factor * alpha.values)
    return ScaledPulse(alpha, factor)
