"""Symplectic trigonometric integrators for the quadratic nonlinear wave equation.

The two-step scheme advances Fourier coefficients through

    u^{n+1} - 2 cos(tau*Omega) u^n + u^{n-1} = tau^2 Psi ((Phi u^n) * (Phi u^n)),

where ``*`` is the aliased discrete convolution and ``Phi = phi(tau*Omega)``,
``Psi = psi(tau*Omega)`` are diagonal filter matrices.  Velocities are defined
by the centered relation ``2 tau sinc(tau*Omega) udot^n = u^{n+1} - u^{n-1}``.
The equivalent one-step map on ``(u, udot)`` is the canonical form used for
propagation; the two-step recurrence is kept as a cross-check.

Filter pairs must satisfy the symplecticity relation ``psi = sinc * phi``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .spectral import (
    RealityResidueWarning,
    WaveParams,
    from_physical,
    measure_reality,
    mode_energies,
    sinc,
    to_physical,
)

# Any |u_j| beyond this aborts a run: resonant scans can grow without bound
# and a bounded abort keeps them finite.
BLOWUP_THRESHOLD = 1e6

# |sinc(tau*omega_j)| below this makes the velocity relation singular.
SINC_SINGULAR_TOL = 1e-12

_SYMPLECTIC_SAMPLE = np.linspace(0.0, 12.0, 241)


class BlowUpError(RuntimeError):
    """Numerical solution left the admissible range (NaN/Inf or magnitude blow-up)."""

    def __init__(self, message: str, step: int | None = None, trace=None):
        super().__init__(message)
        self.step = step
        self.trace = trace


class VelocitySingularError(ValueError):
    """sinc(tau*omega_j) vanishes for some mode, so velocities are undefined."""


@dataclass(frozen=True)
class FilterPair:
    """A (phi, psi) filter pair defining one member of the integrator family.

    Both functions must be real, even, bounded with ``phi(0) = psi(0) = 1``,
    and related by ``psi(xi) = sinc(xi) phi(xi)`` (checked on a sample grid at
    construction; violating pairs are rejected).
    """

    name: str
    phi: Callable[[np.ndarray], np.ndarray]
    psi: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        xi = _SYMPLECTIC_SAMPLE
        phi_v = np.asarray(self.phi(xi), dtype=float)
        psi_v = np.asarray(self.psi(xi), dtype=float)
        if abs(float(self.phi(0.0)) - 1.0) > 1e-12 or abs(float(self.psi(0.0)) - 1.0) > 1e-12:
            raise ValueError(f"filter pair {self.name!r}: phi(0) and psi(0) must equal 1")
        if not (np.all(np.isfinite(phi_v)) and np.all(np.isfinite(psi_v))):
            raise ValueError(f"filter pair {self.name!r}: filters must be bounded")
        if np.max(np.abs(np.asarray(self.phi(-xi)) - phi_v)) > 1e-12:
            raise ValueError(f"filter pair {self.name!r}: phi must be even")
        if np.max(np.abs(psi_v - sinc(xi) * phi_v)) > 1e-10:
            raise ValueError(
                f"filter pair {self.name!r} is not symplectic: psi(xi) != sinc(xi)*phi(xi)"
            )


def builtin_filters() -> list[FilterPair]:
    """The two classical symplectic members: impulse and mollified impulse."""
    return [
        FilterPair("deuflhard", phi=lambda xi: np.ones_like(np.asarray(xi, dtype=float)), psi=sinc),
        FilterPair("mollified_impulse", phi=sinc, psi=lambda xi: np.asarray(sinc(xi)) ** 2),
    ]


def get_filter(name: str) -> FilterPair:
    for f in builtin_filters():
        if f.name == name:
            return f
    known = ", ".join(f.name for f in builtin_filters())
    raise ValueError(f"unknown filter pair {name!r} (known: {known})")


@dataclass(frozen=True)
class SpectralState:
    """One time level of the discrete wave field: coefficients, velocities, counter."""

    u: np.ndarray
    udot: np.ndarray
    n: int
    tau: float
    real_field: bool = False


@dataclass
class EnergyTrace:
    """Sampled per-mode energies along a run.

    ``energies[i, l]`` is ``E_l`` at time ``times[i]``; columns run ``l = 0..M``.
    ``max_reality_residue`` records the largest relative imaginary residue
    seen in physical space over the run (0 when not tracked).
    """

    times: np.ndarray
    energies: np.ndarray
    sample_stride: int
    max_reality_residue: float = 0.0

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.energies = np.asarray(self.energies, dtype=float)
        if self.times.ndim != 1 or self.energies.shape[0] != self.times.shape[0]:
            raise ValueError("times and energy rows must align")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("sample times must be strictly increasing")

    @property
    def e1_drift(self) -> float:
        """Max absolute drift of E_1 from its initial value over the samples."""
        e1 = self.energies[:, 1]
        return float(np.max(np.abs(e1 - e1[0])))


class _StepCoeffs:
    """Diagonal arrays of the one-step map for fixed (params, tau, filters)."""

    def __init__(self, params: WaveParams, tau: float, filters: FilterPair):
        om = params.omega_line()
        self.tau = float(tau)
        arg = self.tau * om
        self.cos = np.cos(arg)
        self.sinc = sinc(arg)
        self.tau_sinc = self.tau * self.sinc          # Omega^{-1} sin(tau*Omega)
        self.omega_sin = om * np.sin(arg)             # Omega sin(tau*Omega)
        self.phi = np.asarray(filters.phi(arg), dtype=float)
        self.psi = np.asarray(filters.psi(arg), dtype=float)


def _check_finite(u: np.ndarray, step: int | None):
    if not np.all(np.isfinite(u.view(float))):
        raise BlowUpError("non-finite coefficient encountered", step=step)
    if np.max(np.abs(u)) > BLOWUP_THRESHOLD:
        raise BlowUpError(
            f"coefficient magnitude exceeded {BLOWUP_THRESHOLD:.0e}", step=step
        )


REALITY_WARN_TOL = 1e-10


def _nonlinearity(u, coeffs: _StepCoeffs, real_field: bool,
                  reality_tol: float = REALITY_WARN_TOL):
    """g = (Phi u) * (Phi u); measures the physical-space imaginary residue."""
    filtered = coeffs.phi * u
    phys = to_physical(filtered)
    if real_field:
        measure_reality(phys, tol=reality_tol, context="nonlinearity evaluation")
    return from_physical(phys * phys)


def _nonlinearity_measured(u, coeffs: _StepCoeffs):
    """Like _nonlinearity but returns the residue instead of warning per call."""
    filtered = coeffs.phi * u
    phys = to_physical(filtered)
    scale = float(np.max(np.abs(phys)))
    residue = float(np.max(np.abs(phys.imag))) / scale if scale else 0.0
    return from_physical(phys * phys), residue


def start_step(u0, udot0, tau, params: WaveParams, filters: FilterPair, *,
               include_nonlinearity: bool = True) -> np.ndarray:
    """Starting approximation u^1 from (u^0, udot^0).

    ``include_nonlinearity=False`` drops the quadratic term (test hook for the
    exact linear flow).
    """
    c = _StepCoeffs(params, tau, filters)
    u1 = c.cos * u0 + c.tau_sinc * udot0
    if include_nonlinearity:
        g0 = _nonlinearity(np.asarray(u0, dtype=complex), c, real_field=False)
        u1 = u1 + 0.5 * tau**2 * c.psi * g0
    return u1


def two_step(u_prev, u_curr, tau, params: WaveParams, filters: FilterPair, *,
             include_nonlinearity: bool = True, step: int | None = None) -> np.ndarray:
    """Two-step recurrence: u^{n+1} from (u^{n-1}, u^n)."""
    c = _StepCoeffs(params, tau, filters)
    u_next = 2.0 * c.cos * u_curr - u_prev
    if include_nonlinearity:
        g = _nonlinearity(np.asarray(u_curr, dtype=complex), c, real_field=False)
        u_next = u_next + tau**2 * c.psi * g
    _check_finite(u_next, step)
    return u_next


def velocity(u_next, u_prev, tau, params: WaveParams) -> np.ndarray:
    """Centered velocity: udot^n = (u^{n+1} - u^{n-1}) / (2 tau sinc(tau*Omega))."""
    om = params.omega_line()
    s = sinc(tau * om)
    bad = np.abs(s) < SINC_SINGULAR_TOL
    if np.any(bad):
        js = np.arange(-params.M, params.M)[bad]
        raise VelocitySingularError(
            "velocity-singular step-size: sinc(tau*omega_j) ~ 0 for j in "
            f"{js.tolist()} (tau*omega_j near a nonzero multiple of pi)"
        )
    return (np.asarray(u_next) - np.asarray(u_prev)) / (2.0 * tau * s)


def one_step(state: SpectralState, params: WaveParams, filters: FilterPair, *,
             include_nonlinearity: bool = True) -> SpectralState:
    """One-step map on (u, udot): exact rotation plus filtered nonlinear increments."""
    c = _StepCoeffs(params, state.tau, filters)
    u, udot = state.u, state.udot
    if include_nonlinearity:
        g = _nonlinearity(u, c, state.real_field)
        u_next = c.cos * u + c.tau_sinc * udot + 0.5 * state.tau**2 * c.psi * g
        g_next = _nonlinearity(u_next, c, state.real_field)
        udot_next = (-c.omega_sin * u + c.cos * udot
                     + 0.5 * state.tau * (c.cos * c.phi * g + c.phi * g_next))
    else:
        u_next = c.cos * u + c.tau_sinc * udot
        udot_next = -c.omega_sin * u + c.cos * udot
    _check_finite(u_next, state.n + 1)
    return replace(state, u=u_next, udot=udot_next, n=state.n + 1)


def run(init: SpectralState, params: WaveParams, filters: FilterPair,
        n_steps: int, sample_stride: int = 10) -> EnergyTrace:
    """Propagate ``n_steps`` one-step maps, sampling energies every ``sample_stride`` steps.

    On blow-up the raised :class:`BlowUpError` carries the partial trace and
    the last finite sample index in its ``trace``/``step`` attributes.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")
    c = _StepCoeffs(params, init.tau, filters)
    tau = init.tau
    u, udot = np.asarray(init.u, dtype=complex), np.asarray(init.udot, dtype=complex)
    times = [init.n * tau]
    rows = [mode_energies(u, udot, params)]
    residue = 0.0
    g, r = _nonlinearity_measured(u, c)
    residue = max(residue, r)
    for n in range(init.n, init.n + n_steps):
        u_next = c.cos * u + c.tau_sinc * udot + 0.5 * tau**2 * c.psi * g
        try:
            _check_finite(u_next, n + 1)
            g_next, r = _nonlinearity_measured(u_next, c)
        except BlowUpError as err:
            err.trace = EnergyTrace(np.array(times), np.array(rows), sample_stride,
                                    max_reality_residue=residue if init.real_field else 0.0)
            raise
        residue = max(residue, r)
        udot = (-c.omega_sin * u + c.cos * udot
                + 0.5 * tau * (c.cos * c.phi * g + c.phi * g_next))
        u, g = u_next, g_next
        if (n + 1) % sample_stride == 0:
            times.append((n + 1) * tau)
            rows.append(mode_energies(u, udot, params))
    if init.real_field and residue > REALITY_WARN_TOL:
        warnings.warn(
            f"max imaginary residue {residue:.3e} over the run exceeds "
            f"{REALITY_WARN_TOL:.1e}", RealityResidueWarning, stacklevel=2)
    return EnergyTrace(np.array(times), np.array(rows), sample_stride,
                       max_reality_residue=residue if init.real_field else 0.0)


def make_single_mode_init(eps: float, params: WaveParams) -> tuple[np.ndarray, np.ndarray]:
    """Initial data with all energy in the first mode pair: E_1 = eps exactly.

    Realizes ``u(x, 0) = a cos(x)`` with ``a = 2 sqrt(2 eps)/omega_1`` split
    evenly over ``j = +-1`` and zero initial velocity.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    M = params.M
    u = np.zeros(2 * M, dtype=complex)
    amp = np.sqrt(2.0 * eps) / params.omega_of(1)
    u[M + 1] = amp
    u[M - 1] = amp
    udot = np.zeros(2 * M, dtype=complex)
    return u, udot
