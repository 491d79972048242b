"""Spectral core: frequencies, grids, aliased convolution, energies and norms.

Conventions used throughout the package:

* A state of the wave field is a trigonometric polynomial of degree ``M``
  with complex Fourier coefficients ``u_j`` for ``j = -M..M-1``.  Coefficient
  vectors are plain complex numpy arrays of length ``2M`` stored in
  *centered* order, i.e. position ``p`` holds mode ``j = p - M`` (so position
  0 is ``j = -M`` and position ``M`` is ``j = 0``).  The ``j = +M`` mode is
  never stored; it is aliased to ``j = -M``.
* Collocation points are ``x_k = pi*k/M``.  ``to_physical`` evaluates the
  polynomial at ``k = 0..2M-1`` (equivalent to ``k = -M..M-1`` by
  periodicity), ``from_physical`` inverts it exactly.
* The discrete convolution is the aliased one induced by pointwise products
  on the collocation grid: ``(u*v)_j = sum_{j1+j2 = j mod 2M} u_j1 v_j2``.
  No de-aliasing is performed; the time integrator is defined through this
  aliased product.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class RealityResidueWarning(UserWarning):
    """Physical-space values of a nominally real field picked up an imaginary part."""


def sinc(x):
    """sin(x)/x with sinc(0) = 1.

    Uses the Taylor series ``1 - x^2/6 + x^4/120`` for ``|x| < 1e-4`` to avoid
    cancellation; the truncation error there is below 1e-25.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0 + x**4 / 120.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class WaveParams:
    """Klein-Gordon parameter and the frequency table of the spectral grid.

    ``omega[j] = sqrt(j^2 + rho)`` for ``j = 0..M``; negative mode indices
    resolve through ``|j|``.
    """

    rho: float
    M: int
    omega: np.ndarray = field(repr=False)

    def omega_of(self, j):
        """Frequency of mode ``j`` (any sign, ``|j| <= M``)."""
        return self.omega[abs(int(j))]

    def omega_line(self) -> np.ndarray:
        """Frequencies over the stored mode range ``j = -M..M-1``."""
        j = np.arange(-self.M, self.M)
        return self.omega[np.abs(j)]


def make_params(rho: float, M: int) -> WaveParams:
    """Build :class:`WaveParams` for Klein-Gordon parameter ``rho`` and degree ``M``."""
    rho = float(rho)
    if not np.isfinite(rho) or rho <= 0.0:
        raise ValueError(f"rho must be a positive real, got {rho!r}")
    M = int(M)
    if M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    j = np.arange(M + 1, dtype=float)
    omega = np.sqrt(j * j + rho)
    omega.setflags(write=False)
    return WaveParams(rho=rho, M=M, omega=omega)


@dataclass(frozen=True)
class EnergyProfile:
    """Exponent schedule governing the energy strata.

    ``exponent(j)`` is 2 at ``j = 0``, ``|j|`` for ``0 < |j| < K`` and ``K``
    for ``|j| >= K``.
    """

    K: int

    def __post_init__(self):
        if int(self.K) < 3:
            raise ValueError(f"K must be an integer >= 3, got {self.K!r}")
        object.__setattr__(self, "K", int(self.K))

    def exponent(self, j):
        """e(j), vectorized over integer mode indices."""
        aj = np.abs(np.asarray(j, dtype=int))
        e = np.where(aj == 0, 2, np.minimum(aj, self.K))
        if e.ndim == 0:
            return int(e)
        return e


@dataclass(frozen=True)
class WeightScheme:
    """Sobolev-type weights ``sigma_j = max(|j|,1)^(2s)`` plus the scaling data.

    ``s > 1/2`` is assumed by the theory; ``s = 0`` is accepted as a
    test-only configuration in which the weighted norm degenerates to the
    plain l2 norm.  ``nu`` and ``eps`` enter the norm through the rescaling
    ``eps^(-2 e(j) nu)``.
    """

    s: float = 1.0
    nu: float = 0.0
    eps: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.nu < 0.5):
            raise ValueError(f"nu must lie in [0, 1/2), got {self.nu!r}")
        if self.eps <= 0.0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")

    def sigma(self, j):
        """sigma_j, vectorized; even in j, sigma(0) = sigma(1) = 1."""
        aj = np.abs(np.asarray(j, dtype=float))
        out = np.maximum(aj, 1.0) ** (2.0 * self.s)
        if out.ndim == 0:
            return float(out)
        return out


def mode_range(M: int) -> np.ndarray:
    """Stored mode indices ``j = -M..M-1`` in array position order."""
    return np.arange(-M, M)


def to_physical(u: np.ndarray) -> np.ndarray:
    """Values of the trigonometric polynomial at the collocation points ``x_k = pi*k/M``.

    ``u`` is in centered order; the result is complex of length 2M, indexed
    by ``k = 0..2M-1``.
    """
    u = np.asarray(u)
    n = u.shape[-1]
    if n % 2 != 0:
        raise ValueError("coefficient vector must have even length 2M")
    return np.fft.ifft(np.fft.ifftshift(u)) * n


def from_physical(values: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_physical`: Fourier coefficients in centered order."""
    values = np.asarray(values)
    n = values.shape[-1]
    if n % 2 != 0:
        raise ValueError("value vector must have even length 2M")
    return np.fft.fftshift(np.fft.fft(values)) / n


def convolve(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Aliased discrete convolution ``(u*v)_j = sum_{j1+j2 = j mod 2M} u_j1 v_j2``.

    Computed through the collocation grid (pointwise product in physical
    space), which agrees with the direct double sum up to rounding.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch in convolution: {u.shape} vs {v.shape}")
    return from_physical(to_physical(u) * to_physical(v))


def weighted_norm(v: np.ndarray, weights: WeightScheme, profile: EnergyProfile) -> float:
    """Weighted l2 norm ``(sum_j sigma_j eps^(-2 e(j) nu) |v_j|^2)^(1/2)``.

    For ``nu = 0`` this is the discrete Sobolev H^s norm of the trigonometric
    polynomial with coefficients ``v``.
    """
    v = np.asarray(v)
    M = v.shape[-1] // 2
    j = mode_range(M)
    w = weights.sigma(j) * weights.eps ** (-2.0 * profile.exponent(j) * weights.nu)
    return float(np.sqrt(np.sum(w * np.abs(v) ** 2)))


def mode_energies(u: np.ndarray, udot: np.ndarray, params: WaveParams) -> np.ndarray:
    """Harmonic mode energies ``E_j = |omega_j u_j|^2/2 + |udot_j|^2/2`` for ``j = 0..M``.

    ``E_M`` is taken from the stored ``j = -M`` mode (aliasing convention).
    """
    u = np.asarray(u)
    udot = np.asarray(udot)
    M = params.M
    if u.shape[-1] != 2 * M or udot.shape[-1] != 2 * M:
        raise ValueError("state length does not match params.M")
    omega_line = params.omega_line()
    e_all = 0.5 * np.abs(omega_line * u) ** 2 + 0.5 * np.abs(udot) ** 2
    out = np.empty(M + 1)
    out[:M] = e_all[M:]  # j = 0..M-1
    out[M] = e_all[0]    # j = M read from j = -M
    return out


def conjugate_flip(u: np.ndarray) -> np.ndarray:
    """conj(u_{-j}) as a vector over ``j = -M..M-1`` (the ``j = M`` slot aliases to ``-M``)."""
    u = np.asarray(u)
    flipped = np.conj(u[::-1])
    return np.roll(flipped, 1)


def reality_defect(u: np.ndarray) -> float:
    """Max-norm distance of ``u`` from conjugate symmetry, relative to ``max|u|``."""
    u = np.asarray(u)
    scale = float(np.max(np.abs(u)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(u - conjugate_flip(u)))) / scale


def measure_reality(values: np.ndarray, tol: float = 1e-10, context: str = "") -> float:
    """Relative imaginary residue of physical-space values; warns above ``tol``.

    The residue is measured, never silently discarded: callers keep working
    with the complex values.
    """
    scale = float(np.max(np.abs(values)))
    if scale == 0.0:
        return 0.0
    residue = float(np.max(np.abs(values.imag))) / scale
    if residue > tol:
        where = f" in {context}" if context else ""
        warnings.warn(
            f"imaginary residue {residue:.3e} exceeds {tol:.1e}{where}",
            RealityResidueWarning,
            stacklevel=2,
        )
    return residue
