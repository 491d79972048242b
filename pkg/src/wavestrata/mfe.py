"""Modulated Fourier expansion of the numerical solution.

The numerical trajectory is approximated by a finite sum of slowly modulated
oscillations,

    u_j(t) ~ sum_k P_jk(delta^nu t) exp(i (k.omega) t),

where each coefficient function expands in powers of ``delta = eps^(1/2)``:

    P_jk = delta^(2 m(j,k) nu) * sum_{m <= m_max} delta^(m (1-2 nu)) z_{j,m}^k,

with polynomial stage functions ``z_{j,m}^k`` of the slow time and the
starting order ``m(j,k) = max(e(j), max_{l: k_l != 0} e(l))``.

Construction proceeds order by order.  At order ``m`` the two-step recurrence
collapses, after matching oscillatory phases and powers of
``delta^(1-2 nu)``, to a constant-coefficient ODE

    a_0 z + a_1 z' + a_2 z'' + ... = p(s),
    a_0 = 4 sin(tau(omega_j - k.omega)/2) sin(tau(omega_j + k.omega)/2),
    a_p = 2 (tau delta^nu)^p / p! * (i sin(tau k.omega) if p odd
                                     else cos(tau k.omega)),

whose right-hand side ``p`` collects filtered products of lower-order stages
through the aliased convolution.  Off the diagonal (``k != +-<j>``) the
non-resonance condition makes ``a_0`` invertible and the polynomial solution
is the terminating Neumann series; on the diagonal ``a_0 = 0``, the equation
determines ``z'`` and the free constant is fixed by the initial conditions
for position and velocity.  All polynomial arithmetic is exact (no Taylor
truncation: the series terminate at the polynomial degree).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .integrator import (
    SINC_SINGULAR_TOL,
    FilterPair,
    VelocitySingularError,
    get_filter,
)
from .resonance import MultiIndex, ResonanceReport, _centered_mod, nonres_margins
from .spectral import (
    EnergyProfile,
    WaveParams,
    WeightScheme,
    make_params,
    sinc,
    weighted_norm,
)

ALPHA0_TOL = 1e-12


class ConstructionError(ValueError):
    """The modulation system could not be solved for some (j, k)."""


class ResonantStepError(ConstructionError):
    """The step-size is classified resonant; the construction divides by its margins."""

    def __init__(self, message: str, report: ResonanceReport | None = None):
        super().__init__(message)
        self.report = report


class SlowPoly:
    """Polynomial in the slow time variable with complex coefficients.

    Coefficients are stored in ascending order; exact trailing zeros are
    trimmed so the degree is never overstated.  The zero polynomial has
    degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = np.asarray(list(coeffs), dtype=complex)
        n = c.shape[0]
        while n > 0 and c[n - 1] == 0:
            n -= 1
        self.coeffs = tuple(c[:n])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, s: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __add__(self, other: "SlowPoly") -> "SlowPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return SlowPoly(out)

    def __sub__(self, other: "SlowPoly") -> "SlowPoly":
        return self + other.scale(-1.0)

    def __mul__(self, other: "SlowPoly") -> "SlowPoly":
        if self.is_zero or other.is_zero:
            return ZERO_POLY
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return SlowPoly(out)

    def scale(self, factor: complex) -> "SlowPoly":
        return SlowPoly([factor * c for c in self.coeffs])

    def deriv(self, order: int = 1) -> "SlowPoly":
        c = self.coeffs
        for _ in range(order):
            c = tuple(i * v for i, v in enumerate(c))[1:]
            if not c:
                return ZERO_POLY
        return SlowPoly(c)

    def antiderivative(self) -> "SlowPoly":
        """Antiderivative with zero constant term."""
        return SlowPoly([0j] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def conjugate(self) -> "SlowPoly":
        return SlowPoly([np.conj(c) for c in self.coeffs])

    def __repr__(self):
        return f"SlowPoly({list(self.coeffs)!r})"


ZERO_POLY = SlowPoly(())


def m_weight(j: int, k: MultiIndex, profile: EnergyProfile) -> int:
    """Starting order m(j, k): max of e(j) and e(l) over the support of k."""
    m = profile.exponent(j)
    for level, _ in k.entries:
        m = max(m, profile.exponent(level))
    return int(m)


def _lhs_coeffs(omega_j: float, dot: float, tau: float, dnu: float, n_terms: int):
    """Coefficients a_0..a_n of the collapsed recurrence for one (j, k)."""
    sm = math.sin(0.5 * tau * (omega_j - dot))
    sp = math.sin(0.5 * tau * (omega_j + dot))
    s2 = math.sin(tau * dot)
    c2 = math.cos(tau * dot)
    coeffs = [complex(4.0 * sm * sp)]
    h = tau * dnu
    fact = 1.0
    power = 1.0
    for p in range(1, n_terms + 1):
        fact *= p
        power *= h
        if p % 2 == 1:
            coeffs.append(2j * s2 * power / fact)
        else:
            coeffs.append(complex(2.0 * c2 * power / fact))
    return coeffs


def _solve_full(a: list[complex], p: SlowPoly) -> SlowPoly:
    """Unique polynomial solution of a_0 z + a_1 z' + ... = p (a_0 != 0).

    Fixed-point iteration z <- (p - sum_{q>=1} a_q z^(q)) / a_0 is exact after
    deg(p)+1 rounds because differentiation is nilpotent on polynomials.
    """
    z = ZERO_POLY
    for _ in range(p.degree + 2):
        acc = p
        for q in range(1, min(len(a) - 1, max(z.degree, 0)) + 1):
            acc = acc - z.deriv(q).scale(a[q])
        z = acc.scale(1.0 / a[0])
    return z


def _solve_derivative(a: list[complex], p: SlowPoly) -> SlowPoly:
    """Polynomial z' solving a_1 z' + a_2 z'' + ... = p (diagonal case, a_0 = 0)."""
    b = a[1:]
    if not b or b[0] == 0:
        raise ConstructionError("vanishing leading coefficient in diagonal solve")
    w = ZERO_POLY
    for _ in range(p.degree + 2):
        acc = p
        for q in range(1, min(len(b) - 1, max(w.degree, 0)) + 1):
            acc = acc - w.deriv(q).scale(b[q])
        w = acc.scale(1.0 / b[0])
    return w


@dataclass
class ModulationTable:
    """Stage polynomials of the modulated Fourier expansion plus its scaling data.

    ``entries[(j, k, m)]`` holds the stage polynomial ``z_{j,m}^k``; exact
    zeros are not stored.
    """

    params: WaveParams
    profile: EnergyProfile
    filters: FilterPair
    tau: float
    delta: float
    nu: float
    m_max: int
    entries: dict = field(default_factory=dict)
    _full_cache: dict = field(default_factory=dict, repr=False)

    @property
    def eps(self) -> float:
        return self.delta**2

    def support(self) -> list[tuple[int, MultiIndex]]:
        """Distinct (j, k) pairs carrying at least one stage polynomial, sorted."""
        pairs = {(j, k) for (j, k, _m) in self.entries}
        return sorted(pairs, key=lambda p: (p[0], p[1].key()))

    def stage(self, j: int, k: MultiIndex, m: int) -> SlowPoly:
        return self.entries.get((j, k, m), ZERO_POLY)

    def full(self, j: int, k: MultiIndex) -> SlowPoly:
        """Delta-weighted coefficient function P_jk = sum_m delta^... z_{j,m}^k."""
        key = (j, k)
        cached = self._full_cache.get(key)
        if cached is not None:
            return cached
        mw = m_weight(j, k, self.profile)
        acc = ZERO_POLY
        for m in range(mw, self.m_max + 1):
            z = self.entries.get((j, k, m))
            if z is not None:
                acc = acc + z.scale(self.delta ** (2 * mw * self.nu + m * (1.0 - 2.0 * self.nu)))
        self._full_cache[key] = acc
        return acc

    def conjugate_defect(self) -> float:
        """Max deviation from the symmetry conj(z_{j,m}^k) = z_{-j,m}^{-k}."""
        worst = 0.0
        two_m = 2 * self.params.M
        for (j, k, m), z in self.entries.items():
            partner = self.stage(_centered_mod(-j, two_m), -k, m)
            diff = z.conjugate() - partner
            if not diff.is_zero:
                worst = max(worst, float(np.max(np.abs(diff.coeffs))))
        return worst


def construct(u0: np.ndarray, udot0: np.ndarray, tau: float, params: WaveParams,
              profile: EnergyProfile, filters: FilterPair, eps: float, *,
              nu: float = 0.0, m_max: int = 2,
              resonance_report: ResonanceReport | None = None) -> ModulationTable:
    """Build the modulation table for initial data (u0, udot0) up to order ``m_max``.

    Refuses step-sizes classified resonant (the solves divide by the sine
    margins).  ``resonance_report`` may pass in a precomputed scan to skip the
    catalogue walk.
    """
    K = profile.K
    if not (1 <= m_max <= 2 * K - 1):
        raise ValueError(f"m_max must lie in 1..2K-1 = {2 * K - 1}, got {m_max}")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    report = resonance_report
    if report is None:
        report = nonres_margins(tau, params, profile, nu=nu, eps=eps)
    if report.classification == "resonant":
        raise ResonantStepError(
            f"tau={tau!r} is resonant (weak margin {report.min_weak_margin:.3e} "
            f"at {report.weak_witness}); the expansion is not constructible",
            report=report,
        )

    M = params.M
    two_m = 2 * M
    om_line = params.omega_line()
    sin_line = np.sin(tau * om_line)
    if np.any(np.abs(sinc(tau * om_line)) < SINC_SINGULAR_TOL):
        bad = np.arange(-M, M)[np.abs(sinc(tau * om_line)) < SINC_SINGULAR_TOL]
        raise VelocitySingularError(
            f"sinc(tau*omega_j) ~ 0 for j in {bad.tolist()}; "
            "initial velocities cannot be matched"
        )

    delta = math.sqrt(eps)
    dnu = delta**nu
    e_line = profile.exponent(np.arange(-M, M))
    scale = delta ** (-e_line.astype(float))
    u_norm = np.asarray(u0, dtype=complex) * scale
    v_norm = np.asarray(udot0, dtype=complex) * scale

    def pos(j: int) -> int:
        return j + M

    def omega_of(j: int) -> float:
        return float(params.omega[abs(j)])

    phi_of = {j: float(filters.phi(tau * omega_of(j))) for j in range(-M, M)}
    psi_of = {j: float(filters.psi(tau * omega_of(j))) for j in range(-M, M)}

    table = ModulationTable(params=params, profile=profile, filters=filters,
                            tau=tau, delta=delta, nu=nu, m_max=m_max)
    levels: dict[int, dict[tuple[int, MultiIndex], SlowPoly]] = {}
    mw_cache: dict[tuple[int, MultiIndex], int] = {}

    def mw(j: int, k: MultiIndex) -> int:
        key = (j, k)
        v = mw_cache.get(key)
        if v is None:
            v = m_weight(j, k, profile)
            mw_cache[key] = v
        return v

    for m in range(1, m_max + 1):
        # Right-hand sides from products of lower stages through the aliased
        # convolution; ordered pairs, filtered arguments.
        rhs: dict[tuple[int, MultiIndex], SlowPoly] = {}
        for m1 in range(1, m):
            lvl1 = levels.get(m1, {})
            lvl2 = levels.get(m - m1, {})
            for (j1, k1), z1 in lvl1.items():
                f1 = phi_of[j1]
                for (j2, k2), z2 in lvl2.items():
                    j = _centered_mod(j1 + j2, two_m)
                    k = k1 + k2
                    factor = f1 * phi_of[j2]
                    if nu != 0.0:
                        factor *= delta ** (2.0 * nu * (mw(j1, k1) + mw(j2, k2)))
                    prod = (z1 * z2).scale(factor)
                    key = (j, k)
                    acc = rhs.get(key)
                    rhs[key] = prod if acc is None else acc + prod

        new_level: dict[tuple[int, MultiIndex], SlowPoly] = {}

        def target_rhs(j: int, k: MultiIndex) -> SlowPoly:
            p = rhs.get((j, k))
            if p is None:
                return ZERO_POLY
            factor = tau**2 * psi_of[j]
            if nu != 0.0:
                factor *= delta ** (-2.0 * nu * mw(j, k))
            return p.scale(factor)

        # Off-diagonal stages: a_0 is bounded away from zero by non-resonance.
        for (j, k) in rhs:
            if k.entries == ((abs(j), 1),) or k.entries == ((abs(j), -1),):
                continue
            p = target_rhs(j, k)
            if p.is_zero:
                continue
            dot = k.dot_omega(params.omega)
            a = _lhs_coeffs(omega_of(j), dot, tau, dnu, p.degree + 1)
            if abs(a[0]) < ALPHA0_TOL:
                raise ConstructionError(
                    f"near-resonant small divisor at (j={j}, k={k}): |a0|={abs(a[0]):.3e}"
                )
            z = _solve_full(a, p)
            if not z.is_zero:
                new_level[(j, k)] = z

        # Diagonal stages k = +-<j>: solve for z', then fix z(0) from the
        # initial conditions for position and velocity.
        diag_js = {j for (j, _k) in new_level}
        diag_js.update(j for (j, k) in rhs
                       if k.entries in (((abs(j), 1),), ((abs(j), -1),)))
        for j in range(-M, M):
            if profile.exponent(j) == m and (u_norm[pos(j)] != 0 or v_norm[pos(j)] != 0):
                diag_js.add(j)

        for j in sorted(diag_js):
            om_j = omega_of(j)
            s_j = float(sin_line[pos(j)])
            parts = {}
            for sign in (1, -1):
                k_d = MultiIndex.unit(j, sign)
                p = target_rhs(j, k_d)
                a = _lhs_coeffs(om_j, sign * om_j, tau, dnu, max(p.degree + 2, 2))
                zdot = _solve_derivative(a, p) if not p.is_zero else ZERO_POLY
                parts[sign] = zdot.antiderivative()

            # Known contributions of all stages at this order to the two
            # initial conditions; diagonal constants enter separately.
            a_known = 0j
            b_known = 0j
            h = dnu * tau
            items = [(k, z) for (jj, k), z in new_level.items() if jj == j]
            items += [(MultiIndex.unit(j, sign), parts[sign]) for sign in (1, -1)]
            for k, z in items:
                gamma = delta ** (2.0 * nu * (mw(j, k) - profile.exponent(j))) if nu != 0.0 else 1.0
                theta = tau * k.dot_omega(params.omega)
                phase = complex(math.cos(theta), math.sin(theta))
                b_known += gamma * (phase * z(h) - np.conj(phase) * z(-h))
                if k.entries not in (((abs(j), 1),), ((abs(j), -1),)):
                    a_known += gamma * z(0.0)

            rhs_a = u_norm[pos(j)] if profile.exponent(j) == m else 0j
            rhs_b = (2.0 * tau * sinc(tau * om_j) * v_norm[pos(j)]
                     if profile.exponent(j) == m else 0j)
            diff = (rhs_b - b_known) / (2j * s_j)
            czs = {1: 0.5 * ((rhs_a - a_known) + diff),
                   -1: 0.5 * ((rhs_a - a_known) - diff)}
            for sign in (1, -1):
                z = SlowPoly([czs[sign]]) + parts[sign]
                if not z.is_zero:
                    new_level[(j, MultiIndex.unit(j, sign))] = z

        levels[m] = new_level
        for (j, k), z in new_level.items():
            table.entries[(j, k, m)] = z

    return table


def evaluate(table: ModulationTable, t: float) -> np.ndarray:
    """Coefficient vector of the expansion at real time ``t`` (centered order)."""
    M = table.params.M
    sigma = table.delta**table.nu * t
    out = np.zeros(2 * M, dtype=complex)
    for j, k in table.support():
        theta = k.dot_omega(table.params.omega) * t
        out[j + M] += table.full(j, k)(sigma) * complex(math.cos(theta), math.sin(theta))
    return out


def evaluate_velocity(table: ModulationTable, t: float) -> np.ndarray:
    """Velocity vector of the expansion at time ``t`` through the centered relation."""
    M = table.params.M
    tau = table.tau
    sigma = table.delta**table.nu * t
    h = table.delta**table.nu * tau
    out = np.zeros(2 * M, dtype=complex)
    for j, k in table.support():
        om_j = float(table.params.omega[abs(j)])
        s = sinc(tau * om_j)
        if abs(s) < SINC_SINGULAR_TOL:
            raise VelocitySingularError(f"sinc(tau*omega_{j}) ~ 0")
        dot = k.dot_omega(table.params.omega)
        phase_tau = complex(math.cos(tau * dot), math.sin(tau * dot))
        phase_t = complex(math.cos(dot * t), math.sin(dot * t))
        p = table.full(j, k)
        out[j + M] += (p(sigma + h) * phase_tau - p(sigma - h) * np.conj(phase_tau)) \
            * phase_t / (2.0 * tau * s)
    return out


def defect_coefficients(table: ModulationTable, t: float) -> dict:
    """Residual d_j^k of the modulation system at time ``t`` by direct substitution.

    Defined on the product closure of the table support: pairs reachable as
    sums of supported pairs carry the unmatched convolution products.
    """
    params, tau = table.params, table.tau
    M = params.M
    two_m = 2 * M
    sigma = table.delta**table.nu * t
    h = table.delta**table.nu * tau
    support = table.support()
    phi = {j: float(table.filters.phi(tau * params.omega[abs(j)])) for j in range(-M, M)}
    psi = {j: float(table.filters.psi(tau * params.omega[abs(j)])) for j in range(-M, M)}

    vals = {}
    for j, k in support:
        p = table.full(j, k)
        vals[(j, k)] = (p(sigma), p(sigma + h), p(sigma - h))

    conv: dict[tuple[int, MultiIndex], complex] = {}
    for (j1, k1) in support:
        v1 = vals[(j1, k1)][0] * phi[j1]
        for (j2, k2) in support:
            key = (_centered_mod(j1 + j2, two_m), k1 + k2)
            conv[key] = conv.get(key, 0j) + v1 * vals[(j2, k2)][0] * phi[j2]

    out = {}
    for key in set(conv) | set(vals):
        j, k = key
        om_j = float(params.omega[abs(j)])
        theta = tau * k.dot_omega(params.omega)
        phase = complex(math.cos(theta), math.sin(theta))
        if key in vals:
            v0, vp, vm = vals[key]
            lhs = phase * vp - 2.0 * math.cos(tau * om_j) * v0 + np.conj(phase) * vm
        else:
            lhs = 0j
        denom = tau**2 * psi[j]
        out[key] = lhs / denom - conv.get(key, 0j)
    return out


@dataclass
class DefectReport:
    """Per-mode defect sums and the weighted aggregate norm."""

    per_mode: np.ndarray  # sum_k |d_j^k| over j = -M..M-1
    aggregate: float
    by_pair: dict


def defect(table: ModulationTable, t: float, weights: WeightScheme) -> DefectReport:
    coeffs = defect_coefficients(table, t)
    M = table.params.M
    per_mode = np.zeros(2 * M)
    for (j, _k), d in coeffs.items():
        per_mode[j + M] += abs(d)
    return DefectReport(per_mode=per_mode,
                        aggregate=weighted_norm(per_mode, weights, table.profile),
                        by_pair=coeffs)


@dataclass
class AlmostInvariants:
    """Almost-invariant energies of the modulation system at one time."""

    values: np.ndarray  # complex, indexed by level l = 0..M
    time: float

    def imag_residual(self) -> float:
        scale = float(np.max(np.abs(self.values)))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.values.imag))) / scale


def almost_invariants(table: ModulationTable, t: float) -> AlmostInvariants:
    """Bilinear almost-invariants: -(i/2) sum k_l omega_l /(tau sinc(tau w_j)) z_-j^-k e^{i k.w tau} z_j^k(t+tau)."""
    params, tau = table.params, table.tau
    M = params.M
    sigma = table.delta**table.nu * t
    h = table.delta**table.nu * tau
    vals = np.zeros(M + 1, dtype=complex)
    for j, k in table.support():
        om_j = float(params.omega[abs(j)])
        s = sinc(tau * om_j)
        if abs(s) < SINC_SINGULAR_TOL:
            raise VelocitySingularError(f"sinc(tau*omega_{j}) ~ 0")
        dot = k.dot_omega(params.omega)
        phase = complex(math.cos(tau * dot), math.sin(tau * dot))
        j_neg = _centered_mod(-j, 2 * M)
        base = (table.full(j_neg, -k)(sigma) * phase * table.full(j, k)(sigma + h)
                / (tau * s))
        for level, kl in k.entries:
            vals[level] += -0.5j * kl * params.omega[level] * base
    return AlmostInvariants(values=vals, time=t)


def almost_invariants_alt(table: ModulationTable, t: float) -> AlmostInvariants:
    """Equivalent Taylor form of the almost-invariants (exact finite series)."""
    params, tau = table.params, table.tau
    M = params.M
    sigma = table.delta**table.nu * t
    dnu = table.delta**table.nu
    vals = np.zeros(M + 1, dtype=complex)
    for j, k in table.support():
        om_j = float(params.omega[abs(j)])
        s = sinc(tau * om_j)
        if abs(s) < SINC_SINGULAR_TOL:
            raise VelocitySingularError(f"sinc(tau*omega_{j}) ~ 0")
        dot = k.dot_omega(params.omega)
        p = table.full(j, k)
        v = p(sigma)
        term1_base = dot * sinc(tau * dot) / s * (v * np.conj(v))
        j_neg = _centered_mod(-j, 2 * M)
        phase = complex(math.cos(tau * dot), math.sin(tau * dot))
        series = 0j
        fact = 1.0
        for order in range(1, p.degree + 1):
            fact *= order
            series += tau ** (order - 1) * dnu**order * p.deriv(order)(sigma) / fact
        term2_base = table.full(j_neg, -k)(sigma) * phase * series / s
        for level, kl in k.entries:
            w = kl * params.omega[level]
            vals[level] += 0.5 * w * term1_base - 0.5j * w * term2_base
    return AlmostInvariants(values=vals, time=t)


def cos_pairing_residual(table: ModulationTable, t: float) -> np.ndarray:
    """The cosine pairing sum that cancels by the j-symmetry / k-antisymmetry.

    Vanishes identically on tables whose support is closed under
    (j, k) -> (-j, -k); returned per level for diagnostics.
    """
    params, tau = table.params, table.tau
    M = params.M
    sigma = table.delta**table.nu * t
    vals = np.zeros(M + 1, dtype=complex)
    for j, k in table.support():
        om_j = float(params.omega[abs(j)])
        j_neg = _centered_mod(-j, 2 * M)
        base = (math.cos(tau * om_j) / sinc(tau * om_j)
                * table.full(j_neg, -k)(sigma) * table.full(j, k)(sigma))
        for level, kl in k.entries:
            vals[level] += kl * params.omega[level] * base
    return vals


@dataclass
class DriftReport:
    """Variation of the almost-invariants over a time grid."""

    per_level: np.ndarray      # max_t |E_l(t) - E_l(0)|
    weighted_aggregate: float  # max_t sum_l sigma_l eps^-e(l) |E_l(t) - E_l(0)|


def invariant_drift(table: ModulationTable, t_grid, weights: WeightScheme) -> DriftReport:
    t_grid = np.asarray(t_grid, dtype=float)
    base = almost_invariants(table, float(t_grid[0])).values
    levels = np.arange(table.params.M + 1)
    w = weights.sigma(levels) * weights.eps ** (-profile_exponents(table.profile, levels))
    per_level = np.zeros(table.params.M + 1)
    aggregate = 0.0
    for t in t_grid[1:]:
        diff = np.abs(almost_invariants(table, float(t)).values - base)
        per_level = np.maximum(per_level, diff)
        aggregate = max(aggregate, float(np.sum(w * diff)))
    return DriftReport(per_level=per_level, weighted_aggregate=aggregate)


def profile_exponents(profile: EnergyProfile, levels) -> np.ndarray:
    return np.asarray(profile.exponent(levels), dtype=float)


def to_text(table: ModulationTable) -> str:
    """Serialize a table to a JSON document (stage coefficients as re/im pairs)."""
    entries: dict = {}
    for (j, k, m), z in sorted(table.entries.items(),
                               key=lambda item: (item[0][0], item[0][1].key(), item[0][2])):
        by_k = entries.setdefault(str(j), {})
        by_m = by_k.setdefault(k.key(), {})
        by_m[str(m)] = [[float(c.real), float(c.imag)] for c in z.coeffs]
    doc = {
        "rho": table.params.rho,
        "M": table.params.M,
        "K": table.profile.K,
        "filter": table.filters.name,
        "tau": table.tau,
        "delta": table.delta,
        "nu": table.nu,
        "m_max": table.m_max,
        "entries": entries,
    }
    return json.dumps(doc, indent=1)


def from_text(text: str) -> ModulationTable:
    doc = json.loads(text)
    params = make_params(doc["rho"], doc["M"])
    table = ModulationTable(
        params=params,
        profile=EnergyProfile(doc["K"]),
        filters=get_filter(doc["filter"]),
        tau=float(doc["tau"]),
        delta=float(doc["delta"]),
        nu=float(doc["nu"]),
        m_max=int(doc["m_max"]),
    )
    for j_str, by_k in doc["entries"].items():
        for k_key, by_m in by_k.items():
            for m_str, pairs in by_m.items():
                poly = SlowPoly([complex(re, im) for re, im in pairs])
                table.entries[(int(j_str), MultiIndex.parse(k_key), int(m_str))] = poly
    return table
