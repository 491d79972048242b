"""Interaction-pair catalogue and step-size resonance diagnostics.

The catalogue pairs a mode index ``j`` with a sparse integer vector ``k``
over frequency levels ``0..M``.  A pair belongs to the catalogue through one
of two branches:

* near branch: ``max(|j|, mu(k)) < 2K`` and ``k_l = 0`` for all ``l >= K``;
* tail branch: ``k = +-<(j-r) mod 2M> + kbar`` with ``|(j-r) mod 2M| >= K``,
  ``|r| < K`` and ``mu(kbar) < K``, where ``<l>`` is the ``|l|``-th unit
  vector.

``mu`` is the level-weighted l1 size ``sum_l |k_l| e(l)`` with the energy
exponent profile ``e``.  The non-resonance margins are the minima of
``|sin(tau (omega_j +- k.omega) / 2)`` over the catalogue, with the diagonal
exclusions: the ``+`` scan excludes only ``k = -<j>``, the ``-`` scan only
``k = +<j>``; the strong margin (restricted to ``|j| <= K``) excludes both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .spectral import EnergyProfile, WaveParams


@dataclass(frozen=True)
class MultiIndex:
    """Sparse integer vector over frequency levels, stored as sorted (level, value) pairs."""

    entries: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[int, int]]) -> "MultiIndex":
        acc: dict[int, int] = {}
        for level, value in pairs:
            level = int(level)
            if level < 0:
                raise ValueError(f"negative frequency level {level}")
            acc[level] = acc.get(level, 0) + int(value)
        return MultiIndex(tuple(sorted((l, v) for l, v in acc.items() if v != 0)))

    @staticmethod
    def unit(level: int, value: int = 1) -> "MultiIndex":
        """value * <level>, the scaled |level|-th unit vector."""
        return MultiIndex.from_pairs([(abs(int(level)), value)])

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex.from_pairs(self.entries + other.entries)

    def __neg__(self) -> "MultiIndex":
        return MultiIndex(tuple((l, -v) for l, v in self.entries))

    def get(self, level: int) -> int:
        for l, v in self.entries:
            if l == level:
                return v
        return 0

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def max_level(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def dot_omega(self, omega: np.ndarray) -> float:
        """k . omega with omega indexed by level 0..M."""
        return float(sum(v * omega[l] for l, v in self.entries))

    def mu(self, profile: EnergyProfile) -> int:
        return int(sum(abs(v) * profile.exponent(l) for l, v in self.entries))

    def key(self) -> str:
        """Canonical text form 'l1:k1,l2:k2' (empty string for the zero vector)."""
        return ",".join(f"{l}:{v}" for l, v in self.entries)

    @staticmethod
    def parse(key: str) -> "MultiIndex":
        if not key:
            return MultiIndex()
        return MultiIndex.from_pairs(
            (int(l), int(v)) for l, v in (item.split(":") for item in key.split(","))
        )

    def __str__(self) -> str:
        return self.key() or "0"


def mu(k: MultiIndex, profile: EnergyProfile) -> int:
    """Level-weighted l1 size: 2|k_0| + sum_{0<l<K} |k_l| l + K sum_{l>=K} |k_l|."""
    return k.mu(profile)


@dataclass(frozen=True)
class InteractionPair:
    """Catalogue member (j, k) with the branch that first produced it."""

    j: int
    k: MultiIndex
    branch: str  # "near" or "tail"


def _centered_mod(x: int, two_m: int) -> int:
    """Representative of x modulo 2M in the centered range [-M, M-1]."""
    m = two_m // 2
    return (x + m) % two_m - m


def _mu_ball(profile: EnergyProfile, bound: int, max_level: int) -> list[MultiIndex]:
    """All vectors supported on levels 0..max_level with mu(k) < bound."""
    levels = list(range(max_level + 1))
    weights = [int(profile.exponent(l)) for l in levels]
    out: list[MultiIndex] = []

    def rec(i: int, budget: int, acc: list[tuple[int, int]]):
        if i == len(levels):
            out.append(MultiIndex(tuple(acc)))
            return
        w = weights[i]
        kmax = budget // w
        for v in range(-kmax, kmax + 1):
            if v == 0:
                rec(i + 1, budget, acc)
            else:
                acc.append((levels[i], v))
                rec(i + 1, budget - abs(v) * w, acc)
                acc.pop()

    rec(0, bound - 1, [])
    return out


def enumerate_setK(K: int, M: int, profile: EnergyProfile | None = None) -> Iterator[InteractionPair]:
    """Yield every catalogue pair exactly once (near branch first, then tail).

    Pairs reachable through several tail decompositions are deduplicated; the
    branch tag records the first generator.
    """
    if profile is None:
        profile = EnergyProfile(K)
    if profile.K != K:
        raise ValueError("profile.K must equal K")
    if not (3 <= K <= M):
        raise ValueError(f"need 3 <= K <= M, got K={K}, M={M}")

    seen: set[tuple[int, tuple[tuple[int, int], ...]]] = set()
    j_near = range(max(-M, -2 * K + 1), min(M, 2 * K))
    near_ks = _mu_ball(profile, 2 * K, K - 1)
    for j, k in itertools.product(j_near, near_ks):
        h = (j, k.entries)
        if h not in seen:
            seen.add(h)
            yield InteractionPair(j, k, "near")

    tail_bars = _mu_ball(profile, K, K - 1)
    for level in range(K, M + 1):
        bigs = (-M,) if level == M else (level, -level)
        for big, r in itertools.product(bigs, range(-K + 1, K)):
            j = _centered_mod(big + r, 2 * M)
            for sign, kbar in itertools.product((1, -1), tail_bars):
                k = MultiIndex.unit(level, sign) + kbar
                h = (j, k.entries)
                if h not in seen:
                    seen.add(h)
                    yield InteractionPair(j, k, "tail")


@dataclass(frozen=True)
class Witness:
    """Pair and sign realizing a margin minimum."""

    j: int
    k: MultiIndex
    sign: int

    def __str__(self) -> str:
        s = "+" if self.sign > 0 else "-"
        return f"(j={self.j}, k={self.k}, sign={s})"


@dataclass(frozen=True)
class ResonanceReport:
    """Margins, implied gamma constants and the classification of one step-size.

    ``min_numerical_margin`` is the smallest sine over pairs whose argument
    has a *nonzero* multiple of pi as its nearest vanishing point; only those
    can produce numerical resonances.  It is infinite when every argument
    stays below pi/2 in magnitude (tiny step-sizes).
    """

    tau: float
    K: int
    nu: float
    eps: float
    min_weak_margin: float
    weak_witness: Witness
    min_strong_margin: float
    strong_witness: Witness
    min_numerical_margin: float
    gamma_weak: float
    gamma_strong: float
    classification: str  # "nonresonant" | "weakly_resonant" | "resonant"

    def to_text(self) -> str:
        lines = [
            f"tau = {self.tau!r}",
            f"K = {self.K}",
            f"nu = {self.nu!r}",
            f"eps = {self.eps!r}",
            f"min_weak_margin = {self.min_weak_margin!r}",
            f"weak_witness = {self.weak_witness}",
            f"min_strong_margin = {self.min_strong_margin!r}",
            f"strong_witness = {self.strong_witness}",
            f"min_numerical_margin = {self.min_numerical_margin!r}",
            f"gamma_weak = {self.gamma_weak!r}",
            f"gamma_strong = {self.gamma_strong!r}",
            f"classification = {self.classification}",
        ]
        return "\n".join(lines) + "\n"


# Tie-break preference for reporting a witness when several pairs sit at the
# minimal margin (resonant step-sizes typically have a whole family): largest
# |j|, then positive j, then the '+' scan, then the lexicographic key.
def _witness_rank(j: int, k: MultiIndex, sign: int) -> tuple:
    return (-abs(j), 0 if j > 0 else 1, 0 if sign > 0 else 1, k.key())


_TIE_WINDOW = 1e-13


class _ScanArrays:
    """Catalogue flattened to numpy arrays for fast margin scans."""

    def __init__(self, K: int, params: WaveParams, profile: EnergyProfile):
        self.pairs = list(enumerate_setK(K, params.M, profile))
        self.j = np.array([p.j for p in self.pairs])
        self.dot = np.array([p.k.dot_omega(params.omega) for p in self.pairs])
        self.omega_j = params.omega[np.abs(self.j)]
        self.diag_plus = np.array([p.k.entries == ((abs(p.j), 1),) for p in self.pairs])
        self.diag_minus = np.array([p.k.entries == ((abs(p.j), -1),) for p in self.pairs])
        self.strong_scope = np.abs(self.j) <= K


_SCAN_CACHE: dict[tuple, _ScanArrays] = {}


def _scan_arrays(K: int, params: WaveParams, profile: EnergyProfile) -> _ScanArrays:
    key = (K, params.M, params.rho)
    arrays = _SCAN_CACHE.get(key)
    if arrays is None:
        if len(_SCAN_CACHE) >= 4:
            _SCAN_CACHE.clear()
        arrays = _ScanArrays(K, params, profile)
        _SCAN_CACHE[key] = arrays
    return arrays


def nonres_margins(tau: float, params: WaveParams, profile: EnergyProfile, *,
                   nu: float = 0.0, eps: float = 1.0,
                   gamma_threshold: float = 0.1,
                   hard_cutoff: float = 1e-8) -> ResonanceReport:
    """Scan the catalogue for the weak/strong non-resonance margins of ``tau``.

    The weak margin runs over the whole catalogue with the single-sided
    diagonal exclusion; the strong margin only over ``|j| <= K`` with both
    diagonals excluded.  ``gamma_weak = margin / (tau eps^(nu/2))`` and
    ``gamma_strong = margin / tau`` are the implied non-resonance constants.
    """
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    K = profile.K
    arrays = _scan_arrays(K, params, profile)
    pairs = arrays.pairs
    j_arr, dot, omega_j = arrays.j, arrays.dot, arrays.omega_j
    diag_plus, diag_minus = arrays.diag_plus, arrays.diag_minus
    strong_scope = arrays.strong_scope

    best: dict[str, tuple[float, Witness]] = {}
    min_numerical = np.inf
    for sign in (1, -1):
        args = 0.5 * tau * (omega_j + sign * dot)
        margins = np.abs(np.sin(args))
        weak_mask = ~(diag_minus if sign > 0 else diag_plus)
        strong_mask = strong_scope & ~diag_plus & ~diag_minus
        wraps = weak_mask & (np.rint(args / np.pi) != 0)
        if np.any(wraps):
            min_numerical = min(min_numerical, float(margins[wraps].min()))
        for name, mask in (("weak", weak_mask), ("strong", strong_mask)):
            vals = margins[mask]
            if vals.size == 0:
                continue
            lo = float(vals.min())
            idx = np.flatnonzero(mask & (margins <= lo + _TIE_WINDOW))
            cand = min(idx, key=lambda i: _witness_rank(int(j_arr[i]), pairs[i].k, sign))
            witness = Witness(int(j_arr[cand]), pairs[cand].k, sign)
            prev = best.get(name)
            if prev is None or lo < prev[0] - _TIE_WINDOW:
                best[name] = (lo, witness)
            elif abs(lo - prev[0]) <= _TIE_WINDOW:
                keep = min(
                    (prev[1], witness),
                    key=lambda w: _witness_rank(w.j, w.k, w.sign),
                )
                best[name] = (min(lo, prev[0]), keep)

    min_weak, weak_wit = best["weak"]
    min_strong, strong_wit = best["strong"]
    gamma_weak = min_weak / (tau * eps ** (nu / 2.0))
    gamma_strong = min_strong / tau
    # A numerical resonance needs a sine vanishing near a *nonzero* multiple
    # of pi; arguments near zero are analytic small divisors of the frequency
    # family itself and exist for any step-size.  Classification therefore
    # judges only the wrap-around pairs by the gamma threshold; with every
    # argument inside (-pi, pi) (the CFL-shielded situation) there are none
    # and the step-size is nonresonant regardless of the analytic gamma.
    gamma_numerical = min_numerical / (tau * eps ** (nu / 2.0))
    if min_numerical < hard_cutoff:
        classification = "resonant"
    elif gamma_weak >= gamma_threshold or gamma_numerical >= gamma_threshold:
        classification = "nonresonant"
    else:
        classification = "weakly_resonant"
    return ResonanceReport(
        tau=float(tau), K=K, nu=float(nu), eps=float(eps),
        min_weak_margin=min_weak, weak_witness=weak_wit,
        min_strong_margin=min_strong, strong_witness=strong_wit,
        min_numerical_margin=float(min_numerical),
        gamma_weak=gamma_weak, gamma_strong=gamma_strong,
        classification=classification,
    )


def check_cfl(tau: float, params: WaveParams, K: int) -> tuple[bool, float]:
    """Whether ``tau (M+K) sqrt(1+rho) < pi`` holds, and the slack to pi."""
    value = tau * (params.M + K) * np.sqrt(1.0 + params.rho)
    return bool(value < np.pi), float(np.pi - value)


def resonant_tau(signs_and_levels: Iterable[tuple[int, int]], params: WaveParams) -> float:
    """Step-size 2*pi / (sum_i sign_i * omega_{l_i}), e.g. for provoking resonances."""
    denom = 0.0
    for sign, level in signs_and_levels:
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign!r}")
        denom += sign * params.omega_of(level)
    if denom <= 0.0:
        raise ValueError(f"frequency combination must be positive, got {denom!r}")
    return float(2.0 * np.pi / denom)
