"""Exact discrete micro-canonical statistics on an integer energy lattice.

A gas of N distinguishable particles occupies M energy bins at lattice
energies eps_i = (eps0_units + i) * delta.  A binning state is an occupancy
vector {n_i} obeying the particle-number and total-energy constraints; its
multiplicity Omega = N! / prod(n_i!) counts the microstates it contains.
Everything here is exact (integer lattice, arbitrary-precision Omega) so
that enumeration-based oracles can check it bin by bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateEnergy, InfeasibleEnergy, NoConvergence, SizeLimit

DEFAULT_STATE_CAP = 1_000_000
EXACT_OMEGA_THRESHOLD = 300

# Stirling variants for ln m! used in the variational solve.
STIRLING_MLNM = "m_ln_m"
STIRLING_MLNM_MINUS_M = "m_ln_m_minus_m"


@dataclass(frozen=True)
class GasSpec:
    """Problem instance: N particles, M bins, total energy in lattice units."""

    n: int
    m: int
    e_units: int
    delta: float = 1.0
    eps0_units: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one particle, got n={self.n}")
        if self.m < 1:
            raise ValueError(f"need at least one bin, got m={self.m}")
        if self.e_units < 0:
            raise ValueError(f"total energy must be non-negative, got {self.e_units}")
        if self.eps0_units < 0:
            raise ValueError(f"ground offset must be non-negative, got {self.eps0_units}")
        if not self.delta > 0:
            raise ValueError(f"lattice step must be positive, got {self.delta}")

    @property
    def excess_units(self) -> int:
        """Energy above the all-ground configuration, in lattice units."""
        return self.e_units - self.n * self.eps0_units

    @property
    def is_feasible(self) -> bool:
        return 0 <= self.excess_units <= self.n * (self.m - 1)

    def energy(self, i: int) -> float:
        """Energy of bin i (0-based)."""
        return (self.eps0_units + i) * self.delta

    @property
    def energies(self) -> np.ndarray:
        return (self.eps0_units + np.arange(self.m)) * self.delta

    @property
    def total_energy(self) -> float:
        return self.e_units * self.delta

    def require_feasible(self):
        if not self.is_feasible:
            raise InfeasibleEnergy(
                f"excess energy {self.excess_units} outside [0, {self.n * (self.m - 1)}] "
                f"for n={self.n}, m={self.m}"
            )


@dataclass(frozen=True)
class BinningState:
    """Occupancy vector bound to its GasSpec."""

    spec: GasSpec
    n: tuple[int, ...]

    def __post_init__(self):
        if len(self.n) != self.spec.m:
            raise ValueError(f"occupancy length {len(self.n)} != m={self.spec.m}")
        if any(x < 0 for x in self.n):
            raise ValueError(f"negative occupancy in {self.n}")
        if sum(self.n) != self.spec.n:
            raise ValueError(f"occupancies sum to {sum(self.n)}, expected {self.spec.n}")
        e = sum(ni * (self.spec.eps0_units + i) for i, ni in enumerate(self.n))
        if e != self.spec.e_units:
            raise ValueError(f"occupancy energy {e} != e_units={self.spec.e_units}")


@dataclass(frozen=True)
class MultiplicityValue:
    log_omega: float
    exact: int | None = None


@dataclass(frozen=True)
class BoltzmannFit:
    """Lagrange-multiplier solution n_i = exp(-alpha) * exp(-beta * eps_i)."""

    alpha: float
    beta: float
    predicted: tuple[float, ...]
    stirling_variant: str = STIRLING_MLNM_MINUS_M


def enumerate_binnings(spec: GasSpec, max_states: int = DEFAULT_STATE_CAP) -> list[BinningState]:
    """All occupancy vectors meeting both constraints, lexicographically.

    Raises InfeasibleEnergy if the lattice cannot carry the total energy and
    SizeLimit if more than `max_states` vectors would be produced.
    """
    spec.require_feasible()
    m = spec.m
    out: list[tuple[int, ...]] = []

    # Depth-first over n_0, n_1, ... with ascending occupancies, pruning on
    # the reachable excess-energy range of the remaining bins.
    def rec(i: int, rem_n: int, rem_e: int, prefix: list[int]):
        if i == m - 1:
            # last bin takes everything; energy index is m-1
            if rem_e == (m - 1) * rem_n:
                if len(out) >= max_states:
                    raise SizeLimit(f"more than {max_states} binning states")
                out.append(tuple(prefix) + (rem_n,))
            return
        for ni in range(rem_n + 1):
            re = rem_e - i * ni
            rn = rem_n - ni
            if re < 0:
                break
            if re < (i + 1) * rn or re > (m - 1) * rn:
                continue
            prefix.append(ni)
            rec(i + 1, rn, re, prefix)
            prefix.pop()

    rec(0, spec.n, spec.excess_units, [])
    return [BinningState(spec, n) for n in out]


def multiplicity(b: BinningState, exact_threshold: int = EXACT_OMEGA_THRESHOLD) -> MultiplicityValue:
    """Omega = N! / prod(n_i!), exact below the threshold, log-gamma always."""
    log_omega = math.lgamma(b.spec.n + 1) - sum(math.lgamma(x + 1) for x in b.n)
    exact = None
    if b.spec.n <= exact_threshold:
        exact = math.factorial(b.spec.n)
        for x in b.n:
            exact //= math.factorial(x)
    return MultiplicityValue(log_omega=log_omega, exact=exact)


def entropy(b: BinningState, k: float = 1.0) -> float:
    """S = k ln Omega."""
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    return k * multiplicity(b).log_omega


def most_probable_binnings(spec: GasSpec, max_states: int = DEFAULT_STATE_CAP) -> list[BinningState]:
    """All argmax-Omega binning states (ties are real), lexicographic order."""
    states = enumerate_binnings(spec, max_states=max_states)
    mults = [multiplicity(s) for s in states]
    if all(mv.exact is not None for mv in mults):
        best = max(mv.exact for mv in mults)
        return [s for s, mv in zip(states, mults) if mv.exact == best]
    best_log = max(mv.log_omega for mv in mults)
    return [s for s, mv in zip(states, mults) if mv.log_omega >= best_log - 1e-12]


def _mean_index(b: float, m: int) -> float:
    """Mean bin index under weights exp(-b*i), i = 0..m-1, overflow-safe."""
    i = np.arange(m)
    x = -b * i
    x -= x.max()
    w = np.exp(x)
    return float((i * w).sum() / w.sum())


def _solve_reduced_beta(target: float, m: int, tol: float = 1e-14, max_iter: int = 200) -> float:
    """Root of mean_index(b) - target by bracket growth plus bisection.

    mean_index is strictly decreasing in b, so the root is unique.
    """
    def f(b):
        return _mean_index(b, m) - target

    lo, hi = -1.0, 1.0
    grow = 0
    while f(lo) < 0:
        lo *= 2.0
        grow += 1
        if grow > 200:
            raise NoConvergence(f"no sign change below b={lo}")
    while f(hi) > 0:
        hi *= 2.0
        grow += 1
        if grow > 200:
            raise NoConvergence(f"no sign change above b={hi}")
    # f(lo) >= 0 >= f(hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
    raise NoConvergence(f"bisection cap reached, bracket [{lo}, {hi}]")


def _logsumexp(x: np.ndarray) -> float:
    c = x.max()
    return float(c + np.log(np.exp(x - c).sum()))


def boltzmann_fit(spec: GasSpec, stirling_variant: str = STIRLING_MLNM_MINUS_M) -> BoltzmannFit:
    """Fit n_i = exp(-alpha) exp(-beta eps_i) to both lattice constraints.

    alpha is eliminated by the particle-number constraint; beta is the root
    of the mean-energy residual, found by bracketed bisection.  The two
    Stirling variants change the stationarity condition only through a
    constant that alpha absorbs, so they must land on the same beta.
    """
    spec.require_feasible()
    excess = spec.excess_units
    if spec.m == 1 or excess == 0 or excess == spec.n * (spec.m - 1):
        raise DegenerateEnergy(
            f"mean excess {excess}/{spec.n} on the boundary of [0, {spec.m - 1}]; beta is infinite"
        )

    target = excess / spec.n
    b = _solve_reduced_beta(target, spec.m)
    beta = b / spec.delta

    eps = spec.energies
    # normalization constant via log-sum-exp; the variant shifts alpha only
    log_z = _logsumexp(-beta * eps)
    if stirling_variant == STIRLING_MLNM_MINUS_M:
        # stationarity ln n_i + alpha + beta eps_i = 0
        alpha = log_z - math.log(spec.n)
        predicted = spec.n * np.exp(-beta * eps - log_z)
    elif stirling_variant == STIRLING_MLNM:
        # stationarity ln n_i + 1 + alpha + beta eps_i = 0
        alpha = log_z - math.log(spec.n) - 1.0
        predicted = np.exp(-1.0 - alpha - beta * eps)
    else:
        raise ValueError(f"unknown Stirling variant {stirling_variant!r}")

    fit = BoltzmannFit(alpha=alpha, beta=beta, predicted=tuple(float(x) for x in predicted),
                       stirling_variant=stirling_variant)
    _check_fit(spec, fit)
    return fit


def _check_fit(spec: GasSpec, fit: BoltzmannFit, rtol: float = 1e-10):
    pred = np.asarray(fit.predicted)
    n_err = abs(pred.sum() - spec.n)
    e_err = abs(float(pred @ spec.energies) - spec.total_energy)
    if n_err > rtol * spec.n:
        raise NoConvergence(f"particle constraint off by {n_err}")
    if spec.total_energy > 0 and e_err > rtol * spec.total_energy:
        raise NoConvergence(f"energy constraint off by {e_err}")


def stirling_compare(spec: GasSpec) -> tuple[BoltzmannFit, BoltzmannFit]:
    """Run the variational solve under both Stirling variants."""
    return (
        boltzmann_fit(spec, stirling_variant=STIRLING_MLNM),
        boltzmann_fit(spec, stirling_variant=STIRLING_MLNM_MINUS_M),
    )


def _initial_microstate(spec: GasSpec) -> np.ndarray:
    """Deterministic feasible per-particle level assignment (0-based levels)."""
    levels = np.zeros(spec.n, dtype=np.int64)
    rem = spec.excess_units
    top = spec.m - 1
    for p in range(spec.n):
        take = min(top, rem)
        levels[p] = take
        rem -= take
        if rem == 0:
            break
    return levels


def sample_microstates(spec: GasSpec, steps: int, seed: int) -> dict[tuple[int, ...], int]:
    """Random walk over microstates; returns binning-state visit counts.

    A microstate is the vector of per-particle lattice levels summing to the
    excess energy.  Each step proposes moving one energy unit from a uniform
    donor to a uniform recipient and rejects moves leaving the lattice, a
    symmetric proposal whose stationary distribution is uniform over
    microstates.  The walk state after each of the `steps` proposals is
    tallied by its occupancy vector.  Fixed seed means fixed output.
    """
    spec.require_feasible()
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")

    levels = _initial_microstate(spec)
    occ = np.bincount(levels, minlength=spec.m)
    top = spec.m - 1

    rng = np.random.default_rng(seed)
    donors = rng.integers(0, spec.n, size=steps)
    recips = rng.integers(0, spec.n, size=steps)

    counts: dict[tuple[int, ...], int] = {}
    key = tuple(int(x) for x in occ)
    for d, r in zip(donors, recips):
        ld, lr = levels[d], levels[r]
        if d != r and ld > 0 and lr < top:
            occ[ld] -= 1
            occ[ld - 1] += 1
            occ[lr] -= 1
            occ[lr + 1] += 1
            levels[d] = ld - 1
            levels[r] = lr + 1
            key = tuple(int(x) for x in occ)
        counts[key] = counts.get(key, 0) + 1
    return counts


def frequencies(counts: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], float]:
    """Normalize visit counts to relative frequencies."""
    total = sum(counts.values())
    return {k: v / total for k, v in counts.items()}
