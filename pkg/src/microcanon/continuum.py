"""Continuum-limit gas distributions and the temperature/total-energy link.

The particle density over energy on [eps0, E1] is

    rho(eps) = (N/T) * exp(-(eps - eps0)/T) / (1 - exp(-(E1 - eps0)/T))

in k = 1 units.  Integrating eps * rho(eps) over the domain and demanding it
equal E1 gives the self-consistency condition solved here.  The closed form
of that integral, derived directly (integration by parts) rather than
transcribed, is

    rhs(E1) = N*T + N*eps0 - N*(E1 - eps0) / (exp((E1 - eps0)/T) - 1)

so the residual E1 - rhs(E1) has a unique sign change above eps0 and the
physical total energy approaches N*(T + eps0) from below as N grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NoConvergence

# exp argument beyond which the expm1 tail term underflows to zero anyway
_EXP_CUTOFF = 700.0


@dataclass(frozen=True)
class ContinuumGas:
    """Continuum-limit parameters: particle count, temperature, ground offset."""

    n: float
    t: float
    eps0: float = 0.0

    def __post_init__(self):
        if not self.n > 0:
            raise ValueError(f"n must be positive, got {self.n}")
        if not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")
        if self.eps0 < 0:
            raise ValueError(f"eps0 must be non-negative, got {self.eps0}")


@dataclass(frozen=True)
class DensityCurve:
    """Sampled rho(eps), strictly decreasing over strictly increasing eps."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        eps = [p[0] for p in self.points]
        rho_vals = [p[1] for p in self.points]
        if any(b <= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps values must be strictly increasing")
        if any(r < 0 for r in rho_vals):
            raise ValueError("rho must be non-negative")
        if any(b >= a for a, b in zip(rho_vals, rho_vals[1:])):
            raise ValueError("rho must be strictly decreasing")

    def to_csv(self) -> str:
        lines = ["eps,rho"]
        lines += [f"{e:.17g},{r:.17g}" for e, r in self.points]
        return "\n".join(lines) + "\n"


def rho(eps: float, gas: ContinuumGas, e1: float) -> float:
    """Particles per unit energy at eps, for total energy e1."""
    if e1 <= gas.eps0:
        raise DomainError(f"e1={e1} must exceed eps0={gas.eps0}")
    if eps < gas.eps0 or eps > e1:
        raise DomainError(f"eps={eps} outside [{gas.eps0}, {e1}]")
    span = (e1 - gas.eps0) / gas.t
    denom = -math.expm1(-span)
    return (gas.n / gas.t) * math.exp(-(eps - gas.eps0) / gas.t) / denom


def single_particle_pdf(eps: float, gas: ContinuumGas, e1: float) -> float:
    """Probability density of one particle's energy: rho / N."""
    return rho(eps, gas, e1) / gas.n


def density_curve(gas: ContinuumGas, e1: float, num_points: int = 100) -> DensityCurve:
    if num_points < 2:
        raise ValueError("need at least two sample points")
    pts = []
    for j in range(num_points):
        e = gas.eps0 + (e1 - gas.eps0) * j / (num_points - 1)
        pts.append((e, rho(e, gas, e1)))
    return DensityCurve(points=tuple(pts))


def energy_residual(e1: float, gas: ContinuumGas) -> float:
    """E1 minus the total energy carried by rho at that E1.

    Grouped to cancel exactly at the large-N fixed point: the rhs integral
    equals N*(T + eps0) minus an exponentially small tail, so the residual
    is computed as (E1 - N*(T + eps0)) + tail.
    """
    if e1 <= gas.eps0:
        raise DomainError(f"e1={e1} must exceed eps0={gas.eps0}")
    span = e1 - gas.eps0
    x = span / gas.t
    tail = 0.0 if x > _EXP_CUTOFF else gas.n * span / math.expm1(x)
    return (e1 - gas.n * (gas.t + gas.eps0)) + tail


def solve_total_energy(gas: ContinuumGas, rtol: float = 1e-12, max_iter: int = 200) -> float:
    """Unique physical root of the energy self-consistency condition.

    The condition also holds trivially as E1 -> eps0 (empty domain), so the
    bracket starts strictly above eps0.
    """
    lo = gas.eps0 + max(1e-9, 1e-9 * gas.n * gas.t)
    f_lo = energy_residual(lo, gas)
    if f_lo >= 0:
        # for N <= 2 the residual never goes negative above eps0: the mean
        # energy per particle is below T everywhere, so no physical root
        raise NoConvergence(
            f"residual non-negative at bracket start E1={lo} (n={gas.n}); "
            "no physical root above eps0"
        )
    hi = gas.eps0 + 2.0 * gas.n * (gas.t + gas.eps0)
    grow = 0
    while energy_residual(hi, gas) < 0:
        hi = gas.eps0 + 2.0 * (hi - gas.eps0)
        grow += 1
        if grow > max_iter:
            raise NoConvergence(f"no sign change in [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if energy_residual(mid, gas) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * max(1.0, abs(hi)):
            return 0.5 * (lo + hi)
    raise NoConvergence(f"bisection cap reached, bracket [{lo}, {hi}]")
