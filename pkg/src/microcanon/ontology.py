"""Finite ontological models: preparations mu, response functions xi.

A model lives on a finite set of ontic states (labels).  Each preparation
is a probability distribution mu over those states; each measurement is a
column-stochastic matrix xi whose entry (outcome k, state lam) gives the
probability that lam yields outcome k.  Outcome statistics are then
P(k | prep) = sum_lam xi[k, lam] * mu[lam], and optional Born targets let a
model be checked against quantum predictions.

The overlap taxonomy compares two preparations by their supports (complete,
partial or no overlap) and by the scalar overlap mass sum_lam min(mu1, mu2).
A model is "non-minimal" (psi-ontic) when every ontic state sits in at most
one preparation's support, "minimal" (psi-epistemic) otherwise.

The gas bridge turns a lattice gas spec into such a model: ontic states are
the binning states, mu is proportional to multiplicity (uniform over
microstates), and the one measurement is the energy of a single tagged
particle, xi[eps_i, lam] = n_i / N.  All of that is exact in rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ensemble
from .errors import DimensionMismatch, MissingTargets

PROB_TOL = 1e-12

OVERLAP_NONE = "none"
OVERLAP_PARTIAL = "partial"
OVERLAP_COMPLETE = "complete"

VERDICT_NON_MINIMAL = "non-minimal (psi-ontic)"
VERDICT_MINIMAL = "minimal (psi-epistemic)"


@dataclass(frozen=True)
class LambdaSpace:
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("lambda space must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("lambda labels must be unique")

    @property
    def size(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class EpistemicState:
    """Named distribution mu over a LambdaSpace (validated by validate())."""

    name: str
    mu: tuple[float, ...]

    def support(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.mu) if p > 0)


@dataclass(frozen=True)
class ResponseFunction:
    """Named outcome-by-lambda matrix xi; columns sum to one."""

    name: str
    outcomes: tuple[str, ...]
    xi: tuple[tuple[float, ...], ...]  # rows = outcomes, columns = lambda


@dataclass(frozen=True)
class OntModel:
    lam: LambdaSpace
    preparations: tuple[EpistemicState, ...]
    measurements: tuple[ResponseFunction, ...]
    # born_targets[prep name][measurement name] -> probabilities by outcome
    born_targets: dict[str, dict[str, tuple[float, ...]]] | None = None

    def preparation(self, name: str) -> EpistemicState:
        for p in self.preparations:
            if p.name == name:
                return p
        raise KeyError(f"no preparation named {name!r}")

    def measurement(self, name: str) -> ResponseFunction:
        for m in self.measurements:
            if m.name == name:
                return m
        raise KeyError(f"no measurement named {name!r}")


@dataclass(frozen=True)
class Violation:
    where: str
    message: str
    magnitude: float


def validate(model: OntModel) -> list[Violation]:
    """Every violated invariant with its magnitude; empty list means valid."""
    out: list[Violation] = []
    n_lam = model.lam.size
    for p in model.preparations:
        if len(p.mu) != n_lam:
            out.append(Violation(f"preparation {p.name}", "mu length != lambda size",
                                 abs(len(p.mu) - n_lam)))
            continue
        neg = [x for x in p.mu if x < 0]
        if neg:
            out.append(Violation(f"preparation {p.name}", "negative mu entries", -min(neg)))
        total = sum(p.mu)
        if abs(total - 1.0) > PROB_TOL:
            out.append(Violation(f"preparation {p.name}", f"sum(mu) = {total!r}", abs(total - 1.0)))
    for m in model.measurements:
        rows = np.asarray(m.xi, dtype=float)
        if rows.ndim != 2 or rows.shape != (len(m.outcomes), n_lam):
            out.append(Violation(f"measurement {m.name}", "xi shape != (outcomes, lambda)", 0.0))
            continue
        if (rows < -PROB_TOL).any() or (rows > 1 + PROB_TOL).any():
            worst = max(float((-rows).max()), float((rows - 1).max()))
            out.append(Violation(f"measurement {m.name}", "xi entries outside [0, 1]", worst))
        col = rows.sum(axis=0)
        bad = np.abs(col - 1.0) > PROB_TOL
        for j in np.nonzero(bad)[0]:
            out.append(Violation(f"measurement {m.name}",
                                 f"column {model.lam.labels[j]} sums to {col[j]!r}",
                                 abs(float(col[j]) - 1.0)))
    if model.born_targets is not None:
        for pname, per_meas in model.born_targets.items():
            for mname, probs in per_meas.items():
                where = f"born_targets[{pname}][{mname}]"
                try:
                    m = model.measurement(mname)
                    model.preparation(pname)
                except KeyError as exc:
                    out.append(Violation(where, str(exc), 0.0))
                    continue
                if len(probs) != len(m.outcomes):
                    out.append(Violation(where, "target length != outcome count",
                                         abs(len(probs) - len(m.outcomes))))
                    continue
                total = sum(probs)
                if abs(total - 1.0) > PROB_TOL:
                    out.append(Violation(where, f"targets sum to {total!r}", abs(total - 1.0)))
    return out


def outcome_distribution(model: OntModel, prep: str, meas: str) -> np.ndarray:
    """P(outcome k) = sum_lam xi[k, lam] mu[lam]."""
    p = model.preparation(prep)
    m = model.measurement(meas)
    return np.asarray(m.xi, dtype=float) @ np.asarray(p.mu, dtype=float)


@dataclass(frozen=True)
class DeviationEntry:
    preparation: str
    measurement: str
    outcome: str
    target: float
    actual: float
    deviation: float


def born_deviation(model: OntModel) -> tuple[float, list[DeviationEntry]]:
    """Max |target - model probability| plus the full deviation table."""
    if model.born_targets is None:
        raise MissingTargets("model carries no born_targets")
    table: list[DeviationEntry] = []
    for pname, per_meas in model.born_targets.items():
        for mname, targets in per_meas.items():
            m = model.measurement(mname)
            actual = outcome_distribution(model, pname, mname)
            for k, outcome in enumerate(m.outcomes):
                table.append(DeviationEntry(
                    preparation=pname, measurement=mname, outcome=outcome,
                    target=float(targets[k]), actual=float(actual[k]),
                    deviation=abs(float(targets[k]) - float(actual[k])),
                ))
    max_dev = max((e.deviation for e in table), default=0.0)
    return max_dev, table


@dataclass(frozen=True)
class OverlapReport:
    classification: str  # OVERLAP_NONE / OVERLAP_PARTIAL / OVERLAP_COMPLETE
    common_support_labels: tuple[str, ...]
    overlap_mass: float


def overlap_classify(mu1: EpistemicState, mu2: EpistemicState,
                     space: LambdaSpace) -> OverlapReport:
    if len(mu1.mu) != len(mu2.mu) or len(mu1.mu) != space.size:
        raise DimensionMismatch(
            f"{mu1.name} ({len(mu1.mu)}) vs {mu2.name} ({len(mu2.mu)}) over {space.size} states"
        )
    s1, s2 = mu1.support(), mu2.support()
    common = s1 & s2
    if not common:
        cls = OVERLAP_NONE
    elif s1 == s2:
        cls = OVERLAP_COMPLETE
    else:
        cls = OVERLAP_PARTIAL
    mass = sum(min(a, b) for a, b in zip(mu1.mu, mu2.mu))
    return OverlapReport(
        classification=cls,
        common_support_labels=tuple(space.labels[i] for i in sorted(common)),
        overlap_mass=float(mass),
    )


@dataclass(frozen=True)
class InformationClass:
    # per ontic state: names of the preparations whose support contains it
    per_lambda: dict[str, tuple[str, ...]]
    verdict: str


def information_class(model: OntModel) -> InformationClass:
    """Non-minimal (psi-ontic) iff every ontic state serves at most one preparation."""
    per_lambda: dict[str, tuple[str, ...]] = {}
    shared = False
    for i, label in enumerate(model.lam.labels):
        owners = tuple(p.name for p in model.preparations if p.mu[i] > 0)
        per_lambda[label] = owners
        if len(owners) > 1:
            shared = True
    return InformationClass(
        per_lambda=per_lambda,
        verdict=VERDICT_MINIMAL if shared else VERDICT_NON_MINIMAL,
    )


@dataclass(frozen=True)
class GasOntModel:
    """Gas-as-ontological-model bridge with exact rational bookkeeping."""

    model: OntModel
    spec: ensemble.GasSpec
    binnings: tuple[tuple[int, ...], ...]
    mu_exact: tuple[Fraction, ...]          # per binning state
    xi_exact: tuple[tuple[Fraction, ...], ...]  # rows = outcomes (bins), cols = binnings
    outcome_energies: tuple[float, ...]

    def outcome_probabilities_exact(self) -> tuple[Fraction, ...]:
        """P(eps_i) = sum_lam xi[i, lam] mu[lam], exact."""
        return tuple(
            sum((x * m for x, m in zip(row, self.mu_exact)), Fraction(0))
            for row in self.xi_exact
        )


def gas_model(spec: ensemble.GasSpec, t_label: str = "T",
              max_states: int = ensemble.DEFAULT_STATE_CAP) -> GasOntModel:
    """Ontological model of the lattice gas prepared at fixed total energy.

    Ontic states are the binning states; mu is multiplicity-proportional
    (microstates equally likely); the single measurement is the energy of a
    tagged particle, whose chance of landing in bin i is n_i / N by
    exchangeability.  No Born targets: this model defines the outcome law.
    """
    states = ensemble.enumerate_binnings(spec, max_states=max_states)
    omegas = [ensemble.multiplicity(s, exact_threshold=max(spec.n, 1)).exact for s in states]
    total = sum(omegas)
    mu_exact = tuple(Fraction(o, total) for o in omegas)
    xi_exact = tuple(
        tuple(Fraction(s.n[i], spec.n) for s in states) for i in range(spec.m)
    )
    labels = tuple(json.dumps(list(s.n)) for s in states)
    energies = tuple(spec.energy(i) for i in range(spec.m))
    outcome_names = tuple(f"eps={e:g}" for e in energies)
    space = LambdaSpace(labels=labels)
    model = OntModel(
        lam=space,
        preparations=(EpistemicState(name=t_label, mu=tuple(float(x) for x in mu_exact)),),
        measurements=(ResponseFunction(
            name="tagged-particle-energy",
            outcomes=outcome_names,
            xi=tuple(tuple(float(x) for x in row) for row in xi_exact),
        ),),
        born_targets=None,
    )
    return GasOntModel(
        model=model, spec=spec,
        binnings=tuple(s.n for s in states),
        mu_exact=mu_exact, xi_exact=xi_exact,
        outcome_energies=energies,
    )


def peak_approximation_delta(gm: GasOntModel) -> float:
    """Max outcome error of replacing the mu-average by the mu-peak state.

    The peak state is the argmax of mu, first in lexicographic order on
    ties (the binnings are already enumerated lexicographically).
    """
    p_exact = gm.outcome_probabilities_exact()
    # first maximizer = lexicographic tie-break (binnings are sorted)
    peak = max(gm.mu_exact)
    best = next(j for j, m in enumerate(gm.mu_exact) if m == peak)
    return max(
        abs(float(p_exact[i] - gm.xi_exact[i][best]))
        for i in range(len(p_exact))
    )


# --- JSON schema -----------------------------------------------------------

def model_to_dict(model: OntModel) -> dict:
    doc = {
        "lambda": list(model.lam.labels),
        "preparations": [{"name": p.name, "mu": list(p.mu)} for p in model.preparations],
        "measurements": [
            {"name": m.name, "outcomes": list(m.outcomes), "xi": [list(r) for r in m.xi]}
            for m in model.measurements
        ],
    }
    if model.born_targets is not None:
        doc["born_targets"] = {
            p: {m: list(v) for m, v in per.items()}
            for p, per in model.born_targets.items()
        }
    return doc


def model_from_dict(doc: dict) -> OntModel:
    targets = None
    if "born_targets" in doc and doc["born_targets"] is not None:
        targets = {
            p: {m: tuple(float(x) for x in v) for m, v in per.items()}
            for p, per in doc["born_targets"].items()
        }
    return OntModel(
        lam=LambdaSpace(labels=tuple(doc["lambda"])),
        preparations=tuple(
            EpistemicState(name=p["name"], mu=tuple(float(x) for x in p["mu"]))
            for p in doc["preparations"]
        ),
        measurements=tuple(
            ResponseFunction(
                name=m["name"],
                outcomes=tuple(m["outcomes"]),
                xi=tuple(tuple(float(x) for x in row) for row in m["xi"]),
            )
            for m in doc["measurements"]
        ),
        born_targets=targets,
    )


def load_model(path: str) -> OntModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def save_model(model: OntModel, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")
