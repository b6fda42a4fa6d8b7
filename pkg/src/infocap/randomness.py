"""Shared-randomness strategies.

A strategy is a weighted family of ensembles, one per value of the shared
random variable; the receiver conditions on that value.  The assumption on
the source can be required per branch (peak) or only on the branch average
(average).  Embedding the branch label into a classical register turns any
strategy into a single ensemble with the same guessing probability, which
is why information-style restrictions are insensitive to shared
randomness.  The entanglement-assisted dimension is the one assumption
whose bound fails under averaging; ``ea_average_counterexample`` builds
the explicit witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bounds
from .discrimination import optimize_discrimination
from .ensembles import (
    AlmostDim,
    Assumption,
    Dimension,
    Distrust,
    EADimension,
    Information,
    MembershipReport,
    StateEnsemble,
    UniformOverlap,
    Vacuum,
    assumption_from_json,
    assumption_to_json,
    check_assumption,
    dense_coding_ensemble,
    ensemble_from_json,
    ensemble_to_json,
)
from .errors import InfocapError, NonScalarParameterError, ParamOutOfRangeError

WEIGHT_TOL = 1e-12
AVERAGE_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class SRStrategy:
    """Branches (weight, ensemble, branch assumption) of one shared-randomness
    strategy.  Weights sum to 1; all branches share n and assumption kind."""

    branches: tuple[tuple[float, StateEnsemble, Assumption], ...]

    def __post_init__(self):
        if not self.branches:
            raise InfocapError("a strategy needs at least one branch")
        total = sum(q for q, _, _ in self.branches)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InfocapError(f"branch weights sum to {total}, expected 1")
        if any(q < 0 for q, _, _ in self.branches):
            raise InfocapError("branch weights must be nonnegative")
        n0 = self.branches[0][1].n
        if any(e.n != n0 for _, e, _ in self.branches):
            raise InfocapError("all branches must share the number of inputs n")
        kind0 = self.branches[0][2].kind
        if any(g.kind != kind0 for _, _, g in self.branches):
            raise InfocapError("all branch assumptions must share one kind")

    @property
    def n(self) -> int:
        return self.branches[0][1].n

    @property
    def kind(self) -> str:
        return self.branches[0][2].kind


def mixture_guess_value(s: SRStrategy, tol: float = 1e-10) -> float:
    """Weighted branch-wise optimal guessing value: the receiver knows the
    branch, so the strategy value is sum_l q_l Pg(branch_l)."""
    return float(
        sum(q * optimize_discrimination(e, tol=tol).value for q, e, _ in s.branches)
    )


def embed_cq(s: SRStrategy) -> StateEnsemble:
    """Fold the shared randomness into the emitted states.

    Input x is mapped to the block-diagonal state  sum_l q_l |l><l| (x)
    rho_x^l, whose guessing probability equals the strategy's mixture
    value.
    """
    dims = [e.dim for _, e, _ in s.branches]
    total = sum(dims)
    n = s.n
    states = np.zeros((n, total, total), dtype=complex)
    offset = 0
    for (q, e, _), d in zip(s.branches, dims):
        states[:, offset : offset + d, offset : offset + d] = q * e.states
        offset += d
    return StateEnsemble(states)


def _branch_aux(aux, index: int) -> dict:
    if aux is None:
        return {}
    if isinstance(aux, dict):
        return aux
    return aux[index]


def check_peak(s: SRStrategy, gamma: Assumption, aux=None) -> MembershipReport:
    """Peak semantics: every branch must satisfy the single assumption.

    ``aux`` is an optional context dict (or per-branch list of dicts)
    passed through to the membership check.
    """
    if gamma.kind != s.kind:
        raise InfocapError(f"assumption kind {gamma.kind} does not match strategy kind {s.kind}")
    slacks: list[float] = []
    for i, (_, e, _) in enumerate(s.branches):
        rep = check_assumption(e, gamma, **_branch_aux(aux, i))
        slacks.append(rep.worst_slack)
    worst = min(slacks)
    return MembershipReport(
        satisfied=bool(worst >= -1e-8),
        worst_slack=float(worst),
        detail=tuple(slacks),
        note="per-branch worst slacks",
    )


def scalar_param(a: Assumption) -> float:
    """The scalar knob of an assumption, used for branch averaging."""
    if isinstance(a, (Dimension, EADimension)):
        return float(a.d)
    if isinstance(a, Vacuum):
        return a.omega
    if isinstance(a, UniformOverlap):
        return a.a
    if isinstance(a, (AlmostDim, Distrust)):
        return a.eps
    if isinstance(a, Information):
        return a.alpha
    raise NonScalarParameterError(f"assumption {a!r} has no scalar parameter")


def check_average(s: SRStrategy, gamma_target: float, aux=None) -> MembershipReport:
    """Average semantics: each branch satisfies its own parameter and the
    weighted parameters respect the target.

    For every kind but the overlap a larger parameter is a weaker
    constraint, so the branch average must not exceed the target; the
    overlap works the other way (a larger required overlap is stronger)
    and the average must not fall below it.  Distrust branches must share
    their targets; almost-dimension branches must share d.
    """
    first = s.branches[0][2]
    if isinstance(first, Distrust):
        ref = first.targets
        for _, _, g in s.branches[1:]:
            if g.targets.shape != ref.shape or not np.allclose(g.targets, ref, atol=1e-12):
                raise NonScalarParameterError(
                    "averaging distrust branches requires fixed targets"
                )
    if isinstance(first, AlmostDim):
        if any(g.d != first.d for _, _, g in s.branches):
            raise NonScalarParameterError("averaging almost-dim branches requires a fixed d")
    slacks: list[float] = []
    for i, (_, e, g) in enumerate(s.branches):
        rep = check_assumption(e, g, **_branch_aux(aux, i))
        slacks.append(rep.worst_slack)
    avg = sum(q * scalar_param(g) for q, _, g in s.branches)
    if isinstance(first, UniformOverlap):
        avg_slack = avg - gamma_target
    else:
        avg_slack = gamma_target - avg
    slacks.append(float(avg_slack + AVERAGE_SLACK))
    worst = min(slacks)
    return MembershipReport(
        satisfied=bool(worst >= -1e-8),
        worst_slack=float(worst),
        detail=tuple(slacks),
        note=f"branch average {avg:.12g} vs target {gamma_target:.12g}",
    )


def averaged_log_pg(s: SRStrategy, tol: float = 1e-10) -> float:
    """Alternative accounting that averages the log of the branch guessing
    values: log2(n) + sum_l q_l log2 Pg(branch_l).  Read-only; it carries
    no membership semantics here."""
    total = 0.0
    for q, e, _ in s.branches:
        pg = max(optimize_discrimination(e, tol=tol).value, 1.0 / e.n)
        total += q * np.log2(pg)
    return float(np.log2(s.n) + total)


def ea_average_counterexample(tol: float = 1e-9) -> tuple[float, float]:
    """Average-parameter strategies beat the entanglement-assisted bound.

    With n = 30: a single qutrit dense-coding branch reaches 9/30, while
    mixing qubit dense coding (weight 2/3) with 5-dimensional dense coding
    (weight 1/3) keeps the average message dimension at 3 but reaches
    11/30.  Returns (peak_value, average_value).
    """
    n = 30
    peak = optimize_discrimination(dense_coding_ensemble(3, n), tol=tol).value
    strategy = SRStrategy(
        branches=(
            (2.0 / 3.0, dense_coding_ensemble(2, n), EADimension(d=2)),
            (1.0 / 3.0, dense_coding_ensemble(5, n), EADimension(d=5)),
        )
    )
    average = mixture_guess_value(strategy, tol=tol)
    return float(peak), float(average)


@dataclass(frozen=True)
class ConcavityReport:
    bound_id: str
    samples: int
    failures: int
    min_margin: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


_CONCAVITY_SLACK = 1e-10


def concavity_probe(
    bound_id: str,
    samples: int,
    seed: int,
    *,
    n: int | None = None,
    pg0: float | None = None,
    fn: Callable[..., float] | None = None,
) -> ConcavityReport:
    """Sample random parameter pairs and weights and test midpoint concavity
    f(q g1 + (1-q) g2) >= q f(g1) + (1-q) f(g2) - 1e-10.

    ``bound_id`` selects vacuum or overlap (n fixed), eps (pg0 fixed) or
    almost_dim (n fixed, joint in fractional d and eps).  ``fn`` overrides
    the probed function, which is how negative controls are wired in.
    """
    rng = np.random.default_rng(seed)
    if bound_id == "vacuum":
        if n is None:
            raise ParamOutOfRangeError("vacuum probe needs n")
        f = fn or (lambda w: bounds.bound_vacuum(n, w).pg_bound)
        draw = lambda: rng.uniform(0.0, 1.0)
    elif bound_id == "overlap":
        if n is None:
            raise ParamOutOfRangeError("overlap probe needs n")
        f = fn or (lambda a: bounds.bound_overlap(n, a).pg_bound)
        draw = lambda: rng.uniform(0.0, 1.0)
    elif bound_id == "eps":
        if pg0 is None:
            raise ParamOutOfRangeError("eps probe needs pg0")
        f = fn or (lambda e: bounds.bound_eps(pg0, e))
        draw = lambda: rng.uniform(0.0, 1.0)
    elif bound_id == "almost_dim":
        if n is None:
            raise ParamOutOfRangeError("almost_dim probe needs n")
        f = fn or (lambda g: bounds.bound_eps(min(1.0, g[0] / n), g[1]))
        draw = lambda: np.array([rng.uniform(1.0, n), rng.uniform(0.0, 1.0)])
    else:
        raise ParamOutOfRangeError(f"unknown bound_id {bound_id!r}")
    failures = 0
    min_margin = np.inf
    for _ in range(samples):
        g1, g2 = draw(), draw()
        q = rng.uniform(0.0, 1.0)
        mixed = q * np.asarray(g1) + (1.0 - q) * np.asarray(g2)
        arg = mixed if bound_id == "almost_dim" else float(mixed)
        margin = f(arg) - (q * f(g1) + (1.0 - q) * f(g2))
        min_margin = min(min_margin, margin)
        if margin < -_CONCAVITY_SLACK:
            failures += 1
    return ConcavityReport(
        bound_id=bound_id, samples=samples, failures=failures, min_margin=float(min_margin)
    )


def strategy_to_json(s: SRStrategy) -> dict:
    return {
        "branches": [
            {"q": q, "ensemble": ensemble_to_json(e), "gamma": assumption_to_json(g)}
            for q, e, g in s.branches
        ]
    }


def strategy_from_json(obj: dict) -> SRStrategy:
    branches = tuple(
        (
            float(b["q"]),
            ensemble_from_json(b["ensemble"]),
            assumption_from_json(b["gamma"]),
        )
        for b in obj["branches"]
    )
    return SRStrategy(branches=branches)
