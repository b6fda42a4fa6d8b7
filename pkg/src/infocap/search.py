"""Seeded tightness searches over restricted ensembles.

For one assumption the search runs a fixed number of restarts: restart 0
evaluates a constructed saturating seed, later restarts perturb the seed
and project back onto the constraint surface (components renormalized so
the defining inequality holds with equality), and every candidate is
refined by the discrimination oracle.  The report compares the best value
found against the closed-form bound.

Saturating seeds: the vacuum and overlap assumptions use their cone and
equiangular constructions directly.  For the almost-dimension assumption
the seed splits the n inputs into d sectors and builds an independent
vacuum-style cone with deviation eps inside each sector; the sectors are
mutually orthogonal, so the ensemble value is the weighted sector value,
which meets the deviation bound exactly when d divides n.  The distrust
seed attaches orthogonal tails of weight eps to the targets; it is a
feasible point but generally not optimal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import (
    BoundResult,
    bound_almost_dim,
    bound_distrust,
    bound_overlap,
    bound_vacuum,
)
from .discrimination import optimize_discrimination
from .ensembles import (
    AlmostDim,
    Assumption,
    Distrust,
    StateEnsemble,
    UniformOverlap,
    Vacuum,
    check_assumption,
    ensemble_from_vectors,
    equiangular_ensemble,
    vacuum_cone_ensemble,
)
from .errors import ParamOutOfRangeError
from .linalg import vectors_from_gram

_SIGMAS = (0.02, 0.05, 0.1, 0.2)


@dataclass(frozen=True)
class RestartOutcome:
    index: int
    value: float
    converged: bool
    feasible: bool


@dataclass(frozen=True, eq=False)
class SearchReport:
    assumption: Assumption
    n: int
    seed: int
    bound: BoundResult
    best_value: float
    restarts: tuple[RestartOutcome, ...]

    @property
    def gap(self) -> float:
        return self.bound.pg_bound - self.best_value

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "bound": self.bound.to_json(),
            "best_value": self.best_value,
            "gap": self.gap,
            "restarts": [
                {
                    "index": r.index,
                    "value": r.value,
                    "converged": r.converged,
                    "feasible": r.feasible,
                }
                for r in self.restarts
            ],
        }


def _normalize_within(
    v: np.ndarray, proj: np.ndarray, sign: int, rng: np.random.Generator
) -> np.ndarray:
    """Unit vector along the projection of v onto proj (sign=+1) or its
    complement (sign=-1); draws a random direction in that subspace when
    the projection vanishes."""
    part = proj @ v if sign > 0 else v - proj @ v
    norm = np.linalg.norm(part)
    while norm < 1e-12:
        r = rng.standard_normal(v.shape) + 1j * rng.standard_normal(v.shape)
        part = proj @ r if sign > 0 else r - proj @ r
        norm = np.linalg.norm(part)
    return part / norm


def _split_and_rescale(
    v: np.ndarray, proj: np.ndarray, weight: float, rng: np.random.Generator
) -> np.ndarray:
    """Rescale the component of v inside a projector to norm sqrt(weight)
    and the complement to sqrt(1-weight), so the defining constraint holds
    with equality."""
    inside = _normalize_within(v, proj, +1, rng)
    rank = float(np.trace(proj).real)
    if weight >= 1.0 - 1e-15 or rank >= v.shape[0] - 1e-9:
        # no tail weight requested, or no complement to put it in
        return inside
    outside = _normalize_within(v, proj, -1, rng)
    return np.sqrt(weight) * inside + np.sqrt(1.0 - weight) * outside


def almost_dim_seed(d: int, n: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Sector-cone seed: d orthogonal blocks, each a vacuum-style cone of
    deviation eps over its share of the n inputs.  Returns (vectors,
    projector onto the d anchor directions)."""
    sizes = [n // d + (1 if i < n % d else 0) for i in range(d)]
    blocks: list[np.ndarray] = []  # per block: (m_i + 1, dim_i), anchor last
    for m in sizes:
        if m == 0:
            continue
        if m == 1:
            blocks.append(np.ones((2, 1), dtype=complex))  # state equals the anchor
            continue
        omega = min(eps, (m - 1) / m)
        ens, anchor = vacuum_cone_ensemble(m, omega)
        vecs = ens.state_vectors()
        blocks.append(np.vstack([vecs, anchor[None, :]]))
    total = sum(b.shape[1] for b in blocks)
    vectors = np.zeros((n, total), dtype=complex)
    projector = np.zeros((total, total), dtype=complex)
    offset = 0
    x = 0
    for b in blocks:
        m, dim_b = b.shape[0] - 1, b.shape[1]
        for j in range(m):
            vectors[x, offset : offset + dim_b] = b[j]
            x += 1
        anchor = np.zeros(total, dtype=complex)
        anchor[offset : offset + dim_b] = b[-1]
        projector += np.outer(anchor, anchor.conj())
        offset += dim_b
    return vectors, projector


def distrust_seed(targets: np.ndarray, eps: float) -> np.ndarray:
    n, dim_t = targets.shape
    vectors = np.zeros((n, dim_t + n), dtype=complex)
    vectors[:, :dim_t] = np.sqrt(1.0 - eps) * targets
    for x in range(n):
        vectors[x, dim_t + x] = np.sqrt(eps)
    return vectors


def _project_overlap(gram: np.ndarray, a: float, n: int) -> np.ndarray | None:
    """Blend a perturbed Gram toward the equiangular one until every
    pairwise overlap magnitude is at least ``a``; None if infeasible."""
    eq = (1.0 - a) * np.eye(n) + a * np.ones((n, n))
    off = ~np.eye(n, dtype=bool)
    for t in np.linspace(0.0, 1.0, 21):
        g = (1.0 - t) * gram + t * eq
        if np.min(np.abs(g[off])) >= a - 1e-12:
            return g
    return None


def _candidate(
    assumption: Assumption,
    n: int,
    seed_vectors: np.ndarray,
    projector: np.ndarray | None,
    restart: int,
    rng: np.random.Generator,
) -> StateEnsemble | None:
    if restart == 0:
        return ensemble_from_vectors(seed_vectors)
    sigma = _SIGMAS[(restart - 1) % len(_SIGMAS)]
    noise = rng.standard_normal(seed_vectors.shape) + 1j * rng.standard_normal(
        seed_vectors.shape
    )
    perturbed = seed_vectors + sigma * noise

    if isinstance(assumption, UniformOverlap):
        vecs = np.stack([v / np.linalg.norm(v) for v in perturbed])
        gram = vecs.conj() @ vecs.T
        g = _project_overlap(gram, assumption.a, n)
        if g is None:
            return None
        return ensemble_from_vectors(vectors_from_gram((g + g.conj().T) / 2.0))

    if isinstance(assumption, Vacuum):
        weight = 1.0 - assumption.omega
        vac = np.zeros(seed_vectors.shape[1], dtype=complex)
        vac[0] = 1.0
        proj = np.outer(vac, vac.conj())
    elif isinstance(assumption, AlmostDim):
        weight = 1.0 - assumption.eps
        proj = projector
    elif isinstance(assumption, Distrust):
        weight = 1.0 - assumption.eps
        proj = None  # per-state projector below
    else:
        raise ParamOutOfRangeError(f"search does not support assumption {assumption!r}")

    vecs = np.empty_like(perturbed)
    for x in range(n):
        if isinstance(assumption, Distrust):
            t = np.zeros(perturbed.shape[1], dtype=complex)
            t[: assumption.targets.shape[1]] = assumption.targets[x]
            proj = np.outer(t, t.conj())
        vecs[x] = _split_and_rescale(perturbed[x], proj, weight, rng)
    return ensemble_from_vectors(vecs)


def tightness_search(
    assumption: Assumption,
    n: int | None = None,
    *,
    restarts: int = 16,
    seed: int = 0,
    tol: float = 1e-10,
    max_iter: int = 2000,
) -> SearchReport:
    """Search for the best guessing value inside one assumption set.

    Deterministic for a fixed ``seed``: restart k draws from a generator
    seeded with seed + k.
    """
    membership_aux: dict = {}
    if isinstance(assumption, Vacuum):
        if n is None:
            raise ParamOutOfRangeError("vacuum search needs n")
        bound = bound_vacuum(n, assumption.omega)
        ens, vac = vacuum_cone_ensemble(n, min(assumption.omega, (n - 1) / n))
        seed_vectors, projector = ens.state_vectors(), None
        membership_aux = {"vacuum_vector": vac}
    elif isinstance(assumption, UniformOverlap):
        if n is None:
            raise ParamOutOfRangeError("overlap search needs n")
        bound = bound_overlap(n, assumption.a)
        seed_vectors, projector = equiangular_ensemble(n, assumption.a).state_vectors(), None
    elif isinstance(assumption, AlmostDim):
        if n is None:
            raise ParamOutOfRangeError("almost-dim search needs n")
        bound = bound_almost_dim(assumption.d, n, assumption.eps)
        seed_vectors, projector = almost_dim_seed(assumption.d, n, assumption.eps)
        assumption = AlmostDim(d=assumption.d, eps=assumption.eps, projector=projector)
    elif isinstance(assumption, Distrust):
        n = assumption.targets.shape[0]
        bound = bound_distrust(ensemble_from_vectors(assumption.targets), assumption.eps, tol)
        seed_vectors, projector = distrust_seed(assumption.targets, assumption.eps), None
    else:
        raise ParamOutOfRangeError(f"search does not support assumption {assumption!r}")

    outcomes: list[RestartOutcome] = []
    best = 0.0
    for k in range(max(1, restarts)):
        rng = np.random.default_rng(seed + k)
        cand = _candidate(assumption, n, seed_vectors, projector, k, rng)
        if cand is None:
            outcomes.append(RestartOutcome(index=k, value=0.0, converged=False, feasible=False))
            continue
        report = check_assumption(cand, assumption, **membership_aux)
        if not report.satisfied:
            outcomes.append(RestartOutcome(index=k, value=0.0, converged=False, feasible=False))
            continue
        res = optimize_discrimination(cand, tol=tol, max_iter=max_iter)
        outcomes.append(
            RestartOutcome(index=k, value=res.value, converged=res.converged, feasible=True)
        )
        best = max(best, res.value)
    return SearchReport(
        assumption=assumption,
        n=n,
        seed=seed,
        bound=bound,
        best_value=best,
        restarts=tuple(outcomes),
    )
