#!/usr/bin/env python3
"""Sweep every closed-form bound against its saturating construction.

Writes one CSV per assumption into results/ (bound, information and the
value the discrimination oracle reaches on the matching construction).
The overlap, vacuum and almost-dimension columns should coincide with the
bound to oracle precision; the coherent-state sweep has no construction
and reports the bound alone.

Usage: python scripts/sweep_bounds.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from infocap import (
    bound_almost_dim,
    bound_overlap,
    bound_vacuum,
    coherent_capacity,
    ensemble_from_vectors,
    equiangular_ensemble,
    optimize_discrimination,
    vacuum_cone_ensemble,
)
from infocap.search import almost_dim_seed

N = 4
POINTS = 41


def rows_vacuum():
    for omega in np.linspace(0.0, (N - 1) / N, POINTS):
        res = bound_vacuum(N, float(omega))
        e, _ = vacuum_cone_ensemble(N, float(omega))
        value = optimize_discrimination(e).value
        yield float(omega), res.pg_bound, res.info_bits, value


def rows_overlap():
    for a in np.linspace(0.0, 1.0, POINTS):
        res = bound_overlap(N, float(a))
        value = optimize_discrimination(equiangular_ensemble(N, float(a))).value
        yield float(a), res.pg_bound, res.info_bits, value


def rows_almost_dim(d=2):
    for eps in np.linspace(0.0, 1.0 - d / N, POINTS):
        res = bound_almost_dim(d, N, float(eps))
        vecs, _ = almost_dim_seed(d, N, float(eps))
        value = optimize_discrimination(ensemble_from_vectors(vecs)).value
        yield float(eps), res.pg_bound, res.info_bits, value


def rows_coherent():
    for nbar in np.linspace(0.0, 2.0, POINTS):
        res = coherent_capacity(float(nbar), N)
        yield float(nbar), res.pg_bound, res.info_bits, float("nan")


SWEEPS = {
    "vacuum": ("omega", rows_vacuum),
    "overlap": ("a", rows_overlap),
    "almost_dim": ("eps", rows_almost_dim),
    "coherent": ("nbar", rows_coherent),
}


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    outdir.mkdir(parents=True, exist_ok=True)
    for name, (axis, generator) in SWEEPS.items():
        path = outdir / f"sweep_{name}_n{N}.csv"
        with open(path, "w") as fh:
            fh.write(f"{axis},pg_bound,info_bits,construction_value\n")
            for x, pg, info, value in generator():
                fh.write(f"{x:.9g},{pg:.9g},{info:.9g},{value:.9g}\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
