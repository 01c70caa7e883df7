#!/usr/bin/env python3
"""Freeze grid-integration lower bounds for 20 small tables into tests/data.

The frozen values are the acceptance reference for the Monte Carlo bound
estimator. Tables are drawn at random but kept only when both estimators are
well conditioned there: the grid value must be converged (step 400 vs 800
within 0.003) and the Monte Carlo quantile noise small (stderr < 0.003), so
the +/-0.01 agreement check is meaningful rather than tail-noise roulette.
A zero-error-cell table opens the list to pin the singular-density case.

Regenerate with ``python tools/make_grid_oracle.py`` (needs scipy; takes a
few minutes because of the step-800 convergence checks).
"""

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests"))

from oracles import grid_lower_bound  # noqa: E402

from galimp.bayes import BayesConfig, posterior_lower_bound  # noqa: E402
from galimp.stats import ContingencyTable, Quadrant, loevinger_h  # noqa: E402

DELTA = 0.90
PRIOR = (0.5, 0.5, 0.5, 0.5)
QUADRANTS = [Quadrant.EXCLUSION, Quadrant.FORWARD, Quadrant.BACKWARD, Quadrant.COMPLEMENT]
SEED_TABLES = [((5, 0, 3, 12), Quadrant.FORWARD)]


def well_conditioned(counts, quadrant) -> bool:
    table = ContingencyTable(*counts)
    if loevinger_h(table).by_quadrant(quadrant) is None:
        return False
    probe = posterior_lower_bound(table, quadrant, BayesConfig(samples=20_000, seed=7))
    return probe.eta_low > -1.0 and probe.mc_stderr < 0.003


def candidates(n_max: int = 30):
    yield from SEED_TABLES
    rng = np.random.default_rng(20240611)
    k = 0
    while True:
        n = int(rng.integers(8, n_max + 1))
        probs = rng.dirichlet((1.2, 1.2, 1.2, 1.2))
        counts = tuple(int(v) for v in rng.multinomial(n, probs))
        quadrant = QUADRANTS[k % len(QUADRANTS)]
        k += 1
        if well_conditioned(counts, quadrant):
            yield counts, quadrant


if __name__ == "__main__":
    entries = []
    for counts, quadrant in candidates():
        eta = grid_lower_bound(counts, quadrant, delta=DELTA, prior=PRIOR, step=400)
        eta_fine = grid_lower_bound(counts, quadrant, delta=DELTA, prior=PRIOR,
                                    step=800, nbins=80_000)
        converged = abs(eta - eta_fine) <= 0.003
        print(counts, quadrant.value, f"{eta:+.5f} (fine {eta_fine:+.5f})",
              "" if converged else "NOT CONVERGED -> dropped")
        if converged:
            entries.append({"counts": list(counts), "quadrant": quadrant.value,
                            "eta_low": eta})
        if len(entries) == 20:
            break
    payload = {
        "delta": DELTA,
        "prior_weights": list(PRIOR),
        "step": 400,
        "entries": entries[:20],
    }
    here = os.path.dirname(os.path.abspath(__file__))
    out = os.path.normpath(os.path.join(here, "..", "tests", "data", "grid_oracle.json"))
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out} ({len(entries[:20])} entries)")
