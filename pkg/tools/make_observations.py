#!/usr/bin/env python3
"""Generate tests/data/observations.csv, the 768-user demo usage log.

The demo study publishes only pairwise 2x2 cross-counts for its six terms,
and those published counts are mutually inconsistent: with
|number & Sign| = 100, |Sign & letters| = 150 and |Sign| = 185 fixed, any
real population must satisfy

    |number & letters| >= 100 + 150 - 185 = 65,

yet the published block says 50. No user-level log can therefore reproduce
every published block. This script solves an integer program for a log that

* matches all six single-term margins and the total population of 768,
* reproduces 14 of the 15 pairwise blocks exactly,
* realizes the (The number, The letters) block as (65, 65, 128, 510) --
  the minimum-deviation repair of the inconsistency above.

The committed CSV is the fixture of record; this script documents its
construction and can rebuild an equivalent log (the ILP may pick a different
optimal vertex, which is fine: only the pairwise counts matter downstream).

Requires scipy (dev dependency). Run from the repository root:

    python tools/make_observations.py
"""

import os

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

TERMS = [
    "The number",
    "The Sign",
    "The letters",
    "The numbers",
    "The Characters",
    "Substantive",
]
POPULATION = 768
MARGINS = {0: 130, 1: 185, 2: 193, 3: 149, 4: 108, 5: 116}

# Published n11 per unordered pair (term indices), with the single repaired
# entry marked below.
PAIR_N11 = {
    (0, 1): 100,
    (0, 2): 65,  # published 50; repaired to the Bonferroni minimum, see module docstring
    (0, 3): 49,
    (0, 4): 38,
    (0, 5): 66,
    (1, 2): 150,
    (1, 3): 49,
    (1, 4): 43,
    (1, 5): 46,
    (2, 3): 49,
    (2, 4): 78,
    (2, 5): 26,
    (3, 4): 49,
    (3, 5): 29,
    (4, 5): 38,
}


def solve_joint() -> np.ndarray:
    """Integer cell counts over the 2^6 usage patterns meeting all constraints."""
    nsub = 64
    rows = [np.ones(nsub)]
    vals = [float(POPULATION)]
    for term, margin in MARGINS.items():
        rows.append(np.array([(s >> term) & 1 for s in range(nsub)], dtype=float))
        vals.append(float(margin))
    for (i, j), n11 in PAIR_N11.items():
        rows.append(
            np.array(
                [1.0 if ((s >> i) & 1 and (s >> j) & 1) else 0.0 for s in range(nsub)]
            )
        )
        vals.append(float(n11))
    a = np.vstack(rows)
    b = np.array(vals)
    res = milp(
        c=np.zeros(nsub),
        constraints=LinearConstraint(a, b, b),
        integrality=np.ones(nsub),
        bounds=Bounds(0, np.inf),
    )
    if res.status != 0:
        raise SystemExit(f"ILP failed: {res.message}")
    return np.round(res.x).astype(int)


def write_csv(cells: np.ndarray, path: str) -> None:
    # Users numbered per usage pattern (ascending bitmask); rows grouped by
    # term so that parsing introduces terms in the canonical order above.
    rows: list[tuple[int, int]] = []
    user = 0
    for pattern in range(64):
        term_ids = [t for t in range(6) if (pattern >> t) & 1]
        if not term_ids:
            continue
        for _ in range(int(cells[pattern])):
            user += 1
            rows.extend((t, user) for t in term_ids)
    rows.sort()
    lines = ["user_id,term"] + [f"u{uid:03d},{TERMS[t]}" for t, uid in rows]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {path}: {user} users with usage, population {POPULATION}")


def verify(cells: np.ndarray) -> None:
    for (i, j), n11 in PAIR_N11.items():
        c11 = sum(int(cells[s]) for s in range(64) if (s >> i) & 1 and (s >> j) & 1)
        assert c11 == n11, ((i, j), c11, n11)
    for term, margin in MARGINS.items():
        c = sum(int(cells[s]) for s in range(64) if (s >> term) & 1)
        assert c == margin, (term, c, margin)
    assert int(cells.sum()) == POPULATION
    print("all margins and pairwise counts verified")


if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    out = os.path.join(here, "..", "tests", "data", "observations.csv")
    joint = solve_joint()
    verify(joint)
    write_csv(joint, os.path.normpath(out))
