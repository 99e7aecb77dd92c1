"""Recompute every published number for the three-element worked example."""

from __future__ import annotations

import numpy as np

from .bounds import DEFAULT_GRID, ConditionalProblem
from .forge import paper_example

CLAIM_TOL = 1e-4

# (name, claimed value)
CLAIMS = (
    ("ratio A,B equals 2 - 2/(2-p) (max deviation)", 0.0),
    ("ratio A',B equals 1 (max deviation)", 0.0),
    ("argmin of g for A,B", 0.582289),
    ("epsilon floor for A,B", 0.98051),
    ("eps=0.99 interval lower end for A,B", 0.195217),
    ("eps=0.99 interval upper end for A,B", 0.889027),
    ("epsilon floor for A',B", 0.943874),
    ("eps=0.99 lower end for A',B", 0.173995),
)


def paper_repro(
    b_variant: str = "formula",
    points: int = DEFAULT_GRID,
    tol: float = 1e-12,
    claim_tol: float = CLAIM_TOL,
) -> dict:
    ex = paper_example(b_variant)
    grid = np.linspace(0.01, 0.99, 99)
    first = ConditionalProblem(ex.A, ex.B, 48.0, tol=tol)
    second = ConditionalProblem(ex.Aprime, ex.B, 48.0, tol=tol)

    r_dev = float(np.max(np.abs(first.r(grid) - (2.0 - 2.0 / (2.0 - grid)))))
    r1_dev = float(np.max(np.abs(second.r(grid) - 1.0)))
    floor = first.epsilon_floor(points)
    iv = first.admissible_intervals(0.99, points)
    floor2 = second.epsilon_floor(points)
    iv2 = second.admissible_intervals(0.99, points)
    nan = float("nan")
    computed = (
        r_dev,
        r1_dev,
        floor.argmin,
        floor.value,
        iv[0][0] if iv else nan,
        iv[0][1] if iv else nan,
        floor2.value,
        iv2[0][0] if iv2 else nan,
    )
    claims = []
    for (name, claimed), value in zip(CLAIMS, computed):
        diff = abs(value - claimed)
        ok = bool(diff <= claim_tol)
        claims.append(
            {
                "name": name,
                "claimed": claimed,
                "computed": value if value == value else -1.0,
                "abs_diff": diff if diff == diff else 1.0,
                "tol": claim_tol,
                "passed": ok,
            }
        )
    notes = [
        "B is taken as {∅,{a},{c},{a,c}} by default: the only reading under which "
        "r_{A,B}(p) = 2 - 2/(2-p) and r_{A',B} = 1 both hold. The shaded Hasse "
        "diagram also includes {b}; select it with --b-variant diagram, under which "
        "the ratio formula check is expected to fail.",
    ]
    if len(iv) > 1 or len(iv2) > 1:
        notes.append("admissible set split into several intervals; first one compared")
    return {
        "b_variant": b_variant,
        "claims": claims,
        "all_passed": all(c["passed"] for c in claims),
        "notes": notes,
    }
