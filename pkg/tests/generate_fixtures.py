"""Regenerate the committed test fixtures.

Run from the tests directory:  python3 generate_fixtures.py

Two files are produced:

* synthetic_split_50.json - deterministic synthetic scenes for CLI and
  pipeline tests.
* reference_split.json - one instance whose agent state and history are the
  golden example-prompt values, and whose lane polylines are solved (with
  scipy, needed only here) so that the least-squares control-point fit lands
  on the golden rows to ~1e-12.  A cubic drawn through the golden control
  points does NOT fit back to them: the fit's tangential components are
  pinned to the lane's own chord parameterization, so the underlying lane
  geometry has to be recovered, not assumed.  A quartic gives the fit enough
  speed-profile freedom to hit all four golden interior coordinates.

Fixtures are committed so tests do not depend on solver availability or on
float-op stability of the builders; regenerate only when the scene schema or
the golden values change, and review the diff.
"""

from __future__ import annotations

import numpy as np

from conftest import (DATA_DIR, REF_CURRENT_CTRL, REF_HISTORY,
                      REF_OUTGOING_CTRL, REF_STATE, synthetic_split)

from scenekit import (AgentState, Lane, PredictionInstance, fit_lane,
                      save_split)

FIXTURE_SEED = 20240811


def _quartic_eval(ctrl: list[np.ndarray], t: np.ndarray) -> np.ndarray:
    cur = np.stack([np.broadcast_to(p, (len(t), 2)) for p in ctrl], axis=1)
    tt = np.asarray(t)[:, None, None]
    while cur.shape[1] > 1:
        cur = (1 - tt) * cur[:, :-1] + tt * cur[:, 1:]
    return cur[:, 0]


def solve_lane_polyline(printed_ctrl: list[list[float]], count: int = 21) -> np.ndarray:
    """A lane polyline whose fitted cubic control points equal the printed
    values to ~1e-12 (endpoints bitwise)."""
    from scipy.optimize import least_squares

    target = np.asarray(printed_ctrl, dtype=float)
    # degree-elevated cubic as the starting quartic
    q1 = (target[0] + 3 * target[1]) / 4
    q2 = (target[1] + target[2]) / 2
    q3 = (3 * target[2] + target[3]) / 4
    t = np.linspace(0.0, 1.0, count)

    def polyline(x: np.ndarray) -> np.ndarray:
        quartic = [target[0], x[0:2], x[2:4], x[4:6], target[3]]
        poly = _quartic_eval(quartic, t)
        poly[0], poly[-1] = target[0], target[3]
        return poly

    def residual(x: np.ndarray) -> np.ndarray:
        return (fit_lane(polyline(x)).control_points[1:3] - target[1:3]).ravel()

    sol = least_squares(residual, np.concatenate([q1, q2, q3]), method="trf",
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
    worst = np.abs(sol.fun).max()
    if worst > 1e-9:
        raise RuntimeError(f"lane solve did not converge, residual {worst}")
    return polyline(sol.x)


def reference_solved_instance() -> PredictionInstance:
    current = Lane(solve_lane_polyline(REF_CURRENT_CTRL), "current")
    outgoing = Lane(solve_lane_polyline(REF_OUTGOING_CTRL), "outgoing")
    return PredictionInstance(
        instance_id="reference",
        agent=AgentState(**REF_STATE),
        history=REF_HISTORY,
        current_lane=current,
        outgoing_lanes=(outgoing,),
    )


def main() -> None:
    DATA_DIR.mkdir(exist_ok=True)

    split = DATA_DIR / "synthetic_split_50.json"
    save_split(split, synthetic_split(FIXTURE_SEED, 50))
    print(f"wrote {split}")

    target = DATA_DIR / "reference_split.json"
    save_split(target, [reference_solved_instance()])
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
