"""Small dense linear-programming solver and the explicit dual program.

This is the independent oracle for the closed-form breakpoint scan: the
worst-case program is emitted verbatim as an LP (:func:`build_dual_lp`)
and solved by a two-phase dense simplex with Bland's rule
(:func:`solve`).  Instances are tiny (``2I + 1`` variables), so a
deterministic, hermetic implementation beats an external solver here;
termination is guaranteed by the pivot rule plus an iteration guard.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .domain import InvalidArgumentError

EPS = 1e-10
FEASIBILITY_TOL = 1e-9
MAX_DUAL_LP_SAMPLES = 10**6

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
_RELATIONS = (LESS_EQUAL, EQUAL, GREATER_EQUAL)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


class SolverFailureError(RuntimeError):
    """The simplex lost numerical footing (singular pivot chain, no progress)."""


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """A dense LP in maximization form.

    ``maximize objective @ x`` subject to ``lhs[i] @ x (relation[i]) rhs[i]``
    and per-variable bounds ``lower <= x <= upper`` (``+-inf`` allowed).
    Bounds default to ``x >= 0``.
    """

    objective: np.ndarray
    lhs: np.ndarray
    relations: Tuple[str, ...]
    rhs: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        a = np.atleast_2d(np.asarray(self.lhs, dtype=float))
        b = np.atleast_1d(np.asarray(self.rhs, dtype=float))
        rels = tuple(self.relations)
        n = c.size
        if a.shape != (b.size, n):
            raise InvalidArgumentError(
                f"inconsistent dimensions: lhs {a.shape}, objective {n}, rhs {b.size}"
            )
        if len(rels) != b.size or any(r not in _RELATIONS for r in rels):
            raise InvalidArgumentError("each constraint needs a relation in {<=, =, >=}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidArgumentError("objective, lhs and rhs must be finite")
        lo = (
            np.zeros(n)
            if self.lower is None
            else np.atleast_1d(np.asarray(self.lower, dtype=float))
        )
        hi = (
            np.full(n, math.inf)
            if self.upper is None
            else np.atleast_1d(np.asarray(self.upper, dtype=float))
        )
        if lo.size != n or hi.size != n:
            raise InvalidArgumentError("bounds must match the variable count")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise InvalidArgumentError("bounds must satisfy lower <= upper and not be NaN")
        for name, arr in (("objective", c), ("lhs", a), ("rhs", b), ("lower", lo), ("upper", hi)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "relations", rels)

    @property
    def n_variables(self) -> int:
        return int(self.objective.size)

    @property
    def n_constraints(self) -> int:
        return int(self.rhs.size)


@dataclass(frozen=True, eq=False)
class LpSolution:
    """Solver outcome; ``variable_values`` is in the original variable space."""

    status: Status
    objective_value: float
    variable_values: Optional[np.ndarray] = None


def constraint_violation(lp: LinearProgram, x: np.ndarray) -> float:
    """Max absolute violation across rows (row-normalized) and bounds."""
    x = np.asarray(x, dtype=float)
    residual = lp.lhs @ x - lp.rhs
    norms = np.maximum(1.0, np.abs(lp.lhs).max(axis=1, initial=0.0))
    worst = 0.0
    for i, rel in enumerate(lp.relations):
        r = residual[i] / norms[i]
        if rel == LESS_EQUAL:
            worst = max(worst, r)
        elif rel == GREATER_EQUAL:
            worst = max(worst, -r)
        else:
            worst = max(worst, abs(r))
    lo = np.where(np.isfinite(lp.lower), lp.lower - x, -math.inf)
    hi = np.where(np.isfinite(lp.upper), x - lp.upper, -math.inf)
    return float(max(worst, lo.max(initial=0.0), hi.max(initial=0.0), 0.0))


def build_dual_lp(margins, radius: float, scale: float) -> LinearProgram:
    """Emit the worst-case dual program as an explicit LP.

    Variables ``[beta_1..beta_I, gamma, tau_1..tau_I]`` with ``beta`` free
    and ``gamma, tau >= 0``; objective ``max (1/I) sum(beta) - radius*gamma``;
    rows ``beta_i <= 1``, ``scale*tau_i - gamma <= 0`` and
    ``beta_i - g_i*tau_i <= 0`` where ``g_i`` are the non-ramp margins.
    """
    g = np.asarray(margins, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise InvalidArgumentError("margins must be one-dimensional and non-empty")
    count = int(g.size)
    if count > MAX_DUAL_LP_SAMPLES:
        raise InvalidArgumentError(f"refusing to build a dense LP with I={count}")
    radius = float(radius)
    if not math.isfinite(radius) or radius < 0.0:
        raise InvalidArgumentError(f"radius must be finite and >= 0, got {radius!r}")
    scale = float(scale)
    if not math.isfinite(scale) or scale <= 0.0:
        raise InvalidArgumentError(f"scale must be finite and > 0, got {scale!r}")

    n = 2 * count + 1  # beta block, gamma, tau block
    gamma_col = count
    objective = np.zeros(n)
    objective[:count] = 1.0 / count
    objective[gamma_col] = -radius

    lhs = np.zeros((3 * count, n))
    rhs = np.zeros(3 * count)
    for i in range(count):
        lhs[i, i] = 1.0  # beta_i <= 1
        rhs[i] = 1.0
        lhs[count + i, gamma_col + 1 + i] = scale  # scale*tau_i <= gamma
        lhs[count + i, gamma_col] = -1.0
        lhs[2 * count + i, i] = 1.0  # beta_i <= g_i * tau_i
        lhs[2 * count + i, gamma_col + 1 + i] = -g[i]

    lower = np.zeros(n)
    lower[:count] = -math.inf  # beta free
    return LinearProgram(
        objective=objective,
        lhs=lhs,
        relations=(LESS_EQUAL,) * (3 * count),
        rhs=rhs,
        lower=lower,
        upper=np.full(n, math.inf),
    )


def _pivot(tableau: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    basis[row] = col


def _bland_entering(obj_row: np.ndarray, eligible: int) -> Optional[int]:
    improving = np.nonzero(obj_row[:eligible] > EPS)[0]
    return int(improving[0]) if improving.size else None


def _bland_leaving(tableau: np.ndarray, basis: np.ndarray, col: int) -> Optional[int]:
    m = tableau.shape[0] - 1
    column = tableau[:m, col]
    mask = column > EPS
    if not mask.any():
        return None
    ratios = np.full(m, math.inf)
    ratios[mask] = tableau[:m, -1][mask] / column[mask]
    best = ratios.min()
    candidates = np.nonzero(ratios == best)[0]
    # ties resolved toward the smallest basis variable index (anti-cycling)
    return int(candidates[np.argmin(basis[candidates])])


def _run_simplex(tableau: np.ndarray, basis: np.ndarray, eligible: int) -> Status:
    limit = 1000 + 50 * (tableau.shape[0] + tableau.shape[1])
    for _ in range(limit):
        col = _bland_entering(tableau[-1], eligible)
        if col is None:
            return Status.OPTIMAL
        row = _bland_leaving(tableau, basis, col)
        if row is None:
            return Status.UNBOUNDED
        _pivot(tableau, basis, row, col)
    raise SolverFailureError("simplex iteration limit exceeded")


def solve(lp: LinearProgram) -> LpSolution:
    """Two-phase dense simplex with Bland's rule; deterministic.

    Free variables are split into nonnegative differences, bounded
    variables are shifted or flipped onto ``y >= 0``, finite upper bounds
    become extra rows.  Returns ``unbounded``/``infeasible`` as statuses;
    raises :class:`SolverFailureError` only on numerical breakdown.
    """
    c = lp.objective
    n = lp.n_variables

    # Map every variable onto y >= 0.
    new_cols: list = []
    new_c: list = []
    mapping: list = []
    upper_rows: list = []
    b = lp.rhs.copy()
    const = 0.0
    for j in range(n):
        lo, hi = float(lp.lower[j]), float(lp.upper[j])
        col = lp.lhs[:, j]
        if math.isinf(lo) and math.isinf(hi):  # free: x = y+ - y-
            mapping.append(("split", len(new_cols)))
            new_cols.append(col)
            new_c.append(c[j])
            new_cols.append(-col)
            new_c.append(-c[j])
        elif math.isinf(lo):  # upper bound only: x = hi - y
            b = b - col * hi
            const += c[j] * hi
            mapping.append(("flip", len(new_cols), hi))
            new_cols.append(-col)
            new_c.append(-c[j])
        else:  # x = y + lo
            if lo != 0.0:
                b = b - col * lo
                const += c[j] * lo
            mapping.append(("shift", len(new_cols), lo))
            new_cols.append(col)
            new_c.append(c[j])
            if math.isfinite(hi):
                upper_rows.append((len(new_cols) - 1, hi - lo))

    n_y = len(new_cols)
    m = lp.n_constraints + len(upper_rows)
    rows = np.zeros((m, n_y))
    rows[: lp.n_constraints] = np.column_stack(new_cols)
    rhs = np.zeros(m)
    rhs[: lp.n_constraints] = b
    relations = list(lp.relations)
    for k, (col_idx, bound) in enumerate(upper_rows):
        rows[lp.n_constraints + k, col_idx] = 1.0
        rhs[lp.n_constraints + k] = bound
        relations.append(LESS_EQUAL)

    flip = rhs < 0.0
    rows[flip] *= -1.0
    rhs[flip] *= -1.0
    for i in np.nonzero(flip)[0]:
        if relations[i] != EQUAL:
            relations[i] = LESS_EQUAL if relations[i] == GREATER_EQUAL else GREATER_EQUAL

    # Slack/surplus columns, then artificials for = and >= rows.
    n_slack = sum(1 for r in relations if r != EQUAL)
    art_rows = [i for i, r in enumerate(relations) if r != LESS_EQUAL]
    n_total = n_y + n_slack + len(art_rows)
    system = np.zeros((m, n_total))
    system[:, :n_y] = rows
    basis = np.empty(m, dtype=int)
    slack_at = n_y
    for i, rel in enumerate(relations):
        if rel == LESS_EQUAL:
            system[i, slack_at] = 1.0
            basis[i] = slack_at
            slack_at += 1
        elif rel == GREATER_EQUAL:
            system[i, slack_at] = -1.0
            slack_at += 1
    for k, i in enumerate(art_rows):
        system[i, n_y + n_slack + k] = 1.0
        basis[i] = n_y + n_slack + k

    if art_rows:
        # Phase 1: drive the artificial block to zero.
        tableau = np.zeros((m + 1, n_total + 1))
        tableau[:m, :n_total] = system
        tableau[:m, -1] = rhs
        tableau[-1, n_y + n_slack : n_total] = -1.0
        for i in range(m):
            if tableau[-1, basis[i]] != 0.0:
                tableau[-1] -= tableau[-1, basis[i]] * tableau[i]
        status = _run_simplex(tableau, basis, n_total)
        if status is not Status.OPTIMAL:
            raise SolverFailureError("phase 1 terminated abnormally")
        if -tableau[-1, -1] < -FEASIBILITY_TOL * 10:
            return LpSolution(Status.INFEASIBLE, math.nan)
        # Pivot leftover artificials out of the basis, or drop redundant rows.
        drop: list = []
        for i in range(m):
            if basis[i] >= n_y + n_slack:
                pivot_cols = np.nonzero(np.abs(tableau[i, : n_y + n_slack]) > EPS)[0]
                if pivot_cols.size:
                    _pivot(tableau, basis, i, int(pivot_cols[0]))
                else:
                    drop.append(i)
        keep_rows = np.array([i for i in range(m) if i not in drop], dtype=int)
        system = tableau[keep_rows, : n_y + n_slack]
        rhs = tableau[keep_rows, -1]
        basis = basis[keep_rows]
    n_total = n_y + n_slack
    system = system[:, :n_total]

    # Phase 2 on the slack-extended objective.
    m2 = system.shape[0]
    tableau = np.zeros((m2 + 1, n_total + 1))
    tableau[:m2, :n_total] = system
    tableau[:m2, -1] = rhs
    tableau[-1, :n_y] = new_c
    for i in range(m2):
        if tableau[-1, basis[i]] != 0.0:
            tableau[-1] -= tableau[-1, basis[i]] * tableau[i]
    status = _run_simplex(tableau, basis, n_total)
    if status is Status.UNBOUNDED:
        return LpSolution(Status.UNBOUNDED, math.inf)

    y = np.zeros(n_total)
    y[basis] = tableau[:m2, -1]
    x = np.empty(n)
    for j, entry in enumerate(mapping):
        if entry[0] == "split":
            x[j] = y[entry[1]] - y[entry[1] + 1]
        elif entry[0] == "flip":
            x[j] = entry[2] - y[entry[1]]
        else:
            x[j] = y[entry[1]] + entry[2]

    objective_value = -tableau[-1, -1] + const
    if constraint_violation(lp, x) > 1e-6:
        raise SolverFailureError("optimal basis violates constraints beyond tolerance")
    return LpSolution(Status.OPTIMAL, float(objective_value), x)
