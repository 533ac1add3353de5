"""Independent slow solvers: a high-precision oracle for the decomposition
objective and the least-absolute-deviation (LAD) fitting baseline.

The oracle reformulates the piecewise-linear objective as a linear program
(one bound variable per absolute value) and solves it with HiGHS, which is a
completely separate code path from the ADMM solver it is used to check.
A plain normalized-subgradient descent is kept alongside as a second,
slower cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from . import admm
from .admm import DecompositionResult, SolverConfig
from .basis import BasisMatrix
from .diffops import DiffOperator, build_diff_operator
from .errors import ConfigurationError


@dataclass
class ReferenceConfig:
    """Budget for the subgradient cross-check path.

    Steps diminish as step_scale * max(1, |f|_inf) / sqrt(iteration).
    tol > 0 stops early once the best objective improves by less than tol
    over 1000 consecutive iterations.
    """

    max_iters: int = 200_000
    step_scale: float = 0.5
    tol: float = 0.0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigurationError("max_iters must be >= 1")
        if self.step_scale <= 0:
            raise ConfigurationError("step_scale must be positive")
        if self.tol < 0:
            raise ConfigurationError("tol must be nonnegative")


def _l1_linear_program(
    f: np.ndarray,
    p: np.ndarray,
    d: sp.spmatrix,
    weights: tuple[float, float, float],
) -> np.ndarray:
    """Minimize w_a ||a||_1 + w_s ||f - P a||_1 + w_t ||Df - DP a||_1 exactly.

    Variables are [a, t, w, v] with t >= |a|, w >= |f - P a|, v >= |Df - DP a|;
    groups whose weight is zero are dropped. Returns the optimal a.
    """
    w_a, w_s, w_t = weights
    f = np.asarray(f, dtype=float).ravel()
    k = p.shape[1]
    df = np.asarray(d @ f)
    dp = np.asarray(d @ p)

    # Each active group contributes an affine expression E = M a + b whose
    # absolute value is bounded by auxiliary variables r >= 0 costing c per
    # unit:  M a - r <= -b  and  -M a - r <= b.
    groups = []  # (cost c, matrix M, offset b)
    if w_a > 0:
        groups.append((w_a, sp.identity(k, format="csr"), np.zeros(k)))
    if w_s > 0:
        groups.append((w_s, sp.csr_matrix(-p), f.copy()))
    if w_t > 0:
        groups.append((w_t, sp.csr_matrix(-dp), df))
    if not groups:
        return np.zeros(k)

    n_aux = sum(g[1].shape[0] for g in groups)
    cost = np.concatenate(
        [np.zeros(k)] + [np.full(g[1].shape[0], g[0]) for g in groups]
    )
    rows_ub = []
    rhs_ub = []
    offset = k
    for _, mat, b in groups:
        rows = mat.shape[0]
        sel = sp.csr_matrix(
            (np.ones(rows), (np.arange(rows), offset + np.arange(rows))),
            shape=(rows, k + n_aux),
        )
        ext = sp.hstack([mat, sp.csr_matrix((rows, n_aux))], format="csr")
        rows_ub.append(ext - sel)
        rhs_ub.append(-b)
        rows_ub.append(-ext - sel)
        rhs_ub.append(b)
        offset += rows
    a_ub = sp.vstack(rows_ub, format="csr")
    b_ub = np.concatenate(rhs_ub)
    bounds = [(None, None)] * k + [(0, None)] * n_aux
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"LP reference solve failed: {res.message}")
    return res.x[:k]


def proximal_reference(
    f: np.ndarray,
    basis: BasisMatrix,
    diff_op: DiffOperator,
    config: SolverConfig | None = None,
    term_weights: tuple[float, float, float] | None = None,
) -> DecompositionResult:
    """Ground-truth minimizer of the decomposition objective.

    Intended for small blocks (roughly N <= 16; N = 64 works but takes
    seconds). The result carries the single optimal objective value as its
    history.
    """
    cfg = config or SolverConfig()
    f = np.asarray(f, dtype=float).ravel()
    if not np.all(np.isfinite(f)):
        raise ValueError("block contains non-finite values")
    weights = term_weights or (1.0, cfg.lambda1, cfg.lambda2)
    alpha = _l1_linear_program(f, basis.entries, diff_op.stacked, weights)
    obj = admm.objective(alpha, f, basis, diff_op, cfg, term_weights=weights)
    return DecompositionResult(
        alpha=alpha,
        s=f - basis.entries @ alpha,
        primal_residuals=np.zeros((0, 3)),
        objective_history=np.array([obj]),
        iterations_run=1,
    )


def subgradient_reference(
    f: np.ndarray,
    basis: BasisMatrix,
    diff_op: DiffOperator,
    config: SolverConfig | None = None,
    ref: ReferenceConfig | None = None,
    term_weights: tuple[float, float, float] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Normalized subgradient descent with diminishing steps.

    Much slower and less precise than `proximal_reference`; used to
    cross-validate it through an unrelated algorithm. Returns the best
    coefficients found and the non-increasing best-so-far objective curve
    (one entry per iteration).
    """
    cfg = config or SolverConfig()
    rc = ref or ReferenceConfig()
    f = np.asarray(f, dtype=float).ravel()
    w_a, w_s, w_t = term_weights or (1.0, cfg.lambda1, cfg.lambda2)
    p = basis.entries
    dp = np.asarray(diff_op.stacked @ p)
    df = np.asarray(diff_op.stacked @ f)
    k = p.shape[1]

    alpha = np.zeros(k)
    best_alpha = alpha.copy()
    best = admm.objective(alpha, f, basis, diff_op, cfg, term_weights=(w_a, w_s, w_t))
    history = np.empty(rc.max_iters)
    step0 = rc.step_scale * max(1.0, float(np.abs(f).max(initial=0.0)))
    last_check = best
    for it in range(rc.max_iters):
        g = (
            w_a * np.sign(alpha)
            - w_s * (p.T @ np.sign(f - p @ alpha))
            - w_t * (dp.T @ np.sign(df - dp @ alpha))
        )
        gn = np.linalg.norm(g)
        if gn > 0:
            alpha = alpha - (step0 / np.sqrt(it + 1.0)) * (g / gn)
        obj = admm.objective(alpha, f, basis, diff_op, cfg, term_weights=(w_a, w_s, w_t))
        if obj < best:
            best = obj
            best_alpha = alpha.copy()
        history[it] = best
        if rc.tol > 0 and (it + 1) % 1000 == 0:
            if last_check - best < rc.tol:
                history = history[: it + 1]
                break
            last_check = best
    return best_alpha, history


def lad_fit(
    f: np.ndarray,
    basis: BasisMatrix,
    diff_op: DiffOperator | None = None,
    config: SolverConfig | None = None,
) -> DecompositionResult:
    """Least-absolute-deviation baseline: min_a ||f - P a||_1.

    Runs the shared ADMM machinery with the coefficient and TV penalties
    disabled, so only the fit term remains.
    """
    cfg = config or SolverConfig()
    op = diff_op or build_diff_operator(basis.block_size)
    return admm.solve(f, basis, op, cfg, term_weights=(0.0, 1.0, 0.0))
