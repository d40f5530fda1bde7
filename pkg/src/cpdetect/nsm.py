"""Globally convergent nonlinear power iteration for core-periphery scores.

Starting from any strictly positive vector, repeated application of
:func:`cpdetect.kernel.power_iteration_step` contracts in the Thomson
metric with ratio ``(alpha - 1) / (p - 1) < 1``, so the iteration
converges to the unique positive maximizer of the smoothed-max objective
on the nonnegative p-sphere.  The result carries enough diagnostics to
compare the observed residuals against the geometric a-priori envelope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, NotConnectedError, is_connected
from .kernel import (
    KernelParams,
    pnorm,
    power_iteration_step,
    smooth_max_objective,
    thomson_distance,
)

__all__ = ["NsmParams", "NsmResult", "nsm_detect", "apriori_error_bound"]


@dataclass(frozen=True)
class NsmParams:
    """Configuration of one detection run.

    The default exponents are alpha = 10 with p = 2 * alpha, giving a
    contraction ratio of 9/19 per step.  The default start is the
    uniform vector with entries ``n**(-1/p)``, which already lies on the
    p-sphere.
    """

    kernel: KernelParams = field(default_factory=KernelParams)
    tolerance: float = 1e-8
    max_iterations: int = 10_000
    initial_guess: np.ndarray | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.initial_guess is not None:
            x0 = np.asarray(self.initial_guess, dtype=np.float64)
            if np.any(x0 <= 0):
                raise ValueError("initial guess must be strictly positive")


@dataclass(frozen=True)
class NsmResult:
    """Converged (or budget-exhausted) state of a detection run.

    Attributes
    ----------
    core_score : ndarray
        Fixed point rescaled so its maximum entry is exactly 1.
    fixed_point : ndarray
        Strictly positive iterate on the p-sphere.
    eigenvalue : float
        Objective value at the fixed point; the fixed point satisfies
        ``gradient(x) = eigenvalue * x**(p-1)``.
    iterations : int
        Number of iteration-map applications performed.
    residual_history : ndarray
        p-norm of consecutive iterate differences, one entry per step.
    step_inf_history : ndarray
        Infinity-norm of consecutive iterate differences.
    thomson_history : ndarray
        Thomson distance between consecutive iterates.
    gamma0 : float
        Thomson distance between the first iterate and the start;
        seeds the a-priori error bounds.
    contraction_ratio : float
        (alpha - 1) / (p - 1) for the run's kernel parameters.
    converged : bool
        False when the iteration budget ran out first.
    """

    core_score: np.ndarray
    fixed_point: np.ndarray
    eigenvalue: float
    iterations: int
    residual_history: np.ndarray
    step_inf_history: np.ndarray
    thomson_history: np.ndarray
    gamma0: float
    contraction_ratio: float
    converged: bool


def nsm_detect(graph: Graph, params: NsmParams | None = None) -> NsmResult:
    """Run the nonlinear power iteration to a fixed point.

    Iterates until the p-norm of the step falls below the tolerance
    (the iterates stay on the p-sphere, so no extra normalization enters
    the stopping rule).  Requires a connected graph with at least two
    nodes; a run that exhausts ``max_iterations`` returns its partial
    state with ``converged=False`` instead of raising.
    """
    if params is None:
        params = NsmParams()
    n = graph.node_count
    if n < 2:
        raise ValueError("detection needs at least two nodes")
    if not is_connected(graph):
        raise NotConnectedError(
            "graph is disconnected; restrict to a connected component first"
        )

    kp = params.kernel
    if params.initial_guess is not None:
        x = np.asarray(params.initial_guess, dtype=np.float64).copy()
        if x.shape[0] != n:
            raise ValueError("initial guess length does not match the graph")
        x /= pnorm(x, kp.p)
    else:
        x = np.full(n, n ** (-1.0 / kp.p))

    residuals: list[float] = []
    steps_inf: list[float] = []
    thomson: list[float] = []
    gamma0 = 0.0
    converged = False

    for k in range(params.max_iterations):
        x_next = power_iteration_step(graph, x, kp)
        diff = x - x_next
        residuals.append(pnorm(diff, kp.p))
        steps_inf.append(float(np.max(np.abs(diff))))
        thomson.append(thomson_distance(x, x_next))
        if k == 0:
            gamma0 = thomson[0]
        x = x_next
        if residuals[-1] < params.tolerance:
            converged = True
            break

    eigenvalue = smooth_max_objective(graph, x, kp.alpha)
    return NsmResult(
        core_score=x / x.max(),
        fixed_point=x,
        eigenvalue=eigenvalue,
        iterations=len(residuals),
        residual_history=np.asarray(residuals),
        step_inf_history=np.asarray(steps_inf),
        thomson_history=np.asarray(thomson),
        gamma0=gamma0,
        contraction_ratio=kp.contraction_ratio,
        converged=converged,
    )


def apriori_error_bound(gamma0, contraction_ratio, p, alpha, k):
    """Geometric error envelope after k steps.

    Returns ``(step_bound, distance_bound)`` where the step bound caps
    the infinity-norm difference between iterates k and k+1 and the
    distance bound caps the infinity-norm distance from iterate k to the
    fixed point:

        step_bound     = gamma0 * C**k
        distance_bound = gamma0 * (p - 1) / (p - alpha) * C**k

    with ``C`` the contraction ratio.
    """
    if not 0.0 < contraction_ratio < 1.0:
        raise ValueError(f"contraction ratio must lie in (0, 1), got {contraction_ratio}")
    if gamma0 < 0:
        raise ValueError("gamma0 must be nonnegative")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not p > alpha:
        raise ValueError("p must exceed alpha")
    step = gamma0 * contraction_ratio**k
    distance = step * (p - 1.0) / (p - alpha)
    return step, distance
