"""Residual minimization over the space of algebraic curvature tensors.

The Bianchi-symmetric (2,2) coefficient space is parametrized once per
dimension by an orthonormal basis; curvature conditions (generalized
Einstein proportionality, star invariance) become scalar residual
functions of the coordinates.  einstein_project handles the linear
p = q = 1 case in closed form; minimize_residual runs monotone gradient
descent (finite-difference gradients, Barzilai-Borwein initial steps,
Armijo backtracking) for the nonlinear conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space

from .classify import proportionality, star_invariance_residual
from .curvature import AlgebraicCurvature, curvature_dense, curvature_power
from .decompose import _sym_coords
from .forms import DoubleForm, metric, metric_power


@dataclass(frozen=True)
class SolveOptions:
    max_iterations: int = 500
    step: float = 0.1
    tol: float = 1e-8
    seed: int = 0
    fd_step: float = 1e-6

    def __post_init__(self):
        if self.max_iterations < 0 or self.step <= 0 or self.tol <= 0:
            raise ValueError("solver options must have positive bounds")


@dataclass(frozen=True)
class Condition:
    """A curvature condition with a relative-residual functional."""

    kind: str
    p: int
    q: int

    def describe(self):
        if self.kind == "pq_einstein":
            return f"pq_einstein({self.p},{self.q})"
        return f"star_invariance({self.q})"

    def validate(self, n):
        if self.kind == "pq_einstein":
            if not 0 < self.p < 2 * self.q < n:
                raise ValueError(
                    f"(p,q)=({self.p},{self.q}) outside 0 < p < 2q < n={n}")
        elif self.kind == "star_invariance":
            if n % 2 or n < 4 * self.q:
                raise ValueError(
                    f"star condition with q={self.q} needs even n = 2p >= 4q, got n={n}")
        else:
            raise ValueError(f"unknown condition kind {self.kind!r}")

    def relative_residual(self, R):
        if self.kind == "pq_einstein":
            contracted = curvature_power(R, self.q).contract_k(self.p)
            return proportionality(contracted).relative_residual
        lifted = metric_power(R.n, R.n // 2 - 2 * self.q).product(
            curvature_power(R, self.q))
        scale = lifted.norm()
        if scale == 0.0:
            return 0.0
        return star_invariance_residual(R, self.q) / scale


def pq_einstein_condition(p, q):
    """Target: c^p R^q proportional to g^(2q-p)."""
    return Condition("pq_einstein", p, q)


def star_condition(q):
    """Target: g^(n/2-2q) R^q invariant under the Hodge star."""
    return Condition("star_invariance", 0, q)


@dataclass
class SolveResult:
    curvature: AlgebraicCurvature
    residuals: list = field(default_factory=list)
    converged: bool = True

    @property
    def iterations(self):
        return len(self.residuals) - 1

    @property
    def final_residual(self):
        return self.residuals[-1]


@lru_cache(maxsize=None)
def bianchi_basis(n):
    """Orthonormal basis of symmetric (2,2) blocks with exact first Bianchi.

    Shape (d, m, m) with d = n^2 (n^2 - 1) / 12.
    """
    sym = _sym_coords(n, 2)
    rows = []
    for mat in sym:
        R = AlgebraicCurvature(DoubleForm(n, 2, 2, mat))
        D = curvature_dense(R)
        cyclic = D + D.transpose(1, 2, 0, 3) + D.transpose(2, 0, 1, 3)
        rows.append(cyclic.reshape(-1))
    kernel = null_space(np.array(rows).T)
    d = kernel.shape[1]
    m = sym.shape[1]
    return np.tensordot(kernel.T, sym, axes=([1], [0])).reshape(d, m, m)


def coordinates_of(R):
    """Coordinates of a curvature tensor in the Bianchi basis."""
    basis = bianchi_basis(R.n)
    return np.tensordot(basis, R.form.coeffs, axes=([1, 2], [0, 1]))


def curvature_from_coordinates(n, x):
    """Rebuild an AlgebraicCurvature from Bianchi-basis coordinates."""
    basis = bianchi_basis(n)
    coeffs = np.tensordot(np.asarray(x, dtype=np.float64), basis, axes=([0], [0]))
    return AlgebraicCurvature(DoubleForm(n, 2, 2, coeffs))


def bianchi_project(form):
    """Orthogonal projection of a symmetric (2,2) form onto Bianchi tensors."""
    R = AlgebraicCurvature(form)
    return curvature_from_coordinates(form.n, coordinates_of(R))


@lru_cache(maxsize=None)
def _einstein_constraint_pinv(n):
    """Pseudo-inverse of (coords -> traceless Ricci) for the projection."""
    basis = bianchi_basis(n)
    g = metric(n)
    cols = []
    for mat in basis:
        ric = DoubleForm(n, 2, 2, mat).contract()
        traceless = ric - (ric.contract().value / n) * g
        cols.append(traceless.coeffs.reshape(-1))
    T = np.array(cols).T
    return T, np.linalg.pinv(T, rcond=1e-12)


def einstein_project(R):
    """Closest curvature tensor with Ricci proportional to the metric.

    Orthogonal projection onto the linear subspace of Bianchi tensors
    with traceless Ricci part zero; idempotent, fixes Einstein inputs.
    """
    if R.n < 3:
        raise ValueError("Einstein projection needs dimension >= 3")
    T, T_pinv = _einstein_constraint_pinv(R.n)
    x = coordinates_of(R)
    x = x - T_pinv @ (T @ x)
    return curvature_from_coordinates(R.n, x)


def finite_difference_gradient(func, x, h):
    """Central finite-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.empty_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        grad[i] = (func(x + step) - func(x - step)) / (2.0 * h)
    return grad


def minimize_residual(R0, condition, opts=SolveOptions()):
    """Drive a curvature tensor toward a condition by gradient descent.

    Minimizes the squared relative residual over Bianchi-basis
    coordinates with central finite-difference gradients and Armijo
    backtracking (Barzilai-Borwein initial steps).  The returned
    residual trace is monotone non-increasing; on step underflow the
    best iterate is returned with converged = False.
    """
    n = R0.n
    condition.validate(n)
    x = coordinates_of(R0)

    def objective(coords):
        return condition.relative_residual(curvature_from_coordinates(n, coords)) ** 2

    fx = objective(x)
    trace = [float(np.sqrt(fx))]
    if trace[0] <= opts.tol or opts.max_iterations == 0:
        return SolveResult(curvature_from_coordinates(n, x), trace,
                           converged=trace[0] <= opts.tol)

    step = opts.step
    x_prev = grad_prev = None
    converged = False
    for _ in range(opts.max_iterations):
        h = opts.fd_step * max(1.0, float(np.max(np.abs(x))))
        grad = finite_difference_gradient(objective, x, h)
        grad_sq = float(grad @ grad)
        if grad_sq == 0.0:
            break
        if x_prev is not None:
            s = x - x_prev
            y = grad - grad_prev
            sy = float(s @ y)
            if sy > 0:
                step = float(s @ s) / sy
        step = min(max(step, 1e-16), 1e8)
        t = step
        accepted = False
        while t >= 1e-18:
            x_new = x - t * grad
            f_new = objective(x_new)
            if f_new <= fx - 1e-4 * t * grad_sq:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        x_prev, grad_prev = x, grad
        x, fx = x_new, f_new
        trace.append(float(np.sqrt(fx)))
        if trace[-1] <= opts.tol:
            converged = True
            break
    return SolveResult(curvature_from_coordinates(n, x), trace, converged=converged)


def gradient_check(R, condition, points=10, seed=0, h=1e-5):
    """Max relative deviation between two central-difference step sizes.

    Probes the residual gradient at random coordinate points near R;
    small values certify the finite-difference gradients are stable.
    """
    n = R.n
    condition.validate(n)
    rng = np.random.default_rng(seed)
    x0 = coordinates_of(R)

    def objective(coords):
        return condition.relative_residual(curvature_from_coordinates(n, coords)) ** 2

    worst = 0.0
    for _ in range(points):
        x = x0 + 0.1 * rng.standard_normal(x0.shape) * max(1.0, np.linalg.norm(x0))
        coarse = finite_difference_gradient(objective, x, h)
        fine = finite_difference_gradient(objective, x, h / 8.0)
        scale = max(np.linalg.norm(fine), 1e-300)
        worst = max(worst, float(np.linalg.norm(coarse - fine) / scale))
    return worst
