"""Orthogonal splitting of symmetric (p,p) double forms.

Every symmetric (p,p) form decomposes uniquely as

    w = sum_i g^i w_{p-i}

with each component w_j a trace-free symmetric (j,j) form and the
summands mutually orthogonal.  The split is computed by least squares
against precomputed trace-free bases, which stays valid in low
dimension (n < 2p) where the top components are forced to vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.linalg import null_space
from scipy.sparse.linalg import LinearOperator, lsqr

from .forms import DEFAULT_TOL, DoubleForm, metric, metric_power

#: Relative reconstruction residual accepted by divide_by_g; well above
#: round-off at desk sizes, far below structural obstructions.
DIVISIBILITY_TOL = 1e-8


class NotDivisibleError(ValueError):
    """Raised when a form is not a multiple of the metric.

    Carries the relative residual of the best least-squares quotient.
    """

    def __init__(self, message, relative_residual):
        super().__init__(message)
        self.relative_residual = relative_residual


@dataclass(frozen=True)
class Decomposition:
    """Trace-free components [w_p, ..., w_1, w_0] of a symmetric form."""

    components: tuple

    @property
    def n(self):
        return self.components[0].n

    @property
    def degree(self):
        return len(self.components) - 1

    def component(self, j):
        """The trace-free (j,j) component w_j."""
        return self.components[self.degree - j]

    def norms(self):
        """Component norms [|w_p|, ..., |w_0|]."""
        return [c.norm() for c in self.components]


@lru_cache(maxsize=None)
def _sym_coords(n, p):
    """Orthonormal basis of symmetric m x m coefficient blocks, as (d, m, m)."""
    m = comb(n, p)
    mats = []
    for i in range(m):
        e = np.zeros((m, m))
        e[i, i] = 1.0
        mats.append(e)
    for i in range(m):
        for j in range(i + 1, m):
            e = np.zeros((m, m))
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            mats.append(e)
    return np.array(mats).reshape(len(mats), m, m)


@lru_cache(maxsize=None)
def _contraction_matrix_sym(n, p):
    """Matrix of the contraction on symmetric (p,p) blocks, in flat output coords."""
    basis = _sym_coords(n, p)
    rows = []
    for mat in basis:
        c = DoubleForm(n, p, p, mat).contract()
        rows.append(c.coeffs.reshape(-1))
    return np.array(rows).T  # shape (out_dim, sym_dim)


@lru_cache(maxsize=None)
def trace_free_symmetric_basis(n, p):
    """Orthonormal basis of trace-free symmetric (p,p) forms, as (d, m, m).

    Computed as the null space of the contraction restricted to the
    symmetric subspace; empty when 2p > n, where no trace-free (p,p)
    forms exist.
    """
    sym = _sym_coords(n, p)
    if p == 0:
        return np.ones((1, 1, 1))
    cmat = _contraction_matrix_sym(n, p)
    kernel = null_space(cmat)  # (sym_dim, d), orthonormal columns
    d = kernel.shape[1]
    m = comb(n, p)
    if d == 0:
        return np.zeros((0, m, m))
    return np.tensordot(kernel.T, sym, axes=([1], [0])).reshape(d, m, m)


@lru_cache(maxsize=None)
def _split_blocks(n, p):
    """Per-component solve data for splitting symmetric (p,p) forms.

    For each component degree j the columns are vec(g^(p-j) * b_i) over
    the trace-free basis b_i of degree j; the pseudo-inverse of the Gram
    matrix gives the min-norm block solution (blocks are mutually
    orthogonal, so the global least-squares problem decouples).
    """
    blocks = []
    for j in range(p, -1, -1):
        basis = trace_free_symmetric_basis(n, j)
        if basis.shape[0] == 0:
            blocks.append((j, basis, None, None))
            continue
        cols = []
        for mat in basis:
            lifted = metric_power(n, p - j).product(DoubleForm(n, j, j, mat))
            cols.append(lifted.coeffs.reshape(-1))
        C = np.array(cols).T  # (full_dim, d_j)
        blocks.append((j, basis, C, _pinv_floored(C.T @ C)))
    return tuple(blocks)


def _pinv_floored(gram):
    """Pseudo-inverse with an absolute singular-value floor.

    Blocks killed by low-dimensional degeneracies leave pure round-off
    in the Gram matrix; a cutoff relative to the matrix itself would
    invert that dust, so the floor is anchored at order one (the scale
    of lifts of orthonormal basis elements).
    """
    if gram.size == 0:
        return gram
    U, s, Vt = np.linalg.svd(gram, hermitian=True)
    cutoff = 1e-10 * max(1.0, float(s[0]))
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (Vt.T * inv) @ U.T


def split(omega, tol=DEFAULT_TOL):
    """Split a symmetric (p,p) form into trace-free components.

    Returns a Decomposition with components [w_p, ..., w_0] such that
    omega = sum_j g^(p-j) w_j.  Raises ValueError on non-symmetric input
    or when the reconstruction residual exceeds tol relative to |omega|.
    """
    if omega.p != omega.q:
        raise ValueError(f"cannot split a ({omega.p},{omega.q}) form")
    if not omega.is_symmetric(tol=max(tol, 1e-12)):
        raise ValueError("split requires a symmetric double form")
    n, p = omega.n, omega.p
    if p == 0:
        return Decomposition((DoubleForm.scalar(n, omega.value),))
    target = omega.coeffs.reshape(-1)
    components = []
    for j, basis, C, gram_pinv in _split_blocks(n, p):
        m = comb(n, j)
        if C is None:
            components.append(DoubleForm.zero(n, j, j))
            continue
        coords = gram_pinv @ (C.T @ target)
        mat = np.tensordot(coords, basis, axes=([0], [0]))
        components.append(DoubleForm(n, j, j, mat.reshape(m, m)))
    dec = Decomposition(tuple(components))
    residual = (assemble(dec) - omega).norm()
    scale = max(omega.norm(), 1.0)
    if residual > max(tol, 1e-12) * scale:
        raise ValueError(
            f"splitting failed to reconstruct the input (residual {residual:.3e})"
        )
    return dec


def assemble(decomposition):
    """Rebuild sum_j g^(p-j) w_j from components [w_p, ..., w_0]."""
    components = decomposition.components \
        if isinstance(decomposition, Decomposition) else tuple(decomposition)
    p = len(components) - 1
    n = components[0].n
    out = DoubleForm.zero(n, p, p)
    for i, comp in enumerate(components):
        j = p - i
        if comp.p != j or comp.q != j:
            raise ValueError(
                f"component {i} has degree ({comp.p},{comp.q}), expected ({j},{j})"
            )
        out = out + metric_power(n, p - j).product(comp)
    return out


def _metric_quotient(omega):
    """Min-norm least-squares solution eta of g * eta = omega.

    Returns (eta, relative residual).  Matrix-free: multiplication by g
    and contraction are exact adjoints under the coefficient inner
    product, so the normal equations come for free.
    """
    if omega.p < 1 or omega.q < 1:
        raise ValueError(f"cannot divide a ({omega.p},{omega.q}) form by the metric")
    n, p, q = omega.n, omega.p, omega.q
    g = metric(n)
    in_shape = (comb(n, p - 1), comb(n, q - 1))
    out_shape = omega.coeffs.shape
    scale = omega.norm()
    if scale == 0.0:
        return DoubleForm.zero(n, p - 1, q - 1), 0.0

    def matvec(x):
        eta = DoubleForm(n, p - 1, q - 1, x.reshape(in_shape))
        return g.product(eta).coeffs.reshape(-1)

    def rmatvec(y):
        theta = DoubleForm(n, p, q, y.reshape(out_shape))
        return theta.contract().coeffs.reshape(-1)

    op = LinearOperator(
        shape=(out_shape[0] * out_shape[1], in_shape[0] * in_shape[1]),
        matvec=matvec,
        rmatvec=rmatvec,
    )
    result = lsqr(op, omega.coeffs.reshape(-1), atol=1e-15, btol=1e-15,
                  conlim=1e14, iter_lim=10 * max(op.shape))
    eta = DoubleForm(n, p - 1, q - 1, result[0].reshape(in_shape))
    residual = (g.product(eta) - omega).norm() / scale
    return eta, residual


def divisibility_residual(omega):
    """Relative distance from omega to the multiples of the metric."""
    return _metric_quotient(omega)[1]


def divide_by_g(omega, tol=DIVISIBILITY_TOL):
    """Solve g * eta = omega for eta, when consistent.

    Raises NotDivisibleError carrying the relative residual when the
    best least-squares quotient misses omega by more than tol.
    """
    eta, residual = _metric_quotient(omega)
    if residual > tol:
        raise NotDivisibleError(
            f"form is not divisible by the metric (relative residual {residual:.3e})",
            residual,
        )
    return eta
