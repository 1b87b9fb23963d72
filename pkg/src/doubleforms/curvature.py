"""Algebraic curvature tensors and their derived double forms.

An algebraic curvature tensor is a symmetric (2,2) double form obeying
the first Bianchi identity.  This module provides model constructors
(constant curvature, a Ricci-flat 4d example, a non-Einstein 3d
example, flat cylindrical extensions, seeded random tensors), the
iterated exterior powers R^q with their Gauss-Kronecker normalization,
the Schouten tensor, and sectional values on orthonormal frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .forms import DoubleForm, from_entries, metric, metric_power
from .indices import enumerate_basis, rank_of

#: Absolute tolerance on the Gram matrix for frame orthonormality.
FRAME_TOL = 1e-10


@dataclass(frozen=True)
class AlgebraicCurvature:
    """A symmetric (2,2) double form satisfying the first Bianchi identity."""

    form: DoubleForm

    def __post_init__(self):
        f = self.form
        if f.p != 2 or f.q != 2:
            raise ValueError(f"curvature must be a (2,2) form, got ({f.p},{f.q})")
        if not f.is_symmetric(tol=1e-9):
            raise ValueError("curvature must be symmetric under factor exchange")

    @property
    def n(self):
        return self.form.n

    def ricci(self):
        """First contraction cR as a (1,1) form."""
        return self.form.contract()

    def scalar_curvature(self):
        """Full contraction c^2 R."""
        return self.form.contract_k(2).value


@lru_cache(maxsize=None)
def _pair_tables(n):
    """Rank and sign of the ordered pair (a,b) as the 2-index {a,b}."""
    idx = -np.ones((n, n), dtype=np.intp)
    sgn = np.zeros((n, n))
    for r, (a, b) in enumerate(enumerate_basis(n, 2)):
        idx[a, b] = idx[b, a] = r
        sgn[a, b] = 1.0
        sgn[b, a] = -1.0
    return idx, sgn


def curvature_dense(R):
    """The full coefficient array D[a,b,c,d] = R(e_a,e_b; e_c,e_d)."""
    n = R.n
    idx, sgn = _pair_tables(n)
    safe = np.maximum(idx, 0)
    block = R.form.coeffs[safe.reshape(-1)][:, safe.reshape(-1)].reshape(n, n, n, n)
    return (sgn.reshape(n, n, 1, 1) * sgn.reshape(1, 1, n, n)) * block


def bianchi_residual(R):
    """Max over basis 4-tuples of the cyclic sum of curvature values."""
    D = curvature_dense(R)
    cyclic = D + D.transpose(1, 2, 0, 3) + D.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyclic)))


def constant_curvature(n, kappa):
    """(kappa/2) g^2: sectional curvature kappa on every plane."""
    if n < 2:
        raise ValueError("constant curvature needs dimension >= 2")
    return AlgebraicCurvature((kappa / 2.0) * metric_power(n, 2))


def ricci_flat_4d(c1, c2, c3):
    """A 4d tensor with plane curvatures (c1,c2,c3) on complementary pairs.

    Requires c1 + c2 + c3 = 0, which makes every Ricci entry vanish while
    the tensor itself is nonzero unless all plane curvatures are.
    """
    if abs(c1 + c2 + c3) > 1e-12 * max(1.0, abs(c1), abs(c2), abs(c3)):
        raise ValueError("plane curvatures must sum to zero")
    entries = [
        ((0, 1), (0, 1), c1), ((2, 3), (2, 3), c1),
        ((0, 2), (0, 2), c2), ((1, 3), (1, 3), c2),
        ((0, 3), (0, 3), c3), ((1, 2), (1, 2), c3),
    ]
    return AlgebraicCurvature(from_entries(4, 2, 2, entries))


def non_einstein_3d():
    """Plane curvatures (1, 0, 0) in 3d: Ricci eigenvalues {1, 1, 0}."""
    return AlgebraicCurvature(from_entries(3, 2, 2, [((0, 1), (0, 1), 1.0)]))


def extend_flat(R, k):
    """Extend by k flat dimensions: old coefficients kept, new ones zero."""
    if k < 0:
        raise ValueError("cannot extend by a negative number of dimensions")
    if k == 0:
        return R
    n, m = R.n, R.n + k
    coeffs = np.zeros((len(enumerate_basis(m, 2)),) * 2)
    old = enumerate_basis(n, 2)
    new_rank = [rank_of(I, m) for I in old]
    coeffs[np.ix_(new_rank, new_rank)] = R.form.coeffs
    return AlgebraicCurvature(DoubleForm(m, 2, 2, coeffs))


def random_curvature(n, seed, terms=3):
    """Seeded random curvature: a sum of products of symmetric (1,1) forms.

    Products h * h' of symmetric (1,1) forms satisfy the first Bianchi
    identity structurally, so no projection step is needed.
    """
    if n < 2:
        raise ValueError("curvature needs dimension >= 2")
    rng = np.random.default_rng(seed)
    total = DoubleForm.zero(n, 2, 2)
    for _ in range(terms):
        a = rng.standard_normal((n, n))
        b = rng.standard_normal((n, n))
        h = DoubleForm(n, 1, 1, (a + a.T) / 2.0)
        hp = DoubleForm(n, 1, 1, (b + b.T) / 2.0)
        total = total + h.product(hp)
    return AlgebraicCurvature(total)


def schouten(R):
    """Schouten tensor (Ric - Scal/(2(n-1)) g) / (n-2); needs n >= 3."""
    n = R.n
    if n <= 2:
        raise ValueError("Schouten tensor needs dimension >= 3")
    ric = R.ricci()
    scal = R.scalar_curvature()
    return (ric - (scal / (2.0 * (n - 1))) * metric(n)).scale(1.0 / (n - 2))


def from_schouten(A):
    """The conformally-flat curvature A * g built from a symmetric (1,1) form."""
    if A.p != 1 or A.q != 1:
        raise ValueError(f"Schouten tensor must be a (1,1) form, got ({A.p},{A.q})")
    return AlgebraicCurvature(A.product(metric(A.n)))


def curvature_power(R, q):
    """The q-th exterior power R^q; the zero form when 2q exceeds n."""
    if q < 1:
        raise ValueError("curvature power needs q >= 1")
    out = R.form
    for _ in range(q - 1):
        out = out.product(R.form)
    return out


def gauss_kronecker(R, order):
    """The generalized Gauss-Kronecker tensor of even order 2q.

    Normalized as (2^q / (2q)!) R^q so that its value on a repeated
    orthonormal 2q-frame is the q-sectional curvature; at order n it is
    the Gauss-Bonnet integrand.
    """
    if order < 2 or order % 2:
        raise ValueError(f"order must be a positive even integer, got {order}")
    q = order // 2
    return (2.0 ** q / factorial(order)) * curvature_power(R, q)


def q_sectional(R, q, frame, tol=FRAME_TOL):
    """Value of the order-2q Gauss-Kronecker tensor on an orthonormal frame."""
    F = np.asarray(frame, dtype=np.float64)
    if F.shape != (2 * q, R.n):
        raise ValueError(f"frame must stack 2q={2 * q} vectors of length {R.n}")
    gram = F @ F.T
    if np.max(np.abs(gram - np.eye(2 * q))) > tol:
        raise ValueError("frame is not orthonormal within tolerance")
    return gauss_kronecker(R, 2 * q).eval(F, F)


def random_orthonormal_frame(n, k, rng):
    """A deterministic-in-rng orthonormal k-frame in R^n (rows)."""
    A = rng.standard_normal((n, k))
    Q, Rm = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(Rm))
    return Q.T
