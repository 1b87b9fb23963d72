"""Dense (p,q) double forms on an n-dimensional inner-product space.

A double form is antisymmetric in a group of p "left" slots and in a
group of q "right" slots; only coefficients on increasing basis pairs
(I, J) are stored, as a C(n,p) x C(n,q) matrix.  The metric g is the
(1,1) identity-coefficient form, and the algebra implemented here is
the exterior (Kulkarni-Nomizu) product together with its adjoint
contraction, the L2 inner product, and the factor-wise Hodge star.

Normalization is fixed so that (g*g)(e0,e1; e0,e1) = 2, which makes
(kappa/2) * g**2 the curvature tensor of constant sectional curvature
kappa, and makes multiplication by g exactly adjoint to contraction
under the plain coefficient inner product.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .indices import check_index, complement_sign, enumerate_basis, merge_sign, rank_of

#: Default relative tolerance for floating-point predicates.
DEFAULT_TOL = 1e-9


def _dim(n, p):
    # comb() returns 0 for p > n, giving honest empty coefficient blocks
    return comb(n, p) if p >= 0 else 0


@lru_cache(maxsize=None)
def _split_table(n, p, p1):
    """Splittings K = I1 (disjoint union) I2 with |I1| = p1, as flat arrays.

    Returns (k_rank, i1_rank, i2_rank, sign), one row per (K, splitting).
    """
    k_ranks, i1_ranks, i2_ranks, signs = [], [], [], []
    for kr, K in enumerate(enumerate_basis(n, p)):
        for I1 in itertools.combinations(K, p1):
            members = set(I1)
            I2 = tuple(i for i in K if i not in members)
            sign, _ = merge_sign(I1, I2)
            k_ranks.append(kr)
            i1_ranks.append(rank_of(I1, n))
            i2_ranks.append(rank_of(I2, n))
            signs.append(sign)
    return (
        np.asarray(k_ranks, dtype=np.intp),
        np.asarray(i1_ranks, dtype=np.intp),
        np.asarray(i2_ranks, dtype=np.intp),
        np.asarray(signs, dtype=np.float64),
    )


@lru_cache(maxsize=None)
def _insertion_table(n, p):
    """Insertion of one index j into each increasing (p-1)-index.

    Returns (target_rank, sign), each of shape (C(n,p-1), n); target_rank
    is -1 where j already occurs in the index.
    """
    basis = enumerate_basis(n, p - 1)
    target = -np.ones((len(basis), n), dtype=np.intp)
    sign = np.zeros((len(basis), n))
    for r, I in enumerate(basis):
        members = set(I)
        for j in range(n):
            if j in members:
                continue
            s, merged = merge_sign((j,), I)
            target[r, j] = rank_of(merged, n)
            sign[r, j] = s
    return target, sign


@lru_cache(maxsize=None)
def _complement_table(n, p):
    """Complement rank and sign for every increasing p-index."""
    basis = enumerate_basis(n, p)
    ranks = np.empty(len(basis), dtype=np.intp)
    signs = np.empty(len(basis))
    for r, I in enumerate(basis):
        s, Ic = complement_sign(I, n)
        ranks[r] = rank_of(Ic, n)
        signs[r] = s
    return ranks, signs


class DoubleForm:
    """A (p,q) double form stored densely over increasing basis pairs."""

    __slots__ = ("n", "p", "q", "coeffs")

    def __init__(self, n, p, q, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.float64)
        expected = (_dim(n, p), _dim(n, q))
        if coeffs.shape != expected:
            raise ValueError(
                f"coefficient block has shape {coeffs.shape}, expected {expected} "
                f"for a ({p},{q}) form on dimension {n}"
            )
        self.n = n
        self.p = p
        self.q = q
        self.coeffs = coeffs
        self.coeffs.flags.writeable = False

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(n, p, q):
        return DoubleForm(n, p, q, np.zeros((_dim(n, p), _dim(n, q))))

    @staticmethod
    def scalar(n, value):
        """The (0,0) form identified with a real number."""
        return DoubleForm(n, 0, 0, np.array([[float(value)]]))

    def __repr__(self):
        return f"DoubleForm(n={self.n}, p={self.p}, q={self.q}, |coeffs|={self.norm():.6g})"

    # -- linear structure ----------------------------------------------

    def _require_same_shape(self, other):
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise ValueError(
                f"shape mismatch: ({self.n},{self.p},{self.q}) vs "
                f"({other.n},{other.p},{other.q})"
            )

    def __add__(self, other):
        self._require_same_shape(other)
        return DoubleForm(self.n, self.p, self.q, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._require_same_shape(other)
        return DoubleForm(self.n, self.p, self.q, self.coeffs - other.coeffs)

    def __neg__(self):
        return DoubleForm(self.n, self.p, self.q, -self.coeffs)

    def scale(self, a):
        return DoubleForm(self.n, self.p, self.q, float(a) * self.coeffs)

    def __mul__(self, other):
        if isinstance(other, DoubleForm):
            return self.product(other)
        return self.scale(other)

    def __rmul__(self, a):
        return self.scale(a)

    # -- coefficient access ---------------------------------------------

    def coefficient(self, I, J):
        """Value on the increasing basis pair (I, J)."""
        I = check_index(I, self.n, self.p)
        J = check_index(J, self.n, self.q)
        return float(self.coeffs[rank_of(I, self.n), rank_of(J, self.n)])

    @property
    def value(self):
        """The real number a (0,0) form is identified with."""
        if self.p != 0 or self.q != 0:
            raise ValueError(f"({self.p},{self.q}) form is not a scalar")
        return float(self.coeffs[0, 0])

    def __float__(self):
        return self.value

    # -- evaluation ------------------------------------------------------

    def eval(self, us, vs):
        """Evaluate on p left vectors and q right vectors (length-n each).

        Multilinear and alternating within each slot group; on basis
        tuples (e_I, e_J) it returns the stored coefficient.
        """
        U = np.asarray(us, dtype=np.float64)
        V = np.asarray(vs, dtype=np.float64)
        if U.shape != (self.p, self.n) or V.shape != (self.q, self.n):
            raise ValueError(
                f"expected {self.p} and {self.q} vectors of length {self.n}, "
                f"got shapes {U.shape} and {V.shape}"
            )
        if self.p > self.n or self.q > self.n:
            return 0.0
        du = _minor_dets(U, self.n, self.p)
        dv = _minor_dets(V, self.n, self.q)
        return float(du @ self.coeffs @ dv)

    # -- algebra -----------------------------------------------------------

    def product(self, other):
        """Exterior (Kulkarni-Nomizu) product of double forms.

        The coefficient on (K, L) is the shuffle sum over splittings
        K = I1 + I2, L = J1 + J2 of sign(I1,I2) sign(J1,J2)
        self(I1;J1) other(I2;J2).  Degrees beyond n give the zero form
        on an empty basis.
        """
        if self.n != other.n:
            raise ValueError(f"mismatched dimensions {self.n} and {other.n}")
        n = self.n
        p, q = self.p + other.p, self.q + other.q
        out = np.zeros((_dim(n, p), _dim(n, q)))
        if out.size:
            kr, i1, i2, s = _split_table(n, p, self.p)
            lr, j1, j2, t = _split_table(n, q, self.q)
            contrib = (s[:, None] * t[None, :]) \
                * self.coeffs[np.ix_(i1, j1)] * other.coeffs[np.ix_(i2, j2)]
            np.add.at(out, (kr[:, None], lr[None, :]), contrib)
        return DoubleForm(n, p, q, out)

    def contract(self):
        """Trace one left slot against one right slot (Ricci contraction)."""
        if self.p < 1 or self.q < 1:
            raise ValueError(f"cannot contract a ({self.p},{self.q}) form")
        n = self.n
        ti, si = _insertion_table(n, self.p)
        tj, sj = _insertion_table(n, self.q)
        out = np.zeros((_dim(n, self.p - 1), _dim(n, self.q - 1)))
        for j in range(n):
            rows = ti[:, j]
            cols = tj[:, j]
            block = self.coeffs[np.ix_(np.maximum(rows, 0), np.maximum(cols, 0))]
            out += (si[:, j, None] * sj[None, :, j]) * block
        return DoubleForm(n, self.p - 1, self.q - 1, out)

    def contract_k(self, k):
        """Iterated contraction c^k."""
        if k < 0 or k > min(self.p, self.q):
            raise ValueError(f"cannot contract a ({self.p},{self.q}) form {k} times")
        out = self
        for _ in range(k):
            out = out.contract()
        return out

    def inner(self, other):
        """Plain coefficient inner product over increasing basis pairs.

        Makes multiplication by g exactly adjoint to contraction:
        <g*w, t> = <w, c t>.
        """
        self._require_same_shape(other)
        return float(np.vdot(self.coeffs, other.coeffs))

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def star(self):
        """Factor-wise Hodge star: (*w)(Ic; Jc) = sign(I) sign(J) w(I; J).

        An isometry; the square is the identity on (p,p) forms.
        """
        n = self.n
        if self.p > n or self.q > n:
            raise ValueError(f"cannot star a ({self.p},{self.q}) form on dimension {n}")
        ci, si = _complement_table(n, self.p)
        cj, sj = _complement_table(n, self.q)
        out = np.zeros((_dim(n, n - self.p), _dim(n, n - self.q)))
        out[np.ix_(ci, cj)] = (si[:, None] * sj[None, :]) * self.coeffs
        return DoubleForm(n, n - self.p, n - self.q, out)

    def transpose(self):
        """Exchange the left and right slot groups."""
        return DoubleForm(self.n, self.q, self.p, self.coeffs.T)

    def is_symmetric(self, tol=DEFAULT_TOL):
        if self.p != self.q:
            return False
        scale = max(1.0, self.norm())
        return bool(np.all(np.abs(self.coeffs - self.coeffs.T) <= tol * scale))


def _minor_dets(M, n, p):
    """Determinants det(M[:, I]) over all increasing p-subsets I.

    M stacks p vectors as rows; the I-th entry is the wedge coefficient
    of the stack on the basis element e_I.
    """
    if p == 0:
        return np.ones(1)
    if p == 1:
        return M.reshape(n).copy()
    return np.array([np.linalg.det(M[:, list(I)]) for I in enumerate_basis(n, p)])


def from_entries(n, p, q, entries):
    """Build a (p,q) form from sparse (I, J, value) triples.

    Unspecified coefficients are zero; duplicate (I, J) keys are an error.
    """
    coeffs = np.zeros((_dim(n, p), _dim(n, q)))
    seen = set()
    for entry in entries:
        I, J, v = entry
        I = check_index(I, n, p)
        J = check_index(J, n, q)
        key = (I, J)
        if key in seen:
            raise ValueError(f"duplicate coefficient for basis pair {key}")
        seen.add(key)
        coeffs[rank_of(I, n), rank_of(J, n)] = float(v)
    return DoubleForm(n, p, q, coeffs)


def metric(n):
    """The metric as the (1,1) identity-coefficient form."""
    return DoubleForm(n, 1, 1, np.eye(n))


@lru_cache(maxsize=None)
def _metric_power_cached(n, k):
    if k == 0:
        return DoubleForm.scalar(n, 1.0)
    return metric(n).product(_metric_power_cached(n, k - 1))


def metric_power(n, k, strict=False):
    """The k-th exterior power g^k (coefficients k! on the diagonal).

    For k > n the product degenerates to the zero form on an empty
    basis; pass strict=True to raise instead.
    """
    if k < 0:
        raise ValueError("negative metric power")
    if k > n:
        if strict:
            raise ValueError(f"metric power {k} exceeds dimension {n}")
        return DoubleForm.zero(n, k, k)
    return _metric_power_cached(n, k)
