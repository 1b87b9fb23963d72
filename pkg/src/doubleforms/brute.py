"""Slow, independent brute-force reference implementations.

Everything here works on full dense index arrays with no antisymmetry
exploitation and shares no product/contraction code with the fast path,
so it can serve as an oracle: the exterior product is a literal
antisymmetrized outer product, the contraction a literal index trace,
and the generalized Gauss-Kronecker value a literal double sum over
permutation pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np

from .forms import DoubleForm
from .indices import enumerate_basis

#: Refuse dense arrays beyond this many entries.
SIZE_LIMIT = 10 ** 8


def _parity(perm):
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1.0 if inversions % 2 else 1.0


@dataclass(frozen=True)
class DenseTensor:
    """A (p,q) double form as a full array over all index tuples."""

    n: int
    p: int
    q: int
    array: np.ndarray

    @property
    def order(self):
        return self.p + self.q


def _check_size(n, order):
    if n ** order > SIZE_LIMIT:
        raise ValueError(f"dense tensor of order {order} on dimension {n} is too large")


def dense_from_form(omega):
    """Expand stored increasing-pair coefficients to the full dense array."""
    n, p, q = omega.n, omega.p, omega.q
    _check_size(n, p + q)
    array = np.zeros((n,) * (p + q))
    if p > n or q > n:
        return DenseTensor(n, p, q, array)
    for I in enumerate_basis(n, p):
        for J in enumerate_basis(n, q):
            value = omega.coefficient(I, J)
            if value == 0.0:
                continue
            for pi in itertools.permutations(range(p)):
                for pj in itertools.permutations(range(q)):
                    left = tuple(I[i] for i in pi)
                    right = tuple(J[j] for j in pj)
                    array[left + right] = _parity(pi) * _parity(pj) * value
    return DenseTensor(n, p, q, array)


def form_from_dense(tensor):
    """Read back the increasing-pair coefficients of a dense tensor."""
    n, p, q = tensor.n, tensor.p, tensor.q
    if p > n or q > n:
        # alternating degree beyond the dimension: only cancellation dust
        if tensor.array.size and np.max(np.abs(tensor.array)) > 1e-9:
            raise ValueError("nonzero dense tensor of degree beyond the dimension")
        return DoubleForm.zero(n, p, q)
    left = enumerate_basis(n, p)
    right = enumerate_basis(n, q)
    coeffs = np.array([
        [tensor.array[I + J] for J in right] for I in left
    ]).reshape(len(left), len(right))
    return DoubleForm(n, p, q, coeffs)


def _alternate_group(array, group):
    """Antisymmetrize (average with signs) over the given axis group."""
    m = len(group)
    out = np.zeros_like(array)
    for perm in itertools.permutations(range(m)):
        axes = list(range(array.ndim))
        for slot, target in zip(group, perm):
            axes[slot] = group[target]
        out += _parity(perm) * np.transpose(array, axes)
    return out / factorial(m)


def dense_product(t1, t2):
    """Exterior product as a fully antisymmetrized outer product."""
    if t1.n != t2.n:
        raise ValueError(f"mismatched dimensions {t1.n} and {t2.n}")
    n = t1.n
    p, q = t1.p + t2.p, t1.q + t2.q
    _check_size(n, p + q)
    outer = np.multiply.outer(t1.array, t2.array)
    # outer axes: left1, right1, left2, right2 -> left1, left2, right1, right2
    order = (
        list(range(t1.p))
        + list(range(t1.p + t1.q, t1.p + t1.q + t2.p))
        + list(range(t1.p, t1.p + t1.q))
        + list(range(t1.p + t1.q + t2.p, p + q))
    )
    outer = np.transpose(outer, order)
    outer = _alternate_group(outer, list(range(p)))
    outer = _alternate_group(outer, list(range(p, p + q)))
    scale = (factorial(p) / (factorial(t1.p) * factorial(t2.p))) * (
        factorial(q) / (factorial(t1.q) * factorial(t2.q)))
    return DenseTensor(n, p, q, scale * outer)


def dense_contract(tensor):
    """Trace the first left axis against the first right axis."""
    if tensor.p < 1 or tensor.q < 1:
        raise ValueError(f"cannot contract a ({tensor.p},{tensor.q}) dense tensor")
    traced = np.trace(tensor.array, axis1=0, axis2=tensor.p)
    # np.trace moves the remaining axes forward preserving relative order
    return DenseTensor(tensor.n, tensor.p - 1, tensor.q - 1, traced)


def gauss_kronecker_by_permutations(R, p, us, vs, allow_large=False):
    """Literal permutation-sum value of the order-2p Gauss-Kronecker tensor.

    Evaluates 2^(-p)/(2p)! times the double sum over permutation pairs
    (alpha, beta) of S_2p of the signed products of curvature values
    R(u_alpha(2i-1), u_alpha(2i); v_beta(2i-1), v_beta(2i)).  The sum has
    ((2p)!)^2 terms; p > 2 is refused unless allow_large is set.
    """
    if p < 1:
        raise ValueError("needs p >= 1")
    if p > 2 and not allow_large:
        raise ValueError("permutation sum beyond p = 2 requires allow_large=True")
    m = 2 * p
    U = np.asarray(us, dtype=np.float64)
    V = np.asarray(vs, dtype=np.float64)
    if U.shape != (m, R.n) or V.shape != (m, R.n):
        raise ValueError(f"need {m} vectors of length {R.n} on each side")
    dense = dense_from_form(R.form)
    table = np.einsum("ijkl,ai,bj,ck,dl->abcd", dense.array, U, U, V, V)
    total = 0.0
    perms = list(itertools.permutations(range(m)))
    signs = [_parity(perm) for perm in perms]
    for alpha, sa in zip(perms, signs):
        for beta, sb in zip(perms, signs):
            term = 1.0
            for i in range(p):
                term *= table[alpha[2 * i], alpha[2 * i + 1],
                              beta[2 * i], beta[2 * i + 1]]
            total += sa * sb * term
    return 2.0 ** (-p) / factorial(m) * total
