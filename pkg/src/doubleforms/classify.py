"""Generalized Einstein predicates and curvature invariants.

The conditions tested here all constrain contractions of the exterior
powers R^q of an algebraic curvature tensor.  c^p R^q proportional to
g^(2q-p) generalizes the Einstein condition (p = q = 1); the order-2k
Gauss-Bonnet curvature is the full contraction of R^k; star-invariance
of g^(n/2-2q) R^q generalizes the four-dimensional characterization of
Einstein metrics by *R = R.  Proportionality is always measured as a
least-squares projection, so every verdict carries a best-fit constant
and a residual even when it fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .curvature import (
    bianchi_residual,
    curvature_power,
    q_sectional,
    random_orthonormal_frame,
)
from .decompose import divisibility_residual, split
from .forms import DEFAULT_TOL, DoubleForm, metric_power

#: Norms below this (relative to the metric power) are treated as zero.
_ZERO_CUTOFF = 1e-13


@dataclass(frozen=True)
class ProportionalityResult:
    """Least-squares comparison of a symmetric (m,m) form against g^m."""

    lam: float
    residual: float
    relative_residual: float
    degenerate: bool = False


def proportionality(omega):
    """Project a symmetric (m,m) form onto the line spanned by g^m.

    lam is the inner-product projection coefficient; the residual is the
    norm of omega - lam g^m.  A vanishing input is flagged degenerate
    and reported with lam = 0 and zero relative residual.
    """
    if omega.p != omega.q:
        raise ValueError(f"proportionality needs a (m,m) form, got ({omega.p},{omega.q})")
    g_m = metric_power(omega.n, omega.p) if omega.p <= omega.n else None
    scale = omega.norm()
    if g_m is None or scale <= _ZERO_CUTOFF * max(1.0, g_m.norm() if g_m else 1.0):
        return ProportionalityResult(0.0, scale, 0.0, degenerate=True)
    lam = omega.inner(g_m) / g_m.inner(g_m)
    residual = (omega - lam * g_m).norm()
    return ProportionalityResult(lam, residual, residual / scale)


def _check_pq(n, p, q):
    if not (0 < p < 2 * q < n):
        raise ValueError(f"(p,q)=({p},{q}) outside the range 0 < p < 2q < n={n}")


def is_pq_einstein(R, p, q, tol=DEFAULT_TOL):
    """Whether c^p R^q is proportional to g^(2q-p), with the projection data."""
    _check_pq(R.n, p, q)
    contracted = curvature_power(R, q).contract_k(p)
    result = proportionality(contracted)
    return result.degenerate or result.relative_residual <= tol, result


def is_2k_einstein(R, k, tol=DEFAULT_TOL):
    """Whether c^(2k-1) R^k is proportional to the metric."""
    if not 0 < 2 * k < R.n:
        raise ValueError(f"k={k} outside the range 0 < 2k < n={R.n}")
    contracted = curvature_power(R, k).contract_k(2 * k - 1)
    result = proportionality(contracted)
    return result.degenerate or result.relative_residual <= tol, result


def is_hyper_einstein(R, k, tol=DEFAULT_TOL):
    """The strongest order-2k condition: the (p,q) = (1,k) case."""
    return is_pq_einstein(R, 1, k, tol=tol)


def pq_to_2q_constant(n, p, q):
    """Factor relating the (p,q) constant to the (2k)-Einstein constant.

    Contracting c^p R^q = lam g^(2q-p) another (2q-p-1) times gives
    c^(2q-1) R^q = constant * lam * g with this constant.
    """
    return factorial(2 * q - p) * factorial(n - 1) // factorial(n - 2 * q + p)


def gauss_bonnet(R, k):
    """The order-2k Gauss-Bonnet curvature c^(2k) R^k / (2k)!.

    Normalized so the order-2 value is half the scalar curvature.
    """
    if 2 * k > R.n:
        raise ValueError(f"order 2k={2 * k} exceeds dimension {R.n}")
    if k < 1:
        raise ValueError("gauss_bonnet needs k >= 1")
    return curvature_power(R, k).contract_k(2 * k).value / factorial(2 * k)


def generalized_einstein_tensor(R, p, q):
    """The divergence-free (p,p) tensor *(g^(n-2q-p)/(n-2q-p)! R^q).

    Reduces to (minus) the Einstein tensor normalization at p = q = 1;
    needs n >= p + 2q.
    """
    n = R.n
    m = n - 2 * q - p
    if m < 0:
        raise ValueError(f"dimension {n} too small for (p,q)=({p},{q}); need n >= p+2q")
    lifted = (1.0 / factorial(m)) * metric_power(n, m).product(curvature_power(R, q))
    return lifted.star()


def h4k_from_components(R, k):
    """Two-term trace-component energy reproducing h_(4k) on hyper inputs.

    Computed from the orthogonal splitting of R^k as

        n!/(n-4k)! |w_0|^2 + |w_(2k)|^2

    where w_0 and w_(2k) are the scalar and the top trace-free
    components.  Always nonnegative; when the first contraction of R^k
    is proportional to g^(2k-1) (so the middle components vanish) it
    equals gauss_bonnet(R, 2k).
    """
    n = R.n
    if n < 4 * k:
        raise ValueError(f"dimension {n} too small for k={k}; need n >= 4k")
    dec = split(curvature_power(R, k))
    w0 = dec.component(0).value
    wtop = dec.component(2 * k).norm()
    return factorial(n) / factorial(n - 4 * k) * w0 ** 2 + wtop ** 2


def _star_setup(R, q):
    n = R.n
    if n % 2:
        raise ValueError(f"star conditions need an even dimension, got {n}")
    p = n // 2
    if n < 4 * q:
        raise ValueError(f"dimension {n} too small for q={q}; need n = 2p >= 4q")
    return p


def star_invariance_residual(R, q):
    """Norm of *(g^(p-2q) R^q) - g^(p-2q) R^q at n = 2p."""
    p = _star_setup(R, q)
    lifted = metric_power(R.n, p - 2 * q).product(curvature_power(R, q))
    return (lifted.star() - lifted).norm()


def einstein_star_residual(R):
    """The q = 1 star residual; zero exactly for Einstein tensors."""
    return star_invariance_residual(R, 1)


def star_contraction_residual(R, q):
    """Norm of the alternating contraction sum equivalent to star invariance.

    The sum over r = 1..2q of (-1)^r (p-2q+1)!/(r! (p-2q+r)!) g^(r-1) c^r R^q
    vanishes exactly when g^(p-2q) R^q is star invariant; at n = 4q the
    coefficients reduce to (-1)^r / (r!)^2.
    """
    p = _star_setup(R, q)
    n = R.n
    power = curvature_power(R, q)
    total = DoubleForm.zero(n, 2 * q - 1, 2 * q - 1)
    for r in range(1, 2 * q + 1):
        coeff = (-1) ** r * factorial(p - 2 * q + 1) / (
            factorial(r) * factorial(p - 2 * q + r))
        term = metric_power(n, r - 1).product(power.contract_k(r))
        total = total + coeff * term
    return total.norm()


def k_conformally_flat(R, k, tol=DEFAULT_TOL):
    """Whether R^k is divisible by the metric (top trace-free part vanishes)."""
    if R.n < 4 * k:
        raise ValueError(f"dimension {R.n} too small for k={k}; need n >= 4k")
    power = curvature_power(R, k)
    if power.norm() == 0.0:
        return True
    return divisibility_residual(power) <= tol


def sectional_spread(R, q, samples=12, seed=0):
    """Spread of q-sectional values over random orthonormal frames.

    Returns (max - min, max |value|) over the sampled frames; both zero
    when 2q exceeds the dimension.
    """
    n = R.n
    if 2 * q > n:
        return 0.0, 0.0
    rng = np.random.default_rng(seed)
    values = [
        q_sectional(R, q, random_orthonormal_frame(n, 2 * q, rng))
        for _ in range(samples)
    ]
    return float(max(values) - min(values)), float(max(abs(v) for v in values))


def has_constant_q_sectional(R, q, tol=DEFAULT_TOL, samples=12, seed=0):
    """Whether sampled q-sectional values agree within tolerance."""
    spread, scale = sectional_spread(R, q, samples=samples, seed=seed)
    return spread <= tol * max(1.0, scale)


@dataclass
class ClassificationReport:
    """Per-condition verdicts for one algebraic curvature tensor."""

    n: int
    bianchi: float
    zero_curvature: bool
    pq_einstein: dict = field(default_factory=dict)
    two_k_einstein: dict = field(default_factory=dict)
    hyper_einstein: dict = field(default_factory=dict)
    gauss_bonnet_values: dict = field(default_factory=dict)
    conformally_flat: dict = field(default_factory=dict)
    sectional_constant: dict = field(default_factory=dict)
    star_residuals: dict = field(default_factory=dict)
    star_contraction_residuals: dict = field(default_factory=dict)

    def to_lines(self):
        """Stable key-value rendering, one field per line."""
        lines = [f"n: {self.n}",
                 f"bianchi_residual: {self.bianchi!r}",
                 f"zero_curvature: {_fmt(self.zero_curvature)}"]
        for k in sorted(self.gauss_bonnet_values):
            lines.append(f"h_{2 * k}: {self.gauss_bonnet_values[k]!r}")
        for (p, q) in sorted(self.pq_einstein, key=lambda t: (t[1], t[0])):
            holds, res = self.pq_einstein[(p, q)]
            lines.append(f"einstein_{p}_{q}: {_fmt(holds)}")
            lines.append(f"einstein_{p}_{q}_lambda: {res.lam!r}")
            lines.append(f"einstein_{p}_{q}_residual: {res.residual!r}")
            lines.append(f"einstein_{p}_{q}_degenerate: {_fmt(res.degenerate)}")
        for k in sorted(self.two_k_einstein):
            holds, res = self.two_k_einstein[k]
            lines.append(f"einstein_order_{2 * k}: {_fmt(holds)}")
            lines.append(f"einstein_order_{2 * k}_lambda: {res.lam!r}")
        for k in sorted(self.hyper_einstein):
            holds, res = self.hyper_einstein[k]
            lines.append(f"hyper_einstein_{2 * k}: {_fmt(holds)}")
            lines.append(f"hyper_einstein_{2 * k}_lambda: {res.lam!r}")
        for k in sorted(self.conformally_flat):
            lines.append(f"conformally_flat_{k}: {_fmt(self.conformally_flat[k])}")
        for q in sorted(self.sectional_constant):
            lines.append(f"sectional_constant_{q}: {_fmt(self.sectional_constant[q])}")
        for q in sorted(self.star_residuals):
            lines.append(f"star_residual_{q}: {self.star_residuals[q]!r}")
        for q in sorted(self.star_contraction_residuals):
            lines.append(
                f"star_contraction_residual_{q}: {self.star_contraction_residuals[q]!r}")
        return lines


def _fmt(flag):
    return "true" if flag else "false"


def classify_all(R, tol=DEFAULT_TOL):
    """Run every applicable condition and collect the verdicts.

    Verdict monotonicity in p (a (p,q) verdict forces (p+1,q)) is
    enforced on the report.
    """
    n = R.n
    report = ClassificationReport(
        n=n,
        bianchi=bianchi_residual(R),
        zero_curvature=R.form.norm() <= _ZERO_CUTOFF,
    )
    for q in range(1, (n - 1) // 2 + 1):
        previous = False
        for p in range(1, 2 * q):
            holds, res = is_pq_einstein(R, p, q, tol=tol)
            holds = holds or previous
            report.pq_einstein[(p, q)] = (holds, res)
            previous = holds
    for k in range(1, (n - 1) // 2 + 1):
        report.two_k_einstein[k] = is_2k_einstein(R, k, tol=tol)
        report.hyper_einstein[k] = report.pq_einstein[(1, k)]
    for k in range(1, n // 2 + 1):
        report.gauss_bonnet_values[k] = gauss_bonnet(R, k)
    for k in range(1, n // 4 + 1):
        report.conformally_flat[k] = k_conformally_flat(R, k, tol=max(tol, 1e-10))
    for q in range(1, n // 2 + 1):
        report.sectional_constant[q] = has_constant_q_sectional(
            R, q, tol=max(tol, 1e-8))
    if n % 2 == 0:
        for q in range(1, n // 4 + 1):
            report.star_residuals[q] = star_invariance_residual(R, q)
            report.star_contraction_residuals[q] = star_contraction_residual(R, q)
    return report
