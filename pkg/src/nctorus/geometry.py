"""Metrics, Levi-Civita data, curvature and the Gauss-Bonnet / Einstein-Hilbert traces.

Conventions (all indices 0-based in code):

* vector fields form a free *left* module, <a X, Y> = a <X, Y>;
* lowered symbols  G_low[i][j][k] = <nabla_i d_j, d_k>
  = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij);
* nabla_i d_j = sum_m G[i][j][m] d_m with G[i][j][m] = sum_k G_low[i][j][k] g^{km}
  (inverse metric on the right, so pairing back with the metric reproduces
  G_low exactly);
* R(X, Y) = nabla_Y nabla_X - nabla_X nabla_Y and
  r[i][j][k][l] = <R(d_i, d_j) d_k, d_l>, expanded with the left Leibniz rule
  <nabla_a nabla_b d_k, d_l> = sum_m d_a(G[b][k][m]) g_ml + G[b][k][m] G_low[a][m][l];
* scalar curvature R = sum g^{ij} g^{kl} r[i][k][j][l], metric factors on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable

import numpy as np

from .algebra import AlgebraElement, ConfigurationError, Torus, derive, precision, trace_product, trace_product_bound
from .funcalc import DEFAULT, FuncalcConfig, exp_element

__all__ = [
    "Family",
    "MetricSpec",
    "Metric",
    "ChristoffelTable",
    "CurvatureTensor",
    "MetricError",
    "build_metric",
    "christoffel",
    "curvature_tensor",
    "gb_functional",
    "eh_action",
    "EHResult",
    "TraceValue",
    "fk_trace_functional",
    "conformal4_scalar_closed",
    "metric_scalar_curvature",
]


class MetricError(ValueError):
    """Positivity certificate failed or the inverse could not be refined."""


class Family(str, Enum):
    CONFORMAL_FLAT = "conformal_flat"
    DIAG_EF1 = "diag_ef1"
    PARTIAL_CONFORMAL4 = "partial_conformal4"
    PARTIAL_CONFORMAL4_ALT = "partial_conformal4_alt"
    NONDIAG_REAL = "nondiag_real"
    NONDIAG_HERMITIAN = "nondiag_hermitian"


_CONFORMAL_AXES = {
    Family.PARTIAL_CONFORMAL4: (0, 1),
    Family.PARTIAL_CONFORMAL4_ALT: (0, 2),
}


@dataclass(frozen=True)
class MetricSpec:
    family: Family
    f: AlgebraElement
    t: float = 0.0
    alpha: complex = 0j
    self_adjoint_tol: float = 1e-10

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        n = self.f.n
        fam = self.family
        if fam in (Family.DIAG_EF1, Family.NONDIAG_REAL, Family.NONDIAG_HERMITIAN) and n != 2:
            raise ConfigurationError(f"{fam.value} is a metric on the 2-torus")
        if fam in _CONFORMAL_AXES and n != 4:
            raise ConfigurationError(f"{fam.value} is a metric on the 4-torus")
        if self.f.self_adjoint_defect() > self.self_adjoint_tol * max(1.0, self.f.norm1()):
            raise MetricError("conformal factor must be self-adjoint")
        # a >= c* b^{-1} c reduces to (1 - |c|^2) e^f > 0 for the off-diagonal families
        if fam is Family.NONDIAG_REAL and not 0.0 <= self.t < 1.0:
            raise MetricError(f"positivity needs 0 <= t < 1, got t = {self.t}")
        if fam is Family.NONDIAG_HERMITIAN and not abs(self.alpha) < 1.0:
            raise MetricError(f"positivity needs |alpha| < 1, got |alpha| = {abs(self.alpha)}")

    @property
    def n(self) -> int:
        return self.f.n

    @classmethod
    def conformal(cls, f: AlgebraElement) -> "MetricSpec":
        return cls(Family.CONFORMAL_FLAT, f)

    @classmethod
    def diag_ef1(cls, f: AlgebraElement) -> "MetricSpec":
        return cls(Family.DIAG_EF1, f)

    @classmethod
    def nondiag_real(cls, f: AlgebraElement, t: float) -> "MetricSpec":
        return cls(Family.NONDIAG_REAL, f, t=float(t))

    @classmethod
    def nondiag_hermitian(cls, f: AlgebraElement, alpha: complex) -> "MetricSpec":
        return cls(Family.NONDIAG_HERMITIAN, f, alpha=complex(alpha))


Matrix = list[list[AlgebraElement]]


@dataclass(frozen=True)
class Metric:
    spec: MetricSpec
    g: Matrix
    g_inv: Matrix
    sqrt_det: AlgebraElement
    inv_residual: float
    exps: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def torus(self) -> Torus:
        return self.spec.f.torus


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = a[i][0].torus.zero()
            for k in range(n):
                if _nonzero(a[i][k]) and _nonzero(b[k][j]):
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _nonzero(x: AlgebraElement) -> bool:
    return not x.is_zero() or x.dropped > 0


def _same(a: AlgebraElement, b: AlgebraElement) -> bool:
    return a is b or (
        a.keys.shape == b.keys.shape and np.array_equal(a.keys, b.keys) and np.array_equal(a.vals, b.vals)
    )


def _accumulate(groups: list, factor: AlgebraElement, x: AlgebraElement) -> None:
    """Add x to the group whose left factor equals ``factor``, or open a new group."""
    for idx, (g, acc) in enumerate(groups):
        if _same(g, factor):
            groups[idx] = (g, acc + x)
            return
    groups.append((factor, x))


def _inverse_residual(g: Matrix, g_inv: Matrix) -> float:
    n = len(g)
    worst = 0.0
    for side in (_matmul(g_inv, g), _matmul(g, g_inv)):
        for i in range(n):
            for j in range(n):
                d = side[i][j] - (1.0 if i == j else 0.0)
                worst = max(worst, d.coeff_norm1())
    return worst


def build_metric(spec: MetricSpec, cfg: FuncalcConfig = DEFAULT, *, inv_tol: float = 1e-10) -> Metric:
    """Assemble g, its two-sided inverse and sqrt(det g) for one metric family."""
    f = spec.f
    torus = f.torus
    n = spec.n
    zero, one = torus.zero(), torus.one()
    ef = exp_element(f, cfg)
    emf = exp_element(-f, cfg)
    exps = {"ef": ef, "emf": emf}
    fam = spec.family

    if fam is Family.CONFORMAL_FLAT:
        g = [[ef if i == j else zero for j in range(n)] for i in range(n)]
        g_inv = [[emf if i == j else zero for j in range(n)] for i in range(n)]
        sqrt_det = ef if n == 2 else ef * ef
    elif fam is Family.DIAG_EF1:
        g = [[ef, zero], [zero, one]]
        g_inv = [[emf, zero], [zero, one]]
        sqrt_det = exp_element(f.scale(0.5), cfg)
    elif fam in _CONFORMAL_AXES:
        axes = _CONFORMAL_AXES[fam]
        g = [[(ef if i in axes else one) if i == j else zero for j in range(n)] for i in range(n)]
        g_inv = [[(emf if i in axes else one) if i == j else zero for j in range(n)] for i in range(n)]
        sqrt_det = ef
    else:
        c = complex(spec.t) if fam is Family.NONDIAG_REAL else complex(spec.alpha)
        det = 1.0 - abs(c) ** 2
        g = [[ef, torus.scalar(c)], [torus.scalar(c.conjugate()), emf]]
        # adjugate / det: the off-diagonal entries carry minus signs
        g_inv = [
            [emf.scale(1.0 / det), torus.scalar(-c / det)],
            [torus.scalar(-c.conjugate() / det), ef.scale(1.0 / det)],
        ]
        sqrt_det = torus.scalar(math.sqrt(det))

    residual = _inverse_residual(g, g_inv)
    if residual > inv_tol:
        g_inv, residual = _refine_inverse(g, g_inv, cfg, inv_tol)
    return Metric(spec, g, g_inv, sqrt_det, residual, exps)


def _refine_inverse(g: Matrix, x: Matrix, cfg: FuncalcConfig, tol: float) -> tuple[Matrix, float]:
    """Matrix Newton iteration X <- X (2 - g X) over the algebra."""
    n = len(g)
    residual = _inverse_residual(g, x)
    with precision(cfg.prune_tol):
        for _ in range(cfg.newton_max_iters):
            if residual <= tol:
                return x, residual
            gx = _matmul(g, x)
            corr = [[(2.0 if i == j else 0.0) - gx[i][j] for j in range(n)] for i in range(n)]
            x_new = _matmul(x, corr)
            r_new = _inverse_residual(g, x_new)
            if not r_new < residual:
                break
            x, residual = x_new, r_new
    if residual <= tol:
        return x, residual
    raise MetricError(f"inverse metric refinement stalled at residual {residual:.3e}")


@dataclass(frozen=True)
class ChristoffelTable:
    gamma_low: list  # [i][j][k]
    gamma: list  # [i][j][m]
    ordering: str = "right"

    def reconstruction_residual(self, m: Metric) -> float:
        """max || sum_m G[i][j][m] g_mk - G_low[i][j][k] ||_1."""
        n = m.n
        worst = 0.0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    acc = m.torus.zero()
                    for mm in range(n):
                        if _nonzero(self.gamma[i][j][mm]) and _nonzero(m.g[mm][k]):
                            acc = acc + self.gamma[i][j][mm] * m.g[mm][k]
                    worst = max(worst, acc.distance(self.gamma_low[i][j][k]))
        return worst


def christoffel(m: Metric, ordering: str = "right") -> ChristoffelTable:
    """Levi-Civita symbols.  ``ordering='left'`` contracts as g^{km} G_low instead
    (kept for comparison; it does not reproduce G_low when paired back)."""
    if ordering not in ("right", "left"):
        raise ValueError("ordering must be 'right' or 'left'")
    n = m.n
    dg = [[[derive(m.g[j][k], i) for k in range(n)] for j in range(n)] for i in range(n)]
    low = [
        [[(dg[i][j][k] + dg[j][i][k] - dg[k][i][j]).scale(0.5) for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    zero = m.torus.zero()
    gamma = []
    for i in range(n):
        gi = []
        for j in range(n):
            if j < i:
                gi.append(gamma[j][i])
                continue
            row = []
            for mm in range(n):
                acc = zero
                for k in range(n):
                    if not (_nonzero(low[i][j][k]) and _nonzero(m.g_inv[k][mm])):
                        continue
                    if ordering == "right":
                        acc = acc + low[i][j][k] * m.g_inv[k][mm]
                    else:
                        acc = acc + m.g_inv[mm][k] * low[i][j][k]
                row.append(acc)
            gi.append(row)
        gamma.append(gi)
    return ChristoffelTable(low, gamma, ordering)


class CurvatureTensor:
    """Riemann tensor r[i][j][k][l] = <R(d_i, d_j) d_k, d_l>, computed lazily.

    Entries are cached; :attr:`r` materializes the full n^4 table and
    :attr:`scalar` only touches the entries the contraction needs.
    """

    def __init__(self, m: Metric, ct: ChristoffelTable):
        self.metric = m
        self.ct = ct
        self.n = m.n
        self._pair: dict[tuple[int, int, int, int], AlgebraElement] = {}
        self._entry: dict[tuple[int, int, int, int], AlgebraElement] = {}
        self._dgamma: dict[tuple[int, int, int, int], AlgebraElement] = {}

    def _d_gamma(self, a: int, b: int, k: int, mm: int) -> AlgebraElement:
        key = (a, b, k, mm)
        if key not in self._dgamma:
            self._dgamma[key] = derive(self.ct.gamma[b][k][mm], a)
        return self._dgamma[key]

    def _second(self, a: int, b: int, k: int, l: int) -> AlgebraElement:
        """<nabla_a nabla_b d_k, d_l>."""
        key = (a, b, k, l)
        if key in self._pair:
            return self._pair[key]
        m, ct = self.metric, self.ct
        acc = m.torus.zero()
        for mm in range(self.n):
            gam = ct.gamma[b][k][mm]
            if not _nonzero(gam):
                continue
            if _nonzero(m.g[mm][l]):
                d = self._d_gamma(a, b, k, mm)
                if _nonzero(d):
                    acc = acc + d * m.g[mm][l]
            low = ct.gamma_low[a][mm][l]
            if _nonzero(low):
                acc = acc + gam * low
        self._pair[key] = acc
        return acc

    def entry(self, i: int, j: int, k: int, l: int) -> AlgebraElement:
        key = (i, j, k, l)
        if key not in self._entry:
            if i == j:
                self._entry[key] = self.metric.torus.zero()
            elif (j, i, k, l) in self._entry:
                self._entry[key] = -self._entry[(j, i, k, l)]
            else:
                self._entry[key] = self._second(j, i, k, l) - self._second(i, j, k, l)
        return self._entry[key]

    def __getitem__(self, idx: tuple[int, int, int, int]) -> AlgebraElement:
        return self.entry(*idx)

    @cached_property
    def r(self) -> list:
        n = self.n
        return [[[[self.entry(i, j, k, l) for l in range(n)] for k in range(n)] for j in range(n)] for i in range(n)]

    @cached_property
    def scalar(self) -> AlgebraElement:
        # sum over (k, l) first and group equal inverse-metric factors, so each
        # distinct g^{kl} and g^{ij} multiplies only once
        m = self.metric
        n = self.n
        outer: list[tuple[AlgebraElement, AlgebraElement]] = []
        for i in range(n):
            for j in range(n):
                gij = m.g_inv[i][j]
                if not _nonzero(gij):
                    continue
                inner: list[tuple[AlgebraElement, AlgebraElement]] = []
                for k in range(n):
                    if k == i:
                        continue
                    for l in range(n):
                        gkl = m.g_inv[k][l]
                        if not _nonzero(gkl):
                            continue
                        rr = self.entry(i, k, j, l)
                        if _nonzero(rr):
                            _accumulate(inner, gkl, rr)
                total = m.torus.zero()
                for gkl, rr in inner:
                    total = total + gkl * rr
                if _nonzero(total):
                    _accumulate(outer, gij, total)
        acc = m.torus.zero()
        for gij, x in outer:
            acc = acc + gij * x
        return acc

    def bianchi_residual(self) -> float:
        """max || r_ijkl + r_kijl + r_jkil ||_1 over all indices."""
        n = self.n
        worst = 0.0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        s = self.entry(i, j, k, l) + self.entry(k, i, j, l) + self.entry(j, k, i, l)
                        worst = max(worst, s.coeff_norm1())
        return worst


def curvature_tensor(m: Metric, ct: ChristoffelTable | None = None) -> CurvatureTensor:
    return CurvatureTensor(m, ct if ct is not None else christoffel(m))


@dataclass(frozen=True)
class TraceValue:
    value: complex
    uncertainty: float

    def __abs__(self) -> float:
        return abs(self.value)


def _trace_pair(a: AlgebraElement, b: AlgebraElement) -> TraceValue:
    """tau(a b) with its dropped-mass bound, without forming a b."""
    return TraceValue(trace_product(a, b), trace_product_bound(a, b))


def gb_functional(m: Metric, curv: CurvatureTensor | None = None, cfg: FuncalcConfig = DEFAULT) -> TraceValue:
    """tau(R sqrt(det g)) on the 2-torus."""
    if m.n != 2:
        raise ConfigurationError("the Gauss-Bonnet functional is defined on the 2-torus")
    curv = curv or curvature_tensor(m)
    with precision(cfg.prune_tol):
        return _trace_pair(curv.scalar, m.sqrt_det)


@dataclass(frozen=True)
class EHResult:
    value: complex
    uncertainty: float
    reference: float
    factor: float

    @property
    def ratio(self) -> float:
        """|action| / (factor * reference); 1 when the closed form holds."""
        denom = self.factor * self.reference
        return abs(self.value) / denom if denom else math.nan


def _q_sum(ef: AlgebraElement, emf: AlgebraElement, axes) -> TraceValue:
    total, unc = 0j, 0.0
    for i in axes:
        b = derive(ef, i)
        tv = _trace_pair(b * emf, b)
        total += tv.value
        unc += tv.uncertainty
    return TraceValue(total, unc)


def eh_action(m: Metric, curv: CurvatureTensor | None = None, cfg: FuncalcConfig = DEFAULT) -> EHResult:
    """tau(R sqrt(det g)) on the 4-torus plus its reference magnitude.

    Reference: sum_i tau((d_i e^f) e^{-f} (d_i e^f)) over all axes (factor 3/2)
    for conformal metrics, over the axes with unit metric entry (factor 1/2)
    for the partially conformal ones.
    """
    fam = m.spec.family
    if m.n != 4 or fam not in (Family.CONFORMAL_FLAT, *_CONFORMAL_AXES):
        raise ConfigurationError(f"Einstein-Hilbert action not supported for {fam.value} (n = {m.n})")
    curv = curv or curvature_tensor(m)
    with precision(cfg.prune_tol):
        act = _trace_pair(curv.scalar, m.sqrt_det)
        if fam is Family.CONFORMAL_FLAT:
            ref, factor = _q_sum(m.exps["ef"], m.exps["emf"], range(4)), 1.5
        else:
            flat_axes = [i for i in range(4) if i not in _CONFORMAL_AXES[fam]]
            ref, factor = _q_sum(m.exps["ef"], m.exps["emf"], flat_axes), 0.5
    return EHResult(act.value, act.uncertainty + factor * ref.uncertainty, ref.value.real, factor)


def fk_trace_functional(h: AlgebraElement, cfg: FuncalcConfig = DEFAULT) -> EHResult:
    """tau(R)/pi^2 for R = pi^2 sum_i (-e^{-h} d_i^2(e^h) e^{-h}
    + 3/2 e^{-h} d_i(e^h) e^{-h} d_i(e^h) e^{-h}), with the reference
    sum_i tau(e^{-2h} (d_i e^h) e^{-h} (d_i e^h)) and factor 7/2."""
    if h.n != 4:
        raise ConfigurationError("this curvature functional lives on the 4-torus")
    eh = exp_element(h, cfg)
    emh = exp_element(-h, cfg)
    with precision(cfg.prune_tol):
        em2h = emh * emh
        total, unc, ref, ref_unc = 0j, 0.0, 0j, 0.0
        for i in range(4):
            b = derive(eh, i)
            # by traciality tau(e^{-h} x e^{-h}) = tau(e^{-2h} x)
            lap = _trace_pair(em2h, derive(b, i))
            quad = _trace_pair(em2h * b, emh * b)
            total += -lap.value + 1.5 * quad.value
            unc += lap.uncertainty + 1.5 * quad.uncertainty
            ref += quad.value
            ref_unc += quad.uncertainty
    return EHResult(total, unc + 3.5 * ref_unc, ref.real, 3.5)


def conformal4_scalar_closed(f: AlgebraElement, cfg: FuncalcConfig = DEFAULT) -> AlgebraElement:
    """R = sum_i -3 e^{-2f} d_i^2(e^f) + 3/2 e^{-2f} (d_i e^f) e^{-f} (d_i e^f)
    for the conformal metric e^f on the 4-torus."""
    ef = exp_element(f, cfg)
    emf = exp_element(-f, cfg)
    with precision(cfg.prune_tol):
        em2f = emf * emf
        acc = f.torus.zero()
        for i in range(f.n):
            b = derive(ef, i)
            acc = acc + (derive(b, i).scale(-3.0) + (b * emf * b).scale(1.5))
        return em2f * acc


def metric_scalar_curvature(spec: MetricSpec, cfg: FuncalcConfig = DEFAULT) -> tuple[Metric, CurvatureTensor]:
    m = build_metric(spec, cfg)
    with precision(cfg.prune_tol):
        curv = curvature_tensor(m)
        curv.scalar  # noqa: B018 - force evaluation under the pruning context
    return m, curv


FamilyBuilder = Callable[[AlgebraElement], MetricSpec]
