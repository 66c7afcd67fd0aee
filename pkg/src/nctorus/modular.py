"""The modular operator nabla = -ad_f and analytic functions of it.

With Delta(x) = e^{-f} x e^{f} we have Delta = exp(nabla) and nabla(x) = x f - f x.
nabla is a derivation and is self-adjoint for the pairing tau(x* y), with
norm at most 2 ||f - tau(f)||_1.

Two evaluation routes:

* ``series`` (default): F(nabla) x = sum_m d_m z_m with z_m = nabla^m x / m!
  computed exactly on sparse elements, and a certified tail bound
  sup|d_m| * rho^{M+1}/(M+1)! * e^rho * ||x||_1 booked into ``dropped``.
  Bivariate functions use F(s, t) = sum_{jk} d_jk s^j t^k / (j! k!) and act
  on a product x y by letting s see x and t see y.
* ``spectral``: a dense Hermitian matrix of nabla on a truncation box,
  diagonalized once; used as a cross-check on small 2-torus examples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraElement, ConfigurationError, Torus, derive, precision, trace_product
from .funcalc import DEFAULT, FuncalcConfig, exp_element
from .geometry import conformal4_scalar_closed

__all__ = [
    "MarginError",
    "SpectralFunction",
    "SpectralFunction2",
    "K",
    "G1",
    "EXP",
    "NEG_K_REFLECTED",
    "H",
    "H_CITED",
    "AdOperator",
    "build_ad",
    "apply_fn",
    "apply_fn2",
    "g2_scalar",
    "h_closed",
    "h_defining",
    "h_cited",
    "curvature_modular",
    "curvature_direct",
    "dilaton_curvature",
    "dilaton_coefficients",
    "dilaton_coefficients_derived",
    "projection_corners",
    "grad_eh",
    "grad_eh_printed",
    "eh_omega",
    "modular_identity_suite",
]


class MarginError(ValueError):
    """Input support too close to the truncation box boundary."""


# --------------------------------------------------------------------------
# scalar functions

_SMALL = 1e-4
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


def _k(s):
    s = np.asarray(s, dtype=complex)
    small = np.abs(s) < _SMALL
    safe = np.where(small, 1.0, s)
    series = 1 + s / 2 + s**2 / 6 + s**3 / 24 + s**4 / 120
    return np.where(small, series, np.expm1(safe) / safe)


def g1_scalar(mu):
    """g1(mu) = (mu - 1)/log(mu); g1(e^s) = K(s)."""
    return _real_if_close(_k(np.log(np.asarray(mu, dtype=complex))))


def g2_scalar(s, t):
    """g2(e^s, e^t) = int_{0 <= b <= a <= 1} e^{a s + b t} = int_0^1 a e^{a s} K(a t) da.

    Evaluated by Gauss-Legendre quadrature, so the lines s = 0, t = 0 and
    s + t = 0 need no special casing.
    """
    s = np.asarray(s, dtype=complex)[..., None]
    t = np.asarray(t, dtype=complex)[..., None]
    a = _GL_NODES
    vals = a * np.exp(a * s) * _k(a * t)
    return _real_if_close((vals * _GL_WEIGHTS).sum(axis=-1))


def h_defining(s, t):
    """H(s, t) = -2 g2(e^s, e^t) + 1/2 g1(e^s) g1(e^t)."""
    return _real_if_close(-2.0 * np.asarray(g2_scalar(s, t)) + 0.5 * _k(s) * _k(t))


def h_closed(s, t):
    """[s (e^t - 1)(-3 e^s - 1) + t (e^s - 1)(e^t + 3)] / (2 s t (s + t)), away from its removable lines."""
    s = np.asarray(s, dtype=complex)
    t = np.asarray(t, dtype=complex)
    num = s * np.expm1(t) * (-3 * np.exp(s) - 1) + t * np.expm1(s) * (np.exp(t) + 3)
    return _real_if_close(num / (2 * s * t * (s + t)))


def h_cited(s, t):
    """-2 (K(s+t) - K(t))/s - 3/2 K(t) K(s) = -2 g2(e^t, e^s) - 3/2 K(s) K(t)."""
    return _real_if_close(-2.0 * np.asarray(g2_scalar(t, s)) - 1.5 * _k(s) * _k(t))


def _real_if_close(x):
    x = np.asarray(x)
    if np.iscomplexobj(x) and np.all(np.abs(x.imag) <= 1e-14 * np.maximum(1.0, np.abs(x.real))):
        x = x.real
    return x[()] if x.ndim == 0 else x


@dataclass(frozen=True)
class SpectralFunction:
    """F(s) = sum_m coeff(m) s^m / m! with |coeff(m)| <= bound."""

    name: str
    evaluate: Callable
    coeff: Callable[[int], float]
    bound: float = 1.0

    def __call__(self, s):
        return self.evaluate(s)


@dataclass(frozen=True)
class SpectralFunction2:
    """F(s, t) = sum_{jk} coeff(j, k) s^j t^k / (j! k!) with |coeff| <= bound."""

    name: str
    evaluate: Callable
    coeff: Callable[[int, int], float]
    bound: float = 1.0

    def __call__(self, s, t):
        return self.evaluate(s, t)

    @staticmethod
    def of_first(fn: SpectralFunction) -> "SpectralFunction2":
        """(s, t) -> fn(s)."""
        return SpectralFunction2(
            f"{fn.name}(s)",
            lambda s, t: fn(s) * np.ones_like(np.asarray(t, dtype=float)),
            lambda j, k: fn.coeff(j) if k == 0 else 0.0,
            fn.bound,
        )


K = SpectralFunction("K", lambda s: _real_if_close(_k(s)), lambda m: 1.0 / (m + 1))
G1 = SpectralFunction("g1(exp)", lambda s: _real_if_close(_k(s)), lambda m: 1.0 / (m + 1))
EXP = SpectralFunction("exp", lambda s: np.exp(s), lambda m: 1.0)
# (e^{-s} - 1)/s = -K(-s)
NEG_K_REFLECTED = SpectralFunction(
    "(exp(-s)-1)/s", lambda s: _real_if_close(-_k(-np.asarray(s, dtype=complex))), lambda m: (-1.0) ** (m + 1) / (m + 1)
)
IDENTITY = SpectralFunction("id", lambda s: s, lambda m: 1.0 if m == 1 else 0.0)


def _g2_coeff(j: int, k: int) -> float:
    # int_{0<=b<=a<=1} a^j b^k = 1 / ((k+1)(j+k+2))
    return 1.0 / ((k + 1) * (j + k + 2))


H = SpectralFunction2(
    "H",
    h_defining,
    lambda j, k: -2.0 * _g2_coeff(j, k) + 0.5 / ((j + 1) * (k + 1)),
    2.5,
)
H_CITED = SpectralFunction2(
    "H_cited",
    h_cited,
    lambda j, k: -2.0 * _g2_coeff(k, j) - 1.5 / ((j + 1) * (k + 1)),
    3.5,
)
G2 = SpectralFunction2("g2", lambda s, t: g2_scalar(s, t), _g2_coeff, 1.0)


# --------------------------------------------------------------------------
# the operator


@dataclass
class AdOperator:
    """nabla = -ad_f.  ``box_radius`` only matters for the dense matrix route."""

    f: AlgebraElement
    box_radius: int | None = None
    _spectral: tuple | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.f.self_adjoint_defect() > 1e-10 * max(1.0, self.f.norm1()):
            raise ValueError("the modular operator needs a self-adjoint f")

    @property
    def torus(self) -> Torus:
        return self.f.torus

    @cached_property
    def centered(self) -> AlgebraElement:
        return self.f - self.f.trace()

    @cached_property
    def norm_bound(self) -> float:
        """||nabla|| <= 2 ||f - tau(f)||_1."""
        return 2.0 * self.centered.norm1()

    @cached_property
    def degree(self) -> int:
        return self.f.degree()

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        g = self.centered
        return x * g - g * x

    # dense route ------------------------------------------------------------
    @cached_property
    def _axes_radius(self) -> np.ndarray:
        if self.box_radius is None:
            raise ConfigurationError("the dense route needs a box_radius")
        return np.full(self.torus.n, int(self.box_radius))

    @cached_property
    def basis(self) -> np.ndarray:
        r = self._axes_radius
        grids = np.meshgrid(*[np.arange(-k, k + 1) for k in r], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    @cached_property
    def _index(self) -> dict:
        return {tuple(k): i for i, k in enumerate(self.basis.tolist())}

    @cached_property
    def matrix(self) -> np.ndarray:
        """Column l holds the in-box coefficients of nabla(U^l)."""
        dim = self.basis.shape[0]
        if dim > 6000:
            raise ConfigurationError(f"dense box of dimension {dim} is too large")
        mat = np.zeros((dim, dim), dtype=complex)
        for col, k in enumerate(self.basis):
            img = self.apply(self.torus.monomial(k))
            for kk, v in zip(img.keys.tolist(), img.vals):
                row = self._index.get(tuple(kk))
                if row is not None:
                    mat[row, col] = v
        return mat

    def spectral(self) -> tuple[np.ndarray, np.ndarray]:
        if self._spectral is None:
            mat = self.matrix
            herm = 0.5 * (mat + mat.conj().T)
            self._spectral = np.linalg.eigh(herm)
        return self._spectral

    def check_margin(self, x: AlgebraElement) -> None:
        """Support radius of x plus deg f must stay within box_radius - deg f."""
        r = int(np.abs(x.keys).max()) if len(x) else 0
        if r + self.degree > int(self.box_radius) - self.degree:
            raise MarginError(
                f"support radius {r} with deg f = {self.degree} violates the margin of box radius {self.box_radius}"
            )

    def to_vector(self, x: AlgebraElement) -> np.ndarray:
        self.check_margin(x)
        vec = np.zeros(self.basis.shape[0], dtype=complex)
        for k, v in zip(x.keys.tolist(), x.vals):
            vec[self._index[tuple(k)]] = v
        return vec

    def from_vector(self, vec: np.ndarray) -> AlgebraElement:
        keep = vec != 0
        return AlgebraElement(self.torus, self.basis[keep], vec[keep])


def build_ad(f: AlgebraElement, box_radius: int | None = None) -> AdOperator:
    op = AdOperator(f, box_radius)
    if box_radius is not None and 2 * op.degree > box_radius:
        raise MarginError(f"box radius {box_radius} cannot contain ad_f images (deg f = {op.degree})")
    return op


# --------------------------------------------------------------------------
# application


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-14
    max_terms: int = 200
    prune_tol: float = 1e-18


DEFAULT_SERIES = SeriesConfig()


def _tail(rho: float, m: int) -> float:
    """sum_{j > m} rho^j / j!  <=  rho^{m+1}/(m+1)! * e^rho."""
    return math.exp((m + 1) * math.log(rho) - math.lgamma(m + 2) + rho) if rho > 0 else 0.0


def _iterates(op: AdOperator, x: AlgebraElement, cfg: SeriesConfig, bound: float):
    """z_m = nabla^m x / m! until the certified tail is below rel_tol * ||x||."""
    rho = op.norm_bound
    scale = max(x.norm1(), 1e-300)
    z = x
    out = [z]
    m = 0
    while True:
        if rho == 0 or bound * _tail(rho, m) * scale <= cfg.rel_tol * scale:
            break
        if m >= cfg.max_terms:
            raise ArithmeticError(f"series for the modular operator did not converge in {cfg.max_terms} terms")
        m += 1
        z = op.apply(z).scale(1.0 / m)
        out.append(z)
    return out, (bound * _tail(rho, m) * scale if rho > 0 else 0.0)


def apply_fn(
    op: AdOperator,
    fn: SpectralFunction,
    x: AlgebraElement,
    *,
    method: str = "series",
    cfg: SeriesConfig = DEFAULT_SERIES,
) -> AlgebraElement:
    """fn(nabla)(x)."""
    if method == "spectral":
        w, v = op.spectral()
        c = v.conj().T @ op.to_vector(x)
        return op.from_vector(v @ (np.asarray(fn(w), dtype=complex) * c))
    if method != "series":
        raise ValueError("method must be 'series' or 'spectral'")
    with precision(cfg.prune_tol):
        zs, tail = _iterates(op, x, cfg, fn.bound)
        acc = x.torus.zero()
        for m, z in enumerate(zs):
            d = fn.coeff(m)
            if d != 0:
                acc = acc + z.scale(d)
    return acc.with_dropped(acc.dropped + tail)


def apply_fn2(
    op: AdOperator,
    fn2: SpectralFunction2,
    x: AlgebraElement,
    y: AlgebraElement,
    *,
    method: str = "series",
    cfg: SeriesConfig = DEFAULT_SERIES,
) -> AlgebraElement:
    """fn2(nabla, nabla)(x . y) = sum_{a,b} fn2(l_a, l_b) x_a y_b over eigencomponents."""
    if method == "spectral":
        w, v = op.spectral()
        vh = v.conj().T
        xa = vh @ op.to_vector(x)
        yb = vh @ op.to_vector(y)
        comps_x = [op.from_vector(v[:, i] * xa[i]) for i in range(len(w)) if abs(xa[i]) > 1e-15]
        lam_x = [w[i] for i in range(len(w)) if abs(xa[i]) > 1e-15]
        acc = x.torus.zero()
        for lam, cx in zip(lam_x, comps_x):
            weights = np.asarray(fn2(lam, w), dtype=complex) * yb
            acc = acc + cx * op.from_vector(v @ weights)
        return acc
    if method != "series":
        raise ValueError("method must be 'series' or 'spectral'")
    with precision(cfg.prune_tol):
        zs, tail_x = _iterates(op, x, cfg, 1.0)
        ws, tail_y = _iterates(op, y, cfg, 1.0)
        acc = x.torus.zero()
        for j, z in enumerate(zs):
            coeffs = [fn2.coeff(j, k) for k in range(len(ws))]
            if not any(coeffs):
                continue
            inner = x.torus.zero()
            for c, w in zip(coeffs, ws):
                if c != 0:
                    inner = inner + w.scale(c)
            acc = acc + z * inner
    rho = op.norm_bound
    total_x = x.norm1() * math.exp(rho)
    total_y = y.norm1() * math.exp(rho)
    tail = fn2.bound * (tail_x * total_y + total_x * tail_y)
    return acc.with_dropped(acc.dropped + tail)


# --------------------------------------------------------------------------
# curvature


def curvature_modular(f: AlgebraElement, cfg: FuncalcConfig = DEFAULT, scfg: SeriesConfig = DEFAULT_SERIES) -> AlgebraElement:
    """R = -3 e^{-f} K(nabla)(sum_i d_i^2 f) + 3 e^{-f} sum_i H(nabla, nabla)(d_i f . d_i f)."""
    if f.n != 4:
        raise ConfigurationError("the modular form of the curvature is stated on the 4-torus")
    op = build_ad(f)
    lap = f.torus.zero()
    quad = f.torus.zero()
    for i in range(4):
        df = derive(f, i)
        lap = lap + derive(df, i)
        if len(df):
            quad = quad + apply_fn2(op, H, df, df, cfg=scfg)
    inner = apply_fn(op, K, lap, cfg=scfg).scale(-3.0) + quad.scale(3.0)
    emf = exp_element(-f, cfg)
    with precision(cfg.prune_tol):
        return emf * inner


def curvature_direct(f: AlgebraElement, cfg: FuncalcConfig = DEFAULT) -> AlgebraElement:
    """sum_i -3 e^{-2f} d_i^2(e^f) + 3/2 e^{-2f} (d_i e^f) e^{-f} (d_i e^f)."""
    return conformal4_scalar_closed(f, cfg)


def projection_corners(p: AlgebraElement, x: AlgebraElement) -> dict[str, AlgebraElement]:
    """The four corners p x p, p x (1-p), (1-p) x p, (1-p) x (1-p)."""
    q = p.torus.one() - p
    px, qx = p * x, q * x
    return {"pp": px * p, "pq": px * q, "qp": qx * p, "qq": qx * q}


def dilaton_coefficients(s: float) -> tuple[float, float, float, float]:
    """Coefficients of lap p, p lap p, (lap p) p and p (lap p) p in the closed dilaton form (R scaled by e^{sp}/3)."""
    ch, sh = math.cosh(s), math.sinh(s)
    return (
        2.5 - 2.5 * ch - sh,
        -3.5 + math.exp(-s) + 2.5 * ch + sh,
        -1.5 - math.exp(s) + 2.5 * ch + sh,
        -4.0 * s + 4.0 * sh,
    )


def dilaton_coefficients_derived(s: float) -> tuple[float, float, float, float]:
    """Same four slots, obtained from the direct curvature via the projection identities
    sum (d_i p)^2 = (L - Lp - pL)/2 and sum (d_i p) p (d_i p) = (L - Lp - pL + pLp)/2."""
    a, b = math.expm1(s), math.expm1(-s)
    lin = -a + a * a * math.exp(-s) / 4
    cross = -a * a * math.exp(-s) / 4
    quad = a * a * b / 4
    return lin, cross + b * (lin + cross), cross, (1 + b) * quad + b * cross


def _check_projection(p: AlgebraElement, tol: float) -> None:
    if (p * p - p).coeff_norm1() > tol or p.self_adjoint_defect() > tol:
        raise ValueError("dilaton_curvature needs a self-adjoint idempotent")


def dilaton_curvature(
    p: AlgebraElement,
    s: float,
    cfg: FuncalcConfig = DEFAULT,
    *,
    tol: float = 1e-7,
    coefficients=dilaton_coefficients,
) -> AlgebraElement:
    """R for f = s p from a four-coefficient closed form: 3 e^{-sp} (c1 L + c2 pL + c3 Lp + c4 pLp), L = lap p."""
    _check_projection(p, tol)
    lap = p.torus.zero()
    for i in range(p.n):
        lap = lap + derive(derive(p, i), i)
    c1, c2, c3, c4 = coefficients(s)
    with precision(cfg.prune_tol):
        pl = p * lap
        body = lap.scale(c1) + pl.scale(c2) + (lap * p).scale(c3) + (pl * p).scale(c4)
        return exp_element(p.scale(-s), cfg) * body.scale(3.0)


# --------------------------------------------------------------------------
# Einstein-Hilbert functional and its gradient


def eh_omega(f: AlgebraElement, cfg: FuncalcConfig = DEFAULT) -> float:
    """Omega(f) = 3/2 sum_i tau((d_i e^f) e^{-f} (d_i e^f))."""
    ef = exp_element(f, cfg)
    emf = exp_element(-f, cfg)
    total = 0.0
    with precision(cfg.prune_tol):
        for i in range(f.n):
            b = derive(ef, i)
            total += trace_product(b * emf, b).real
    return 1.5 * total


def grad_eh(f: AlgebraElement, cfg: FuncalcConfig = DEFAULT, scfg: SeriesConfig = DEFAULT_SERIES) -> AlgebraElement:
    """Element G with tau(h G) = d/dt Omega(f + t h) at t = 0.

    G = -3/2 e^f K(nabla)( sum_i d_i(e^{-f} b_i) + d_i(b_i e^{-f}) + e^{-f} b_i^2 e^{-f} ), b_i = d_i e^f,
    from d/dt e^{f+th} = int_0^1 e^{(1-u) f} h e^{u f} du, integration by parts and traciality.
    """
    ef = exp_element(f, cfg)
    emf = exp_element(-f, cfg)
    op = build_ad(f)
    with precision(cfg.prune_tol):
        w = f.torus.zero()
        for i in range(f.n):
            b = derive(ef, i)
            left, right = emf * b, b * emf
            w = w + derive(left, i) + derive(right, i) + left * right
        return (ef * apply_fn(op, K, w, cfg=scfg)).scale(-1.5)


def grad_eh_printed(f: AlgebraElement, cfg: FuncalcConfig = DEFAULT, scfg: SeriesConfig = DEFAULT_SERIES) -> AlgebraElement:
    """The three-term expression as printed (trace symbol dropped):
    3/2 sum_i e^f F(d_i(e^{-f} b)) + e^{-f} F(b b) + e^f F(d_i(b e^{-f})), F(s) = (e^{-s}-1)/s."""
    ef = exp_element(f, cfg)
    emf = exp_element(-f, cfg)
    op = build_ad(f)
    with precision(cfg.prune_tol):
        acc = f.torus.zero()
        for i in range(f.n):
            b = derive(ef, i)
            acc = acc + ef * apply_fn(op, NEG_K_REFLECTED, derive(emf * b, i), cfg=scfg)
            acc = acc + emf * apply_fn(op, NEG_K_REFLECTED, b * b, cfg=scfg)
            acc = acc + ef * apply_fn(op, NEG_K_REFLECTED, derive(b * emf, i), cfg=scfg)
        return acc.scale(1.5)


# --------------------------------------------------------------------------
# identity suite


def modular_identity_suite(
    f: AlgebraElement | None = None,
    p: AlgebraElement | None = None,
    s: float = 1.0,
    cfg: FuncalcConfig = DEFAULT,
    scfg: SeriesConfig = DEFAULT_SERIES,
) -> dict[str, float]:
    """l1 residuals of the element identities; pass f for the exponential
    identities and a projection p (with dilaton scale s) for the corner ones."""
    out: dict[str, float] = {}
    if f is not None:
        op = build_ad(f)
        ef = exp_element(f, cfg)
        emf = exp_element(-f, cfg)
        with precision(cfg.prune_tol):
            for i in range(f.n):
                df = derive(f, i)
                lhs1 = emf * derive(ef, i)
                rhs1 = apply_fn(op, G1, df, cfg=scfg)
                out[f"first_derivative[{i}]"] = lhs1.distance(rhs1)
                lhs2 = emf * derive(derive(ef, i), i)
                rhs2 = apply_fn(op, G1, derive(df, i), cfg=scfg) + apply_fn2(op, G2, df, df, cfg=scfg).scale(2.0)
                out[f"second_derivative[{i}]"] = lhs2.distance(rhs2)
            x = f.torus.one() + df if len(df) else f.torus.one()
            out["conjugation"] = apply_fn(op, EXP, x, cfg=scfg).distance(emf * x * ef)
    if p is not None:
        torus = p.torus
        lap = torus.zero()
        sq = torus.zero()
        for i in range(p.n):
            dp = derive(p, i)
            lap = lap + derive(dp, i)
            sq = sq + dp * dp
        q = torus.one() - p
        out["delta_square"] = sq.distance((q * lap - lap * p).scale(0.5))
        corners = projection_corners(p, lap)
        total = corners["pp"] + corners["pq"] + corners["qp"] + corners["qq"]
        out["laplacian_corners"] = total.distance(lap)
        op = build_ad(p.scale(s))
        for name, eig in (("pp", 0.0), ("pq", -s), ("qp", s), ("qq", 0.0)):
            out[f"eigen_{name}"] = op.apply(corners[name]).distance(corners[name].scale(eig))
        lhs = apply_fn(op, K, lap.scale(s), cfg=scfg)
        rhs = (
            (corners["pp"] + corners["qq"]).scale(s)
            + corners["pq"].scale(1 - math.exp(-s))
            + corners["qp"].scale(math.exp(s) - 1)
        )
        out["k_of_nabla"] = lhs.distance(rhs)
    return out


def scalar_identity_residuals(grid: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 3.0)) -> dict[str, float]:
    """Residuals of the scalar identities among K, g1, g2 and the two H forms."""
    out: dict[str, float] = {}
    ss = np.linspace(-3, 3, 61)
    out["g1_exp_vs_K"] = float(np.max(np.abs(g1_scalar(np.exp(ss)) - _k(ss))))
    pts = [(a, b) for a in (-2.0, -0.7, 0.3, 1.1, 2.5) for b in (-1.9, -0.4, 0.6, 1.7)]
    out["H_closed_vs_defining"] = max(abs(h_closed(a, b) - h_defining(a, b)) for a, b in pts)
    sum_res, diff_res, sum_res_h, diff_res_h = 0.0, 0.0, 0.0, 0.0
    for s in grid:
        target_sum = -5.0 / s**2 * (math.exp(s) + math.exp(-s) - 2)
        target_diff = (4 * s - 4 * math.sinh(s)) / s**2
        sum_res = max(sum_res, abs(h_cited(s, -s) + h_cited(-s, s) - target_sum))
        diff_res = max(diff_res, abs(h_cited(-s, s) - h_cited(s, -s) - target_diff))
        sum_res_h = max(sum_res_h, abs(h_defining(s, -s) + h_defining(-s, s) - target_sum))
        diff_res_h = max(diff_res_h, abs(h_defining(-s, s) - h_defining(s, -s) - target_diff))
    out["H_cited_sum"] = sum_res
    out["H_cited_difference"] = diff_res
    out["H_sum"] = sum_res_h
    out["H_difference"] = diff_res_h
    return out
