"""Smooth noncommutative tori as concrete sparse algebras.

An element is a finitely supported twisted Laurent series

    a = sum_k a_k U^k,    U^k = U_1^{k_1} ... U_n^{k_n}   (normal order)

stored as a sorted array of multi-indices plus a complex coefficient array,
together with ``dropped``: a conservative l1 bound on everything that was
discarded by truncation or pruning along the way.

Normal-ordered product.  From U_j U_k = e(theta_jk) U_k U_j, with
e(x) = exp(2 pi i x), moving U_r^{a_r} (r > s) to the right of U_s^{b_s}
costs e(theta_rs a_r b_s), hence

    U^a U^b = phi(a, b) U^{a+b},   phi(a, b) = e(sum_{r>s} theta_rs a_r b_s).

The adjoint of a monomial is (U^k)* = c(k) U^{-k} with
c(k) = e(sum_{r>s} theta_rs k_r k_s), which is forced by (U^k)* U^k = 1.
"""

from __future__ import annotations

import contextlib
import contextvars
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from numba import njit

__all__ = [
    "ConfigurationError",
    "ThetaMatrix",
    "DerivationScale",
    "Torus",
    "AlgebraElement",
    "precision",
    "mul",
    "adjoint",
    "derive",
    "laplacian",
    "trace",
    "one_norm",
    "truncate",
    "commutator",
    "inner",
    "golden_theta",
    "trace_product",
    "GOLDEN",
]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

# Key encoding: offset each exponent by _OFFSET and pack in base _BASE,
# axis 0 most significant, so integer order == lexicographic order.
_BASE = 1 << 15
_OFFSET = 1 << 14
_MAX_EXPONENT = _OFFSET // 2



class ConfigurationError(ValueError):
    """Elements from different tori, bad axes, malformed theta, ..."""


_prune_tol: contextvars.ContextVar[float] = contextvars.ContextVar("prune_tol", default=0.0)


@contextlib.contextmanager
def precision(prune: float) -> Iterator[None]:
    """Drop product coefficients with modulus <= ``prune`` inside the block.

    Dropped moduli are added to ``dropped`` so error bounds stay conservative.
    """
    if prune < 0:
        raise ValueError("prune tolerance must be nonnegative")
    token = _prune_tol.set(float(prune))
    try:
        yield
    finally:
        _prune_tol.reset(token)


def current_prune() -> float:
    return _prune_tol.get()


@dataclass(frozen=True)
class ThetaMatrix:
    """Real antisymmetric n x n deformation matrix (n in {2, 4})."""

    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(float(x) for x in row) for row in self.entries)
        n = len(rows)
        if n not in (2, 4):
            raise ConfigurationError(f"only n = 2 or 4 is supported, got n = {n}")
        if any(len(row) != n for row in rows):
            raise ConfigurationError("theta must be square")
        for j in range(n):
            if rows[j][j] != 0.0:
                raise ConfigurationError("theta must have zero diagonal")
            for k in range(n):
                if rows[j][k] != -rows[k][j]:
                    raise ConfigurationError("theta must be exactly antisymmetric")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def two(cls, theta: float) -> "ThetaMatrix":
        return cls(((0.0, theta), (-theta, 0.0)))

    @classmethod
    def from_upper(cls, n: int, upper: Mapping[tuple[int, int], float]) -> "ThetaMatrix":
        """Build from {(j, k): theta_jk} with 0 <= j < k < n."""
        m = [[0.0] * n for _ in range(n)]
        for (j, k), v in upper.items():
            if not 0 <= j < k < n:
                raise ConfigurationError(f"bad upper index {(j, k)}")
            m[j][k] = float(v)
            m[k][j] = -float(v)
        return cls(tuple(tuple(r) for r in m))

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def lower(self) -> np.ndarray:
        """Strictly lower-triangular part L[r, s] = theta_rs for r > s."""
        return np.tril(self.array(), k=-1)


def golden_theta(n: int = 2, base: float = GOLDEN) -> ThetaMatrix:
    """Deformation built from one angle: theta_01 = base and, when n = 4, the
    other entries frac(m sqrt(m) base) for m = 2..6 in row-major order.  The
    default base is the golden ratio conjugate."""
    if not 0.0 < base < 1.0:
        raise ConfigurationError("base angle must lie in (0, 1)")
    if n == 2:
        return ThetaMatrix.two(base)
    if n == 4:
        upper = {}
        mult = 1
        for j in range(4):
            for k in range(j + 1, 4):
                upper[(j, k)] = math.fmod(mult * base * math.sqrt(mult), 1.0)
                mult += 1
        return ThetaMatrix.from_upper(4, upper)
    raise ConfigurationError(f"only n = 2 or 4 is supported, got n = {n}")


@dataclass(frozen=True)
class DerivationScale:
    """Unit multiplying k_j in d_j(U^k) = scale * k_j * U^k: ``i`` or ``2 pi i``."""

    scale: complex = 1j

    def __post_init__(self) -> None:
        s = complex(self.scale)
        if s.real != 0.0 or not (math.isclose(abs(s), 1.0) or math.isclose(abs(s), 2 * math.pi)):
            raise ConfigurationError("derivation scale must be i or 2*pi*i")
        object.__setattr__(self, "scale", s)

    @classmethod
    def unit(cls) -> "DerivationScale":
        return cls(1j)

    @classmethod
    def two_pi(cls) -> "DerivationScale":
        return cls(2j * math.pi)

    @classmethod
    def parse(cls, name: str) -> "DerivationScale":
        if name in ("unit", "1", "i"):
            return cls.unit()
        if name in ("2pi", "two_pi", "2pii"):
            return cls.two_pi()
        raise ConfigurationError(f"unknown derivation scale {name!r}")

    @property
    def name(self) -> str:
        return "unit" if math.isclose(abs(self.scale), 1.0) else "two_pi"


@dataclass(frozen=True)
class Torus:
    """The algebra A_theta^infty with a fixed choice of derivation scale."""

    theta: ThetaMatrix
    dscale: DerivationScale = field(default_factory=DerivationScale)

    @property
    def n(self) -> int:
        return self.theta.n

    @property
    def scale(self) -> complex:
        return self.dscale.scale

    @classmethod
    def default(cls, n: int = 2, scale: DerivationScale | None = None) -> "Torus":
        return cls(golden_theta(n), scale or DerivationScale())

    # constructors -----------------------------------------------------------
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros((0, self.n), dtype=np.int64), np.zeros(0, dtype=complex))

    def scalar(self, c: complex) -> "AlgebraElement":
        return self.monomial((0,) * self.n, c)

    def one(self) -> "AlgebraElement":
        return self.scalar(1.0)

    def monomial(self, k: Sequence[int], c: complex = 1.0) -> "AlgebraElement":
        k = tuple(int(x) for x in k)
        if len(k) != self.n:
            raise ConfigurationError(f"multi-index {k} has wrong length for n = {self.n}")
        return AlgebraElement.from_terms(self, {k: c})

    def gen(self, j: int, power: int = 1) -> "AlgebraElement":
        """U_j^power with 0-based axis j."""
        k = [0] * self.n
        k[j] = power
        return self.monomial(k)

    def from_terms(self, terms: Mapping[Sequence[int], complex], dropped: float = 0.0) -> "AlgebraElement":
        return AlgebraElement.from_terms(self, terms, dropped)


def _encode(keys: np.ndarray) -> np.ndarray:
    n = keys.shape[1]
    codes = np.zeros(keys.shape[0], dtype=np.int64)
    for j in range(n):
        codes = codes * _BASE + (keys[:, j] + _OFFSET)
    return codes


def _decode(codes: np.ndarray, n: int) -> np.ndarray:
    keys = np.empty((codes.shape[0], n), dtype=np.int64)
    c = codes.copy()
    for j in range(n - 1, -1, -1):
        keys[:, j] = c % _BASE - _OFFSET
        c //= _BASE
    return keys


def _canonical(torus: Torus, codes: np.ndarray, vals: np.ndarray, dropped: float) -> "AlgebraElement":
    """Merge duplicate codes, drop exact zeros, sort."""
    if codes.size == 0:
        return AlgebraElement(torus, np.zeros((0, torus.n), dtype=np.int64), np.zeros(0, dtype=complex), dropped)
    uniq, inv = np.unique(codes, return_inverse=True)
    re = np.bincount(inv, weights=vals.real, minlength=uniq.size)
    im = np.bincount(inv, weights=vals.imag, minlength=uniq.size)
    merged = re + 1j * im
    keep = merged != 0
    return AlgebraElement(torus, _decode(uniq[keep], torus.n), merged[keep], dropped)


def _pruned(torus: Torus, keys: np.ndarray, vals: np.ndarray, dropped: float, tol: float) -> "AlgebraElement":
    if tol > 0 and vals.size:
        mags = np.abs(vals)
        small = mags <= tol
        if small.any():
            dropped = dropped + float(mags[small].sum())
            keys, vals = keys[~small], vals[~small]
    return AlgebraElement(torus, keys, vals, dropped)


class AlgebraElement:
    """Immutable finitely supported element of A_theta^infty.

    Supports ``+ - *`` with other elements and scalars; ``*`` is the twisted
    product.  Equality is not overloaded; use :meth:`distance`.
    """

    __slots__ = ("torus", "keys", "vals", "dropped")

    def __init__(self, torus: Torus, keys: np.ndarray, vals: np.ndarray, dropped: float = 0.0):
        keys = np.asarray(keys, dtype=np.int64).reshape(-1, torus.n)
        vals = np.asarray(vals, dtype=complex).reshape(-1)
        if keys.shape[0] != vals.shape[0]:
            raise ValueError("keys and vals length mismatch")
        if dropped < 0 or not math.isfinite(dropped):
            raise ValueError("dropped mass must be finite and nonnegative")
        if keys.size and np.abs(keys).max() >= _MAX_EXPONENT:
            raise OverflowError("Fourier exponent out of supported range")
        keys.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "torus", torus)
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "vals", vals)
        object.__setattr__(self, "dropped", float(dropped))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    # construction -------------------------------------------------------------
    @classmethod
    def from_terms(cls, torus: Torus, terms: Mapping[Sequence[int], complex], dropped: float = 0.0) -> "AlgebraElement":
        if not terms:
            return cls(torus, np.zeros((0, torus.n), dtype=np.int64), np.zeros(0, dtype=complex), dropped)
        keys = np.array([tuple(int(x) for x in k) for k in terms], dtype=np.int64).reshape(-1, torus.n)
        if keys.shape[1] != torus.n:
            raise ConfigurationError("multi-index length does not match torus dimension")
        vals = np.array([complex(v) for v in terms.values()], dtype=complex)
        return _canonical(torus, _encode(keys), vals, dropped)

    # basic queries ------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.torus.n

    def __len__(self) -> int:
        return self.vals.shape[0]

    def terms(self) -> dict[tuple[int, ...], complex]:
        return {tuple(int(x) for x in k): complex(v) for k, v in zip(self.keys, self.vals)}

    def coeff(self, k: Sequence[int]) -> complex:
        code = _encode(np.asarray([k], dtype=np.int64))[0]
        codes = _encode(self.keys)
        i = np.searchsorted(codes, code)
        if i < codes.size and codes[i] == code:
            return complex(self.vals[i])
        return 0j

    def is_zero(self) -> bool:
        return self.vals.size == 0

    def degree(self) -> int:
        """max_j |k_j| over the support (0 for the empty element)."""
        return int(np.abs(self.keys).max()) if self.keys.size else 0

    def norm1(self) -> float:
        return float(np.abs(self.vals).sum()) + self.dropped

    def coeff_norm1(self) -> float:
        return float(np.abs(self.vals).sum())

    def trace(self) -> complex:
        return self.coeff((0,) * self.n)

    def __repr__(self) -> str:
        if self.is_zero():
            body = "0"
        else:
            shown = [f"({v:.6g})U^{tuple(int(x) for x in k)}" for k, v in zip(self.keys[:6], self.vals[:6])]
            body = " + ".join(shown) + (" + ..." if len(self) > 6 else "")
        return f"AlgebraElement[{len(self)} terms, dropped={self.dropped:.2e}]({body})"

    # arithmetic ----------------------------------------------------------------
    def _check(self, other: "AlgebraElement") -> None:
        if other.torus != self.torus:
            raise ConfigurationError("elements belong to different tori")

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return self.torus.scalar(complex(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return AlgebraElement(self.torus, self.keys, self.vals, self.dropped + other.dropped)
        if self.is_zero():
            return AlgebraElement(self.torus, other.keys, other.vals, self.dropped + other.dropped)
        codes = np.concatenate([_encode(self.keys), _encode(other.keys)])
        vals = np.concatenate([self.vals, other.vals])
        return _canonical(self.torus, codes, vals, self.dropped + other.dropped)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.torus, self.keys, -self.vals, self.dropped)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: complex) -> "AlgebraElement":
        c = complex(c)
        if c == 0:
            return self.torus.zero()
        return AlgebraElement(self.torus, self.keys, self.vals * c, self.dropped * abs(c))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(1.0 / complex(other))
        return NotImplemented

    def __matmul__(self, other):
        return mul(self, other)

    # structure ----------------------------------------------------------------
    def adjoint(self) -> "AlgebraElement":
        return adjoint(self)

    def derive(self, j: int) -> "AlgebraElement":
        return derive(self, j)

    def truncate(self, box_radius: int) -> "AlgebraElement":
        return truncate(self, box_radius)

    def prune(self, tol: float) -> "AlgebraElement":
        return _pruned(self.torus, self.keys, self.vals, self.dropped, tol)

    def with_dropped(self, dropped: float) -> "AlgebraElement":
        return AlgebraElement(self.torus, self.keys, self.vals, dropped)

    def real_part(self) -> "AlgebraElement":
        """(a + a*) / 2."""
        return (self + adjoint(self)).scale(0.5)

    def distance(self, other: "AlgebraElement") -> float:
        """l1 norm of the coefficient difference (dropped masses ignored)."""
        return (self - other).coeff_norm1()

    def bound_distance(self, other: "AlgebraElement") -> float:
        """Coefficient distance plus both dropped masses: a bound on the true distance."""
        return self.distance(other) + self.dropped + other.dropped

    def self_adjoint_defect(self) -> float:
        return self.distance(adjoint(self))

    # serialization ------------------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "theta": [list(row) for row in self.torus.theta.entries],
            "scale": self.torus.dscale.name,
            "coeffs": [[[int(x) for x in k], [float(v.real), float(v.imag)]] for k, v in zip(self.keys, self.vals)],
            "dropped": self.dropped,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "AlgebraElement":
        theta = ThetaMatrix(tuple(tuple(r) for r in obj["theta"]))
        torus = Torus(theta, DerivationScale.parse(obj.get("scale", "unit")))
        terms = {tuple(k): complex(re, im) for k, (re, im) in obj["coeffs"]}
        return cls.from_terms(torus, terms, float(obj.get("dropped", 0.0)))

    @classmethod
    def from_json(cls, text: str) -> "AlgebraElement":
        return cls.from_json_obj(json.loads(text))


# ---------------------------------------------------------------------------
# operations


@njit(cache=True)
def _twisted_product(a_first, a_rest, a_grp, b_first, b_rest, b_pre, b_run_end, avals, bvals, powers, slab_size):
    """Sum all pairwise products into output cells, one slab of fixed first coordinate at a time.

    Inputs are sorted lexicographically.  ``*_rest`` are linear offsets of the
    remaining coordinates inside the output box, so cell = a_rest + b_rest.
    The phase of the pair (p, q) is prod_s powers[a_grp[p], s, b_pre[q, s]]; it only
    depends on the prefix of b without its last coordinate, so it is computed
    once per run of equal prefixes (b_run_end[q] ends the run starting at q).
    Returns (first coordinate, cell, value) triples sorted lexicographically.
    """
    nphase = b_pre.shape[1]
    a_starts = [0]
    for p in range(1, a_first.shape[0]):
        if a_first[p] != a_first[p - 1]:
            a_starts.append(p)
    a_starts.append(a_first.shape[0])
    b_lo = b_first[0]
    b_hi = b_first[b_first.shape[0] - 1]
    b_start = np.full(b_hi - b_lo + 1, -1, dtype=np.int64)
    b_stop = np.full(b_hi - b_lo + 1, -1, dtype=np.int64)
    for q in range(b_first.shape[0]):
        g = b_first[q] - b_lo
        if b_start[g] < 0:
            b_start[g] = q
        b_stop[g] = q + 1

    slab = np.zeros(slab_size, dtype=np.complex128)
    hit = np.zeros(slab_size, dtype=np.bool_)
    touched = np.empty(slab_size, dtype=np.int64)
    cap = 1024
    out_first = np.empty(cap, dtype=np.int64)
    out_cell = np.empty(cap, dtype=np.int64)
    out_val = np.empty(cap, dtype=np.complex128)
    size = 0
    lo = a_first[0] + b_lo
    hi = a_first[a_first.shape[0] - 1] + b_hi
    for x0 in range(lo, hi + 1):
        ntouched = 0
        for g in range(len(a_starts) - 1):
            a0 = a_first[a_starts[g]]
            bg = x0 - a0 - b_lo
            if bg < 0 or bg > b_hi - b_lo or b_start[bg] < 0:
                continue
            q0 = b_start[bg]
            for p in range(a_starts[g], a_starts[g + 1]):
                # first phase axis is constant over a group of equal b_0
                row = a_grp[p]
                av = avals[p] * powers[row, 0, b_pre[q0, 0]]
                base = a_rest[p]
                q = q0
                stop = b_stop[bg]
                while q < stop:
                    ph = av
                    for s in range(1, nphase):
                        ph *= powers[row, s, b_pre[q, s]]
                    end = b_run_end[q]
                    for r in range(q, end):
                        c = base + b_rest[r]
                        if not hit[c]:
                            hit[c] = True
                            touched[ntouched] = c
                            ntouched += 1
                        slab[c] += ph * bvals[r]
                    q = end
        if ntouched == 0:
            continue
        cells = np.sort(touched[:ntouched])
        if size + ntouched > cap:
            while size + ntouched > cap:
                cap *= 2
            nf = np.empty(cap, dtype=np.int64)
            nc = np.empty(cap, dtype=np.int64)
            nv = np.empty(cap, dtype=np.complex128)
            nf[:size] = out_first[:size]
            nc[:size] = out_cell[:size]
            nv[:size] = out_val[:size]
            out_first, out_cell, out_val = nf, nc, nv
        for c in cells:
            v = slab[c]
            if v != 0:
                out_first[size] = x0
                out_cell[size] = c
                out_val[size] = v
                size += 1
            slab[c] = 0
            hit[c] = False
    return out_first[:size], out_cell[:size], out_val[:size]


def _phase_powers(ka: np.ndarray, kb: np.ndarray, lower: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Power tables for the twisted phase e(ka^T L kb).

    Only ka[:, 1:] and kb[:, :-1] enter, so rows of a sharing ka[:, 1:] share
    a table.  Returns (a_grp, b_pre, powers): a_grp maps rows of a to tables,
    b_pre is the shifted prefix of kb and powers[r, s, m] = e(w_rs (m + min_s)),
    w = ka[:, 1:] L[1:, :-1] over the distinct rows.
    """
    tails, a_grp = np.unique(ka[:, 1:], axis=0, return_inverse=True)
    w = tails.astype(float) @ lower[1:, :-1]
    pre = kb[:, :-1]
    mins = pre.min(axis=0)
    width = int((pre.max(axis=0) - mins).max()) + 1
    expo = w[:, :, None] * (mins[None, :, None] + np.arange(width)[None, None, :])
    expo -= np.round(expo)
    return np.ascontiguousarray(a_grp.reshape(-1)), np.ascontiguousarray(pre - mins), np.exp(2j * np.pi * expo)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Twisted product; prunes per the active :func:`precision` context."""
    a._check(b)
    torus = a.torus
    n = torus.n
    na, nb = a.coeff_norm1(), b.coeff_norm1()
    dropped = na * b.dropped + a.dropped * (nb + b.dropped)
    if a.is_zero() or b.is_zero():
        return AlgebraElement(torus, np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=complex), dropped)

    ka, kb = a.keys, b.keys
    amin, bmin = ka.min(axis=0), kb.min(axis=0)
    span = (ka.max(axis=0) - amin) + (kb.max(axis=0) - bmin) + 1
    a_grp, b_pre, powers = _phase_powers(ka, kb, torus.theta.lower())

    # strides of the trailing axes inside the output box
    strides = np.ones(n - 1, dtype=np.int64)
    for j in range(n - 3, -1, -1):
        strides[j] = strides[j + 1] * span[j + 2]
    slab_size = int(strides[0] * span[1])
    a_rest = (ka[:, 1:] - amin[1:]) @ strides
    b_rest = (kb[:, 1:] - bmin[1:]) @ strides
    # keys are stored in lexicographic order, so rows sharing all but the last
    # coordinate are contiguous
    change = np.flatnonzero((kb[1:, :-1] != kb[:-1, :-1]).any(axis=1)) + 1
    bounds = np.append(change, len(kb))
    b_run_end = np.repeat(bounds, np.diff(np.concatenate(([0], bounds))))
    first, cell, vals = _twisted_product(
        np.ascontiguousarray(ka[:, 0]), a_rest, a_grp, np.ascontiguousarray(kb[:, 0]), b_rest,
        b_pre, b_run_end, a.vals, b.vals, powers, slab_size,
    )
    keys = np.empty((first.size, n), dtype=np.int64)
    keys[:, 0] = first
    rem = cell
    for j in range(n - 1):
        keys[:, j + 1], rem = np.divmod(rem, strides[j])
    keys[:, 1:] += amin[1:] + bmin[1:]
    return _pruned(torus, keys, vals, dropped, _prune_tol.get())


def _adjoint_phase(torus: Torus, keys: np.ndarray) -> np.ndarray:
    k = keys.astype(float)
    q = np.einsum("ar,rs,as->a", k, torus.theta.lower(), k)
    q -= np.round(q)
    return np.exp(2j * np.pi * q)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    """Antilinear involution: (sum a_k U^k)* = sum conj(a_k) c(k) U^{-k}."""
    if a.is_zero():
        return a
    vals = np.conj(a.vals) * _adjoint_phase(a.torus, a.keys)
    return _canonical(a.torus, _encode(-a.keys), vals, a.dropped)


def derive(a: AlgebraElement, j: int) -> AlgebraElement:
    """Canonical derivation along 0-based axis j: U^k -> scale * k_j * U^k."""
    if not 0 <= j < a.n:
        raise ConfigurationError(f"axis {j} out of range for n = {a.n}")
    s = a.torus.scale
    w = a.keys[:, j]
    keep = w != 0
    dropped = a.dropped * abs(s) * max(1, a.degree())
    return AlgebraElement(a.torus, a.keys[keep], a.vals[keep] * (s * w[keep]), dropped)


def laplacian(a: AlgebraElement) -> AlgebraElement:
    out = a.torus.zero()
    for j in range(a.n):
        out = out + derive(derive(a, j), j)
    return out


def trace(a: AlgebraElement) -> complex:
    return a.trace()


def trace_product(a: AlgebraElement, b: AlgebraElement) -> complex:
    """tau(a b) without forming the product: sum_k a_k b_{-k} e(-k . L k)."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        return 0j
    codes_b = _encode(b.keys)  # sorted, since keys are stored in lexicographic order
    want = _encode(-a.keys)
    pos = np.searchsorted(codes_b, want)
    pos = np.minimum(pos, codes_b.size - 1)
    hit = codes_b[pos] == want
    if not hit.any():
        return 0j
    k = a.keys[hit].astype(float)
    q = np.einsum("ar,rs,as->a", k, a.torus.theta.lower(), k)
    q -= np.round(q)
    return complex(np.sum(a.vals[hit] * b.vals[pos[hit]] * np.exp(-2j * np.pi * q)))


def trace_product_bound(a: AlgebraElement, b: AlgebraElement) -> float:
    """Uncertainty of tau(a b) from the dropped mass of the factors."""
    return a.coeff_norm1() * b.dropped + a.dropped * (b.coeff_norm1() + b.dropped)


def trace_bound(a: AlgebraElement) -> tuple[complex, float]:
    """Trace value and its uncertainty (|tau(x)| <= ||x||_1 for the discarded part)."""
    return a.trace(), a.dropped


def one_norm(a: AlgebraElement) -> float:
    return a.norm1()


def truncate(a: AlgebraElement, box_radius: int) -> AlgebraElement:
    """Keep coefficients with max_j |k_j| <= box_radius; book the rest as dropped."""
    if box_radius < 0:
        raise ValueError("box_radius must be nonnegative")
    if a.is_zero():
        return a
    inside = np.abs(a.keys).max(axis=1) <= box_radius
    lost = float(np.abs(a.vals[~inside]).sum())
    return AlgebraElement(a.torus, a.keys[inside], a.vals[inside], a.dropped + lost)


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return mul(a, b) - mul(b, a)


def inner(a: AlgebraElement, b: AlgebraElement) -> complex:
    """Hilbert-Schmidt pairing tau(a* b) = sum conj(a_k) b_k."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        return 0j
    ca, cb = _encode(a.keys), _encode(b.keys)
    _, ia, ib = np.intersect1d(ca, cb, assume_unique=True, return_indices=True)
    return complex(np.vdot(a.vals[ia], b.vals[ib]))


def linear_combination(torus: Torus, coeffs: Iterable[complex], elems: Iterable[AlgebraElement]) -> AlgebraElement:
    """sum_i c_i x_i in a single merge."""
    codes, vals, dropped = [], [], 0.0
    for c, x in zip(coeffs, elems):
        c = complex(c)
        if c == 0 or (x.is_zero() and x.dropped == 0):
            continue
        codes.append(_encode(x.keys))
        vals.append(x.vals * c)
        dropped += abs(c) * x.dropped
    if not codes:
        return torus.zero().with_dropped(dropped)
    return _canonical(torus, np.concatenate(codes), np.concatenate(vals), dropped)
