"""Truncated Dirichlet series ``sum_{n<=N} a_n n^{-s}``.

Coefficients are stored sparsely (``{n: a_n}``, zeros omitted).  Products and
inverses are exact on ``[1..N]`` because ``c_n`` only involves divisors of
``n``; there is no truncation error to track for ring operations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Iterable, Mapping, Sequence

import numpy as np

from .arith import factorize, first_primes, prime_index
from .errors import (
    BackendMismatch,
    DomainError,
    NonUnitConstantTerm,
    SpecParseError,
    SupportViolation,
)
from .scalars import (
    BACKENDS,
    FLOAT,
    ONE,
    RATIONAL,
    GaussianRational,
    coerce,
    dump_scalar,
    make_scalar,
)
from .semigroup import CoprimeTo, Full, MembershipSieve, parse_spec, sieve

DEFAULT_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class DirichletSeries:
    N: int
    coeffs: Mapping[int, object]
    backend: str = RATIONAL
    support: MembershipSieve | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"truncation must be >= 1, got {self.N}")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        clean = {}
        for n, a in self.coeffs.items():
            n = int(n)
            if not 1 <= n <= self.N:
                raise ValueError(f"index {n} outside [1..{self.N}]")
            a = coerce(a, self.backend)
            if a:
                clean[n] = a
        object.__setattr__(self, "coeffs", clean)
        sv = self.support
        if sv is not None:
            if sv.N < self.N:
                raise ValueError(f"support sieved to {sv.N} < truncation {self.N}")
            off = [n for n in clean if not sv.bits[n]]
            if off:
                raise SupportViolation(
                    f"nonzero coefficient at n={min(off)} outside {sv.source.canonical()}"
                )

    # -- construction helpers -------------------------------------------

    @classmethod
    def unit(cls, N: int, backend: str = RATIONAL, support=None) -> "DirichletSeries":
        return cls(N, {1: 1}, backend, support)

    @classmethod
    def zero(cls, N: int, backend: str = RATIONAL, support=None) -> "DirichletSeries":
        return cls(N, {}, backend, support)

    @classmethod
    def monomial(cls, n: int, N: int, coeff=1, backend: str = RATIONAL) -> "DirichletSeries":
        """``coeff * n^{-s}``."""
        return cls(N, {n: coeff}, backend)

    @classmethod
    def from_dense(cls, values: Sequence, backend: str = RATIONAL, support=None) -> "DirichletSeries":
        """``values[0]`` is a_1."""
        return cls(len(values), {n: v for n, v in enumerate(values, 1)}, backend, support)

    # -- access ---------------------------------------------------------

    def __getitem__(self, n: int):
        return self.coeffs.get(n, self._zero())

    def _zero(self):
        return GaussianRational() if self.backend == RATIONAL else 0j

    def items(self):
        return sorted(self.coeffs.items())

    def support_indices(self) -> list[int]:
        return sorted(self.coeffs)

    def dense(self) -> np.ndarray:
        """Complex array of length N+1 (index 0 unused)."""
        out = np.zeros(self.N + 1, dtype=complex)
        for n, a in self.coeffs.items():
            out[n] = complex(a)
        return out

    def to_float(self) -> "DirichletSeries":
        if self.backend == FLOAT:
            return self
        return DirichletSeries(
            self.N, {n: complex(a) for n, a in self.coeffs.items()}, FLOAT, self.support
        )

    def restrict(self, N: int) -> "DirichletSeries":
        return DirichletSeries(
            N, {n: a for n, a in self.coeffs.items() if n <= N}, self.backend, self.support
        )

    def with_support(self, support: MembershipSieve | None) -> "DirichletSeries":
        return DirichletSeries(self.N, self.coeffs, self.backend, support)

    def __eq__(self, other):
        if not isinstance(other, DirichletSeries):
            return NotImplemented
        return (
            self.N == other.N and self.backend == other.backend and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.N, self.backend, frozenset(self.coeffs)))

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, DirichletSeries):
            return convolve(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __call__(self, s) -> complex:
        return evaluate(self, s).value

    # -- JSON -----------------------------------------------------------

    def to_json(self) -> dict:
        coeffs = []
        for n, a in self.items():
            re, im = dump_scalar(a)
            coeffs.append({"n": n, "re": re, "im": im})
        return {
            "N": self.N,
            "backend": self.backend,
            "support": self.support.source.canonical() if self.support is not None else None,
            "coeffs": coeffs,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DirichletSeries":
        try:
            N = int(obj["N"])
            backend = obj.get("backend", RATIONAL)
            if backend not in BACKENDS:
                raise SpecParseError(f"unknown backend {backend!r}")
            coeffs = {}
            for entry in obj.get("coeffs", []):
                coeffs[int(entry["n"])] = make_scalar(entry.get("re", 0), entry.get("im", 0), backend)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecParseError):
                raise
            raise SpecParseError(f"malformed series JSON: {exc}") from exc
        support = obj.get("support")
        sv = sieve(parse_spec(support), N) if support else None
        return cls(N, coeffs, backend, sv)


@dataclass(frozen=True)
class HalfPlanePoint:
    sigma: float
    t: float = 0.0

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


def as_point(s) -> HalfPlanePoint:
    if isinstance(s, HalfPlanePoint):
        return s
    s = complex(s)
    return HalfPlanePoint(s.real, s.imag)


@dataclass(frozen=True)
class EvalResult:
    value: complex
    tail_bound: float = 0.0


def _check_backends(f: DirichletSeries, g: DirichletSeries) -> None:
    if f.backend != g.backend:
        raise BackendMismatch(f"cannot combine {f.backend} and {g.backend} series")


def _shared_support(f: DirichletSeries, g: DirichletSeries) -> MembershipSieve | None:
    a, b = f.support, g.support
    if a is None or b is None:
        return None
    if a is b or a.same_set(b):
        return a if a.N >= b.N else b
    return None


# --- ring operations ------------------------------------------------------


def _convolve_sparse(a: Mapping, b: Mapping, N: int) -> dict:
    bkeys = sorted(b)
    out: dict = {}
    for d in sorted(a):
        lim = N // d
        if lim < 1:
            break
        ad = a[d]
        for k in bkeys:
            if k > lim:
                break
            n = d * k
            v = ad * b[k]
            out[n] = out[n] + v if n in out else v
    return out


def _convolve_dense(a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    """Float convolution of dense arrays indexed 0..N (index 0 unused)."""
    out = np.zeros(N + 1, dtype=complex)
    nz_a, nz_b = np.flatnonzero(a[1:]) + 1, np.flatnonzero(b[1:]) + 1
    if len(nz_a) > len(nz_b):
        a, b, nz_a = b, a, nz_b
    for d in nz_a:
        m = N // d
        out[d : d * m + 1 : d] += a[d] * b[1 : m + 1]
    return out


def convolve(f: DirichletSeries, g: DirichletSeries) -> DirichletSeries:
    """Dirichlet product ``c_n = sum_{d|n} a_d b_{n/d}``, truncated at min(N_f, N_g)."""
    _check_backends(f, g)
    N = min(f.N, g.N)
    support = _shared_support(f, g)
    if support is not None and not support.is_closed:
        support = None
    if f.backend == FLOAT:
        fa, ga = f.dense()[: N + 1], g.dense()[: N + 1]
        c = _convolve_dense(fa, ga, N)
        coeffs = {int(n): complex(c[n]) for n in np.flatnonzero(c)}
    else:
        coeffs = _convolve_sparse(f.coeffs, g.coeffs, N)
    # a violation here means a corrupted sieve; the constructor raises SupportViolation
    return DirichletSeries(N, coeffs, f.backend, support)


def invert(f: DirichletSeries) -> DirichletSeries:
    """Inverse under Dirichlet convolution on ``[1..N]``.

    ``b_1 = 1/a_1`` and ``a_1 b_n = -sum_{d|n, d>1} a_d b_{n/d}``; contributions
    are pushed forward to multiples as soon as each ``b_n`` is known.
    """
    a = f.coeffs
    if 1 not in a:
        raise NonUnitConstantTerm("a_1 = 0: the series is not invertible")
    N = f.N
    inv_a1 = a[1].reciprocal() if f.backend == RATIONAL else 1 / a[1]
    akeys = sorted(k for k in a if k > 1)
    acc: dict = {}
    b: dict = {}
    for n in range(1, N + 1):
        s = acc.pop(n, None)
        if n == 1:
            v = inv_a1
        elif s is None:
            continue
        else:
            v = -(s * inv_a1)
        if not v:
            continue
        b[n] = v
        lim = N // n
        for d in akeys:
            if d > lim:
                break
            m = d * n
            t = a[d] * v
            acc[m] = acc[m] + t if m in acc else t
    support = f.support if f.support is not None and f.support.is_closed else None
    return DirichletSeries(N, b, f.backend, support)


def add(f: DirichletSeries, g: DirichletSeries) -> DirichletSeries:
    _check_backends(f, g)
    N = min(f.N, g.N)
    out = {n: a for n, a in f.coeffs.items() if n <= N}
    for n, b in g.coeffs.items():
        if n <= N:
            out[n] = out[n] + b if n in out else b
    return DirichletSeries(N, out, f.backend, _shared_support(f, g))


def scale(f: DirichletSeries, c) -> DirichletSeries:
    c = coerce(c, f.backend)
    return DirichletSeries(f.N, {n: a * c for n, a in f.coeffs.items()}, f.backend, f.support)


def zeta(N: int, backend: str = RATIONAL) -> DirichletSeries:
    return DirichletSeries(N, dict.fromkeys(range(1, N + 1), 1), backend)


# --- norms and evaluation ---------------------------------------------------


def l2_norm_squared(f: DirichletSeries):
    """Exact ``Fraction`` on the rational backend, float otherwise."""
    if f.backend == RATIONAL:
        return sum((a.abs2() for a in f.coeffs.values()), Fraction(0))
    return math.fsum(abs(a) ** 2 for a in f.coeffs.values())


def l2_norm(f: DirichletSeries) -> float:
    return math.sqrt(l2_norm_squared(f))


def l1_norm(f: DirichletSeries) -> float:
    return math.fsum(abs(a) for a in f.coeffs.values())


def inner(f: DirichletSeries, g: DirichletSeries):
    """``<f, g> = sum a_n conj(b_n)`` over the common truncation."""
    _check_backends(f, g)
    N = min(f.N, g.N)
    terms = (a * g.coeffs[n].conjugate() for n, a in f.coeffs.items() if n <= N and n in g.coeffs)
    return sum(terms, f._zero())


def _powers(ns: np.ndarray, s: complex) -> np.ndarray:
    return np.exp(-s * np.log(ns.astype(float)))


def evaluate(f: DirichletSeries, s, residual_l2: float | None = None) -> EvalResult:
    """Finite sum ``sum_{n<=N} a_n n^{-s}`` with a Cauchy-Schwarz tail bound.

    ``residual_l2`` is the l2 mass of the coefficients beyond N.  ``None``
    means the series is a Dirichlet polynomial (nothing beyond N), so the
    tail is 0; a positive residual gives a finite bound only for sigma > 1/2.
    """
    p = as_point(s)
    if not f.coeffs:
        value = 0j
    else:
        ns = np.fromiter(f.coeffs, dtype=np.int64, count=len(f.coeffs))
        cs = np.array([complex(a) for a in f.coeffs.values()])
        value = complex(np.sum(cs * _powers(ns, p.s)))
    if residual_l2 is None or residual_l2 == 0:
        tail = 0.0
    elif p.sigma > 0.5:
        x = 2 * p.sigma
        tail = residual_l2 * math.sqrt(f.N ** (1 - x) / (x - 1))
    else:
        tail = math.inf
    return EvalResult(value, tail)


def euler_constant(s, r: int) -> float:
    """``sqrt(prod_{j<=r} (1 - p_j^{-2 sigma})^{-1})``: Cauchy-Schwarz constant on r-smooth support."""
    sigma = as_point(s).sigma
    if sigma <= 0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    if r < 1:
        raise ValueError("r must be >= 1")
    log_sq = -math.fsum(math.log1p(-(p ** (-2 * sigma))) for p in first_primes(r))
    return math.exp(log_sq / 2)


def smoothness_rank(f: DirichletSeries) -> int:
    """Least r >= 1 with every support index a product of the first r primes."""
    r = 1
    for n in f.coeffs:
        for p in factorize(n):
            r = max(r, prime_index(p))
    return r


def lemma_bound_check(f: DirichletSeries, s, r: int | None = None, rtol: float = DEFAULT_RTOL) -> bool:
    """True iff ``|f(s)| <= C_{s,r} ||f||_2`` up to relative slack ``rtol``."""
    needed = smoothness_rank(f)
    if r is None:
        r = needed
    elif needed > r:
        raise SupportViolation(f"series has mass off the {r}-smooth integers (needs r={needed})")
    lhs = abs(evaluate(f, s).value)
    rhs = euler_constant(s, r) * l2_norm(f)
    return lhs <= rhs * (1 + rtol)


# --- lacunary zeta, kernels, characters -------------------------------------


def zeta_S(sv: MembershipSieve, N: int | None = None, backend: str = RATIONAL) -> DirichletSeries:
    """Indicator series of S: ``a_n = 1`` for n in S."""
    N = sv.N if N is None else N
    members = [n for n in sv.members if n <= N]
    return DirichletSeries(N, dict.fromkeys(members, 1), backend, sv)


def kernel_series(sv: MembershipSieve, a, N: int | None = None) -> DirichletSeries:
    """``zeta_S(s + conj(a))`` as a series in s: coefficients ``n^{-conj(a)}``."""
    N = sv.N if N is None else N
    ns = np.array([n for n in sv.members if n <= N], dtype=np.int64)
    vals = _powers(ns, as_point(a).s.conjugate())
    return DirichletSeries(N, dict(zip(ns.tolist(), vals.tolist())), FLOAT, sv)


def kernel_eval(sv: MembershipSieve, s, a, N: int | None = None) -> complex:
    """``sum_{n in S, n <= N} n^{-(s + conj(a))}``."""
    N = sv.N if N is None else N
    ns = np.array([n for n in sv.members if n <= N], dtype=np.int64)
    return complex(np.sum(_powers(ns, as_point(s).s + as_point(a).s.conjugate())))


def principal_character(m: int, n: int) -> int:
    return 1 if math.gcd(n, m) == 1 else 0


def l_series(m: int, N: int, backend: str = RATIONAL) -> DirichletSeries:
    """``L(s, chi_0)`` for the principal character mod m, truncated at N."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    spec = Full() if m == 1 else CoprimeTo(m)
    return zeta_S(sieve(spec, N), N, backend)


# --- diagonal multipliers --------------------------------------------------


def fejer_weight(n: int, m: float) -> float:
    """Triangle ``max(1 - log(n)/m, 0)``; exactly 1.0 at n = 1."""
    if n == 1:
        return 1.0
    return max(1.0 - math.log(n) / m, 0.0)


def fejer_smooth(f: DirichletSeries, m: float) -> DirichletSeries:
    """Fejer-mollified polynomial ``sum a_n max(1 - log(n)/m, 0) n^{-s}``.

    The result lives on the float backend (the weights are irrational) and is
    supported on ``n < e^m``.
    """
    if m <= 0:
        raise DomainError(f"m must be > 0, got {m}")
    out = {}
    for n, a in f.coeffs.items():
        w = fejer_weight(n, m)
        if w > 0:
            out[n] = complex(a) * w
    return DirichletSeries(f.N, out, FLOAT, f.support)


def vertical_translate(f: DirichletSeries, t: float) -> DirichletSeries:
    """``s -> f(s + it)``: coefficients ``a_n n^{-it}``."""
    if t == 0:
        return f
    return DirichletSeries(
        f.N,
        {n: complex(a) * cmath.exp(-1j * t * math.log(n)) for n, a in f.coeffs.items()},
        FLOAT,
        f.support,
    )


def shift_abscissa(f: DirichletSeries, a) -> DirichletSeries:
    """``s -> f(s + a)``: coefficients ``a_n n^{-a}``.

    Stays exact on the rational backend when ``a`` is an integer.
    """
    if a == 0:
        return f
    if f.backend == RATIONAL and isinstance(a, (int, Real)) and float(a).is_integer():
        k = int(a)
        factor = (lambda n: Fraction(1, n**k)) if k > 0 else (lambda n: Fraction(n**-k))
        return DirichletSeries(f.N, {n: c * factor(n) for n, c in f.coeffs.items()}, RATIONAL, f.support)
    a = complex(a)
    return DirichletSeries(
        f.N, {n: complex(c) * n ** (-a) for n, c in f.coeffs.items()}, FLOAT, f.support
    )


# --- sup-norm lower bounds --------------------------------------------------


def default_grid() -> list[HalfPlanePoint]:
    sigmas = (1e-3, 1e-2, 0.1, 0.5, 1.0)
    ts = np.linspace(-60.0, 60.0, 241)
    return [HalfPlanePoint(sg, float(t)) for sg in sigmas for t in ts]


def sup_norm_lower_bound(f: DirichletSeries, grid: Iterable | None = None) -> float:
    """``max(max_grid |f(s)|, max_n |a_n|)``, a certified lower bound for ||f||_inf."""
    pts = [as_point(p) for p in (default_grid() if grid is None else grid)]
    if any(p.sigma <= 0 for p in pts):
        raise DomainError("grid points must lie in Re(s) > 0")
    best = max((abs(a) for a in f.coeffs.values()), default=0.0)
    if f.coeffs and pts:
        ns = np.fromiter(f.coeffs, dtype=np.int64, count=len(f.coeffs))
        cs = np.array([complex(a) for a in f.coeffs.values()])
        ss = np.array([p.s for p in pts])
        logs = np.log(ns.astype(float))
        vals = np.exp(-np.outer(ss, logs)) @ cs
        best = max(best, float(np.max(np.abs(vals))))
    return best


def multiplier_ratio_max(
    f: DirichletSeries, trials: int = 32, seed: int = 0, support: MembershipSieve | None = None
) -> float:
    """Max of ``||f g||_2`` over random unit-norm g supported on S (plus g = 1).

    Truncating a product can only lose mass, so each sample is a lower bound
    for the multiplier norm, which equals ||f||_inf.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    N = f.N
    sv = support if support is not None else f.support
    idx = np.array([n for n in sv.members if n <= N]) if sv is not None else np.arange(1, N + 1)
    rng = np.random.default_rng(seed)
    fa = f.dense()
    best = math.sqrt(float(np.sum(np.abs(fa) ** 2)))  # g = 1
    for _ in range(trials):
        g = np.zeros(N + 1, dtype=complex)
        # sparse random support keeps the sampled g varied
        k = int(rng.integers(1, len(idx) + 1))
        pick = rng.choice(idx, size=k, replace=False)
        g[pick] = rng.normal(size=k) + 1j * rng.normal(size=k)
        g /= np.linalg.norm(g)
        prod = _convolve_dense(fa, g, N)
        best = max(best, float(np.linalg.norm(prod)))
    return best


# --- abscissa heuristics ---------------------------------------------------


@dataclass(frozen=True)
class AbscissaEstimate:
    """Finite-N estimate ``max log|A(N')| / log N'`` over the last decade of N'.

    ``band`` is the spread of the quotient over that window; ``reliable`` is
    False when N < 16 or band > 0.5.  ``clamped`` marks estimates <= 0, where
    the classical formula only bounds the abscissa from above.
    """

    value: float
    band: float
    reliable: bool
    clamped: bool

    def to_json(self) -> dict:
        return {"value": self.value, "band": self.band, "reliable": self.reliable, "clamped": self.clamped}


def _abscissa(partial: np.ndarray) -> AbscissaEstimate:
    N = len(partial) - 1
    lo = max(2, N // 10)
    ns = np.arange(lo, N + 1)
    mags = np.abs(partial[lo:])
    keep = mags > 0
    if N < 2 or not keep.any():
        return AbscissaEstimate(-math.inf, 0.0, False, True)
    q = np.log(mags[keep]) / np.log(ns[keep])
    value, band = float(q.max()), float(q.max() - q.min())
    return AbscissaEstimate(value, band, N >= 16 and band <= 0.5, value <= 0)


def abscissa_convergence_estimate(f: DirichletSeries) -> AbscissaEstimate:
    return _abscissa(np.cumsum(f.dense()))


def abscissa_absolute_estimate(f: DirichletSeries) -> AbscissaEstimate:
    return _abscissa(np.cumsum(np.abs(f.dense())))


def abscissa_report(f: DirichletSeries) -> dict:
    c = abscissa_convergence_estimate(f)
    a = abscissa_absolute_estimate(f)
    consistent = a.value <= c.value + 1 + max(a.band, c.band) or not math.isfinite(c.value)
    return {"sigma_c": c.to_json(), "sigma_a": a.to_json(), "consistent": consistent}
