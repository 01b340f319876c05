"""Bohr lift: Dirichlet series <-> sparse power series in countably many variables.

Under the ``primes`` basis variable ``z_k`` stands for ``p_k^{-s}``, so
``n = prod p_k^{nu_k}`` is sent to the monomial ``z^nu``.  A ``generators``
basis replaces the primes by a list ``q_1 < q_2 < ...`` that must factor every
relevant integer uniquely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .arith import factorize, nth_prime, prime_index
from .errors import (
    AmbiguousFactorization,
    BackendMismatch,
    BasisMismatch,
    DomainError,
    NoFactorization,
    SpecParseError,
    TruncationOverflow,
)
from .scalars import BACKENDS, RATIONAL, coerce, dump_scalar, make_scalar
from .semigroup import factorization_counts
from .series import DirichletSeries


@dataclass(frozen=True, order=True)
class ExponentVector:
    """Finitely supported exponent map, stored as sorted ``(index, exponent>0)`` pairs."""

    entries: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> "ExponentVector":
        pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
        acc: dict[int, int] = {}
        for k, e in pairs:
            k, e = int(k), int(e)
            if k < 1 or e < 0:
                raise ValueError(f"bad exponent entry ({k}, {e})")
            acc[k] = acc.get(k, 0) + e
        return cls(tuple(sorted((k, e) for k, e in acc.items() if e)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.entries)

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(e) for _, e in self.entries)

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        return ExponentVector.of(list(self.entries) + list(other.entries))

    def __sub__(self, other: "ExponentVector") -> "ExponentVector":
        d = self.as_dict()
        for k, e in other.entries:
            if d.get(k, 0) < e:
                raise ValueError(f"{other} is not below {self}")
            d[k] -= e
        return ExponentVector.of(d)

    def precedes(self, other: "ExponentVector") -> bool:
        """Componentwise order: every exponent of self <= that of other."""
        d = other.as_dict()
        return all(d.get(k, 0) >= e for k, e in self.entries)

    def __str__(self):
        if not self.entries:
            return "1"
        return "*".join(f"z{k}" if e == 1 else f"z{k}^{e}" for k, e in self.entries)


@dataclass(frozen=True, eq=False)
class Basis:
    """``gens=None`` is the primes basis; otherwise variable k <-> ``gens[k-1]``."""

    gens: tuple[int, ...] | None = None
    _checked: list = field(default_factory=lambda: [1], repr=False, compare=False)

    def __post_init__(self):
        if self.gens is not None:
            g = tuple(int(q) for q in self.gens)
            object.__setattr__(self, "gens", g)
            if not g or any(q < 2 for q in g) or any(a >= b for a, b in zip(g, g[1:])):
                raise SpecParseError(f"generators must be strictly increasing and >= 2: {g}")

    @classmethod
    def primes(cls) -> "Basis":
        return cls(None)

    @classmethod
    def generators(cls, gens: Iterable[int], bound: int | None = None) -> "Basis":
        b = cls(tuple(gens))
        if bound is not None:
            b.validate(bound)
        return b

    @property
    def kind(self) -> str:
        return "primes" if self.gens is None else "generators"

    def __eq__(self, other):
        return isinstance(other, Basis) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def validate(self, bound: int) -> None:
        """Raise AmbiguousFactorization unless factorization over gens is unique on [1..bound]."""
        if self.gens is None or bound <= self._checked[0]:
            return
        counts = factorization_counts([q for q in self.gens if q <= bound], bound)
        bad = np.flatnonzero(counts >= 2)
        if len(bad):
            raise AmbiguousFactorization(
                f"{bad[0]} has {int(counts[bad[0]])} factorizations over {list(self.gens)}"
            )
        self._checked[0] = bound

    def generator(self, k: int) -> int:
        if self.gens is None:
            return nth_prime(k)
        if not 1 <= k <= len(self.gens):
            raise ValueError(f"variable z{k} outside the basis of {len(self.gens)} generators")
        return self.gens[k - 1]

    def integer(self, nu: ExponentVector) -> int:
        return math.prod(self.generator(k) ** e for k, e in nu.entries)

    def exponent_vector(self, n: int) -> ExponentVector:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if self.gens is None:
            return ExponentVector.of({prime_index(p): e for p, e in factorize(n).items()})
        found = _factor_over(self.gens, n, limit=2)
        if not found:
            raise NoFactorization(f"{n} is not a product of {list(self.gens)}")
        if len(found) > 1:
            raise AmbiguousFactorization(f"{n} factors in more than one way over {list(self.gens)}")
        return ExponentVector.of(found[0])

    def to_json(self):
        return "primes" if self.gens is None else {"generators": list(self.gens)}

    @classmethod
    def from_json(cls, obj) -> "Basis":
        if obj == "primes":
            return cls.primes()
        if isinstance(obj, dict) and "generators" in obj:
            return cls(tuple(obj["generators"]))
        raise SpecParseError(f"bad basis {obj!r}")


def _factor_over(gens: tuple[int, ...], n: int, limit: int) -> list[dict[int, int]]:
    """Up to ``limit`` exponent maps (by variable index) with prod gens^e = n."""
    out: list[dict[int, int]] = []

    def walk(rest: int, start: int, acc: dict[int, int]) -> None:
        if len(out) >= limit:
            return
        if rest == 1:
            out.append(dict(acc))
            return
        for i in range(start, len(gens)):
            q = gens[i]
            if q > rest:
                break
            if rest % q == 0:
                acc[i + 1] = acc.get(i + 1, 0) + 1
                walk(rest // q, i, acc)
                acc[i + 1] -= 1
                if not acc[i + 1]:
                    del acc[i + 1]

    walk(n, 0, {})
    return out


def exponent_vector(n: int, basis: Basis | None = None) -> ExponentVector:
    return (basis or Basis.primes()).exponent_vector(n)


@dataclass(frozen=True, eq=False)
class MultiPowerSeries:
    terms: Mapping[ExponentVector, object]
    basis: Basis = field(default_factory=Basis.primes)
    backend: str = RATIONAL

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        clean = {}
        for nu, c in self.terms.items():
            if not isinstance(nu, ExponentVector):
                nu = ExponentVector.of(nu)
            c = coerce(c, self.backend)
            if c:
                clean[nu] = clean[nu] + c if nu in clean else c
        clean = {nu: c for nu, c in clean.items() if c}
        object.__setattr__(self, "terms", clean)
        if self.basis.gens is not None and clean:
            self.basis.validate(max(self.basis.integer(nu) for nu in clean))

    def __eq__(self, other):
        if not isinstance(other, MultiPowerSeries):
            return NotImplemented
        return self.basis == other.basis and self.backend == other.backend and self.terms == other.terms

    def __hash__(self):
        return hash((self.basis, frozenset(self.terms)))

    def __getitem__(self, nu):
        if not isinstance(nu, ExponentVector):
            nu = ExponentVector.of(nu)
        return self.terms.get(nu, coerce(0, self.backend))

    def __add__(self, other):
        return poly_add(self, other)

    def support(self) -> set[ExponentVector]:
        return set(self.terms)

    def derivative_at_zero(self, nu) -> object:
        """``(d^nu P)(0) = nu! * coefficient``."""
        nu = nu if isinstance(nu, ExponentVector) else ExponentVector.of(nu)
        return self[nu] * nu.factorial

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{nu}" for nu, c in sorted(self.terms.items()))

    def to_json(self) -> dict:
        terms = []
        for nu, c in sorted(self.terms.items()):
            re, im = dump_scalar(c)
            terms.append({"exps": [list(p) for p in nu.entries], "re": re, "im": im})
        return {"basis": self.basis.to_json(), "backend": self.backend, "terms": terms}

    @classmethod
    def from_json(cls, obj: dict) -> "MultiPowerSeries":
        try:
            basis = Basis.from_json(obj.get("basis", "primes"))
            backend = obj.get("backend", RATIONAL)
            terms = {}
            for t in obj["terms"]:
                nu = ExponentVector.of([tuple(p) for p in t["exps"]])
                terms[nu] = make_scalar(t.get("re", 0), t.get("im", 0), backend)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecParseError):
                raise
            raise SpecParseError(f"malformed polynomial JSON: {exc}") from exc
        return cls(terms, basis, backend)


def lift(f: DirichletSeries, basis: Basis | None = None) -> MultiPowerSeries:
    """Place ``a_n`` at the monomial ``z^{nu(n)}``."""
    basis = basis or Basis.primes()
    basis.validate(f.N)
    return MultiPowerSeries({basis.exponent_vector(n): a for n, a in f.coeffs.items()}, basis, f.backend)


def drop(P: MultiPowerSeries, N: int) -> DirichletSeries:
    """Inverse of :func:`lift`; every monomial must map to an integer <= N."""
    coeffs = {}
    for nu, c in P.terms.items():
        n = P.basis.integer(nu)
        if n > N:
            raise TruncationOverflow(f"monomial {nu} maps to {n} > N={N}")
        coeffs[n] = c
    return DirichletSeries(N, coeffs, P.backend)


def _check_same(P: MultiPowerSeries, Q: MultiPowerSeries) -> None:
    if P.basis != Q.basis:
        raise BasisMismatch(f"bases differ: {P.basis.to_json()} vs {Q.basis.to_json()}")
    if P.backend != Q.backend:
        raise BackendMismatch(f"cannot combine {P.backend} and {Q.backend} polynomials")


def poly_add(P: MultiPowerSeries, Q: MultiPowerSeries) -> MultiPowerSeries:
    _check_same(P, Q)
    out = dict(P.terms)
    for nu, c in Q.terms.items():
        out[nu] = out[nu] + c if nu in out else c
    return MultiPowerSeries(out, P.basis, P.backend)


def poly_multiply(P: MultiPowerSeries, Q: MultiPowerSeries, bound: int | None = None) -> MultiPowerSeries:
    """Product; with ``bound``, monomials whose integer image exceeds it are dropped.

    The bound mirrors Dirichlet truncation, so ``lift(f*g)`` equals
    ``poly_multiply(lift(f), lift(g), N)`` exactly.
    """
    _check_same(P, Q)
    basis = P.basis
    qs = sorted(((basis.integer(nu), nu, c) for nu, c in Q.terms.items()), key=lambda t: t[0])
    out: dict = {}
    for nu_p, cp in P.terms.items():
        n_p = basis.integer(nu_p)
        for n_q, nu_q, cq in qs:
            if bound is not None and n_p * n_q > bound:
                break
            nu = nu_p + nu_q
            v = cp * cq
            out[nu] = out[nu] + v if nu in out else v
    return MultiPowerSeries(out, basis, P.backend)


def homogeneous_parts(P: MultiPowerSeries) -> dict[int, MultiPowerSeries]:
    """Split by total degree ``|nu|``."""
    parts: dict[int, dict] = {}
    for nu, c in P.terms.items():
        parts.setdefault(nu.degree, {})[nu] = c
    return {m: MultiPowerSeries(t, P.basis, P.backend) for m, t in sorted(parts.items())}


def poly_evaluate(P: MultiPowerSeries, z: Mapping[int, complex]) -> complex:
    """``sum P[nu] z^nu``; variables not in ``z`` are 0, supplied ones need |z_k| < 1."""
    for k, v in z.items():
        if abs(v) >= 1:
            raise DomainError(f"|z{k}| = {abs(v)} is not < 1")
    total = 0j
    for nu, c in P.terms.items():
        term = complex(c)
        for k, e in nu.entries:
            term *= complex(z.get(k, 0)) ** e
        total += term
    return total


def dirichlet_point(s, nvars: int, basis: Basis | None = None) -> dict[int, complex]:
    """``z_k = q_k^{-s}`` for k <= nvars: the point where lift(f) reproduces f(s)."""
    basis = basis or Basis.primes()
    s = complex(s)
    return {k: basis.generator(k) ** (-s) for k in range(1, nvars + 1)}
