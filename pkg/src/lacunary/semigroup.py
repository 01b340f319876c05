"""Multiplicative subsemigroups of the positive integers.

A :class:`SemigroupSpec` is a symbolic description (``coprime(6)``,
``gen(2,3)``, ``sum2sq`` ...).  :func:`sieve` materializes it as a
:class:`MembershipSieve` over ``[1..N]``; the remaining functions analyse a
sieve: closure, atoms, factorizations.

Expression grammar (also the canonical serialization)::

    full | trivial | sum2sq | gen(q1,q2,...) | gen(primes) | powers(m)
    | coprime(m) | and(expr, expr, ...) | set(n1,n2,...)

``set(...)`` is an ad-hoc finite set, not necessarily closed; it exists so the
closure checker has something to reject.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Iterable

import numpy as np

from .arith import factorize, integer_root, primes_upto
from .errors import ClosureViolation, NotInSemigroup, ResourceLimitError, SpecParseError

MAX_N_ENV = "LACUNARY_MAX_N"
DEFAULT_MAX_N = 10**7


def max_n() -> int:
    return int(os.environ.get(MAX_N_ENV, DEFAULT_MAX_N))


class SemigroupSpec:
    """Base class of the symbolic semigroup variants."""

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def _bits(self, N: int) -> np.ndarray:
        # fallback: per-n predicate
        bits = np.zeros(N + 1, dtype=bool)
        for n in range(1, N + 1):
            bits[n] = self.contains(n)
        return bits

    def canonical(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class Full(SemigroupSpec):
    def contains(self, n: int) -> bool:
        return True

    def _bits(self, N):
        bits = np.ones(N + 1, dtype=bool)
        bits[0] = False
        return bits

    def canonical(self):
        return "full"


@dataclass(frozen=True)
class Trivial(SemigroupSpec):
    def contains(self, n: int) -> bool:
        return n == 1

    def _bits(self, N):
        bits = np.zeros(N + 1, dtype=bool)
        bits[1] = True
        return bits

    def canonical(self):
        return "trivial"


@dataclass(frozen=True)
class Generators(SemigroupSpec):
    """Semigroup generated by ``gens``; ``gens=None`` stands for all primes."""

    gens: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.gens is None:
            return
        object.__setattr__(self, "gens", tuple(int(q) for q in self.gens))
        g = self.gens
        if any(q < 2 for q in g) or any(a >= b for a, b in zip(g, g[1:])):
            raise SpecParseError(f"generators must be strictly increasing and >= 2: {g}")

    def contains(self, n: int) -> bool:
        if self.gens is None:
            return n >= 1
        return _generated_by(self.gens, n)

    def materialize(self, N: int) -> tuple[int, ...]:
        if self.gens is None:
            return tuple(primes_upto(N))
        return tuple(q for q in self.gens if q <= N)

    def _bits(self, N):
        bits = np.zeros(N + 1, dtype=bool)
        bits[1] = True
        for q in self.materialize(N):
            _close_under(bits, q, np.logical_or)
        return bits

    def canonical(self):
        if self.gens is None:
            return "gen(primes)"
        return "gen(" + ",".join(map(str, self.gens)) + ")"


@dataclass(frozen=True)
class Powers(SemigroupSpec):
    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise SpecParseError(f"powers(m) needs m >= 1, got {self.m}")

    def contains(self, n: int) -> bool:
        return integer_root(n, self.m) is not None

    def _bits(self, N):
        bits = np.zeros(N + 1, dtype=bool)
        k = 1
        while k**self.m <= N:
            bits[k**self.m] = True
            k += 1
        return bits

    def canonical(self):
        return f"powers({self.m})"


@dataclass(frozen=True)
class CoprimeTo(SemigroupSpec):
    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise SpecParseError(f"coprime(m) needs m >= 1, got {self.m}")

    def contains(self, n: int) -> bool:
        return math.gcd(n, self.m) == 1

    def _bits(self, N):
        bits = Full()._bits(N)
        for p in factorize(self.m):
            bits[p::p] = False
        return bits

    def canonical(self):
        return "full" if self.m == 1 else f"coprime({self.m})"


@dataclass(frozen=True)
class SumOfTwoSquares(SemigroupSpec):
    """n = x^2 + y^2 with x, y >= 0, i.e. primes 3 mod 4 occur to even powers."""

    def contains(self, n: int) -> bool:
        return all(e % 2 == 0 for p, e in factorize(n).items() if p % 4 == 3)

    def _bits(self, N):
        bits = Full()._bits(N)
        for p in primes_upto(N):
            if p % 4 != 3:
                continue
            # odd[j-1] <=> v_p(p*j) is odd
            odd = np.ones(N // p, dtype=bool)
            pk = p
            while pk * p <= N:
                odd[pk - 1 :: pk] ^= True
                pk *= p
            view = bits[p::p]
            view[odd] = False
        return bits

    def canonical(self):
        return "sum2sq"


@dataclass(frozen=True)
class Intersection(SemigroupSpec):
    parts: tuple[SemigroupSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise SpecParseError("and(...) needs at least one part")

    def contains(self, n: int) -> bool:
        return all(p.contains(n) for p in self.parts)

    def _bits(self, N):
        return reduce(np.logical_and, (p._bits(N) for p in self.parts))

    def canonical(self):
        return "and(" + ",".join(p.canonical() for p in self.parts) + ")"


@dataclass(frozen=True)
class AdHocSet(SemigroupSpec):
    """An explicit finite set; closure is not assumed."""

    members: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(x) for x in self.members))
        if any(x < 1 for x in self.members):
            raise SpecParseError("set(...) members must be positive")

    def contains(self, n: int) -> bool:
        return n in self.members

    def _bits(self, N):
        bits = np.zeros(N + 1, dtype=bool)
        bits[[x for x in self.members if x <= N]] = True
        return bits

    def canonical(self):
        return "set(" + ",".join(map(str, sorted(self.members))) + ")"


@lru_cache(maxsize=65536)
def _generated_by(gens: tuple[int, ...], n: int) -> bool:
    if n == 1:
        return True
    return any(n % q == 0 and _generated_by(gens, n // q) for q in gens if q <= n)


def _close_under(arr: np.ndarray, q: int, op) -> None:
    """In place, ascending: ``arr[q*k] = op(arr[q*k], arr[k])``.

    Blocks k in [q^j, q^(j+1)) write only to [q^(j+1), q^(j+2)), so each block
    can be one vectorized step.
    """
    N = len(arr) - 1
    lo = 1
    top = N // q
    while lo <= top:
        hi = min(lo * q, top + 1)
        ks = np.arange(lo, hi)
        arr[ks * q] = op(arr[ks * q], arr[ks])
        lo = hi


# --- parsing -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[str]:
    out = []
    for num, name, sym in _TOKEN.findall(text):
        tok = num or name or sym
        if tok.strip():
            out.append(tok)
    return out


def parse_spec(text: str) -> SemigroupSpec:
    """Parse a semigroup expression (see module docstring)."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = "set(" + text[1:-1] + ")"
    toks = _tokenize(text)
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            raise SpecParseError(f"expected {tok!r} in {text!r}")
        pos += 1

    def ints():
        nonlocal pos
        expect("(")
        vals = []
        while True:
            if pos >= len(toks) or not toks[pos].isdigit():
                raise SpecParseError(f"expected integer in {text!r}")
            vals.append(int(toks[pos]))
            pos += 1
            if toks[pos : pos + 1] == [")"]:
                pos += 1
                return vals
            expect(",")

    def expr() -> SemigroupSpec:
        nonlocal pos
        if pos >= len(toks):
            raise SpecParseError(f"unexpected end of {text!r}")
        name = toks[pos].lower()
        pos += 1
        if name in ("full", "n", "nat"):
            return Full()
        if name == "trivial":
            return Trivial()
        if name in ("sum2sq", "sumsq"):
            return SumOfTwoSquares()
        if name == "gen":
            if toks[pos : pos + 3] == ["(", "primes", ")"]:
                pos += 3
                return Generators(None)
            return Generators(tuple(ints()))
        if name == "powers":
            (m,) = ints()
            return Powers(m)
        if name == "coprime":
            (m,) = ints()
            return Full() if m == 1 else CoprimeTo(m)
        if name == "set":
            return AdHocSet(frozenset(ints()))
        if name == "and":
            expect("(")
            parts = [expr()]
            while toks[pos : pos + 1] == [","]:
                pos += 1
                parts.append(expr())
            expect(")")
            return Intersection(tuple(parts))
        raise SpecParseError(f"unknown semigroup {name!r} in {text!r}")

    spec = expr()
    if pos != len(toks):
        raise SpecParseError(f"trailing input in {text!r}")
    return spec


def as_spec(spec: SemigroupSpec | str) -> SemigroupSpec:
    return parse_spec(spec) if isinstance(spec, str) else spec


def contains(spec: SemigroupSpec | str, n: int) -> bool:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return as_spec(spec).contains(n)


# --- sieves --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MembershipSieve:
    N: int
    bits: np.ndarray = field(repr=False)
    source: SemigroupSpec

    def __post_init__(self):
        self.bits.setflags(write=False)

    def __contains__(self, n: int) -> bool:
        return 1 <= n <= self.N and bool(self.bits[n])

    def __eq__(self, other):
        if not isinstance(other, MembershipSieve):
            return NotImplemented
        return self.N == other.N and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.N, self.source))

    @cached_property
    def members(self) -> list[int]:
        return np.flatnonzero(self.bits).tolist()

    @cached_property
    def is_closed(self) -> bool:
        return not verify_closure(self)

    def restrict(self, N: int) -> "MembershipSieve":
        if N > self.N:
            raise ValueError(f"cannot extend a sieve from {self.N} to {N}")
        if N == self.N:
            return self
        return MembershipSieve(N, self.bits[: N + 1].copy(), self.source)

    def same_set(self, other: "MembershipSieve") -> bool:
        n = min(self.N, other.N)
        return np.array_equal(self.bits[: n + 1], other.bits[: n + 1])

    def to_json(self) -> dict:
        return {"spec": self.source.canonical(), "N": self.N, "members": self.members}

    @classmethod
    def from_json(cls, obj: dict) -> "MembershipSieve":
        try:
            N = int(obj["N"])
            source = parse_spec(obj["spec"])
            members = [int(x) for x in obj["members"]]
        except (KeyError, TypeError) as exc:
            raise SpecParseError(f"malformed sieve JSON: {exc}") from exc
        return from_members(members, N, source)


def from_members(members: Iterable[int], N: int, source: SemigroupSpec | None = None) -> MembershipSieve:
    members = [m for m in members if 1 <= m <= N]
    bits = np.zeros(N + 1, dtype=bool)
    bits[members] = True
    if source is None:
        source = AdHocSet(frozenset(members))
    return MembershipSieve(N, bits, source)


def sieve(spec: SemigroupSpec | str, N: int) -> MembershipSieve:
    """Membership table of ``spec`` on ``[1..N]``."""
    spec = as_spec(spec)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > max_n():
        raise ResourceLimitError(f"N={N} exceeds the ceiling {max_n()} (set ${MAX_N_ENV})")
    bits = spec._bits(N)
    bits[0] = False
    return MembershipSieve(N, bits, spec)


def verify_closure(sv: MembershipSieve) -> list[tuple[int, int, int]]:
    """All (a, b, ab) with a <= b in the set, ab <= N, ab not in the set."""
    N, bits = sv.N, sv.bits
    members = np.flatnonzero(bits)
    out = []
    for a in members:
        a = int(a)
        if a * a > N:
            break
        bs = members[(members >= a) & (members <= N // a)]
        bad = bs[~bits[a * bs]]
        out.extend((a, int(b), a * int(b)) for b in bad)
    return out


@dataclass(frozen=True)
class AtomReport:
    atoms: list[int]
    unique_factorization: bool
    counterexample: int | None = None
    skipped: int = 0

    def to_json(self) -> dict:
        return {
            "atoms": self.atoms,
            "unique_factorization": self.unique_factorization,
            "counterexample": self.counterexample,
            "skipped": self.skipped,
        }


def _atom_list(sv: MembershipSieve) -> list[int]:
    N, bits = sv.N, sv.bits
    members = np.flatnonzero(bits)
    members = members[members >= 2]
    reducible = np.zeros(N + 1, dtype=bool)
    for a in members:
        a = int(a)
        if a * a > N:
            break
        bs = members[(members >= a) & (members <= N // a)]
        reducible[a * bs] = True
    return [int(n) for n in members if not reducible[n]]


def factorization_counts(atom_list: list[int], N: int) -> np.ndarray:
    """``counts[n]`` = number of atom multisets with product n (n <= N)."""
    counts = np.zeros(N + 1, dtype=np.int64)
    counts[1] = 1
    for a in atom_list:
        _close_under(counts, a, np.add)
    return counts


def atoms(sv: MembershipSieve) -> AtomReport:
    """Irreducibles of the sieved semigroup and whether factorization is unique."""
    violations = verify_closure(sv)
    if violations:
        a, b, ab = violations[0]
        raise ClosureViolation(f"{a}*{b}={ab} is not in the set ({len(violations)} violations)")
    atom_list = _atom_list(sv)
    counts = factorization_counts(atom_list, sv.N)
    members = np.flatnonzero(sv.bits)
    c = counts[members]
    skipped = int(np.count_nonzero(c == 0))
    multi = members[c >= 2]
    counterexample = int(multi[0]) if len(multi) else None
    return AtomReport(atom_list, counterexample is None, counterexample, skipped)


def factorizations(sv: MembershipSieve, n: int) -> list[tuple[int, ...]]:
    """All atom multisets (sorted tuples) with product ``n``, in lexicographic order."""
    if n not in sv:
        raise NotInSemigroup(f"{n} is not in {sv.source.canonical()} (N={sv.N})")
    atom_list = [a for a in atoms(sv).atoms if a <= n]
    out: list[tuple[int, ...]] = []

    def walk(rest: int, start: int, acc: list[int]) -> None:
        if rest == 1:
            out.append(tuple(acc))
            return
        for i in range(start, len(atom_list)):
            a = atom_list[i]
            if a > rest:
                break
            if rest % a == 0:
                acc.append(a)
                walk(rest // a, i, acc)
                acc.pop()

    walk(n, 0, [])
    return sorted(out)
