"""Unimodular tuples with explicit Bezout cofactors.

Given 2n distinct generators ``q_1..q_2n`` the tuple is

    f_j = q_j^{-s}  (j <= n),     f_{n+1} = prod_{j<=n} (1 - (q_j q_{n+j})^{-s})

and expanding the product yields cofactors with ``sum f_j g_j = 1``.  Every
nonempty subset T of {1..n} contributes ``(-1)^|T| prod_{i in T} (q_i q_{n+i})^{-s}``
to f_{n+1}; that term is charged to ``g_j`` for ``j = min(T)`` after
factoring out ``q_j^{-s}``.  ``g_{n+1} = 1``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import (
    GeneratorsNotDistinct,
    InsufficientTruncation,
    LengthMismatch,
    NotInSemigroup,
)
from .scalars import RATIONAL
from .semigroup import Generators, MembershipSieve, SemigroupSpec, as_spec, atoms, sieve
from .series import DirichletSeries, add, convolve, invert, scale


@dataclass(frozen=True)
class BezoutSystem:
    n: int
    generators_used: tuple[int, ...]
    fs: tuple[DirichletSeries, ...]
    gs: tuple[DirichletSeries, ...]
    N: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": list(self.generators_used),
            "N": self.N,
            "fs": [f.to_json() for f in self.fs],
            "gs": [g.to_json() for g in self.gs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BezoutSystem":
        fs = tuple(DirichletSeries.from_json(f) for f in obj["fs"])
        gs = tuple(DirichletSeries.from_json(g) for g in obj["gs"])
        return cls(int(obj["n"]), tuple(obj["generators"]), fs, gs, int(obj["N"]))


@dataclass(frozen=True)
class BezoutCheck:
    ok: bool
    residual: DirichletSeries

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "residual": self.residual.to_json()}


def required_truncation(q: Sequence[int]) -> int:
    n = len(q) // 2
    return math.prod(q[j] * q[n + j] for j in range(n))


def unimodular_tuple(
    q: Sequence[int],
    N: int | None = None,
    backend: str = RATIONAL,
    semigroup: SemigroupSpec | MembershipSieve | str | None = None,
) -> BezoutSystem:
    """Build ``(f_1..f_{n+1})`` and cofactors ``(g_1..g_{n+1})`` from 2n generators."""
    q = tuple(int(x) for x in q)
    if len(q) % 2:
        raise LengthMismatch(f"need an even number of generators, got {len(q)}")
    if len(set(q)) != len(q):
        raise GeneratorsNotDistinct(f"generators repeat: {q}")
    if any(x < 2 for x in q):
        raise GeneratorsNotDistinct(f"generators must be >= 2: {q}")
    n = len(q) // 2
    need = required_truncation(q)
    N = need if N is None else N
    if N < need:
        raise InsufficientTruncation(f"N={N} < {need}, the product would be truncated")
    if semigroup is not None:
        member = semigroup.__contains__ if isinstance(semigroup, MembershipSieve) else as_spec(semigroup).contains
        missing = [x for x in q if not member(x)]
        if missing:
            raise NotInSemigroup(f"generators {missing} are not in the semigroup")

    support = sieve(Generators(tuple(sorted(q))), N)
    pair = [q[j] * q[n + j] for j in range(n)]
    last: dict[int, int] = {1: 1}
    cof: list[dict[int, int]] = [{} for _ in range(n)]
    for size in range(1, n + 1):
        sign = -1 if size % 2 else 1
        for T in combinations(range(n), size):
            m = math.prod(pair[i] for i in T)
            last[m] = last.get(m, 0) + sign
            j = T[0]
            k = m // q[j]
            cof[j][k] = cof[j].get(k, 0) - sign

    def mk(coeffs):
        return DirichletSeries(N, coeffs, backend, support)

    fs = tuple(mk({q[j]: 1}) for j in range(n)) + (mk(last),)
    gs = tuple(mk(c) for c in cof) + (mk({1: 1}),)
    return BezoutSystem(n, q, fs, gs, N)


def bezout_sum(fs: Sequence[DirichletSeries], gs: Sequence[DirichletSeries]) -> DirichletSeries:
    total = None
    for f, g in zip(fs, gs):
        term = convolve(f, g)
        total = term if total is None else add(total, term)
    return total


def verify_bezout(sys: BezoutSystem) -> BezoutCheck:
    """Exact check of ``sum f_j g_j = 1`` on ``[1..N]``; the residual is sum - 1."""
    total = bezout_sum(sys.fs, sys.gs)
    one = DirichletSeries.unit(total.N, total.backend)
    residual = add(total, scale(one, -1))
    return BezoutCheck(not residual.coeffs, residual)


def check_reduction_certificate(
    sys: BezoutSystem, xs: Sequence[DirichletSeries], ys: Sequence[DirichletSeries]
) -> bool:
    """True iff ``sum_j (f_j + x_j f_{n+1}) y_j = 1`` on ``[1..N]``.

    This can refute a claimed reduction; it can never establish that none exists.
    """
    n = sys.n
    if len(xs) != n or len(ys) != n:
        raise LengthMismatch(f"expected {n} x's and y's, got {len(xs)} and {len(ys)}")
    if n == 0:
        return False
    last = sys.fs[n]
    shifted = [add(sys.fs[j], convolve(xs[j], last)) for j in range(n)]
    total = bezout_sum(shifted, ys)
    return total == DirichletSeries.unit(total.N, total.backend)


def random_candidate(sys: BezoutSystem, rng: random.Random, terms: int = 4, bound: int = 3) -> DirichletSeries:
    """Random small-integer series on the tuple's support semigroup."""
    sv = sys.fs[0].support
    pool = sv.members if sv is not None else list(range(1, sys.N + 1))
    coeffs = {rng.choice(pool): rng.randint(-bound, bound) for _ in range(terms)}
    return DirichletSeries(sys.N, coeffs, sys.fs[0].backend, sv)


def refute_random_candidates(sys: BezoutSystem, trials: int = 100, seed: int = 0) -> int:
    """Number of random (xs, ys) candidates that pass; bounded random candidates are expected to fail."""
    rng = random.Random(seed)
    passed = 0
    for _ in range(trials):
        xs = [random_candidate(sys, rng) for _ in range(sys.n)]
        ys = [random_candidate(sys, rng) for _ in range(sys.n)]
        passed += check_reduction_certificate(sys, xs, ys)
    return passed


def formal_reduction(sys: BezoutSystem) -> tuple[list[DirichletSeries], list[DirichletSeries]]:
    """A reduction valid for *truncated formal* series: x_1 = 1, y_1 = 1/(f_1 + f_{n+1}).

    f_1 + f_{n+1} has constant term 1 and so is invertible coefficientwise,
    but its inverse need not be bounded on Re(s) > 0.  This is why the
    certificate checker cannot decide reducibility in the bounded algebra.
    """
    n = sys.n
    if n == 0:
        raise LengthMismatch("a one-element tuple has nothing to reduce")
    zero = DirichletSeries.zero(sys.N, sys.fs[0].backend)
    one = DirichletSeries.unit(sys.N, sys.fs[0].backend)
    xs = [one] + [zero] * (n - 1)
    ys = [invert(add(sys.fs[0], sys.fs[n]))] + [zero] * (n - 1)
    return xs, ys


def first_atoms(spec: SemigroupSpec | str, count: int, start: int = 64) -> list[int]:
    """Smallest ``count`` atoms of a semigroup (sieving to growing bounds)."""
    spec = as_spec(spec)
    bound = start
    while True:
        found = atoms(sieve(spec, bound)).atoms
        if len(found) >= count:
            return found[:count]
        bound *= 4
