"""Closed-form counting of matrices over finite fields, in exact integers.

Every count here is an exact nonnegative integer computed with unbounded
integer (or exact rational) arithmetic.  Partitions are plain tuples of
positive ints in weakly decreasing order; the empty tuple is the empty
partition.  Census results are collected into :class:`CensusReport` maps
whose keys are canonical strings, so that closed-form and enumerated reports
diff cleanly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator

from .errors import (
    DegreeMismatchError,
    DegreeTooLargeError,
    NonMonicError,
    ShapeError,
)
from .gf import FieldCtx
from .polyring import Poly, _multiplicity_unchecked, factorize, monic_polys
from .smith import InvariantFactorTuple

CENSUS_SCHEMA = "census-report/v1"


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------

def conjugate(parts: tuple[int, ...]) -> tuple[int, ...]:
    """Conjugate partition; an involution on partitions."""
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= i)
                 for i in range(1, parts[0] + 1))


def partitions(total: int, max_parts: int | None = None
               ) -> Iterator[tuple[int, ...]]:
    """All partitions of ``total`` with at most ``max_parts`` parts, descending."""
    limit = total if max_parts is None else max_parts

    def gen(remaining: int, max_part: int, slots: int):
        if remaining == 0:
            yield ()
            return
        if slots == 0 or max_part == 0:
            return
        for first in range(min(remaining, max_part), 0, -1):
            for rest in gen(remaining - first, first, slots - 1):
                yield (first,) + rest

    yield from gen(total, total, limit)


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------

def gl_order(n: int, q: int) -> int:
    """Order of the group of invertible n x n matrices; 1 for n = 0."""
    out = 1
    qn = q ** n
    for i in range(n):
        out *= qn - q ** i
    return out


def q_binomial(k: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of a k-dimensional space over F_q.

    Returns 0 for d outside [0, k], so sums over d stay total.
    """
    if d < 0 or d > k:
        return 0
    out = 1
    for i in range(1, d + 1):
        out, r = divmod(out * (q ** (k - d + i) - 1), q ** i - 1)
        assert r == 0, "partial Gaussian binomial must be integral"
    return out


def centralizer_factor(parts: tuple[int, ...], d: int, q: int) -> int:
    """Partition-indexed product in the denominator of the class-size formula.

    Depends on the irreducible block polynomial only through its degree d.
    """
    conj = conjugate(parts)
    out = 1
    h = 0
    for i, ci in enumerate(conj):
        h += ci
        mult = ci - (conj[i + 1] if i + 1 < len(conj) else 0)
        for j in range(1, mult + 1):
            out *= q ** (d * h) - q ** (d * (h - j))
    return out


def exponent_profile(ifs: InvariantFactorTuple) -> dict[Poly, tuple[int, ...]]:
    """Partition of prime-power exponents per irreducible divisor.

    For each monic irreducible f dividing the product of the invariant
    factors, the value is the weakly decreasing tuple of exponents of f in
    p_k, p_{k-1}, ..., truncated at the first zero.
    """
    product = ifs.product()
    profile: dict[Poly, tuple[int, ...]] = {}
    for f, _ in factorize(product).factors:
        parts = []
        for p in reversed(ifs.polys):
            e = _multiplicity_unchecked(f, p)
            if e == 0:
                break
            parts.append(e)
        profile[f] = tuple(parts)
    return profile


def _profile_denominator(ifs: InvariantFactorTuple, q: int) -> int:
    out = 1
    for f, parts in exponent_profile(ifs).items():
        out *= centralizer_factor(parts, len(f.coeffs) - 1, q)
    return out


def _exact_div(a: int, b: int) -> int:
    quot, rem = divmod(a, b)
    assert rem == 0, "count formula produced a non-integer"
    return quot


def _tail_product(n: int, lo: int, k: int, q: int) -> int:
    """Product of (q^n - q^i) for i = lo .. k."""
    out = 1
    qn = q ** n
    for i in range(lo, k + 1):
        out *= qn - q ** i
    return out


# ---------------------------------------------------------------------------
# Counting formulas
# ---------------------------------------------------------------------------

def count_conjugacy_class(ifs: InvariantFactorTuple) -> int:
    """Number of n x n matrices whose pencil has these n invariant factors.

    Zero unless the factor degrees sum to n.
    """
    n = len(ifs)
    if ifs.total_degree() != n:
        return 0
    q = ifs.field.q
    return _exact_div(gl_order(n, q), _profile_denominator(ifs, q))


def count_with_subspace(n: int, k: int, d: int,
                        ifs: InvariantFactorTuple) -> int:
    """Maps from a k-dim subspace into the ambient n-dim space with a fixed
    d-dimensional maximal invariant subspace and the given invariant factors.

    The value is independent of which d-dimensional subspace is fixed.
    """
    if len(ifs) != k or not 0 <= d <= k <= n:
        raise ShapeError(f"need len(I) = k and 0 <= d <= k <= n, got {n},{k},{d}")
    if ifs.total_degree() != d:
        raise DegreeMismatchError(
            f"invariant factors have total degree {ifs.total_degree()}, not {d}")
    q = ifs.field.q
    head = _exact_div(gl_order(d, q), _profile_denominator(ifs, q))
    return head * _tail_product(n, d + 1, k, q)


def count_invariant_factors(n: int, k: int, ifs: InvariantFactorTuple) -> int:
    """Number of n x k matrices whose pencil has the given invariant factors."""
    if len(ifs) != k or not 1 <= k <= n:
        raise ShapeError(f"need len(I) = k and 1 <= k <= n, got {n},{k}")
    d = ifs.total_degree()
    if d > k:
        return 0
    q = ifs.field.q
    head = _exact_div(gl_order(d, q), _profile_denominator(ifs, q))
    return q_binomial(k, d, q) * head * _tail_product(n, d + 1, k, q)


def count_given_u(n: int, k: int, d: int, q: int) -> int:
    """Maps from a k-dim subspace into n-dim space whose maximal invariant
    subspace is one fixed d-dimensional subspace."""
    if not 0 <= d <= k <= n:
        raise ShapeError(f"need 0 <= d <= k <= n, got {n},{k},{d}")
    return q ** (d * d) * _tail_product(n, d + 1, k, q)


def count_reachability(k: int, n: int, r: int, q: int) -> int:
    """Pairs (A, B) in M_k x M_{k,n-k} whose reachability matrix has rank r."""
    if not 0 <= r <= k < n:
        raise ShapeError(f"need 0 <= r <= k < n, got k={k}, n={n}, r={r}")
    return (q_binomial(k, r, q) * q ** ((k - r) ** 2)
            * _tail_product(n, k - r + 1, k, q))


def _inverse_power_product(q: int, r: int) -> Fraction:
    out = Fraction(1)
    for i in range(1, r + 1):
        out *= 1 - Fraction(1, q ** i)
    return out


def count_char_poly_square(f: Poly) -> int:
    """Square matrices with characteristic polynomial f (deg f = matrix size)."""
    if not f.is_monic():
        raise NonMonicError("characteristic polynomial must be monic")
    n = len(f.coeffs) - 1
    q = f.field.q
    value = Fraction(q ** (n * n - n)) * _inverse_power_product(q, n)
    for g, e in factorize(f).factors:
        value /= _inverse_power_product(q ** (len(g.coeffs) - 1), e)
    assert value.denominator == 1, "fiber count must be integral"
    return int(value)


def count_char_poly_rect(f: Poly, n: int, k: int) -> int:
    """n x k matrices whose pencil has invariant-factor product f (deg f <= k)."""
    if not f.is_monic():
        raise NonMonicError("fiber polynomial must be monic")
    if not 1 <= k <= n:
        raise ShapeError(f"need 1 <= k <= n, got {n},{k}")
    d = len(f.coeffs) - 1
    if d > k:
        raise DegreeTooLargeError(f"deg f = {d} exceeds k = {k}")
    q = f.field.q
    return (q_binomial(k, d, q) * count_char_poly_square(f)
            * _tail_product(n, d + 1, k, q))


def count_nilpotent_extendable(k: int, n: int, q: int) -> int:
    """Maps from a k-dim subspace into n-dim space that extend to a nilpotent
    operator on the whole space."""
    if not 1 <= k <= n:
        raise ShapeError(f"need 1 <= k <= n, got k={k}, n={n}")
    return q ** (n * (k - 1)) * (q ** n - q ** k + 1)


def check_q_identity(d: int, q: int, y: int) -> bool:
    """Exactness self-test of the binomial-style power expansion at integer y."""
    if d < 0:
        raise ShapeError("d must be nonnegative")
    rhs = 0
    for j in range(d + 1):
        term = q ** (j * j) * q_binomial(d, j, q)
        for i in range(j + 1, d + 1):
            term *= y - q ** i
        rhs += term
    return y ** d == rhs


# ---------------------------------------------------------------------------
# Enumerating all invariant-factor tuples
# ---------------------------------------------------------------------------

def chains_with_product(f: Poly, k: int) -> Iterator[InvariantFactorTuple]:
    """All k-tuples p_1 | p_2 | ... | p_k of monic polynomials with product f.

    Built from the factorization of f: a chain corresponds to one weakly
    increasing exponent sequence per irreducible divisor, i.e. a partition of
    its exponent into at most k parts.
    """
    field = f.field
    factored = factorize(f)
    per_factor: list[tuple[Poly, list[tuple[int, ...]]]] = []
    for g, e in factored.factors:
        seqs = [tuple([0] * (k - len(lam)) + sorted(lam))
                for lam in partitions(e, max_parts=k)]
        per_factor.append((g, seqs))
    one = Poly.one(field)
    for combo in itertools.product(*(seqs for _, seqs in per_factor)):
        polys = []
        for i in range(k):
            p = one
            for (g, _), seq in zip(per_factor, combo):
                if seq[i]:
                    p = p * g ** seq[i]
            polys.append(p)
        yield InvariantFactorTuple(polys)


def invariant_factor_tuples(field: FieldCtx, k: int
                            ) -> Iterator[InvariantFactorTuple]:
    """All valid k-tuples of invariant factors with total degree <= k."""
    for d in range(k + 1):
        for f in monic_polys(field, d):
            yield from chains_with_product(f, k)


# ---------------------------------------------------------------------------
# Census reports
# ---------------------------------------------------------------------------

@dataclass
class CensusReport:
    """Exact tally keyed by a canonical classifying string."""

    parameters: dict
    entries: dict[str, int] = dc_field(default_factory=dict)
    source: str = "closed-form"

    def total(self) -> int:
        return sum(self.entries.values())

    def to_json_dict(self) -> dict:
        return {
            "schema": CENSUS_SCHEMA,
            "source": self.source,
            "parameters": self.parameters,
            "entries": {key: str(v) for key, v in self.entries.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "CensusReport":
        data = json.loads(text)
        if data.get("schema") != CENSUS_SCHEMA:
            raise ValueError(f"not a census report: {data.get('schema')!r}")
        return cls(parameters=data["parameters"],
                   entries={key: int(v) for key, v in data["entries"].items()},
                   source=data["source"])


def make_params(mode: str, f: FieldCtx, n: int, k: int, **extra) -> dict:
    params = {"mode": mode, "q": f.q, "p": f.p, "m": f.m, "n": n, "k": k}
    params.update(extra)
    return params


def pencil_census(f: FieldCtx, n: int, k: int) -> CensusReport:
    """Closed-form census of n x k matrices by invariant-factor tuple."""
    if not 1 <= k <= n:
        raise ShapeError(f"need 1 <= k <= n, got {n},{k}")
    entries = {}
    for ifs in invariant_factor_tuples(f, k):
        v = count_invariant_factors(n, k, ifs)
        if v:
            entries[str(ifs)] = v
    return CensusReport(make_params("pencil", f, n, k), entries)


def pair_census(f: FieldCtx, k: int, n: int) -> CensusReport:
    """Closed-form census of matrix pairs by reachability rank."""
    entries = {str(r): count_reachability(k, n, r, f.q) for r in range(k + 1)}
    return CensusReport(make_params("pair", f, n, k), entries)


def fiber_census(f: FieldCtx, n: int, k: int) -> CensusReport:
    """Closed-form census of n x k matrices by invariant-factor product."""
    if not 1 <= k <= n:
        raise ShapeError(f"need 1 <= k <= n, got {n},{k}")
    entries = {}
    for d in range(k + 1):
        for poly in monic_polys(f, d):
            v = count_char_poly_rect(poly, n, k)
            if v:
                entries[str(poly)] = v
    return CensusReport(make_params("fiber", f, n, k), entries)


def subspace_census(f: FieldCtx, n: int, k: int, d: int) -> CensusReport:
    """Closed-form census, per tuple, of maps whose maximal invariant
    subspace is a fixed d-dimensional one (the same for every such subspace)."""
    if not 0 <= d <= k <= n:
        raise ShapeError(f"need 0 <= d <= k <= n, got {n},{k},{d}")
    entries = {}
    for poly in monic_polys(f, d):
        for ifs in chains_with_product(poly, k):
            v = count_with_subspace(n, k, d, ifs)
            if v:
                entries[str(ifs)] = v
    return CensusReport(make_params("subspace", f, n, k, d=d), entries)


def nilext_census(f: FieldCtx, n: int, k: int) -> CensusReport:
    """Closed-form count of maps extendable to a nilpotent operator."""
    entries = {"extendable": count_nilpotent_extendable(k, n, f.q)}
    return CensusReport(make_params("nilext", f, n, k), entries)
