"""Exact arithmetic in GF(p^m) and exact dense linear algebra over it.

Field elements are plain integers in ``[0, q)``.  For a prime field the value
is the residue itself; for an extension field it encodes the coefficient
vector of the polynomial-basis representation in base ``p`` (least
significant digit = constant coefficient).  Elements carry no reference to
their field: every operation takes the :class:`FieldCtx` explicitly, which
keeps mass enumeration over millions of matrices cheap.  Mixing elements of
different fields is a caller error detected only by value-range checks.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .errors import (
    BadSubspaceError,
    DivisionByZeroError,
    FieldTooLargeError,
    NotPrimeError,
    ShapeError,
)

FIELD_SIZE_CAP = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Raw coefficient arithmetic mod p, used only to pick the field modulus.
# Polynomials here are tuples of ints in ascending degree order, no trailing
# zeros.  The full Poly type (polyring) is built on top of FieldCtx and so
# cannot be used during field construction.
# ---------------------------------------------------------------------------

def _raw_rem(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of a mod b over F_p; b must be nonzero."""
    rem = list(a)
    db = len(b) - 1
    lead_inv = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
    while len(rem) - 1 >= db and rem:
        shift = len(rem) - 1 - db
        fac = (rem[-1] * lead_inv) % p
        for i, c in enumerate(b):
            rem[shift + i] = (rem[shift + i] - fac * c) % p
        while rem and rem[-1] == 0:
            rem.pop()
    return tuple(rem)


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Candidates are compared coefficient by coefficient from the highest
    degree down.  Irreducibility is decided by trial division against all
    monic polynomials of degree between 1 and m // 2.
    """
    divisors = []
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisors.append(tuple(reversed(tail)) + (1,))
    for desc in itertools.product(range(p), repeat=m):
        cand = tuple(reversed(desc)) + (1,)
        if all(_raw_rem(cand, div, p) for div in divisors):
            return cand
    raise AssertionError("no irreducible of degree %d over F_%d" % (m, p))


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------

class FieldCtx:
    """Arithmetic context for GF(q), q = p^m.

    Immutable after construction; safe to share across workers.  Use
    :func:`field_new` rather than calling the constructor directly, so that
    contexts are cached one per (p, m).
    """

    __slots__ = ("p", "m", "q", "modulus", "_inv", "_exp", "_log", "_digits")

    def __init__(self, p: int, m: int, modulus: tuple[int, ...] | None):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus
        if m == 1:
            self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
            self._exp = self._log = self._digits = None
        else:
            self._digits = [self._decode(v) for v in range(self.q)]
            self._build_log_tables()
            self._inv = None

    # -- construction helpers ------------------------------------------------

    def _decode(self, value: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.m):
            value, digit = divmod(value, self.p)
            digits.append(digit)
        return tuple(digits)

    def _encode(self, digits: Sequence[int]) -> int:
        value = 0
        for d in reversed(digits):
            value = value * self.p + d
        return value

    def _raw_mul(self, a: int, b: int) -> int:
        """Polynomial-basis product without log tables; used to build them."""
        p, m = self.p, self.m
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * m - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] = (prod[i + j] + ca * cb) % p
        mod = self.modulus
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(m):
                    prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
        return self._encode(prod[: m])

    def _build_log_tables(self) -> None:
        q = self.q
        for g in range(2, q):
            seen = 1
            acc = g
            while acc != 1:
                acc = self._raw_mul(acc, g)
                seen += 1
            if seen == q - 1:
                break
        else:  # pragma: no cover - multiplicative group is always cyclic
            raise AssertionError("no generator found")
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            exp[i + q - 1] = acc
            log[acc] = i
            acc = self._raw_mul(acc, g)
        self._exp = exp
        self._log = log

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        da, db = self._digits[a], self._digits[b]
        return self._encode([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p = self.p
        return self._encode([(-x) % p for x in self._digits[a]])

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZeroError("zero has no multiplicative inverse")
        if self.m == 1:
            return self._inv[a]
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        return range(self.q)

    # -- plumbing ------------------------------------------------------------

    @property
    def spec_string(self) -> str:
        """Field spec in the CLI grammar: "p" for prime fields, else "p^m"."""
        return str(self.p) if self.m == 1 else f"{self.p}^{self.m}"

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q})"

    def __reduce__(self):
        return (field_new, (self.p, self.m))


_FIELD_CACHE: dict[tuple[int, int], FieldCtx] = {}


def field_new(p: int, m: int = 1) -> FieldCtx:
    """Return the (cached) field context for GF(p^m).

    For m > 1 the modulus is the lexicographically smallest monic
    irreducible of degree m over F_p, coefficients compared from the highest
    degree down.
    """
    key = (p, m)
    ctx = _FIELD_CACHE.get(key)
    if ctx is not None:
        return ctx
    if m < 1:
        raise ValueError(f"extension degree must be >= 1, got {m}")
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p ** m > FIELD_SIZE_CAP:
        raise FieldTooLargeError(f"{p}^{m} exceeds the cap of 2^16")
    modulus = _smallest_irreducible(p, m) if m > 1 else None
    ctx = FieldCtx(p, m, modulus)
    _FIELD_CACHE[key] = ctx
    return ctx


def parse_field_spec(text: str) -> FieldCtx:
    """Parse a field spec string: "p", "q" (a prime power) or "p^m"."""
    text = text.strip()
    if "^" in text:
        p_str, m_str = text.split("^", 1)
        return field_new(int(p_str), int(m_str))
    q = int(text)
    if q < 2:
        raise NotPrimeError(f"field order must be >= 2, got {q}")
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    m = 0
    rest = q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise NotPrimeError(f"{q} is not a prime power")
    return field_new(p, m)


# ---------------------------------------------------------------------------
# Matrices over a field: flat row-major integer entries.
# ---------------------------------------------------------------------------

class ScalarMatrix:
    """Dense matrix over a field, entries stored row-major as plain ints."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[int]):
        if len(entries) != rows * cols:
            raise ShapeError(
                f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ScalarMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for row in rows:
            if len(row) != ncols:
                raise ShapeError("ragged rows")
            flat.extend(row)
        return cls(nrows, ncols, flat)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "ScalarMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ScalarMatrix":
        flat = [0] * (n * n)
        for i in range(n):
            flat[i * n + i] = 1
        return cls(n, n, flat)

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols: (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        k = self.cols
        e = self.entries
        return [list(e[i * k: (i + 1) * k]) for i in range(self.rows)]

    def transpose(self) -> "ScalarMatrix":
        flat = [self.entries[i * self.cols + j]
                for j in range(self.cols) for i in range(self.rows)]
        return ScalarMatrix(self.cols, self.rows, flat)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ScalarMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"ScalarMatrix({self.to_rows()!r})"


def mat_mul(field: FieldCtx, a: ScalarMatrix, b: ScalarMatrix) -> ScalarMatrix:
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = rows_mul(field, a.to_rows(), b.to_rows())
    return ScalarMatrix(a.rows, b.cols, [x for row in out for x in row])


def rows_mul(field: FieldCtx, a: list[list[int]],
             b: list[list[int]]) -> list[list[int]]:
    """Row-list matrix product; no shape checks (internal hot path)."""
    mul, add = field.mul, field.add
    ncols = len(b[0]) if b else 0
    out = []
    for arow in a:
        acc = [0] * ncols
        for x, brow in zip(arow, b):
            if x:
                for j, y in enumerate(brow):
                    if y:
                        acc[j] = add(acc[j], mul(x, y))
        out.append(acc)
    return out


def rref_rows(field: FieldCtx, rows: Iterable[Sequence[int]],
              cols: int) -> list[list[int]]:
    """Reduced row-echelon form; returns only the nonzero (pivot) rows.

    Pivot search scans each column top to bottom and takes the first nonzero
    entry, which is all an exact field needs.
    """
    work = [list(r) for r in rows]
    mul, sub, inv = field.mul, field.sub, field.inv
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, len(work)):
            if work[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        prow = work[r]
        lead = prow[c]
        if lead != 1:
            lead_inv = inv(lead)
            for j in range(c, cols):
                prow[j] = mul(prow[j], lead_inv)
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                row = work[i]
                for j in range(c, cols):
                    if prow[j]:
                        row[j] = sub(row[j], mul(f, prow[j]))
        r += 1
        if r == len(work):
            break
    return work[:r]


def rank(field: FieldCtx, matrix: ScalarMatrix) -> int:
    """Row-echelon rank over the field, by exact Gaussian elimination."""
    return rank_rows(field, matrix.to_rows(), matrix.cols)


def rank_rows(field: FieldCtx, rows: list[list[int]], cols: int) -> int:
    """Rank by forward elimination; consumes (mutates) the row lists."""
    mul, sub, inv = field.mul, field.sub, field.inv
    work = rows
    r = 0
    nrows = len(work)
    for c in range(cols):
        pivot = None
        for i in range(r, nrows):
            if work[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        prow = work[r]
        pinv = inv(prow[c])
        for i in range(r + 1, nrows):
            row = work[i]
            if row[c]:
                f = mul(row[c], pinv)
                for j in range(c, cols):
                    if prow[j]:
                        row[j] = sub(row[j], mul(f, prow[j]))
        r += 1
        if r == nrows:
            break
    return r


def kernel_basis_rows(field: FieldCtx, rows: Iterable[Sequence[int]],
                      cols: int) -> tuple[tuple[int, ...], ...]:
    """Canonical (reduced-echelon) basis of the right null space."""
    red = rref_rows(field, rows, cols)
    pivots = []
    for row in red:
        for j, v in enumerate(row):
            if v:
                pivots.append(j)
                break
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    if not free:
        return ()
    neg = field.neg
    vectors = []
    for f in free:
        vec = [0] * cols
        vec[f] = 1
        for i, p in enumerate(pivots):
            vec[p] = neg(red[i][f])
        vectors.append(vec)
    return tuple(tuple(r) for r in rref_rows(field, vectors, cols))


def kernel_intersection(field: FieldCtx, mats: Sequence[ScalarMatrix]
                        ) -> tuple[tuple[int, ...], ...]:
    """Canonical basis of the intersection of the kernels of the matrices.

    All matrices must have the same column count k; the result is a basis of
    a subspace of F_q^k with dimension k - rank(vertical stack).
    """
    if not mats:
        raise ShapeError("need at least one matrix")
    cols = mats[0].cols
    stacked: list[list[int]] = []
    for m in mats:
        if m.cols != cols:
            raise ShapeError("column counts differ")
        stacked.extend(m.to_rows())
    return kernel_basis_rows(field, stacked, cols)


def mat_inv(field: FieldCtx, matrix: ScalarMatrix) -> ScalarMatrix:
    """Inverse of a square matrix, by Gauss-Jordan on [M | I]."""
    n = matrix.rows
    if n != matrix.cols:
        raise ShapeError("inverse needs a square matrix")
    aug = []
    for i, row in enumerate(matrix.to_rows()):
        ident = [0] * n
        ident[i] = 1
        aug.append(row + ident)
    red = rref_rows(field, aug, 2 * n)
    if len(red) != n or any(red[i][i] != 1 for i in range(n)):
        raise ShapeError("matrix is singular")
    return ScalarMatrix.from_rows([row[n:] for row in red])


def echelon_subspaces(field: FieldCtx, k: int,
                      dim: int | None = None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every subspace of F_q^k as its canonical reduced-echelon basis.

    The zero subspace is the empty tuple.  Restrict to one dimension with
    ``dim``.
    """
    dims = range(k + 1) if dim is None else [dim]
    for d in dims:
        if d == 0:
            yield ()
            continue
        for pivots in itertools.combinations(range(k), d):
            pivot_set = set(pivots)
            free_slots = [(i, j) for i in range(d) for j in range(k)
                          if j > pivots[i] and j not in pivot_set]
            for fill in itertools.product(field.elements(), repeat=len(free_slots)):
                basis = [[0] * k for _ in range(d)]
                for i in range(d):
                    basis[i][pivots[i]] = 1
                for (i, j), v in zip(free_slots, fill):
                    basis[i][j] = v
                yield tuple(tuple(row) for row in basis)


def check_echelon_basis(field: FieldCtx, basis: Sequence[Sequence[int]],
                        k: int) -> tuple[tuple[int, ...], ...]:
    """Validate that ``basis`` is a canonical echelon basis inside F_q^k."""
    rows = [tuple(r) for r in basis]
    for row in rows:
        if len(row) != k:
            raise BadSubspaceError("basis vector length differs from k")
        if any(not (0 <= v < field.q) for v in row):
            raise BadSubspaceError("entry out of field range")
    canonical = tuple(tuple(r) for r in rref_rows(field, rows, k))
    if canonical != tuple(rows):
        raise BadSubspaceError("basis is not reduced-echelon / independent")
    return canonical
