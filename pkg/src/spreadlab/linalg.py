"""Exact linear algebra over finite fields: RREF, subspaces, hyperplanes.

Matrices are tuples of row tuples of field-element encodings.  A Subspace
stores its reduced-row-echelon basis with zero rows dropped, so structural
equality is subspace equality and instances are hashable. GF(2) elimination
is bit-packed (rows become Python ints, elimination is word-parallel XOR);
every other field takes the generic path.

Vectors of V(n, q) are also handled as single integers via base-q positional
encoding (digit i = coordinate i); ``PointSpace`` does fast vector addition
on these encodings, which is what the spread-verification and partition
covers run on.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

from .errors import (
    AmbientMismatchError,
    BudgetExceededError,
    FieldMismatchError,
    InvalidParamsError,
)
from .gf import Field, field_for_order

DEFAULT_ENUM_BUDGET = 1_000_000


@dataclass(frozen=True)
class MatrixFq:
    """Dense matrix over a finite field; rows of encodings."""

    field: Field
    ncols: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def nrows(self) -> int:
        return len(self.rows)


def matrix(field: Field, rows, ncols: int | None = None) -> MatrixFq:
    rows = tuple(tuple(r) for r in rows)
    if ncols is None:
        if not rows:
            raise InvalidParamsError("ncols required for a matrix with no rows")
        ncols = len(rows[0])
    for r in rows:
        if len(r) != ncols:
            raise InvalidParamsError("ragged rows")
        field._check(*r)
    return MatrixFq(field, ncols, rows)


def _rref_gf2(rows, ncols):
    packed = []
    for r in rows:
        acc = 0
        for j, v in enumerate(r):
            if v:
                acc |= 1 << j
        packed.append(acc)
    k = 0
    for col in range(ncols):
        bit = 1 << col
        piv = None
        for i in range(k, len(packed)):
            if packed[i] & bit:
                piv = i
                break
        if piv is None:
            continue
        packed[k], packed[piv] = packed[piv], packed[k]
        pr = packed[k]
        for i in range(len(packed)):
            if i != k and packed[i] & bit:
                packed[i] ^= pr
        k += 1
        if k == len(packed):
            break
    return [
        tuple((row >> j) & 1 for j in range(ncols)) for row in packed[:k]
    ]


def _rref_generic(field, rows, ncols):
    work = [list(r) for r in rows]
    k = 0
    for col in range(ncols):
        piv = None
        for i in range(k, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[k], work[piv] = work[piv], work[k]
        lead = work[k][col]
        if lead != 1:
            inv = field.inv(lead)
            work[k] = [field.mul(inv, x) for x in work[k]]
        pr = work[k]
        for i in range(len(work)):
            if i != k and work[i][col]:
                c = work[i][col]
                work[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(work[i], pr)]
        k += 1
        if k == len(work):
            break
    return [tuple(r) for r in work[:k]]


def rref_rows(field: Field, rows, ncols: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form; zero rows dropped, pivot order."""
    if field.q == 2:
        return tuple(_rref_gf2(rows, ncols))
    return tuple(_rref_generic(field, rows, ncols))


def rref(m: MatrixFq) -> MatrixFq:
    return MatrixFq(m.field, m.ncols, rref_rows(m.field, m.rows, m.ncols))


def rank(m: MatrixFq) -> int:
    return len(rref_rows(m.field, m.rows, m.ncols))


@dataclass(frozen=True)
class Subspace:
    """Subspace of V(ambient, q), basis in RREF with zero rows dropped.

    The raw constructor trusts its rows; use :meth:`from_rows` unless the
    rows are already canonical.
    """

    field: Field
    ambient: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, field: Field, ambient: int, rows) -> "Subspace":
        rows = [tuple(r) for r in rows]
        for r in rows:
            if len(r) != ambient:
                raise InvalidParamsError("row length differs from ambient dimension")
            field._check(*r)
        return cls(field, ambient, rref_rows(field, rows, ambient))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, v in enumerate(r) if v) for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "q": self.field.q,
            "n": self.ambient,
            "dim": self.dim,
            "rows": [list(r) for r in self.rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Subspace":
        field = field_for_order(int(d["q"]))
        sub = cls.from_rows(field, int(d["n"]), d["rows"])
        if sub.dim != int(d["dim"]):
            raise InvalidParamsError(
                f"declared dim {d['dim']} but basis has rank {sub.dim}"
            )
        return sub


def _require_same_space(a: Subspace, b: Subspace) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"fields differ: {a.field!r} vs {b.field!r}")
    if a.ambient != b.ambient:
        raise AmbientMismatchError(
            f"ambient dimensions differ: {a.ambient} vs {b.ambient}"
        )


def intersect_dim(a: Subspace, b: Subspace) -> int:
    """dim(A meet B) = dim A + dim B - rank of the stacked bases."""
    _require_same_space(a, b)
    stacked = rref_rows(a.field, a.rows + b.rows, a.ambient)
    return a.dim + b.dim - len(stacked)


def is_disjoint(a: Subspace, b: Subspace) -> bool:
    return intersect_dim(a, b) == 0


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-subspaces of V(n, q); exact big-integer arithmetic.

    Out-of-range k gives 0, matching the usual convention (and the Pascal
    recurrences).
    """
    if n < 0 or q < 2:
        raise InvalidParamsError(f"need n >= 0 and q >= 2, got n={n} q={q}")
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(
    n: int, d: int, field: Field, budget: int | None = None
) -> Iterator[Subspace]:
    """All d-subspaces of V(n, q) in canonical order.

    Order: RREF pivot-column sets ascending (itertools.combinations order),
    then free entries ascending lexicographically, first free cell most
    significant.  Free cells are read row-major.
    """
    if not 0 <= d <= n:
        raise InvalidParamsError(f"need 0 <= d <= n, got d={d} n={n}")
    total = gaussian_binomial(n, d, field.q)
    limit = DEFAULT_ENUM_BUDGET if budget is None else budget
    if total > limit:
        raise BudgetExceededError(
            f"{total} subspaces exceed enumeration budget {limit}"
        )
    if d == 0:
        yield Subspace(field, n, ())
        return
    q = field.q
    for pivots in combinations(range(n), d):
        pivot_set = set(pivots)
        cells = [
            (i, c)
            for i in range(d)
            for c in range(pivots[i] + 1, n)
            if c not in pivot_set
        ]
        for values in product(range(q), repeat=len(cells)):
            grid = [[0] * n for _ in range(d)]
            for i in range(d):
                grid[i][pivots[i]] = 1
            for (i, c), v in zip(cells, values):
                grid[i][c] = v
            yield Subspace(field, n, tuple(tuple(r) for r in grid))


@dataclass(frozen=True)
class Hyperplane:
    """Hyperplane of V(ambient, q) as a normalized dual vector.

    The dual vector's first nonzero coordinate is 1; there are exactly
    theta_n = (q^n - 1)/(q - 1) hyperplanes.
    """

    field: Field
    ambient: int
    dual: tuple[int, ...]


def _encoding_blocks(n: int, q: int):
    # encodings whose first nonzero base-q digit is at position i with value 1
    for i in range(n):
        yield range(q ** i, q ** i + q ** n, q ** (i + 1))


def normalized_point_encodings(n: int, q: int) -> Iterator[int]:
    """Encodings of the theta_n normalized vectors, ascending."""
    return heapq.merge(*_encoding_blocks(n, q))


def decode_vector(enc: int, n: int, q: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        enc, d = divmod(enc, q)
        out.append(d)
    return tuple(out)


def encode_vector(vec, q: int) -> int:
    acc = 0
    for v in reversed(vec):
        acc = acc * q + v
    return acc


def hyperplanes(n: int, field: Field) -> Iterator[Hyperplane]:
    """All hyperplanes of V(n, q), ascending by dual-vector encoding."""
    if n < 1:
        raise InvalidParamsError("ambient dimension must be >= 1")
    for enc in normalized_point_encodings(n, field.q):
        yield Hyperplane(field, n, decode_vector(enc, n, field.q))


def contains(h: Hyperplane, s: Subspace) -> bool:
    """True iff the subspace lies inside the hyperplane."""
    if h.field != s.field:
        raise FieldMismatchError("hyperplane and subspace fields differ")
    if h.ambient != s.ambient:
        raise AmbientMismatchError("hyperplane and subspace ambients differ")
    field = h.field
    if field.q == 2:
        mask = 0
        for j, v in enumerate(h.dual):
            if v:
                mask |= 1 << j
        for row in s.rows:
            acc = 0
            for j, v in enumerate(row):
                if v:
                    acc |= 1 << j
            if (mask & acc).bit_count() & 1:
                return False
        return True
    for row in s.rows:
        acc = 0
        for dj, rj in zip(h.dual, row):
            if dj and rj:
                acc = field.add(acc, field.mul(dj, rj))
        if acc:
            return False
    return True


def annihilator(s: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product.

    For an RREF basis with pivot set P the complement has one generator per
    free column f: entry 1 at f and -B[i, f] at pivot column p_i.
    """
    field, n = s.field, s.ambient
    pivots = s.pivots
    pivot_set = set(pivots)
    gens = []
    for f in range(n):
        if f in pivot_set:
            continue
        w = [0] * n
        w[f] = 1
        for i, p in enumerate(pivots):
            w[p] = field.neg(s.rows[i][f])
        gens.append(tuple(w))
    return Subspace(field, n, rref_rows(field, gens, n))


# ---------------------------------------------------------------------------
# integer-encoded point arithmetic


_CHUNK_TABLES: dict[int, tuple[int, int, list[list[int]]]] = {}


def _chunk_table(q: int) -> tuple[int, int, list[list[int]]]:
    cached = _CHUNK_TABLES.get(q)
    if cached is not None:
        return cached
    k = 1
    while q ** (k + 1) <= 1024:
        k += 1
    size = q ** k
    powers = [q ** i for i in range(k)]
    table = []
    for a in range(size):
        da = [(a // p) % q for p in powers]
        row = []
        for b in range(size):
            acc = 0
            bb = b
            for i in range(k):
                bb, dig = divmod(bb, q)
                acc += ((da[i] + dig) % q) * powers[i]
            row.append(acc)
        table.append(row)
    _CHUNK_TABLES[q] = (k, size, table)
    return _CHUNK_TABLES[q]


class PointSpace:
    """Vector arithmetic on base-q integer encodings of V(n, q).

    Characteristic-2 fields add by XOR of the packed encodings (base-q digit
    fields never carry under XOR).  Odd characteristic prime fields go
    through chunked addition tables.  Extension fields of odd characteristic
    fall back to digitwise field addition.
    """

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self.q = field.q
        self._char2 = field.p == 2
        self._prime = field.e == 1
        if not self._char2 and self._prime:
            self._chunk = _chunk_table(field.q)
        else:
            self._chunk = None

    def encode(self, vec) -> int:
        return encode_vector(vec, self.q)

    def decode(self, enc: int) -> tuple[int, ...]:
        return decode_vector(enc, self.n, self.q)

    def add(self, a: int, b: int) -> int:
        if self._char2:
            return a ^ b
        if self._chunk is not None:
            _, size, table = self._chunk
            acc, mult = 0, 1
            while a or b:
                a, ca = divmod(a, size)
                b, cb = divmod(b, size)
                acc += table[ca][cb] * mult
                mult *= size
            return acc
        field, q = self.field, self.q
        acc, mult = 0, 1
        while a or b:
            a, da = divmod(a, q)
            b, db = divmod(b, q)
            acc += field.add(da, db) * mult
            mult *= q
        return acc

    def scalar_multiples(self, enc: int) -> list[int]:
        """[0, v, 2v, ..., (q-1)v] ordered by scalar encoding.

        Prime fields build these by repeated addition; extension fields need
        genuine coordinate-wise multiplication (char-2 repeated addition
        would only reach the prime-subfield multiples).
        """
        if self._prime:
            out = [0]
            for _ in range(self.q - 1):
                out.append(self.add(out[-1], enc))
            return out
        field, q = self.field, self.q
        vec = self.decode(enc)
        out = []
        for c in range(q):
            out.append(self.encode(tuple(field.mul(c, v) for v in vec)))
        return out

    def full_span(self, row_encs) -> list[int]:
        """All q^d encodings in the span, zero included."""
        span = [0]
        for enc in row_encs:
            mults = self.scalar_multiples(enc)
            span = [self.add(m, s) for m in mults for s in span]
        return span

    def normalized_span(self, row_encs) -> list[int]:
        """One encoding per projective point of the span.

        Requires the rows in RREF order: a combination whose first nonzero
        coefficient (on row i) equals 1 then has its first nonzero
        coordinate equal to 1 at pivot i, i.e. it is the canonical
        representative.  Returns theta_d encodings, row-0 block first.
        """
        blocks: list[list[int]] = []
        suffix = [0]
        for enc in reversed(list(row_encs)):
            blocks.append([self.add(enc, s) for s in suffix])
            mults = self.scalar_multiples(enc)
            suffix = [self.add(m, s) for m in mults for s in suffix]
        out: list[int] = []
        for block in reversed(blocks):
            out.extend(block)
        return out


def subspace_point_encodings(s: Subspace) -> list[int]:
    """Normalized point encodings of a subspace, canonical order."""
    ps = PointSpace(s.field, s.ambient)
    return ps.normalized_span([ps.encode(r) for r in s.rows])
