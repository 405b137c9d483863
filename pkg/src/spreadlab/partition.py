"""Vector space partitions, hyperplane profiles, and descent certificates.

A partition of V(n, q) is a set of nonzero subspaces covering every nonzero
vector exactly once.  Partial t-spreads induce partitions by filling the
uncovered points with 1-dimensional parts; the resulting tail is what the
counting arguments below squeeze.

Two counting identities constrain how parts sit inside hyperplanes.  With
b_(H,d) = number of d-dimensional parts contained in the hyperplane H and
n_d = number of d-dimensional parts:

    (1)  1 + sum_d b_(H,d) q^d  =  number of parts, for every H;
    (2)  sum_H b_(H,d)  =  n_d * theta_(n-d), for every d.

The tail theorem (`heden_case`) bounds the number n_d1 of minimal-dimension
parts in terms of the second-smallest dimension d2, split by whether
q^(d2-d1) divides n_d1 and whether d2 >= 2*d1.

`descent_certificate` packages the arithmetic trail of the supposition
"a partial t-spread of size l*q^t + x + 1 exists": the induced partition,
the residue chain delta_t, ..., delta_2 of its tail modulo falling powers
of q, and the final clash with the tail theorem.  `check_certificate`
recomputes every field independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import (
    SpreadParams,
    c1_c2,
    ceil_div,
    delta,
    descent_x,
    h_of,
    lemma_main_bound,
    theta,
)
from .construct import PartialSpread
from .errors import (
    AmbientMismatchError,
    BudgetExceededError,
    FieldMismatchError,
    HypothesisViolatedError,
    IdentityViolationError,
    InvalidParamsError,
    UnverifiedSpreadError,
)
from .gf import field_for_order
from .linalg import (
    Subspace,
    annihilator,
    decode_vector,
    normalized_point_encodings,
    subspace_point_encodings,
)

VERIFY_POINT_BUDGET = 1 << 22
PROFILE_POINT_CAP = 1 << 24


@dataclass(frozen=True)
class SubspacePartition:
    """Subspaces of V(n, q) claimed to cover each nonzero vector once."""

    q: int
    n: int
    parts: tuple[Subspace, ...]

    @property
    def dim_counts(self) -> dict[int, int]:
        """dimension -> multiplicity, largest dimension first."""
        out: dict[int, int] = {}
        for s in self.parts:
            out[s.dim] = out.get(s.dim, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "parts": [s.to_dict() for s in self.parts],
        }


def partition_from_dict(d: dict) -> SubspacePartition:
    parts = tuple(Subspace.from_dict(p) for p in d["parts"])
    return SubspacePartition(d["q"], d["n"], parts)


def partition_from_spread(spread: PartialSpread) -> SubspacePartition:
    """Extend a verified partial spread to a partition by adding one
    1-dimensional part per uncovered point."""
    if spread.verified is not True:
        raise UnverifiedSpreadError(
            "refusing to extend an unverified spread; run verify_partial_spread"
        )
    params = spread.params
    q, n = params.q, params.n
    field = field_for_order(q)
    covered = set()
    for s in spread.members:
        covered.update(subspace_point_encodings(s))
    parts = list(spread.members)
    for enc in normalized_point_encodings(n, q):
        if enc not in covered:
            parts.append(Subspace.from_rows(field, n, [decode_vector(enc, n, q)]))
    return SubspacePartition(q, n, tuple(parts))


@dataclass(frozen=True)
class PartitionCheck:
    ok: bool
    reason: str = ""
    witness: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "reason": self.reason,
            "witness": list(self.witness) if self.witness else None,
        }


def verify_partition(
    partition: SubspacePartition, point_budget: int = VERIFY_POINT_BUDGET
) -> PartitionCheck:
    """Exact cover check by walking every part's points."""
    q, n = partition.q, partition.n
    field = field_for_order(q)
    total = theta(n, q)
    if total > point_budget:
        raise BudgetExceededError(
            f"partition has {total} points, budget is {point_budget}"
        )
    for s in partition.parts:
        if s.field != field:
            raise FieldMismatchError(f"part over {s.field}, partition has q = {q}")
        if s.ambient != n:
            raise AmbientMismatchError(f"part in ambient {s.ambient}, want {n}")
        if s.dim == 0:
            return PartitionCheck(False, "zero-dimensional part")

    seen: dict[int, int] = {}
    for i, s in enumerate(partition.parts):
        for enc in subspace_point_encodings(s):
            j = seen.setdefault(enc, i)
            if j != i:
                return PartitionCheck(
                    False,
                    f"point covered by parts {j} and {i}",
                    decode_vector(enc, n, q),
                )
    if len(seen) != total:
        for enc in normalized_point_encodings(n, q):
            if enc not in seen:
                return PartitionCheck(
                    False, "point not covered", decode_vector(enc, n, q)
                )
    return PartitionCheck(True)


# ---------------------------------------------------------------------------
# hyperplane profiles

# (q, dim) -> theta_dim x dim float64 matrix of normalized coefficient vectors
_COEFF_CACHE: dict[tuple[int, int], np.ndarray] = {}
# (q, n) -> int32 lookup from point encoding to hyperplane ordinal
_ORDINAL_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _coeff_matrix(q: int, dim: int) -> np.ndarray:
    key = (q, dim)
    got = _COEFF_CACHE.get(key)
    if got is None:
        rows = [
            decode_vector(enc, dim, q) for enc in normalized_point_encodings(dim, q)
        ]
        got = np.array(rows, dtype=np.float64)
        _COEFF_CACHE[key] = got
    return got


def _ordinal_lookup(q: int, n: int) -> np.ndarray:
    key = (q, n)
    got = _ORDINAL_CACHE.get(key)
    if got is None:
        got = np.full(q ** n, -1, dtype=np.int32)
        for idx, enc in enumerate(normalized_point_encodings(n, q)):
            got[enc] = idx
        _ORDINAL_CACHE[key] = got
    return got


def _containing_hyperplane_ordinals(s: Subspace, inv_table: np.ndarray) -> np.ndarray:
    """Ordinals (ascending-dual order) of the hyperplanes containing s.

    The annihilator of s holds the dual vectors vanishing on s; its
    normalized points are exactly the duals of those hyperplanes.  All
    intermediate values stay far below 2^53, so float64 matmul is exact.
    """
    q, n = s.field.q, s.ambient
    ann = annihilator(s)
    a = ann.dim
    if a == 0:
        return np.empty(0, dtype=np.int64)
    basis = np.array(ann.rows, dtype=np.float64)
    pts = _coeff_matrix(q, a) @ basis
    pts %= q
    # renormalize each row so its first nonzero entry is 1
    lead = pts[np.arange(len(pts)), (pts != 0).argmax(axis=1)]
    pts = (pts * inv_table[lead.astype(np.int64)][:, None]) % q
    powvec = np.array([float(q) ** j for j in range(n)])
    encs = (pts @ powvec).astype(np.int64)
    ordinals = _ordinal_lookup(q, n)[encs]
    assert (ordinals >= 0).all()
    return ordinals


@dataclass(frozen=True)
class HyperplaneProfile:
    """Per-hyperplane containment counts for a partition.

    ``dims`` lists the distinct part dimensions, largest first.
    ``b_vectors[h][k]`` counts parts of dimension dims[k] inside the h-th
    hyperplane (hyperplanes ascending by dual encoding).  ``s_b`` counts how
    many hyperplanes share each distinct b-vector.
    """

    q: int
    n: int
    dims: tuple[int, ...]
    dim_counts: dict[int, int]
    b_vectors: tuple[tuple[int, ...], ...]
    s_b: dict[tuple[int, ...], int]

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "dims": list(self.dims),
            "dim_counts": {str(d): c for d, c in self.dim_counts.items()},
            "s_b": [
                {"b": list(b), "hyperplanes": c}
                for b, c in sorted(self.s_b.items(), reverse=True)
            ],
        }


def _profile_counts_fast(partition: SubspacePartition, dims) -> list[np.ndarray]:
    q, n = partition.q, partition.n
    field = field_for_order(q)
    inv_table = np.array(
        [0.0] + [float(field.inv(v)) for v in range(1, q)], dtype=np.float64
    )
    counts = {d: np.zeros(theta(n, q), dtype=np.int64) for d in dims}
    for s in partition.parts:
        ordinals = _containing_hyperplane_ordinals(s, inv_table)
        counts[s.dim][ordinals] += 1
    return [counts[d] for d in dims]


def _profile_counts_generic(partition: SubspacePartition, dims) -> list[np.ndarray]:
    q, n = partition.q, partition.n
    ordinal = {
        enc: idx for idx, enc in enumerate(normalized_point_encodings(n, q))
    }
    counts = {d: np.zeros(theta(n, q), dtype=np.int64) for d in dims}
    for s in partition.parts:
        row = counts[s.dim]
        for enc in subspace_point_encodings(annihilator(s)):
            row[ordinal[enc]] += 1
    return [counts[d] for d in dims]


def hyperplane_profile(partition: SubspacePartition) -> HyperplaneProfile:
    """Count, for every hyperplane, the parts of each dimension inside it,
    then verify both counting identities.  Partitions over prime fields get
    a vectorized path; extension fields take the generic one.
    """
    q, n = partition.q, partition.n
    if q ** n > PROFILE_POINT_CAP:
        raise BudgetExceededError(f"q^n = {q ** n} exceeds {PROFILE_POINT_CAP}")
    if not partition.parts:
        raise InvalidParamsError("empty partition has no profile")
    dim_counts = partition.dim_counts
    dims = tuple(dim_counts)
    field = field_for_order(q)
    if field.e == 1:
        per_dim = _profile_counts_fast(partition, dims)
    else:
        per_dim = _profile_counts_generic(partition, dims)

    n_parts = len(partition.parts)
    weights = np.array([q ** d for d in dims], dtype=np.int64)
    stacked = np.stack(per_dim)  # len(dims) x theta_n
    totals = 1 + weights @ stacked
    bad = np.nonzero(totals != n_parts)[0]
    if bad.size:
        h = int(bad[0])
        raise IdentityViolationError(
            f"hyperplane {h}: 1 + sum b_d q^d = {int(totals[h])}, "
            f"but the partition has {n_parts} parts"
        )
    for d, row in zip(dims, per_dim):
        want = dim_counts[d] * theta(n - d, q)
        got = int(row.sum())
        if got != want:
            raise IdentityViolationError(
                f"dimension {d}: sum over hyperplanes is {got}, "
                f"want n_d * theta_(n-d) = {want}"
            )

    interned: dict[tuple[int, ...], tuple[int, ...]] = {}
    s_b: dict[tuple[int, ...], int] = {}
    b_vectors = []
    for col in stacked.T:
        b = tuple(int(v) for v in col)
        b = interned.setdefault(b, b)
        b_vectors.append(b)
        s_b[b] = s_b.get(b, 0) + 1
    assert sum(s_b.values()) == theta(n, q)
    return HyperplaneProfile(
        q, n, dims, dim_counts, tuple(b_vectors), s_b
    )


# ---------------------------------------------------------------------------
# tail bounds

_CASE_NAMES = {
    (False, False): "i",
    (False, True): "ii",
    (True, False): "iii",
    (True, True): "iv",
}


@dataclass(frozen=True)
class HedenCase:
    """Tail-theorem classification for n_d1 parts of minimal dimension d1
    next to second-smallest dimension d2.

    ``required_min`` is the threshold n_d1 must meet in its case; in case
    (ii) equality with (q^d2 - 1)/(q^d1 - 1) is the one escape below the
    threshold, flagged by ``exceptional``.
    """

    case: str
    divides: bool
    wide: bool
    required_min: int
    satisfied: bool
    exceptional: bool

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "divides": self.divides,
            "wide": self.wide,
            "required_min": self.required_min,
            "satisfied": self.satisfied,
            "exceptional": self.exceptional,
        }


def heden_case(n_d1: int, d1: int, d2: int, q: int) -> HedenCase:
    """Classify the tail count n_d1 against the tail theorem.

    Cases by (q^(d2-d1) divides n_d1, d2 >= 2*d1):
      (i)   no/no:   n_d1 >= q^d1 + 1
      (ii)  no/yes:  n_d1 = (q^d2 - 1)/(q^d1 - 1), or n_d1 > 2*q^(d2-d1)
      (iii) yes/no:  n_d1 >= q^d2 - q^d1 + q^(d2-d1)
      (iv)  yes/yes: n_d1 >= q^d2
    """
    if n_d1 < 1 or not 1 <= d1 < d2:
        raise InvalidParamsError(
            f"need n_d1 >= 1 and 1 <= d1 < d2, got n_d1={n_d1} d1={d1} d2={d2}"
        )
    gap = q ** (d2 - d1)
    divides = n_d1 % gap == 0
    wide = d2 >= 2 * d1
    case = _CASE_NAMES[(divides, wide)]
    exceptional = False
    if case == "i":
        required = q ** d1 + 1
        satisfied = n_d1 >= required
    elif case == "ii":
        required = 2 * gap + 1
        theta_form = (q ** d2 - 1) // (q ** d1 - 1) if (q ** d2 - 1) % (
            q ** d1 - 1
        ) == 0 else None
        exceptional = n_d1 == theta_form
        satisfied = exceptional or n_d1 >= required
    elif case == "iii":
        required = q ** d2 - q ** d1 + gap
        satisfied = n_d1 >= required
    else:
        required = q ** d2
        satisfied = n_d1 >= required
    return HedenCase(case, divides, wide, required, satisfied, exceptional)


# ---------------------------------------------------------------------------
# descent certificates


@dataclass(frozen=True)
class CertStep:
    """One rung of the residue descent: at step j the tail count satisfies
    n_1 = delta_i (mod q^i) for i = t - j, and the next residue follows by
    delta_(i-1) = ((x + delta_i) / q) mod q^(i-1)."""

    j: int
    i: int
    delta: int
    cap: int
    n1_residue: int
    next_delta: int

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "i": self.i,
            "delta": self.delta,
            "cap": self.cap,
            "n1_residue": self.n1_residue,
            "next_delta": self.next_delta,
        }


@dataclass(frozen=True)
class FinalCase:
    """End of the descent: the tail of the final partition has delta2
    singletons with q | delta2 and 0 < delta2 <= q^2 - q, but every branch
    of the tail theorem demands more, whatever the second dimension is."""

    delta2: int
    delta2_max: int
    required_dim2: int
    required_dim_ge3_min: int
    heden_case: str
    heden_satisfied: bool

    def to_dict(self) -> dict:
        return {
            "delta2": self.delta2,
            "delta2_max": self.delta2_max,
            "required_dim2": self.required_dim2,
            "required_dim_ge3_min": self.required_dim_ge3_min,
            "heden_case": self.heden_case,
            "heden_satisfied": self.heden_satisfied,
        }


@dataclass(frozen=True)
class DescentCertificate:
    q: int
    n: int
    t: int
    r: int
    x: int
    h: int
    ell: int
    claimed_bound: int
    n_t: int
    n_1: int
    steps: tuple[CertStep, ...]
    final: FinalCase

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "t": self.t,
            "r": self.r,
            "x": self.x,
            "h": self.h,
            "ell": self.ell,
            "claimed_bound": self.claimed_bound,
            "n_t": self.n_t,
            "n_1": self.n_1,
            "steps": [s.to_dict() for s in self.steps],
            "final": self.final.to_dict(),
        }


def certificate_from_dict(d: dict) -> DescentCertificate:
    steps = tuple(CertStep(**s) for s in d["steps"])
    final = FinalCase(**d["final"])
    scalars = {
        k: d[k]
        for k in ("q", "n", "t", "r", "x", "h", "ell", "claimed_bound", "n_t", "n_1")
    }
    return DescentCertificate(steps=steps, final=final, **scalars)


def descent_certificate(
    q: int, n: int, t: int, x: int | None = None
) -> DescentCertificate:
    """Build the full arithmetic trace refuting a partial t-spread of size
    l*q^t + x + 1.  With x omitted, the strongest admissible value
    q^r - (q-1)(t-2) - c1 + c2 is used."""
    params = SpreadParams(q, n, t)
    r = params.r
    if x is None:
        if r < 2:
            raise InvalidParamsError(f"default x needs r >= 2, got r = {r}")
        x = descent_x(q, t, r)
    if not 0 < x < q ** r:
        raise HypothesisViolatedError(
            f"x must lie in (0, q^r) for the induced partition to exist, got {x}"
        )
    claimed = lemma_main_bound(q, n, t, x)  # validates every hypothesis
    h = h_of(x, q, t)
    ell = (q ** (n - t) - q ** r) // (q ** t - 1)
    n_t = claimed + 1
    n_1 = q ** t * (theta(r, q) - h) + delta(x, t, q)
    assert n_1 == theta(n, q) - n_t * theta(t, q)

    steps = []
    for j in range(t - 1):
        i = t - j
        d_i = delta(x, i, q)
        steps.append(
            CertStep(
                j=j,
                i=i,
                delta=d_i,
                cap=max(theta(r, q) - h - j, 0),
                n1_residue=n_1 % q ** i,
                next_delta=delta(x, i - 1, q),
            )
        )

    d2 = delta(x, 2, q)
    hed = heden_case(d2, 1, 2, q)
    final = FinalCase(
        delta2=d2,
        delta2_max=q * q - q,
        required_dim2=q * q,
        required_dim_ge3_min=min(theta(3, q), 2 * q * q, q ** 3),
        heden_case=hed.case,
        heden_satisfied=hed.satisfied,
    )
    return DescentCertificate(
        q, n, t, r, x, h, ell, claimed, n_t, n_1, tuple(steps), final
    )


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    mismatch: str | None = None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "mismatch": self.mismatch}


def check_certificate(cert: DescentCertificate) -> CertificateCheck:
    """Recompute every certificate field from (q, n, t, x) and report the
    first disagreement as a dotted field path."""
    q, n, t, x = cert.q, cert.n, cert.t, cert.x

    def bad(path):
        return CertificateCheck(False, path)

    try:
        params = SpreadParams(q, n, t)
    except InvalidParamsError:
        return bad("params")
    if cert.r != params.r:
        return bad("r")
    if not 0 < x < q ** params.r:
        return bad("x")
    try:
        claimed = lemma_main_bound(q, n, t, x)
    except (HypothesisViolatedError, InvalidParamsError):
        return bad("x")
    r = params.r
    if cert.claimed_bound != claimed:
        return bad("claimed_bound")
    try:
        h = h_of(x, q, t)
    except IdentityViolationError:
        return bad("h")
    if cert.h != h:
        return bad("h")
    ell = (q ** (n - t) - q ** r) // (q ** t - 1)
    if cert.ell != ell or claimed != ell * q ** t + x:
        return bad("ell")
    if cert.n_t != claimed + 1:
        return bad("n_t")
    n_1 = q ** t * (theta(r, q) - h) + delta(x, t, q)
    if cert.n_1 != n_1 or n_1 != theta(n, q) - cert.n_t * theta(t, q):
        return bad("n_1")

    if len(cert.steps) != t - 1:
        return bad("steps")
    for idx, step in enumerate(cert.steps):
        path = f"steps[{idx}]"
        if step.j != idx:
            return bad(f"{path}.j")
        i = t - idx
        if step.i != i:
            return bad(f"{path}.i")
        d_i = delta(x, i, q)
        if step.delta != d_i:
            return bad(f"{path}.delta")
        if step.cap != max(theta(r, q) - h - idx, 0):
            return bad(f"{path}.cap")
        if step.n1_residue != n_1 % q ** i or step.n1_residue != d_i:
            return bad(f"{path}.n1_residue")
        if (x + d_i) % q != 0:
            return bad(f"{path}.next_delta")
        recur = ((x + d_i) // q) % q ** (i - 1)
        if step.next_delta != recur or step.next_delta != delta(x, i - 1, q):
            return bad(f"{path}.next_delta")

    fin = cert.final
    d2 = delta(x, 2, q)
    if fin.delta2 != d2 or fin.delta2 != cert.steps[-1].delta:
        return bad("final.delta2")
    if d2 % q != 0 or not 0 < d2 <= q * q - q:
        return bad("final.delta2")
    if fin.delta2_max != q * q - q:
        return bad("final.delta2_max")
    if fin.required_dim2 != q * q or not fin.required_dim2 > d2:
        return bad("final.required_dim2")
    alt = min(theta(3, q), 2 * q * q, q ** 3)
    if fin.required_dim_ge3_min != alt or not alt > q * q - q:
        return bad("final.required_dim_ge3_min")
    hed = heden_case(d2, 1, 2, q)
    if fin.heden_case != hed.case or hed.case != "iv":
        return bad("final.heden_case")
    if fin.heden_satisfied or hed.satisfied:
        return bad("final.heden_satisfied")
    return CertificateCheck(True)
