"""Partial t-spread constructions meeting the packing lower bound.

The builder walks the ambient space in t-coordinate steps.  At offset j*t it
places one member [0 | I_t | M_a] for every a in GF(q^m), m = n - (j+1)*t,
where M_a is the t x m matrix of the maps u -> a * u restricted to the first
t basis powers.  Any two such matrices differ by some M_c with c != 0, and
the rows of M_c are c, c*g, ..., c*g^(t-1) (g the polynomial generator),
which are linearly independent over F_q whenever t <= m.  So members at one
level meet trivially, and members at deeper levels vanish on the identity
block of shallower ones.  A single identity-block member closes the walk
once fewer than 2t coordinates remain.

Counting levels gives q^(n-t) + q^(n-2t) + ... + q^(t+r) + 1 members, which
is exactly the packing lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .bounds import SpreadParams, lower_bound
from .errors import (
    AmbientMismatchError,
    ConstructionSizeMismatchError,
    FieldMismatchError,
    InvalidParamsError,
)
from .gf import ExtField, ext_field, field_for_order
from .linalg import Subspace, intersect_dim, subspace_point_encodings

# above this many members, pairwise intersection checks lose to point coverage
PAIRWISE_LIMIT = 300


@dataclass(frozen=True)
class PartialSpread:
    """A collection of t-subspaces of V(n, q); pairwise disjointness is a
    claim tracked by ``verified`` (None = never checked)."""

    params: SpreadParams
    members: tuple[Subspace, ...]
    verified: bool | None = None

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {
            "q": self.params.q,
            "n": self.params.n,
            "t": self.params.t,
            "members": [s.to_dict() for s in self.members],
        }


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    clash: tuple[int, int] | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "clash": list(self.clash) if self.clash else None,
            "reason": self.reason,
        }


def mult_map_matrix(ext: ExtField, a: int, t: int) -> tuple[tuple[int, ...], ...]:
    """Rows i < t of the multiplication-by-a map on GF(q^m), in base-field
    coordinates: row i is the coordinate vector of a * g^i."""
    if not 1 <= t <= ext.m:
        raise InvalidParamsError(f"need 1 <= t <= {ext.m}, got {t}")
    g = ext.base.q if ext.m > 1 else 1  # encoding of the generator
    rows = []
    cur = a
    for _ in range(t):
        rows.append(ext.coord(cur))
        cur = ext.mul(cur, g)
    return tuple(rows)


def build_lower_bound_spread(params: SpreadParams) -> PartialSpread:
    """Construct and verify a partial t-spread of V(n, q) whose size equals
    the packing lower bound.  Raises OverflowLimitError if some level needs
    an extension field beyond the configured order cap."""
    q, n, t = params.q, params.n, params.t
    field = field_for_order(q)
    members: list[Subspace] = []

    offset = 0
    while n - offset >= 2 * t:
        m = n - offset - t
        ext = ext_field(field, m)
        for a in range(ext.order):
            mat = mult_map_matrix(ext, a, t)
            rows = []
            for i in range(t):
                row = [0] * offset
                row.extend(1 if j == i else 0 for j in range(t))
                row.extend(mat[i])
                rows.append(tuple(row))
            members.append(Subspace.from_rows(field, n, rows))
        offset += t

    tail = [
        tuple(1 if j == offset + i else 0 for j in range(n)) for i in range(t)
    ]
    members.append(Subspace.from_rows(field, n, tail))

    want = lower_bound(params)
    if len(members) != want:
        raise ConstructionSizeMismatchError(
            f"built {len(members)} members, packing bound says {want}"
        )
    spread = PartialSpread(params, tuple(members))
    res = verify_partial_spread(spread)
    if not res.ok:
        raise ConstructionSizeMismatchError(f"self-check failed: {res.reason}")
    return replace(spread, verified=True)


def verify_partial_spread(spread: PartialSpread) -> VerificationResult:
    """Check that all members are t-dimensional and pairwise disjoint.

    Small collections get exact pairwise intersection tests; larger ones are
    checked by covering points, which touches each member once.  Both paths
    report the lexicographically least clashing index pair.
    """
    params = spread.params
    field = field_for_order(params.q)
    for s in spread.members:
        if s.field != field:
            raise FieldMismatchError(
                f"member over {s.field} but spread declares q = {params.q}"
            )
        if s.ambient != params.n:
            raise AmbientMismatchError(
                f"member in ambient {s.ambient}, spread declares n = {params.n}"
            )
    for i, s in enumerate(spread.members):
        if s.dim != params.t:
            return VerificationResult(
                False, None, f"member {i} has dimension {s.dim}, expected {params.t}"
            )

    if len(spread.members) <= PAIRWISE_LIMIT:
        for i in range(len(spread.members)):
            for j in range(i + 1, len(spread.members)):
                if intersect_dim(spread.members[i], spread.members[j]) > 0:
                    return VerificationResult(
                        False, (i, j), f"members {i} and {j} share a nonzero vector"
                    )
        return VerificationResult(True)

    seen: dict[int, int] = {}
    clash: tuple[int, int] | None = None
    for i, s in enumerate(spread.members):
        for enc in subspace_point_encodings(s):
            if enc in seen:
                pair = (seen[enc], i)
                if clash is None or pair < clash:
                    clash = pair
            else:
                seen[enc] = i
    if clash is not None:
        return VerificationResult(
            False, clash, f"members {clash[0]} and {clash[1]} share a nonzero vector"
        )
    return VerificationResult(True)


def spread_from_dict(d: dict) -> PartialSpread:
    """Inverse of PartialSpread.to_dict; the result is unverified."""
    params = SpreadParams(d["q"], d["n"], d["t"])
    members = tuple(Subspace.from_dict(m) for m in d["members"])
    return PartialSpread(params, members)
