"""Exhaustive and greedy search for maximum partial t-spreads.

The exact solver is a depth-first subset grower over the full candidate
list of t-subspaces, in enumeration order.  Compatibility (trivial
intersection) is precomputed as bitsets over candidate indices, and point
coverage is tracked as a bitset over the theta_n projective points.  Two
admissible prunes bound what a branch can still reach:

  * chosen + available candidates;
  * chosen + floor(uncovered points / theta_t).

Because GL(n, q) is transitive on t-subspaces, some maximum partial spread
contains the first candidate, so the root fixes it; and by default the
incumbent is warm-started with the packing-bound construction, which the
search then tries to beat.  Exhausting the tree proves optimality either
way.  With threads > 1 the root branches are distributed across worker
threads sharing one incumbent; the reported size and status do not depend
on the thread count, but the witness is only reproducible at threads=1.
"""

from __future__ import annotations

import random
import threading
import time
from dataclasses import dataclass

from .bounds import SpreadParams, theta
from .construct import (
    PartialSpread,
    build_lower_bound_spread,
    verify_partial_spread,
)
from .errors import InvalidParamsError
from .gf import field_for_order
from .linalg import (
    enumerate_subspaces,
    normalized_point_encodings,
    subspace_point_encodings,
)

EXACT = "EXACT"
BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
LOWER_WITNESS_ONLY = "LOWER_WITNESS_ONLY"


@dataclass(frozen=True)
class SearchResult:
    params: SpreadParams
    best_size: int
    witness: PartialSpread
    status: str
    nodes_explored: int
    wall_time: float

    def to_dict(self) -> dict:
        return {
            "q": self.params.q,
            "n": self.params.n,
            "t": self.params.t,
            "best_size": self.best_size,
            "status": self.status,
            "nodes_explored": self.nodes_explored,
            "wall_time": self.wall_time,
            "witness": self.witness.to_dict(),
        }


def _candidates(params: SpreadParams):
    """All t-subspaces in enumeration order, each with its point bitset."""
    q, n, t = params.q, params.n, params.t
    field = field_for_order(q)
    bit_of = {enc: i for i, enc in enumerate(normalized_point_encodings(n, q))}
    subs = []
    masks = []
    for s in enumerate_subspaces(n, t, field):
        mask = 0
        for enc in subspace_point_encodings(s):
            mask |= 1 << bit_of[enc]
        subs.append(s)
        masks.append(mask)
    return subs, masks


class _Shared:
    """Incumbent and budgets shared across worker threads."""

    def __init__(self, best_size, node_cap, deadline):
        self.best_size = best_size
        self.best_chosen: tuple[int, ...] | None = None
        self.node_cap = node_cap
        self.deadline = deadline
        self.nodes = 0
        self.exhausted = True
        self.lock = threading.Lock()

    def out_of_budget(self) -> bool:
        if self.node_cap is not None and self.nodes >= self.node_cap:
            return True
        if self.deadline is not None and time.monotonic() > self.deadline:
            return True
        return False

    def offer(self, chosen: list[int]) -> None:
        with self.lock:
            if len(chosen) > self.best_size:
                self.best_size = len(chosen)
                self.best_chosen = tuple(chosen)


def _bits(a: int):
    while a:
        low = a & -a
        yield low.bit_length() - 1
        a ^= low


def _grow(chosen, avail, covered, masks, adj, total_points, point_size, shared):
    shared.nodes += 1
    if shared.out_of_budget():
        shared.exhausted = False
        return
    shared.offer(chosen)
    k = len(chosen)
    if k + avail.bit_count() <= shared.best_size:
        return
    uncovered = total_points - covered.bit_count()
    if k + uncovered // point_size <= shared.best_size:
        return
    for c in _bits(avail):
        rest = avail >> (c + 1) << (c + 1)
        _grow(
            chosen + [c],
            rest & adj[c],
            covered | masks[c],
            masks,
            adj,
            total_points,
            point_size,
            shared,
        )
        if shared.out_of_budget():
            shared.exhausted = False
            return


def max_partial_spread(
    params: SpreadParams,
    max_nodes: int | None = None,
    max_seconds: float | None = None,
    threads: int = 1,
    warm_start: bool = True,
) -> SearchResult:
    """Branch-and-bound for mu_q(n, t) over the explicit candidate list.

    Status EXACT means the tree was exhausted and best_size is the true
    maximum; BUDGET_EXHAUSTED reports the best incumbent when max_nodes or
    max_seconds cut the run short.
    """
    if threads < 1:
        raise InvalidParamsError(f"threads must be >= 1, got {threads}")
    start = time.monotonic()
    q, n, t = params.q, params.n, params.t
    subs, masks = _candidates(params)
    count = len(subs)
    adj = []
    for i in range(count):
        row = 0
        mi = masks[i]
        for j in range(count):
            if j != i and mi & masks[j] == 0:
                row |= 1 << j
        adj.append(row)

    seed_spread = build_lower_bound_spread(params) if warm_start else None
    shared = _Shared(
        best_size=seed_spread.size if seed_spread else 0,
        node_cap=max_nodes,
        deadline=None if max_seconds is None else start + max_seconds,
    )
    total_points = theta(n, q)
    point_size = theta(t, q)

    # every maximum partial spread can be moved onto the first candidate
    root_chosen = [0]
    root_avail = (adj[0] >> 1) << 1
    if threads == 1:
        _grow(
            root_chosen, root_avail, masks[0], masks, adj,
            total_points, point_size, shared,
        )
    else:
        shared.offer(root_chosen)
        branches = list(_bits(root_avail))

        def worker(my_branches):
            for c in my_branches:
                rest = root_avail >> (c + 1) << (c + 1)
                _grow(
                    root_chosen + [c], rest & adj[c], masks[0] | masks[c],
                    masks, adj, total_points, point_size, shared,
                )

        pool = [
            threading.Thread(target=worker, args=(branches[w::threads],))
            for w in range(threads)
        ]
        for th in pool:
            th.start()
        for th in pool:
            th.join()

    if shared.best_chosen is not None:
        witness = PartialSpread(
            params, tuple(subs[c] for c in shared.best_chosen)
        )
        res = verify_partial_spread(witness)
        assert res.ok, res.reason
        witness = PartialSpread(params, witness.members, verified=True)
    else:
        assert seed_spread is not None
        witness = seed_spread
    status = EXACT if shared.exhausted else BUDGET_EXHAUSTED
    return SearchResult(
        params=params,
        best_size=shared.best_size,
        witness=witness,
        status=status,
        nodes_explored=shared.nodes,
        wall_time=time.monotonic() - start,
    )


def greedy_spread(params: SpreadParams, seed: int = 0) -> PartialSpread:
    """Single greedy pass over a seeded shuffle of all candidates."""
    subs, masks = _candidates(params)
    order = list(range(len(subs)))
    random.Random(seed).shuffle(order)
    covered = 0
    picked = []
    for c in order:
        if covered & masks[c] == 0:
            picked.append(c)
            covered |= masks[c]
    spread = PartialSpread(params, tuple(subs[c] for c in picked))
    res = verify_partial_spread(spread)
    assert res.ok, res.reason
    return PartialSpread(params, spread.members, verified=True)


def greedy_result(params: SpreadParams, seed: int = 0) -> SearchResult:
    """Greedy witness wrapped as a SearchResult; never claims optimality."""
    start = time.monotonic()
    spread = greedy_spread(params, seed)
    return SearchResult(
        params=params,
        best_size=spread.size,
        witness=spread,
        status=LOWER_WITNESS_ONLY,
        nodes_explored=0,
        wall_time=time.monotonic() - start,
    )
