"""Bipartite instance representation and exact coverage arithmetic.

Edges carry exact non-negative weights (int, or Fraction at the harness
boundary).  Every edge has a stable id equal to its position in the input
edge list; sets of edges are manipulated as int bitmasks keyed by edge id,
which keeps "delete the covered edges" cheap inside the enumeration-heavy
solvers.  Instances are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import MkvcError


class Side(IntEnum):
    LEFT = 0
    RIGHT = 1


class VertexRef(NamedTuple):
    """A vertex tagged with its color class; orders Left-first then by index."""

    side: Side
    index: int


def _check_weight(w):
    if isinstance(w, bool) or not isinstance(w, (int, Fraction)):
        raise MkvcError(f"weight {w!r} is not an exact number (int or Fraction)")
    if w < 0:
        raise MkvcError(f"negative edge weight {w}")
    return w


class BipartiteInstance:
    """An edge-weighted bipartite graph with a vertex budget k.

    Vertices are addressed either as VertexRef or, internally, as a flat id
    in [0, n): left vertices first (id == index), then right vertices
    (id == n_left + index).  The budget satisfies 0 <= k < n_left + n_right;
    k == 0 only arises for residual sub-problems, generators and file input
    require k >= 1.
    """

    __slots__ = (
        "n_left", "n_right", "k", "edges", "m",
        "_weights", "_inc", "_uniform", "_full_mask", "_capacities",
        "_chunk_tables",
    )

    def __init__(self, n_left: int, n_right: int,
                 edges: Iterable[tuple], k: int):
        if n_left < 0 or n_right < 0:
            raise MkvcError("side sizes must be non-negative")
        n = n_left + n_right
        if not 0 <= k < n:
            raise MkvcError(f"budget k={k} out of range [0, {n})")
        self.n_left = n_left
        self.n_right = n_right
        self.k = k

        edge_list = []
        seen = set()
        for l, r, w in edges:
            if not (0 <= l < n_left and 0 <= r < n_right):
                raise MkvcError(f"edge ({l},{r}) has an endpoint out of range")
            if (l, r) in seen:
                raise MkvcError(f"duplicate edge ({l},{r})")
            seen.add((l, r))
            edge_list.append((l, r, _check_weight(w)))
        self.edges = tuple(edge_list)
        self.m = len(edge_list)

        inc = [0] * n
        weights = []
        for eid, (l, r, w) in enumerate(edge_list):
            bit = 1 << eid
            inc[l] |= bit
            inc[n_left + r] |= bit
            weights.append(w)
        self._inc = inc
        self._weights = tuple(weights)
        self._full_mask = (1 << self.m) - 1
        ws = set(weights)
        self._uniform = ws.pop() if len(ws) == 1 else None
        self._capacities = None
        self._chunk_tables = None

    # -- addressing -------------------------------------------------------

    @property
    def n(self) -> int:
        return self.n_left + self.n_right

    def side_size(self, side: Side) -> int:
        return self.n_left if side == Side.LEFT else self.n_right

    def vertex_id(self, ref: VertexRef) -> int:
        side, idx = ref
        limit = self.n_left if side == Side.LEFT else self.n_right
        if not 0 <= idx < limit:
            raise MkvcError(f"vertex out of range: {ref}")
        return idx if side == Side.LEFT else self.n_left + idx

    def ref_of(self, vid: int) -> VertexRef:
        if vid < self.n_left:
            return VertexRef(Side.LEFT, vid)
        return VertexRef(Side.RIGHT, vid - self.n_left)

    def all_refs(self) -> list[VertexRef]:
        return [self.ref_of(v) for v in range(self.n)]

    # -- edge-set arithmetic ----------------------------------------------

    def incidence_mask(self, vid: int) -> int:
        return self._inc[vid]

    def cover_mask(self, vids: Iterable[int]) -> int:
        """Bitmask of edges with at least one endpoint among the given ids."""
        inc = self._inc
        mask = 0
        for v in vids:
            mask |= inc[v]
        return mask

    def cover_mask_of(self, refs: Iterable[VertexRef]) -> int:
        return self.cover_mask(self.vertex_id(r) for r in refs)

    def mask_weight(self, edge_mask: int):
        """Total weight of the edges in the bitmask; each edge counted once."""
        u = self._uniform
        if u is not None:
            return u * edge_mask.bit_count()
        if self._chunk_tables is None:
            self._build_chunk_tables()
        tables = self._chunk_tables
        total = 0
        i = 0
        while edge_mask:
            total += tables[i][edge_mask & 0xFF]
            edge_mask >>= 8
            i += 1
        return total

    def _build_chunk_tables(self):
        w = self._weights
        tables = []
        for base in range(0, self.m, 8):
            chunk = w[base:base + 8]
            chunk = chunk + (0,) * (8 - len(chunk))
            tbl = [0] * 256
            for b in range(1, 256):
                low = b & (-b)
                tbl[b] = tbl[b ^ low] + chunk[low.bit_length() - 1]
            tables.append(tbl)
        self._chunk_tables = tables

    def total_weight(self):
        return self.mask_weight(self._full_mask)

    def capacity(self, vid: int):
        """Initial coverage capacity: total weight of edges incident to vid."""
        if self._capacities is None:
            self._capacities = [self.mask_weight(m) for m in self._inc]
        return self._capacities[vid]

    def degree(self, vid: int) -> int:
        return self._inc[vid].bit_count()

    # -- derived instances --------------------------------------------------

    def with_budget(self, k: int) -> "BipartiteInstance":
        """Cheap copy sharing all derived structures, with a different k."""
        if not 0 <= k < self.n:
            raise MkvcError(f"budget k={k} out of range [0, {self.n})")
        new = object.__new__(BipartiteInstance)
        for slot in BipartiteInstance.__slots__:
            object.__setattr__(new, slot, getattr(self, slot))
        new.k = k
        return new

    def __repr__(self):
        return (f"BipartiteInstance(n_left={self.n_left}, n_right={self.n_right},"
                f" m={self.m}, k={self.k})")


@dataclass(frozen=True)
class CoverSolution:
    """A set of at most k vertices together with the exact covered weight."""

    vertices: frozenset
    covered_weight: object
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def sorted_vertices(self) -> tuple:
        return tuple(sorted(self.vertices))


def covered_weight(inst: BipartiteInstance, vertices: Iterable[VertexRef]):
    """Total weight of edges with at least one endpoint in the given set."""
    return inst.mask_weight(inst.cover_mask_of(vertices))


@dataclass(frozen=True)
class Residual:
    """A sub-instance with some vertices deleted, plus the index mapping
    needed to lift residual solutions back to the parent instance."""

    instance: BipartiteInstance
    kept_left: tuple
    kept_right: tuple

    def lift(self, refs: Iterable[VertexRef]) -> frozenset:
        out = []
        for side, idx in refs:
            kept = self.kept_left if side == Side.LEFT else self.kept_right
            out.append(VertexRef(side, kept[idx]))
        return frozenset(out)

    def project(self, refs: Iterable[VertexRef]) -> frozenset:
        """Map parent refs (which must survive the deletion) into the residual."""
        pos_left = {orig: i for i, orig in enumerate(self.kept_left)}
        pos_right = {orig: i for i, orig in enumerate(self.kept_right)}
        out = []
        for side, idx in refs:
            pos = pos_left if side == Side.LEFT else pos_right
            if idx not in pos:
                raise MkvcError(f"vertex {VertexRef(side, idx)} was deleted")
            out.append(VertexRef(side, pos[idx]))
        return frozenset(out)


def residual(inst: BipartiteInstance, vertices: Iterable[VertexRef],
             new_k: int) -> Residual:
    """Delete a vertex set together with its incident edges.

    The surviving vertices are renumbered compactly per side, preserving
    relative order, so index-based tie-breaking agrees between a residual
    run and a masked run on the parent.
    """
    gone = {inst.vertex_id(r) for r in vertices}
    remaining = inst.n - len(gone)
    if not 0 <= new_k < remaining:
        raise MkvcError(f"residual budget {new_k} out of range [0, {remaining})")
    kept_left = tuple(i for i in range(inst.n_left) if i not in gone)
    kept_right = tuple(j for j in range(inst.n_right)
                       if inst.n_left + j not in gone)
    new_left = {orig: i for i, orig in enumerate(kept_left)}
    new_right = {orig: j for j, orig in enumerate(kept_right)}
    covered = inst.cover_mask(gone)
    new_edges = []
    for eid, (l, r, w) in enumerate(inst.edges):
        if covered >> eid & 1:
            continue
        new_edges.append((new_left[l], new_right[r], w))
    sub = BipartiteInstance(len(kept_left), len(kept_right), new_edges, new_k)
    return Residual(sub, kept_left, kept_right)


def _side_ids(inst: BipartiteInstance, side: Side) -> range:
    if side == Side.LEFT:
        return range(inst.n_left)
    return range(inst.n_left, inst.n)


def top_l_one_side(inst: BipartiteInstance, side: Side, l: int,
                   already_covered: int = 0) -> frozenset:
    """The l vertices of one side maximizing the weight of still-uncovered
    incident edges.

    Within a single side the incident edge sets are pairwise disjoint, so
    sorting by residual capacity and taking a prefix is exact.  Ties break
    toward the smaller index; l larger than the side is clamped.
    """
    if l < 0:
        raise MkvcError("l must be non-negative")
    ids = _side_ids(inst, side)
    not_covered = ~already_covered
    ranked = sorted(ids, key=lambda v: (-inst.mask_weight(inst._inc[v] & not_covered), v))
    take = min(l, len(ranked))
    return frozenset(inst.ref_of(v) for v in ranked[:take])


def sorted_by_capacity(inst: BipartiteInstance, side: Side) -> list:
    """Vertices of a side in non-increasing initial capacity, ties by index."""
    ids = _side_ids(inst, side)
    ranked = sorted(ids, key=lambda v: (-inst.capacity(v), v))
    return [inst.ref_of(v) for v in ranked]
