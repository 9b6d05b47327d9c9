"""Collinearity graph, maximal-clique enumeration and clique classification.

The graph stores one adjacency bitset per vertex (bit j of adjacency[u] is
set when vertex j is collinear to vertex u). Enumeration is Bron-Kerbosch
with pivoting over these bitsets; the pivot rule is fixed so the emitted
stream is deterministic.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .errors import InternalCheckError, InvariantError
from .geometry import Geometry, Line, is_singular_subspace
from .subsets import ElementSet


class CollinearityGraph:
    def __init__(self, geometry: Geometry, adjacency: list[int]):
        self.geometry = geometry
        self.adjacency = adjacency

    def __len__(self) -> int:
        return len(self.adjacency)

    def degree(self, u: int) -> int:
        return self.adjacency[u].bit_count()


def build_graph(g: Geometry) -> CollinearityGraph:
    """Adjacency bitsets for the whole point roster.

    Computed from the 0/1 point-element matrix: vertices are adjacent when
    the inner product of their rows is exactly m. The slow predicate
    is_collinear remains the semantic source of truth; tests compare both.
    """
    n = g.params.n
    m = g.params.m
    rows = np.zeros((len(g), n), dtype=np.int16)
    for i, p in enumerate(g.points):
        for e in p.elements():
            rows[i, e - 1] = 1
    adjacency: list[int] = []
    chunk = 1024
    for start in range(0, len(g), chunk):
        counts = rows[start:start + chunk] @ rows.T
        adjacent = counts == m
        for local, row in enumerate(adjacent):
            u = start + local
            row[u] = False
            packed = np.packbits(row, bitorder="little").tobytes()
            adjacency.append(int.from_bytes(packed, "little"))
    return CollinearityGraph(g, adjacency)


@dataclass(frozen=True)
class Clique:
    """Mutually collinear points, stored as sorted roster indices."""

    geometry: Geometry
    vertices: tuple[int, ...]

    def __post_init__(self):
        g = self.geometry
        if list(self.vertices) != sorted(set(self.vertices)):
            raise InvariantError("clique vertices must be sorted and distinct")
        if len(self.vertices) > g.params.n:
            raise InvariantError("clique exceeds the n-element bound")
        pts = [g.points[v].bits for v in self.vertices]
        m = g.params.m
        for a, b in combinations(pts, 2):
            if (a & b).bit_count() != m:
                raise InvariantError(
                    f"points {bin(a)} and {bin(b)} are not collinear"
                )

    @classmethod
    def from_points(cls, g: Geometry, points) -> "Clique":
        return cls(g, tuple(sorted(g.index_of(p) for p in points)))

    @property
    def points(self) -> tuple[ElementSet, ...]:
        return tuple(self.geometry.points[v] for v in self.vertices)

    def point_bits(self) -> frozenset[int]:
        return frozenset(self.geometry.points[v].bits for v in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, p: ElementSet) -> bool:
        return self.geometry.contains(p) and self.geometry.index_of(p) in set(self.vertices)


class CliqueTag(Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    NON_CENTERED = "NON_CENTERED"


TAG_BY_INDEX = {7: CliqueTag.C1, 3: CliqueTag.C2, 1: CliqueTag.C3, 0: CliqueTag.C4}
INDEX_BY_TAG = {tag: idx for idx, tag in TAG_BY_INDEX.items()}


@dataclass(frozen=True)
class CliqueClass:
    """Classification verdict with the evidence that produced it."""

    tag: CliqueTag
    centers: tuple[ElementSet, ...]
    index: int | None
    line_count: int
    plane_count: int

    def __post_init__(self):
        if self.tag is CliqueTag.NON_CENTERED:
            if self.centers or self.index is not None:
                raise InvariantError("non-centered verdicts carry no center or index")
        else:
            if not self.centers or self.index != INDEX_BY_TAG[self.tag]:
                raise InvariantError(
                    f"tag {self.tag.value} requires a center and index"
                    f" {INDEX_BY_TAG[self.tag]}"
                )


def _lowest_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def enumerate_maximal_cliques(
    graph: CollinearityGraph,
    limit: int | None = None,
    min_size: int = 0,
    containing: int | None = None,
    sorted_output: bool = False,
):
    """Stream maximal cliques of the collinearity graph.

    Deterministic under the fixed pivot rule (pivot maximizes |P & N(u)|,
    ties to the smallest vertex; candidates scanned in ascending order).
    min_size prunes subtrees that cannot reach the requested size; the
    n-element bound caps every clique, so min_size = n searches exactly the
    design-sized ones. With containing=v only cliques through v are emitted.
    sorted_output materializes the stream and yields in sorted order, so it
    requires a finite search (use limit or a restricted scope).
    """
    adj = graph.adjacency
    out_count = 0

    def expand(r: list[int], p: int, x: int):
        nonlocal out_count
        if limit is not None and out_count >= limit:
            return
        if p == 0 and x == 0:
            if len(r) >= min_size:
                out_count += 1
                yield Clique(graph.geometry, tuple(sorted(r)))
            return
        if len(r) + p.bit_count() < min_size:
            return
        pivot = -1
        best = -1
        for u in _lowest_bits(p | x):
            score = (p & adj[u]).bit_count()
            if score > best:
                best = score
                pivot = u
        for v in _lowest_bits(p & ~adj[pivot]):
            mask = 1 << v
            yield from expand(r + [v], p & adj[v], x & adj[v])
            if limit is not None and out_count >= limit:
                return
            p &= ~mask
            x |= mask

    def run():
        if containing is not None:
            yield from expand([containing], adj[containing], 0)
            return
        # degeneracy order at the top level keeps subproblems small
        order = _degeneracy_order(adj)
        position = {v: i for i, v in enumerate(order)}
        for v in order:
            later = 0
            earlier = 0
            for u in _lowest_bits(adj[v]):
                if position[u] > position[v]:
                    later |= 1 << u
                else:
                    earlier |= 1 << u
            yield from expand([v], later, earlier)
            if limit is not None and out_count >= limit:
                return

    if sorted_output:
        found = sorted(run(), key=lambda c: c.vertices)
        yield from found
    else:
        yield from run()


def _degeneracy_order(adj: list[int]) -> list[int]:
    n = len(adj)
    remaining = (1 << n) - 1
    degs = [adj[v].bit_count() for v in range(n)]
    order = []
    for _ in range(n):
        v = min(
            _lowest_bits(remaining),
            key=lambda u: (degs[u], u),
        )
        order.append(v)
        remaining ^= 1 << v
        for u in _lowest_bits(adj[v] & remaining):
            degs[u] -= 1
    return order


def center_points(c: Clique) -> tuple[ElementSet, ...]:
    """All points O of the clique whose line to every other point stays inside."""
    bits = sorted(c.point_bits())
    inside = set(bits)
    centers = []
    for o in bits:
        if all(o ^ b in inside for b in bits if b != o):
            centers.append(o)
    n = c.geometry.params.n
    return tuple(ElementSet(b, n) for b in centers)


def lines_inside(c: Clique) -> tuple[Line, ...]:
    """All lines of the geometry with all three points in the clique."""
    bits = sorted(c.point_bits())
    inside = set(bits)
    n = c.geometry.params.n
    lines = []
    for i, a in enumerate(bits):
        for b in bits[i + 1:]:
            third = a ^ b
            if third > b and third in inside:
                lines.append(
                    Line.through(ElementSet(a, n), ElementSet(b, n))
                )
    return tuple(lines)


def planes_inside(c: Clique) -> tuple[frozenset[ElementSet], ...]:
    """All 7-point singular subspaces (Fano-plane copies) inside the clique."""
    inside = c.point_bits()
    n = c.geometry.params.n
    lines = [frozenset(p.bits for p in line.points) for line in lines_inside(c)]
    planes = set()
    for l1, l2 in combinations(lines, 2):
        if len(l1 & l2) != 1:
            continue
        closure = set(l1 | l2)
        grew = True
        ok = True
        while grew and ok:
            grew = False
            for a, b in combinations(sorted(closure), 2):
                third = a ^ b
                if third not in closure:
                    if third not in inside:
                        ok = False
                        break
                    closure.add(third)
                    grew = True
        if ok and len(closure) == 7:
            planes.add(frozenset(closure))
    return tuple(
        frozenset(ElementSet(b, n) for b in p)
        for p in sorted(planes, key=sorted)
    )


def classify_clique(c: Clique) -> CliqueClass:
    """Classify a maximal n-element clique of the k = 4 geometry.

    The bijection index of a decomposition at the smallest center point is
    the primary route; the structural description (singularity, Fano planes
    and lines inside) is recomputed independently and any disagreement is a
    hard failure.
    """
    from .constructions import decompose
    from .fano import bijection_index

    g = c.geometry
    if g.params.k != 4:
        raise InvariantError("classification is defined for the k = 4 geometry")
    if len(c) != g.params.n:
        raise InvariantError(f"clique has {len(c)} points, expected {g.params.n}")

    centers = center_points(c)
    lines = lines_inside(c)
    planes = planes_inside(c)

    if not centers:
        tag_structural = CliqueTag.NON_CENTERED
        index = None
    else:
        dec = decompose(c, centers[0])
        index = bijection_index(dec.fano_bijection())
        if index not in TAG_BY_INDEX:
            raise InternalCheckError(f"impossible bijection index {index}")
        tag_structural = _structural_tag(c, centers, lines, planes)
        if TAG_BY_INDEX[index] is not tag_structural:
            raise InternalCheckError(
                f"index route gives {TAG_BY_INDEX[index].value} but structure"
                f" gives {tag_structural.value}"
            )
    return CliqueClass(
        tag=tag_structural,
        centers=centers,
        index=index,
        line_count=len(lines),
        plane_count=len(planes),
    )


def _structural_tag(c, centers, lines, planes) -> CliqueTag:
    center_bits = {o.bits for o in centers}
    line_sets = [frozenset(p.bits for p in line.points) for line in lines]
    plane_sets = [frozenset(p.bits for p in plane) for plane in planes]

    if is_singular_subspace(c.geometry, c.points):
        if len(centers) != len(c):
            raise InternalCheckError("singular clique without all points central")
        return CliqueTag.C1

    if len(plane_sets) == 3:
        common = plane_sets[0] & plane_sets[1] & plane_sets[2]
        pairwise = [a & b for a, b in combinations(plane_sets, 2)]
        if any(pw != common for pw in pairwise) or len(common) != 3:
            raise InternalCheckError("three planes do not share a single line")
        if common not in line_sets or center_bits != set(common):
            raise InternalCheckError("shared line is not the set of center points")
        if any(not any(ls <= ps for ps in plane_sets) for ls in line_sets):
            raise InternalCheckError("line outside the three planes")
        return CliqueTag.C2

    if len(plane_sets) == 1:
        if len(centers) != 1 or centers[0].bits not in plane_sets[0]:
            raise InternalCheckError("expected one center inside the unique plane")
        o = centers[0].bits
        for ls in line_sets:
            if not (ls <= plane_sets[0] or o in ls):
                raise InternalCheckError("line outside plane misses the center")
        return CliqueTag.C3

    if len(plane_sets) == 0:
        if len(centers) != 1:
            raise InternalCheckError("plane-free clique must have a unique center")
        o = centers[0].bits
        if any(o not in ls for ls in line_sets):
            raise InternalCheckError("line inside does not pass through the center")
        return CliqueTag.C4

    raise InternalCheckError(f"unexpected number of internal planes: {len(plane_sets)}")
