"""Symmetric (n, 2m, m)-designs from cliques, Hadamard matrices, and the
isomorphism / automorphism machinery.

A design here is an ordered list of n blocks over n points; validity means
every block has 2m points and two distinct blocks meet in exactly m points.
Incidence 1 corresponds to entry -1 of the associated normalized Hadamard
matrix, so the 0/1 rendering of the matrix reproduces the incidence rows
bit for bit inside a border of zeros.
"""

from dataclasses import dataclass
from itertools import combinations

from .cliques import Clique
from .errors import InternalCheckError, InvariantError, ParseError
from .subsets import ElementSet, Permutation, apply


@dataclass(frozen=True)
class Design:
    blocks: tuple[ElementSet, ...]

    @classmethod
    def from_blocks(cls, blocks) -> "Design":
        d = cls(tuple(blocks))
        d.validate()
        return d

    @property
    def v(self) -> int:
        return len(self.blocks)

    @property
    def block_size(self) -> int:
        return (self.v + 1) // 2

    @property
    def lambda_(self) -> int:
        return (self.v + 1) // 4

    def validate(self):
        v = self.v
        if v < 3 or (v + 1) % 4 != 0:
            raise InvariantError(f"{v} points do not fit the 4t-1 pattern")
        t = (v + 1) // 4
        for i, b in enumerate(self.blocks):
            if b.ground_size != v:
                raise InvariantError(f"block {i + 1} lives on the wrong ground set")
            if len(b) != 2 * t:
                raise InvariantError(
                    f"block {i + 1} has {len(b)} points, expected {2 * t}"
                )
        for i, j in combinations(range(v), 2):
            got = (self.blocks[i].bits & self.blocks[j].bits).bit_count()
            if got != t:
                raise InvariantError(
                    f"blocks {i + 1} and {j + 1} meet in {got} points, expected {t}"
                )

    def block_set(self) -> frozenset[int]:
        return frozenset(b.bits for b in self.blocks)

    def relabeled(self, p: Permutation) -> "Design":
        return Design(tuple(apply(p, b) for b in self.blocks))


def design_from_clique(c: Clique) -> Design:
    """The design whose blocks are the clique points, in roster order."""
    n = c.geometry.params.n
    if len(c) != n:
        raise InvariantError(f"clique has {len(c)} points, expected {n}")
    return Design.from_blocks(c.points)


def clique_from_design(d: Design, geometry=None) -> Clique:
    from .geometry import geometry_for_dimension

    g = geometry if geometry is not None else geometry_for_dimension(
        d.v.bit_length()
    )
    return Clique.from_points(g, d.blocks)


@dataclass(frozen=True)
class HadamardMatrix:
    entries: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.entries)

    def validate(self):
        n = self.order
        for row in self.entries:
            if len(row) != n or any(e not in (1, -1) for e in row):
                raise InvariantError("entries must form a square +-1 matrix")
        for i, j in combinations(range(n), 2):
            dot = sum(a * b for a, b in zip(self.entries[i], self.entries[j]))
            if dot != 0:
                raise InvariantError(f"rows {i} and {j} are not orthogonal")

    def is_normalized(self) -> bool:
        return all(e == 1 for e in self.entries[0]) and all(
            row[0] == 1 for row in self.entries
        )

    def render(self, style: str = "01") -> str:
        if style == "01":
            table = {1: "0", -1: "1"}
        elif style == "pm":
            table = {1: "+", -1: "-"}
        else:
            raise InvariantError(f"unknown rendering style {style!r}")
        return "\n".join(
            "".join(table[e] for e in row) for row in self.entries
        )


def to_hadamard(d: Design) -> HadamardMatrix:
    """Normalized Hadamard matrix of order v+1 with -1 at incidences."""
    d.validate()
    v = d.v
    first = tuple([1] * (v + 1))
    rows = [first]
    for b in d.blocks:
        rows.append(tuple([1] + [-1 if j in b else 1 for j in range(1, v + 1)]))
    h = HadamardMatrix(tuple(rows))
    h.validate()
    return h


def from_hadamard(h: HadamardMatrix) -> Design:
    """Design read off a normalized Hadamard matrix of order 4t."""
    h.validate()
    if h.order % 4 != 0 or h.order < 4:
        raise InvariantError("order must be a positive multiple of 4")
    if not h.is_normalized():
        raise InvariantError("matrix must be normalized")
    v = h.order - 1
    blocks = [
        ElementSet.of([j for j in range(1, v + 1) if row[j] == -1], v)
        for row in h.entries[1:]
    ]
    return Design.from_blocks(blocks)


# ---------------------------------------------------------------------------
# serialization


def render_incidence(d: Design) -> str:
    v = d.v
    return "\n".join(
        "".join("1" if j in b else "0" for j in range(1, v + 1)) for b in d.blocks
    )


def parse_incidence(text: str) -> Design:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ParseError("empty incidence matrix")
    v = len(lines)
    blocks = []
    for i, line in enumerate(lines):
        if len(line) != v or set(line) - {"0", "1"}:
            raise ParseError(
                f"row {i + 1} must be {v} characters of 0/1, got {line!r}"
            )
        blocks.append(ElementSet.of([j + 1 for j, ch in enumerate(line) if ch == "1"], v))
    d = Design(tuple(blocks))
    d.validate()
    return d


def parse_hadamard(text: str, style: str = "01") -> HadamardMatrix:
    if style == "01":
        table = {"0": 1, "1": -1}
    elif style == "pm":
        table = {"+": 1, "-": -1}
    else:
        raise ParseError(f"unknown rendering style {style!r}")
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    rows = []
    for i, line in enumerate(lines):
        if len(line) != len(lines) or set(line) - set(table):
            raise ParseError(f"row {i + 1} is not a valid matrix row: {line!r}")
        rows.append(tuple(table[ch] for ch in line))
    h = HadamardMatrix(tuple(rows))
    h.validate()
    return h


# ---------------------------------------------------------------------------
# isomorphism and automorphism search
#
# Points and blocks are refined together: the base invariant of a point
# triple is the number of blocks containing all three, and dually the size
# of a triple block intersection. Signatures over these invariants carve
# the candidate sets, then a backtracking search with bitmask propagation
# over the bipartite incidence structure assigns point images.


_LABEL_TABLE: dict = {}


def _intern(obj) -> int:
    code = _LABEL_TABLE.get(obj)
    if code is None:
        code = len(_LABEL_TABLE)
        _LABEL_TABLE[obj] = code
    return code


class _DesignContext:
    def __init__(self, d: Design):
        self.design = d
        v = d.v
        self.v = v
        self.block_bits = [b.bits for b in d.blocks]
        self.point_in_blocks = [
            sum(1 << i for i, b in enumerate(d.blocks) if b.bits >> x & 1)
            for x in range(v)
        ]
        self.point_classes, self.block_classes = self._refine()

    def _triple(self, x: int, y: int, z: int) -> int:
        return (
            self.point_in_blocks[x]
            & self.point_in_blocks[y]
            & self.point_in_blocks[z]
        ).bit_count()

    def _block_triple(self, a: int, b: int, c: int) -> int:
        return (
            self.block_bits[a] & self.block_bits[b] & self.block_bits[c]
        ).bit_count()

    def _refine(self):
        v = self.v
        point_pair = [[()] * v for _ in range(v)]
        for x, y in combinations(range(v), 2):
            sig = tuple(
                sorted(self._triple(x, y, z) for z in range(v) if z not in (x, y))
            )
            point_pair[x][y] = point_pair[y][x] = sig
        block_pair = [[()] * v for _ in range(v)]
        for a, b in combinations(range(v), 2):
            sig = tuple(
                sorted(self._block_triple(a, b, c) for c in range(v) if c not in (a, b))
            )
            block_pair[a][b] = block_pair[b][a] = sig

        # labels are interned in a process-wide table so equal signature
        # structures receive equal codes across different designs
        def classes_from(pair):
            labels = [_intern(("seed",))] * v
            for _ in range(3):
                labels = [
                    _intern((
                        labels[i],
                        tuple(sorted(
                            (labels[j], _intern(pair[i][j]))
                            for j in range(v) if j != i
                        )),
                    ))
                    for i in range(v)
                ]
            return labels

        return classes_from(point_pair), classes_from(block_pair)

    def class_profile(self):
        return (
            tuple(sorted(self.point_classes)),
            tuple(sorted(self.block_classes)),
        )


def _search(ctx1: _DesignContext, ctx2: _DesignContext, find_all: bool):
    """Backtracking point-image search; yields image tuples (0-based)."""
    v = ctx1.v

    pclass2 = {}
    for y in range(v):
        pclass2.setdefault(ctx2.point_classes[y], 0)
        pclass2[ctx2.point_classes[y]] |= 1 << y
    bclass2 = {}
    for b in range(v):
        bclass2.setdefault(ctx2.block_classes[b], 0)
        bclass2[ctx2.block_classes[b]] |= 1 << b

    pcand0 = [pclass2.get(ctx1.point_classes[x], 0) for x in range(v)]
    bcand0 = [bclass2.get(ctx1.block_classes[a], 0) for a in range(v)]
    if any(c == 0 for c in pcand0) or any(c == 0 for c in bcand0):
        return

    block_bits1 = ctx1.block_bits
    block_bits2 = ctx2.block_bits
    pib1 = ctx1.point_in_blocks
    pib2 = ctx2.point_in_blocks

    def propagate(pcand, bcand, queue_p, queue_b):
        while queue_p or queue_b:
            while queue_p:
                x = queue_p.pop()
                y = pcand[x]
                for x2 in range(v):
                    if x2 != x:
                        before = pcand[x2]
                        after = before & ~y
                        if before != after:
                            if after == 0:
                                return False
                            pcand[x2] = after
                            if after.bit_count() == 1:
                                queue_p.append(x2)
                member = pib1[x]
                image_blocks = pib2[y.bit_length() - 1]
                for a in range(v):
                    before = bcand[a]
                    if member >> a & 1:
                        after = before & image_blocks
                    else:
                        after = before & ~image_blocks
                    if after != before:
                        if after == 0:
                            return False
                        bcand[a] = after
                        if after.bit_count() == 1:
                            queue_b.append(a)
            while queue_b:
                a = queue_b.pop()
                img = bcand[a]
                for a2 in range(v):
                    if a2 != a:
                        before = bcand[a2]
                        after = before & ~img
                        if before != after:
                            if after == 0:
                                return False
                            bcand[a2] = after
                            if after.bit_count() == 1:
                                queue_b.append(a2)
                target = block_bits2[img.bit_length() - 1]
                source = block_bits1[a]
                for x in range(v):
                    before = pcand[x]
                    if source >> x & 1:
                        after = before & target
                    else:
                        after = before & ~target
                    if after != before:
                        if after == 0:
                            return False
                        pcand[x] = after
                        if after.bit_count() == 1:
                            queue_p.append(x)
        return True

    results = []

    def dfs(pcand, bcand):
        undecided = [x for x in range(v) if pcand[x].bit_count() > 1]
        if not undecided:
            images = tuple(pcand[x].bit_length() - 1 for x in range(v))
            if len(set(images)) == v and _is_isomorphism(ctx1, ctx2, images):
                results.append(images)
                return not find_all
            return False
        x = min(undecided, key=lambda u: (pcand[u].bit_count(), u))
        cand = pcand[x]
        while cand:
            low = cand & -cand
            cand ^= low
            np = list(pcand)
            nb = list(bcand)
            np[x] = low
            if propagate(np, nb, [x], []):
                if dfs(np, nb):
                    return True
        return False

    seed_p = [x for x in range(v) if pcand0[x].bit_count() == 1]
    seed_b = [a for a in range(v) if bcand0[a].bit_count() == 1]
    pc = list(pcand0)
    bc = list(bcand0)
    if propagate(pc, bc, seed_p, seed_b):
        dfs(pc, bc)
    yield from results


def _is_isomorphism(ctx1, ctx2, images) -> bool:
    target = {b for b in ctx2.block_bits}
    for bits in ctx1.block_bits:
        mapped = 0
        rest = bits
        while rest:
            low = rest & -rest
            rest ^= low
            mapped |= 1 << images[low.bit_length() - 1]
        if mapped not in target:
            return False
    return True


def find_isomorphism(d1: Design, d2: Design) -> Permutation | None:
    """A point permutation carrying the blocks of d1 onto those of d2."""
    if d1.v != d2.v:
        raise InvariantError("designs have different point counts")
    ctx1, ctx2 = _DesignContext(d1), _DesignContext(d2)
    if ctx1.class_profile() != ctx2.class_profile():
        return None
    for images in _search(ctx1, ctx2, find_all=False):
        p = Permutation(tuple(i + 1 for i in images))
        if {apply(p, b).bits for b in d1.blocks} != d2.block_set():
            raise InternalCheckError("search returned a non-isomorphism")
        return p
    return None


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Permutation, ...]
    order: int
    elements: tuple[Permutation, ...] | None = None

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, (), 1, (Permutation.identity(degree),))


def automorphism_group(d: Design) -> PermGroup:
    """Full automorphism group, materialized by backtracking enumeration.

    The order is recomputed by a stabilizer-chain sift over the found
    elements; disagreement with the enumeration count aborts.
    """
    ctx = _DesignContext(d)
    found = list(_search(ctx, ctx, find_all=True))
    elements = tuple(
        Permutation(tuple(i + 1 for i in images)) for images in sorted(found)
    )
    if not elements:
        raise InternalCheckError("automorphism search lost the identity")
    order, strong = _stabilizer_chain_order(elements, d.v)
    if order != len(elements):
        raise InternalCheckError(
            f"stabilizer chain gives order {order}, enumeration {len(elements)}"
        )
    generators = tuple(strong) if strong else ()
    return PermGroup(d.v, generators, order, elements)


def _stabilizer_chain_order(elements, degree: int):
    """Independent order count for a fully materialized group.

    Sifts every element through an incremental base/transversal chain,
    growing the chain whenever a residue will not sift. The product of
    transversal sizes counts distinct representative products, so with the
    whole group supplied it equals the group order; feeding a bare
    generating set would only bound it from below.
    """
    base: list[int] = []
    transversals: list[dict[int, tuple[int, ...]]] = []
    strong: list[Permutation] = []
    identity = tuple(range(1, degree + 1))

    def sift(images):
        for level, b in enumerate(base):
            target = images[b - 1]
            trans = transversals[level]
            if target not in trans:
                return images, level
            rep_inv = _inverse(trans[target])
            images = _mul(images, rep_inv)
        return images, len(base)

    def rebuild(level):
        b = base[level]
        gens = [g.images for g in strong if all(
            g.images[base[l] - 1] == base[l] for l in range(level)
        )]
        trans = {b: identity}
        frontier = [b]
        while frontier:
            point = frontier.pop()
            word = trans[point]
            for g in gens:
                image = g[point - 1]
                if image not in trans:
                    trans[image] = _mul(word, g)
                    frontier.append(image)
        transversals[level] = trans

    def add_generator(images, level):
        strong.append(Permutation(images))
        if level == len(base):
            moved = next(i + 1 for i in range(degree) if images[i] != i + 1)
            base.append(moved)
            transversals.append({})
        for l in range(level, len(base)):
            rebuild(l)

    for g in elements:
        images = g.images
        residue, level = sift(images)
        while residue != identity:
            add_generator(residue, level)
            residue, level = sift(residue)

    order = 1
    for trans in transversals:
        order *= len(trans)
    return order, strong


def _mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # left-to-right, matching Permutation.__mul__
    return tuple(q[i - 1] for i in p)


def _inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p, start=1):
        inv[j - 1] = i
    return tuple(inv)


def _check_preserves(d: Design, g: PermGroup):
    blocks = d.block_set()
    for p in g.generators:
        if {apply(p, b).bits for b in d.blocks} != blocks:
            raise InvariantError("group does not preserve the design")


def block_orbit_count(d: Design, g: PermGroup) -> int:
    """Number of orbits of the group on the block list; 1 = block-transitive."""
    _check_preserves(d, g)
    return _orbit_count(
        [b.bits for b in d.blocks],
        lambda bits, p: apply(p, ElementSet(bits, d.v)).bits,
        g.generators,
    )


def flag_orbit_count(d: Design, g: PermGroup) -> int:
    """Orbits on incident (point, block) pairs; 1 = flag-transitive."""
    _check_preserves(d, g)
    flags = [
        (x, b.bits) for b in d.blocks for x in b.elements()
    ]

    def act(flag, p):
        x, bits = flag
        return (p(x), apply(p, ElementSet(bits, d.v)).bits)

    return _orbit_count(flags, act, g.generators)


def _orbit_count(items, act, generators) -> int:
    remaining = set(items)
    count = 0
    while remaining:
        seed = remaining.pop()
        count += 1
        frontier = [seed]
        while frontier:
            item = frontier.pop()
            for p in generators:
                image = act(item, p)
                if image in remaining:
                    remaining.remove(image)
                    frontier.append(image)
    return count


def point_block_systems(g: PermGroup) -> list[tuple[frozenset[int], ...]]:
    """Nontrivial block systems of the point action (descriptive only).

    For every pair (1, b) the finest invariant partition gluing the pair is
    computed by closure; the distinct nontrivial results are returned.
    """
    n = g.degree
    if not g.generators:
        return []
    systems = set()
    for b in range(2, n + 1):
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
                return True
            return False

        union(1, b)
        changed = True
        while changed:
            changed = False
            for p in g.generators:
                for x in range(1, n + 1):
                    for y in range(x + 1, n + 1):
                        if find(x) == find(y) and union(p(x), p(y)):
                            changed = True
        classes: dict[int, set[int]] = {}
        for x in range(1, n + 1):
            classes.setdefault(find(x), set()).add(x)
        if 1 < len(classes) < n:
            systems.add(tuple(sorted(
                (frozenset(c) for c in classes.values()), key=sorted
            )))
    return sorted(systems, key=lambda s: (len(s), [sorted(b) for b in s]))


def is_point_primitive(g: PermGroup) -> bool:
    return not point_block_systems(g)
