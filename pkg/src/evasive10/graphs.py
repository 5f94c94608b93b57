"""Labelled graphs on few vertices, circulant and Petersen constructions,
isomorphism and subgraph search, and the catalog of transitive graphs.

Edge sets are bit masks over the n(n-1)/2 vertex pairs in lexicographic
order, so unions, complements and containment of labelled graphs are integer
bit operations.  All searches are plain backtracking; at this scale (n = 10)
canonical-form machinery would be overkill.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .perm import Permutation


class GraphError(ValueError):
    pass


class CatalogError(RuntimeError):
    """Internal consistency failure while building the catalog."""


@lru_cache(maxsize=None)
def vertex_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """All pairs (i, j), 1 <= i < j <= n, in lexicographic order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(vertex_pairs(n))}


def pair_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return _pair_index(n)[(i, j)]


@dataclass(frozen=True)
class Graph:
    """A simple graph on vertices 1..n stored as an edge bit mask."""

    n: int
    bits: int

    def __post_init__(self):
        m = self.n * (self.n - 1) // 2
        if self.bits < 0 or self.bits >> m:
            raise GraphError("edge bits out of range for this vertex count")

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n, 0)

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph(n, (1 << (n * (n - 1) // 2)) - 1)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        bits = 0
        for i, j in edges:
            if i == j or not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"bad edge ({i}, {j})")
            bits |= 1 << pair_index(n, i, j)
        return Graph(n, bits)

    @property
    def edge_count(self) -> int:
        return bin(self.bits).count("1")

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.bits >> pair_index(self.n, i, j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [p for k, p in enumerate(vertex_pairs(self.n)) if self.bits >> k & 1]

    def adjacency(self) -> list[set[int]]:
        """adjacency()[v-1] is the neighbour set of vertex v."""
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges():
            adj[i - 1].add(j)
            adj[j - 1].add(i)
        return adj

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency()]

    def degree_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(self.degrees()))

    def complement(self) -> "Graph":
        return Graph(self.n, Graph.complete(self.n).bits ^ self.bits)

    def union(self, other: "Graph") -> "Graph":
        if self.n != other.n:
            raise GraphError("vertex count mismatch")
        return Graph(self.n, self.bits | other.bits)

    def intersect(self, other: "Graph") -> "Graph":
        if self.n != other.n:
            raise GraphError("vertex count mismatch")
        return Graph(self.n, self.bits & other.bits)

    def is_subgraph_of(self, other: "Graph") -> bool:
        """Labelled containment: every edge of self is an edge of other."""
        return self.n == other.n and self.bits & ~other.bits == 0

    def relabel(self, sigma: Permutation | Sequence[int]) -> "Graph":
        """Apply a vertex bijection; edge {i, j} becomes {sigma(i), sigma(j)}."""
        if isinstance(sigma, Permutation):
            img = sigma.images
        else:
            img = tuple(sigma)
        bits = 0
        for i, j in self.edges():
            bits |= 1 << pair_index(self.n, img[i - 1], img[j - 1])
        return Graph(self.n, bits)

    def triangle_count(self) -> int:
        adj = self.adjacency()
        count = 0
        for i, j in self.edges():
            count += len(adj[i - 1] & adj[j - 1])
        return count // 3

    def to_bit_string(self) -> str:
        m = self.n * (self.n - 1) // 2
        return "".join("1" if self.bits >> k & 1 else "0" for k in range(m))

    @staticmethod
    def from_bit_string(s: str, n: int) -> "Graph":
        m = n * (n - 1) // 2
        if len(s) != m or set(s) - {"0", "1"}:
            raise GraphError(f"bit string must be {m} characters of 0/1")
        bits = 0
        for k, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << k
        return Graph(n, bits)

    def to_text(self) -> str:
        lines = [f"n={self.n}"]
        lines += [f"{i} {j}" for i, j in self.edges()]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Graph":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("n="):
            raise GraphError('graph text must start with an "n=<count>" line')
        n = int(lines[0][2:])
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise GraphError(f"bad edge line: {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return Graph.from_edges(n, edges)


def allowed_differences(n: int) -> range:
    return range(1, n // 2 + 1)


def circulant(n: int, diffs: Iterable[int]) -> Graph:
    """Circulant graph on 1..n: i and j adjacent iff their cyclic difference is in diffs.

    Each difference d < n/2 contributes n edges; d = n/2 (n even) contributes n/2.
    """
    dset = set(diffs)
    bad = dset - set(allowed_differences(n))
    if bad:
        raise GraphError(f"differences {sorted(bad)} out of range 1..{n // 2}")
    edges = []
    for i, j in vertex_pairs(n):
        d = j - i
        if d in dset or n - d in dset:
            edges.append((i, j))
    return Graph.from_edges(n, edges)


def petersen() -> Graph:
    """The Petersen graph via the Kneser construction.

    Vertices are the ten 2-subsets of {1..5} in lexicographic order, labelled
    1..10; two vertices are adjacent iff their subsets are disjoint.
    """
    subsets = list(itertools.combinations(range(1, 6), 2))
    edges = []
    for x in range(10):
        for y in range(x + 1, 10):
            if not set(subsets[x]) & set(subsets[y]):
                edges.append((x + 1, y + 1))
    return Graph.from_edges(10, edges)


def _invariants(g: Graph) -> tuple:
    return (g.edge_count, g.degree_multiset(), g.triangle_count())


def _embed(
    big: Graph, small: Graph, induced: bool
) -> Optional[tuple[int, ...]]:
    """Backtracking vertex-map search; returns images tuple or None.

    Maps vertices of `small` into `big` so that edges land on edges (and, if
    induced, non-edges on non-edges).  Pattern vertices are ordered by
    descending degree, tie-broken by adjacency to already-placed vertices, so
    the most constrained choices happen first.
    """
    n = big.n
    adj_small = small.adjacency()
    adj_big = big.adjacency()
    deg_small = [len(s) for s in adj_small]
    deg_big = [len(s) for s in adj_big]

    order: list[int] = []
    placed = set()
    while len(order) < n:
        best = max(
            (v for v in range(1, n + 1) if v not in placed),
            key=lambda v: (len(adj_small[v - 1] & placed), deg_small[v - 1], -v),
        )
        order.append(best)
        placed.add(best)

    images = [0] * (n + 1)  # images[v] = mapped vertex, 0 = unassigned
    used = [False] * (n + 1)

    def ok(v: int, w: int) -> bool:
        if induced:
            if deg_big[w - 1] != deg_small[v - 1]:
                return False
        elif deg_big[w - 1] < deg_small[v - 1]:
            return False
        for u in adj_small[v - 1]:
            m = images[u]
            if m and m not in adj_big[w - 1]:
                return False
        if induced:
            for u in range(1, n + 1):
                m = images[u]
                if m and u not in adj_small[v - 1] and m in adj_big[w - 1]:
                    return False
        return True

    def rec(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for w in range(1, n + 1):
            if used[w] or not ok(v, w):
                continue
            images[v] = w
            used[w] = True
            if rec(k + 1):
                return True
            images[v] = 0
            used[w] = False
        return False

    if rec(0):
        return tuple(images[1:])
    return None


def is_isomorphic(g: Graph, h: Graph) -> Optional[Permutation]:
    """A vertex bijection sigma with sigma(g) = h, or None."""
    if g.n != h.n:
        return None
    if _invariants(g) != _invariants(h):
        return None
    res = _embed(h, g, induced=True)
    if res is None:
        return None
    sigma = Permutation(g.n, res)
    assert g.relabel(sigma).bits == h.bits
    return sigma


def contains_up_to_iso(big: Graph, small: Graph) -> Optional[Permutation]:
    """A vertex bijection sigma with sigma(small) a subgraph of big, or None.

    When `small` is dense (more than half the possible edges) the equivalent
    complement problem is searched instead: sigma(small) <= big iff
    sigma^-1(complement(big)) <= complement(small), and the complement side is
    sparser, which prunes much better.
    """
    if big.n != small.n:
        return None
    if small.edge_count > big.edge_count:
        return None
    half = big.n * (big.n - 1) // 4
    if small.edge_count > half:
        res = _embed(small.complement(), big.complement(), induced=False)
        if res is None:
            return None
        sigma = Permutation(big.n, res).inverse()
    else:
        res = _embed(big, small, induced=False)
        if res is None:
            return None
        sigma = Permutation(big.n, res)
    assert small.relabel(sigma).is_subgraph_of(big)
    return sigma


# --- the catalog of transitive graphs -------------------------------------

EMPTY_ID = "empty"
COMPLETE_ID = "complete"
PETERSEN_ID = "P"
CO_PETERSEN_ID = "Pbar"


def diff_name(diffs: Iterable[int]) -> str:
    return "".join(str(d) for d in sorted(diffs))


def name_diffs(name: str) -> frozenset[int]:
    return frozenset(int(ch) for ch in name)


@dataclass(frozen=True)
class CatalogClass:
    """One isomorphism class of transitive graphs, named by its least member."""

    id: str
    representative: Graph
    members: tuple[str, ...]

    @property
    def edge_count(self) -> int:
        return self.representative.edge_count

    @property
    def degree(self) -> int:
        degs = set(self.representative.degrees())
        return degs.pop() if len(degs) == 1 else -1


def class_sort_key(cid: str) -> tuple:
    """Canonical class order: empty, circulants by (size, name), P, Pbar, complete."""
    if cid == EMPTY_ID:
        return (0, 0, "")
    if cid == COMPLETE_ID:
        return (3, 0, "")
    if cid == PETERSEN_ID:
        return (2, 0, "")
    if cid == CO_PETERSEN_ID:
        return (2, 1, "")
    return (1, len(cid), cid)


def transitivity_witnesses(cid: str, n: int = 10) -> list[Permutation]:
    """Automorphisms of the class representative whose closure moves every vertex
    to every other (rotation for circulants, induced 2-subset maps for P/Pbar)."""
    if cid in (PETERSEN_ID, CO_PETERSEN_ID):
        subsets = list(itertools.combinations(range(1, 6), 2))
        pos = {s: k + 1 for k, s in enumerate(subsets)}
        out = []
        for base in (Permutation(5, (2, 3, 4, 5, 1)), Permutation(5, (2, 1, 3, 4, 5))):
            images = tuple(
                pos[tuple(sorted((base(a), base(b))))] for (a, b) in subsets
            )
            out.append(Permutation(10, images))
        return out
    rot = tuple(list(range(2, n + 1)) + [1])
    return [Permutation(n, rot)]


def build_catalog(n: int = 10) -> list[CatalogClass]:
    """Group all circulants on n vertices into isomorphism classes and, for
    n = 10, add the Petersen graph and its complement.

    For n = 10 this must produce exactly 22 classes; anything else signals a
    bug in the isomorphism search and raises CatalogError.
    """
    diffs_all = list(allowed_differences(n))
    classes: list[CatalogClass] = [
        CatalogClass(EMPTY_ID, Graph.empty(n), (EMPTY_ID,))
    ]

    proper: list[tuple[str, Graph]] = []
    for r in range(1, len(diffs_all)):
        for combo in itertools.combinations(diffs_all, r):
            proper.append((diff_name(combo), circulant(n, combo)))
    full = diff_name(diffs_all)

    grouped: list[list[tuple[str, Graph]]] = []
    for name, g in proper:
        for bucket in grouped:
            if is_isomorphic(bucket[0][1], g) is not None:
                bucket.append((name, g))
                break
        else:
            grouped.append([(name, g)])
    for bucket in grouped:
        bucket.sort(key=lambda t: (len(t[0]), t[0]))
        cid = bucket[0][0]
        classes.append(
            CatalogClass(cid, bucket[0][1], tuple(name for name, _ in bucket))
        )

    if n == 10:
        p = petersen()
        classes.append(CatalogClass(PETERSEN_ID, p, (PETERSEN_ID,)))
        classes.append(CatalogClass(CO_PETERSEN_ID, p.complement(), (CO_PETERSEN_ID,)))
    classes.append(CatalogClass(COMPLETE_ID, circulant(n, diffs_all), (full,)))
    classes.sort(key=lambda c: class_sort_key(c.id))

    reps = [c.representative for c in classes]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if is_isomorphic(reps[i], reps[j]) is not None:
                raise CatalogError(
                    f"classes {classes[i].id} and {classes[j].id} coincide"
                )
    if n == 10 and len(classes) != 22:
        raise CatalogError(f"expected 22 classes on 10 vertices, got {len(classes)}")
    return classes


def identify(g: Graph, catalog: Sequence[CatalogClass]) -> Optional[str]:
    """The id of the catalog class isomorphic to g, or None if there is none."""
    inv = _invariants(g)
    for cls in catalog:
        if cls.representative.n != g.n:
            continue
        if _invariants(cls.representative) != inv:
            continue
        if is_isomorphic(cls.representative, g) is not None:
            return cls.id
    return None


def exact_circulant_name(g: Graph) -> Optional[str]:
    """The difference set whose circulant equals g bit-for-bit, if any."""
    n = g.n
    diffs = set()
    for d in allowed_differences(n):
        if g.has_edge(1, 1 + d):
            diffs.add(d)
    if circulant(n, diffs).bits == g.bits:
        return diff_name(diffs) if diffs else EMPTY_ID
    return None


@dataclass(frozen=True)
class InclusionPoset:
    """Subgraph-containment order on catalog classes, with embedding witnesses."""

    ids: tuple[str, ...]
    relations: frozenset[tuple[str, str]]  # (a, b): rep(a) embeds into rep(b)
    witnesses: dict[tuple[str, str], Permutation]
    members: dict[str, tuple[str, ...]]

    def leq(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.relations

    def covers(self) -> list[tuple[str, str]]:
        """Transitive reduction: pairs (a, b) with nothing strictly between."""
        out = []
        for a, b in sorted(self.relations):
            if any(
                (a, m) in self.relations and (m, b) in self.relations
                for m in self.ids
                if m != a and m != b
            ):
                continue
            out.append((a, b))
        return out

    def is_subset_trivial(self, a: str, b: str) -> bool:
        """True if (a, b) follows from difference-set containment between members."""
        special = {EMPTY_ID, COMPLETE_ID, PETERSEN_ID, CO_PETERSEN_ID}
        if a == EMPTY_ID or b == COMPLETE_ID:
            return True
        if a in special or b in special:
            return False
        return any(
            name_diffs(ma) <= name_diffs(mb)
            for ma in self.members.get(a, (a,))
            for mb in self.members.get(b, (b,))
        )

    def nontrivial_relations(self) -> list[tuple[str, str]]:
        """Relations not explained by difference-set containment between members."""
        return [r for r in sorted(self.relations) if not self.is_subset_trivial(*r)]


def build_poset(catalog: Sequence[CatalogClass]) -> InclusionPoset:
    """Compute the full containment relation between class representatives.

    Every ordered pair is decided by search, so the result may include
    relations beyond any curated list; those extra relations are genuine and
    only make downstream monotonicity constraints stronger.
    """
    ids = tuple(c.id for c in catalog)
    rep = {c.id: c.representative for c in catalog}
    relations = set()
    witnesses: dict[tuple[str, str], Permutation] = {}
    for a in ids:
        for b in ids:
            if a == b:
                continue
            ga, gb = rep[a], rep[b]
            if ga.edge_count >= gb.edge_count:
                continue  # equal-size distinct classes never nest
            sigma = contains_up_to_iso(gb, ga)
            if sigma is not None:
                relations.add((a, b))
                witnesses[(a, b)] = sigma
    for a, b in relations:
        if (b, a) in relations:
            raise CatalogError(f"containment both ways between {a} and {b}")
    return InclusionPoset(
        ids,
        frozenset(relations),
        witnesses,
        {c.id: c.members for c in catalog},
    )


def edge_coloring_automorphisms(parts: Sequence[Graph]) -> list[Permutation]:
    """All vertex permutations preserving each given edge set setwise.

    The parts need not cover all pairs; uncovered pairs form one implicit
    extra colour.  Any group whose edge orbits are exactly `parts` (plus
    orbits inside the uncovered rest) is contained in this stabilizer, so the
    stabilizer bounds what orbit structures are achievable at all.
    """
    if not parts:
        raise GraphError("need at least one part")
    n = parts[0].n
    colors: dict[tuple[int, int], int] = {}
    for idx, g in enumerate(parts, start=1):
        for e in g.edges():
            if e in colors:
                raise GraphError(f"parts overlap on edge {e}")
            colors[e] = idx

    def color(i: int, j: int) -> int:
        return colors.get((min(i, j), max(i, j)), 0)

    out: list[Permutation] = []
    images: list[int] = []
    used: set[int] = set()

    def rec() -> None:
        k = len(images)
        if k == n:
            out.append(Permutation(n, tuple(images)))
            return
        for w in range(1, n + 1):
            if w in used:
                continue
            if all(color(v + 1, k + 1) == color(images[v], w) for v in range(k)):
                images.append(w)
                used.add(w)
                rec()
                images.pop()
                used.remove(w)

    rec()
    return out


def orbit_partition_achievable(parts: Sequence[Graph]) -> tuple[bool, int]:
    """Can any permutation group have exactly these edge sets as orbits?

    Such a group lies in the setwise stabilizer of the colouring, so each part
    must already be a single orbit of the full stabilizer.  Returns the
    verdict together with the stabilizer order.
    """
    autos = edge_coloring_automorphisms(parts)
    for g in parts:
        edges = g.edges()
        start = edges[0]
        orbit = {start}
        frontier = [start]
        while frontier:
            x, y = frontier.pop()
            for p in autos:
                e = (min(p(x), p(y)), max(p(x), p(y)))
                if e not in orbit:
                    orbit.add(e)
                    frontier.append(e)
        if len(orbit) != len(edges):
            return False, len(autos)
    return True, len(autos)


def poset_to_dot(poset: InclusionPoset) -> str:
    """Hasse diagram in DOT, smaller graphs drawn below larger ones."""
    lines = ["digraph inclusion {", "  rankdir=BT;", '  node [shape=box];']
    for cid in poset.ids:
        lines.append(f'  "{cid}";')
    for a, b in poset.covers():
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
