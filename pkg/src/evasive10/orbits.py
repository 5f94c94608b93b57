"""Group actions on vertex pairs, edge orbits, and Euler-characteristic forms.

A permutation group acting on vertices induces an action on the vertex pairs;
the orbits of that action are the minimal nonempty invariant graphs.  The
fixed-point complex of the action has those orbits as vertices, and a set of
orbits spans a face exactly when the union graph has the property, so its
Euler characteristic expands by inclusion-exclusion over nonempty orbit
subsets in terms of class indicators of the union graphs.  That expansion is
what this module produces, as a LinearForm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .forms import LinearForm, Relation
from .graphs import (
    COMPLETE_ID,
    EMPTY_ID,
    CatalogClass,
    Graph,
    exact_circulant_name,
    identify,
    pair_index,
    vertex_pairs,
)
from .perm import Permutation, PermGroup

MAX_ORBITS = 16


class OrbitError(ValueError):
    pass


class UnidentifiableUnionError(OrbitError):
    """Some union of orbits is not a catalog graph; the group yields no usable form."""


def edge_permutation(p: Permutation) -> tuple[int, ...]:
    """The permutation of pair indices induced by a vertex permutation."""
    n = p.degree
    return tuple(
        pair_index(n, p(i), p(j)) for i, j in vertex_pairs(n)
    )


@dataclass(frozen=True)
class EdgeAction:
    """A group together with the induced permutation of pair indices per element."""

    group: PermGroup
    edge_perms: dict[Permutation, tuple[int, ...]]

    @staticmethod
    def of(group: PermGroup) -> "EdgeAction":
        return EdgeAction(group, {p: edge_permutation(p) for p in group.elements})

    def check_homomorphism(self) -> bool:
        """The induced map must itself be a homomorphism (identity and products)."""
        n = self.group.degree
        m = n * (n - 1) // 2
        ident = tuple(range(m))
        if self.edge_perms[self.group.identity] != ident:
            return False
        elems = self.group.sorted_elements()
        for a in elems:
            ea = self.edge_perms[a]
            for b in elems:
                eb = self.edge_perms[b]
                composed = tuple(ea[eb[k]] for k in range(m))
                if composed != self.edge_perms[a * b]:
                    return False
        return True


@dataclass(frozen=True)
class OrbitSet:
    """The edge orbits of a group, each as the graph formed by one orbit."""

    group: PermGroup
    orbits: tuple[Graph, ...]

    def __len__(self) -> int:
        return len(self.orbits)

    def union_of(self, indices: Sequence[int]) -> Graph:
        n = self.group.degree
        bits = 0
        for k in indices:
            bits |= self.orbits[k].bits
        return Graph(n, bits)


def edge_orbits(group: PermGroup) -> OrbitSet:
    """Orbits of the induced pair action, ordered by smallest pair index."""
    n = group.degree
    m = n * (n - 1) // 2
    gen_perms = [edge_permutation(g) for g in group.generators] or [
        edge_permutation(group.identity)
    ]
    seen = [False] * m
    orbits = []
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            e = stack.pop()
            members.append(e)
            for gp in gen_perms:
                f = gp[e]
                if not seen[f]:
                    seen[f] = True
                    stack.append(f)
        bits = 0
        for e in members:
            bits |= 1 << e
        orbits.append(Graph(n, bits))
    return OrbitSet(group, tuple(orbits))


@dataclass(frozen=True)
class RawTerm:
    """One inclusion-exclusion term: a nonempty orbit subset and its union graph."""

    orbit_indices: tuple[int, ...]
    sign: int
    class_id: str
    display_name: str  # exact difference-set name when the union is a plain circulant


@dataclass(frozen=True)
class EulerExpansion:
    """The full audit trail of one Euler-characteristic computation."""

    orbit_class_ids: tuple[str, ...]
    raw_terms: tuple[RawTerm, ...]
    form: LinearForm


def forced_values() -> dict[str, int]:
    """Indicator values every nontrivial nonempty complex forces.

    The empty graph always has the property (the complex is nonempty) and the
    complete graph never does (the complex is not the full simplex).
    """
    return {EMPTY_ID: 1, COMPLETE_ID: 0}


def euler_expansion(
    group: PermGroup,
    catalog: Sequence[CatalogClass],
    relation: Relation,
) -> EulerExpansion:
    """Expand the fixed-point Euler characteristic of the group's pair action.

    Every union of a nonempty subset of orbits must identify to a catalog
    class (i.e. be transitive); otherwise the group cannot produce an
    indicator equation and UnidentifiableUnionError is raised.  Indicators of
    isomorphic unions share a variable, so the returned form is already
    symmetry-merged; the per-subset terms are kept in raw_terms for audit.
    The forced value for the complete graph is substituted, so the complete
    class never appears as a variable.
    """
    oset = edge_orbits(group)
    k = len(oset)
    if k > MAX_ORBITS:
        raise OrbitError(
            f"{k} edge orbits; refusing to expand more than {MAX_ORBITS}"
        )
    ids: list[str] = []
    for orb in oset.orbits:
        cid = identify(orb, catalog)
        if cid is None:
            raise UnidentifiableUnionError(
                f"orbit {orb.to_bit_string()} is not a catalog graph"
            )
        ids.append(cid)

    raw: list[RawTerm] = []
    coeffs: dict[str, int] = {}
    constant = 0
    for r in range(1, k + 1):
        for combo in itertools.combinations(range(k), r):
            union = oset.union_of(combo)
            if r == 1:
                cid = ids[combo[0]]
            else:
                cid = identify(union, catalog)
                if cid is None:
                    raise UnidentifiableUnionError(
                        f"union of orbits {combo} is not a catalog graph"
                    )
            sign = 1 if r % 2 == 1 else -1
            display = exact_circulant_name(union) or cid
            raw.append(RawTerm(combo, sign, cid, display))
            if cid == COMPLETE_ID:
                continue  # forced indicator 0 drops the term
            coeffs[cid] = coeffs.get(cid, 0) + sign
    form = LinearForm.make(coeffs, relation, constant)
    return EulerExpansion(tuple(ids), tuple(raw), form)


def euler_form(
    group: PermGroup,
    catalog: Sequence[CatalogClass],
    relation: Relation,
) -> LinearForm:
    """The symmetry-merged Euler-characteristic form of the group's action."""
    return euler_expansion(group, catalog, relation).form
