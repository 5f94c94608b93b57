"""Permutations on points 1..n and small permutation groups by explicit closure.

Groups here are tiny (orders up to a few thousand), so every group is stored
as its full element set.  Normality, quotients, homomorphism well-definedness
and kernels are all decided by direct enumeration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence

DEFAULT_CLOSURE_CAP = 10**6


class PermError(ValueError):
    """Malformed permutation input (bad cycle text, non-bijection, ...)."""


class GroupError(ValueError):
    """Violated group-level precondition (not a subgroup, not normal, ...)."""


class HomError(ValueError):
    """Generator images do not extend to a homomorphism, or surjectivity fails."""


class ClosureCapExceeded(GroupError):
    """Closure grew past the element cap; the generators span an unexpectedly large group."""


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..degree}; images[i-1] is the image of point i."""

    degree: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.degree or sorted(self.images) != list(
            range(1, self.degree + 1)
        ):
            raise PermError(f"not a bijection on 1..{self.degree}: {self.images}")

    @staticmethod
    def identity(degree: int) -> "Permutation":
        return Permutation(degree, tuple(range(1, degree + 1)))

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (p * q)(x) = p(q(x)); q acts first.
        if self.degree != other.degree:
            raise PermError("degree mismatch in composition")
        return Permutation(
            self.degree, tuple(self.images[j - 1] for j in other.images)
        )

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(self.degree, tuple(inv))

    def is_identity(self) -> bool:
        return all(self.images[i] == i + 1 for i in range(self.degree))

    def order(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b), (len(c) for c in self.cycles()), 1)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles of length >= 2, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            cyc = [start]
            seen[start - 1] = True
            p = self(start)
            while p != start:
                cyc.append(p)
                seen[p - 1] = True
                p = self(p)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Permutation({self.degree}, {str(self)!r})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse cycle notation like "(1 3 5 7 9)(2 4 6 8 10)" into a Permutation.

    Points are 1-based and whitespace-separated; "()" is the identity; a point
    absent from every cycle is fixed.  Cycles in one expression must be
    disjoint, so the left-to-right product order never matters.
    """
    stripped = text.strip()
    if not stripped:
        raise PermError("empty cycle expression")
    consumed = _CYCLE_RE.sub("", stripped)
    if consumed.strip():
        raise PermError(f"malformed cycle expression: {text!r}")
    images = list(range(1, degree + 1))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        points = [int(tok) for tok in body.split()]
        if not points:
            continue  # "()" = identity factor
        for p in points:
            if not 1 <= p <= degree:
                raise PermError(f"point {p} out of range 1..{degree}")
            if p in seen:
                raise PermError(f"point {p} repeated; cycles must be disjoint")
            seen.add(p)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b
    return Permutation(degree, tuple(images))


def _perm_key(p: Permutation) -> tuple[int, ...]:
    return p.images


@dataclass(frozen=True)
class PermGroup:
    """A finite permutation group with every element materialised."""

    degree: int
    generators: tuple[Permutation, ...]
    elements: frozenset[Permutation]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __contains__(self, p: Permutation) -> bool:
        return p in self.elements

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.elements <= other.elements

    def sorted_elements(self) -> list[Permutation]:
        return sorted(self.elements, key=_perm_key)

    def generator_strings(self) -> list[str]:
        return [str(g) for g in self.generators]

    def element_orders(self) -> list[int]:
        return [p.order() for p in self.elements]

    def is_trivial(self) -> bool:
        return self.order == 1

    @staticmethod
    def trivial(degree: int) -> "PermGroup":
        e = Permutation.identity(degree)
        return PermGroup(degree, (), frozenset([e]))

    @staticmethod
    def from_elements(elements: Iterable[Permutation]) -> "PermGroup":
        """Wrap an element set that is already a group, with a small greedy generating set."""
        elems = frozenset(elements)
        if not elems:
            raise GroupError("empty element set")
        degree = next(iter(elems)).degree
        gens: list[Permutation] = []
        span = {Permutation.identity(degree)}
        for p in sorted(elems, key=_perm_key):
            if p in span:
                continue
            gens.append(p)
            span = set(
                closure(gens, cap=len(elems)).elements
            )
        if span != set(elems):
            raise GroupError("element set is not closed under composition")
        return PermGroup(degree, tuple(gens), elems)

    def __repr__(self) -> str:
        gens = ", ".join(self.generator_strings()) or "()"
        return f"PermGroup(degree={self.degree}, order={self.order}, <{gens}>)"


def closure(
    generators: Sequence[Permutation], cap: int = DEFAULT_CLOSURE_CAP
) -> PermGroup:
    """Smallest group containing the generators, by breadth-first products.

    A finite set containing the identity and closed under composition is
    automatically closed under inverses, so only products are taken.
    """
    if generators:
        degree = generators[0].degree
        if any(g.degree != degree for g in generators):
            raise GroupError("generators must share one degree")
    else:
        raise GroupError("closure needs at least one generator (use PermGroup.trivial)")
    identity = Permutation.identity(degree)
    elements: set[Permutation] = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = p * g
                if q not in elements:
                    elements.add(q)
                    nxt.append(q)
                    if len(elements) > cap:
                        raise ClosureCapExceeded(
                            f"closure exceeded cap of {cap} elements"
                        )
        frontier = nxt
    return PermGroup(degree, tuple(generators), frozenset(elements))


def is_normal(sub: PermGroup, amb: PermGroup) -> bool:
    """True iff sub is a normal subgroup of amb.

    It suffices to conjugate generators of sub by generators of amb: for a
    generator g of amb, x -> g x g^-1 is an automorphism, so if it sends every
    generator of sub into sub it sends all of <gens(sub)> = sub into sub, and
    by finiteness onto sub.  Conjugation by a product (or inverse) of
    generators is a composite of such maps, hence also fixes sub setwise.
    """
    if not sub.is_subgroup_of(amb):
        raise GroupError("sub is not a subgroup of amb")
    sub_gens = sub.generators or (sub.identity,)
    for g in amb.generators:
        ginv = g.inverse()
        for s in sub_gens:
            if g * s * ginv not in sub.elements:
                return False
    return True


@dataclass(frozen=True)
class CosetGroup:
    """A quotient group, given by coset representatives and a multiplication table."""

    reps: tuple[Permutation, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.reps)

    def element_orders(self) -> list[int]:
        return [_coset_element_order(self, i) for i in range(self.order)]


def quotient(amb: PermGroup, nrm: PermGroup) -> CosetGroup:
    """The quotient amb/nrm as coset representatives plus a multiplication table."""
    if not is_normal(nrm, amb):
        raise GroupError("nrm is not normal in amb")
    coset_of: dict[Permutation, int] = {}
    reps: list[Permutation] = []
    for p in amb.sorted_elements():
        if p in coset_of:
            continue
        idx = len(reps)
        reps.append(p)
        for n in nrm.elements:
            coset_of[p * n] = idx
    # put the identity coset first so index 0 is the neutral element
    e_idx = coset_of[amb.identity]
    if e_idx != 0:
        reps[0], reps[e_idx] = reps[e_idx], reps[0]
        coset_of = {
            p: (0 if i == e_idx else e_idx if i == 0 else i)
            for p, i in coset_of.items()
        }
    table = tuple(
        tuple(coset_of[a * b] for b in reps) for a in reps
    )
    return CosetGroup(tuple(reps), table)


def _coset_element_order(cg: CosetGroup, i: int) -> int:
    k, x = 1, i
    while x != 0:
        x = cg.table[x][i]
        k += 1
    return k


def is_cyclic(g: PermGroup | CosetGroup) -> bool:
    """True iff some element's order equals the group order."""
    if isinstance(g, PermGroup):
        return any(p.order() == g.order for p in g.elements)
    return any(_coset_element_order(g, i) == g.order for i in range(g.order))


def prime_power_order(g: PermGroup | CosetGroup) -> Optional[tuple[Optional[int], int]]:
    """(p, k) with |g| = p^k, or None if |g| is not a prime power.

    The trivial group is a p-group for every prime; it is reported as
    (None, 0), None standing for "any prime".
    """
    n = g.order
    if n == 1:
        return (None, 0)
    p = None
    for d in range(2, n + 1):
        if d * d > n:
            p = n if p is None else p
            break
        if n % d == 0:
            p = d
            break
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        return None
    return (p, k)


@dataclass(frozen=True)
class CyclicHom:
    """A homomorphism from a permutation group onto (a subgroup of) Z_modulus."""

    source: PermGroup
    modulus: int
    generator_images: tuple[int, ...]
    element_images: dict[Permutation, int]

    @property
    def image_size(self) -> int:
        return len(set(self.element_images.values()))

    def __call__(self, p: Permutation) -> int:
        return self.element_images[p]


def make_hom(
    source: PermGroup,
    modulus: int,
    generator_images: Sequence[int],
    require_onto: bool = False,
) -> CyclicHom:
    """Extend generator images in Z_modulus to the whole group, checking consistency.

    Images propagate breadth-first along generator products.  Afterwards every
    (element, generator) product is rechecked, which is enough: if
    image(x * g) = image(x) + image(g) holds for all x and all generators g,
    then image(a * b) = image(a) + image(b) follows for every b by induction
    on a generator word for b.  A conflict means the images do not define a
    homomorphism.
    """
    if len(generator_images) != len(source.generators):
        raise HomError("need exactly one image per generator")
    if modulus < 1:
        raise HomError("modulus must be positive")
    imgs = [v % modulus for v in generator_images]
    values: dict[Permutation, int] = {source.identity: 0}
    frontier = [source.identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g, v in zip(source.generators, imgs):
                q = p * g
                w = (values[p] + v) % modulus
                if q in values:
                    if values[q] != w:
                        raise HomError(
                            f"images are inconsistent at {q}: {values[q]} vs {w}"
                        )
                else:
                    values[q] = w
                    nxt.append(q)
        frontier = nxt
    if len(values) != source.order:
        raise HomError("generators do not generate the source group")
    for p in source.elements:
        for g, v in zip(source.generators, imgs):
            if values[p * g] != (values[p] + v) % modulus:
                raise HomError("images are inconsistent; not a homomorphism")
    if require_onto and len(set(values.values())) != modulus:
        raise HomError(f"homomorphism is not onto Z_{modulus}")
    return CyclicHom(source, modulus, tuple(imgs), values)


def kernel(h: CyclicHom) -> PermGroup:
    """The subgroup of elements mapping to 0."""
    elems = frozenset(p for p, v in h.element_images.items() if v == 0)
    return PermGroup.from_elements(elems)
