"""Subgroup chains licensing Euler-characteristic constraints, and a bounded search.

Two classical fixed-point results drive everything here.  For a nonevasive
(hence Z_p-acyclic) complex and a group chain:

  equality chain    Gamma' normal in Gamma, Gamma/Gamma' cyclic, |Gamma'| = p^k
                    ==> the fixed-point complex has Euler characteristic 1;
  congruence chain  Gamma'' normal in Gamma' normal in Gamma, Gamma'/Gamma''
                    cyclic, |Gamma''| = p^a, |Gamma/Gamma'| = q^b
                    ==> the Euler characteristic is congruent to 1 mod q.

Groups satisfying these hypotheses are the "non Oliver" groups of the
literature; the chain records which relation it licenses.  The search is a
deliberately bounded heuristic (closures of one or two elements, then
normalizer extensions) and makes no completeness claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .forms import Relation
from .perm import (
    PermGroup,
    Permutation,
    closure,
    is_cyclic,
    is_normal,
    prime_power_order,
    quotient,
)


class ChainHypothesisError(ValueError):
    """A named hypothesis failed; .reason is a stable identifier."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}{': ' + detail if detail else ''}")


@dataclass(frozen=True)
class OliverChain:
    """A verified chain together with the constraint relation it licenses.

    p is the prime base of the normal p-subgroup (None for the trivial group,
    which is a p-group for every prime); q is the congruence modulus base for
    congruence chains.
    """

    gamma: PermGroup
    gamma1: PermGroup
    gamma2: Optional[PermGroup]
    p: Optional[int]
    q: Optional[int]
    relation: Relation

    @property
    def kind(self) -> str:
        return "equality" if self.relation.kind == "eq" else "congruence"

    def to_dict(self) -> dict:
        rec = {
            "gamma": _group_dict(self.gamma),
            "gamma1": _group_dict(self.gamma1),
            "gamma2": _group_dict(self.gamma2) if self.gamma2 is not None else None,
            "p": self.p,
            "q": self.q,
            "relation": str(self.relation),
        }
        return rec

    def sort_key(self) -> tuple:
        return (
            self.gamma.order,
            self.gamma1.order,
            self.gamma2.order if self.gamma2 is not None else 0,
            self.gamma.generator_strings(),
            self.gamma1.generator_strings(),
            self.gamma2.generator_strings() if self.gamma2 is not None else [],
        )


def _group_dict(g: PermGroup) -> dict:
    return {"degree": g.degree, "order": g.order, "generators": g.generator_strings()}


def _check_subgroup(sub: PermGroup, amb: PermGroup, label: str) -> None:
    if not sub.is_subgroup_of(amb):
        raise ChainHypothesisError("not-subgroup", f"{label} is not contained in its ambient group")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _quotient_is_cyclic(amb: PermGroup, nrm: PermGroup) -> bool:
    """Cyclicity of amb/nrm, assuming normality was already established.

    Quotients of order 1 or a prime need no coset table.
    """
    index = amb.order // nrm.order
    if index == 1 or _is_prime(index):
        return True
    return is_cyclic(quotient(amb, nrm))


def verify_equality_chain(gamma1: PermGroup, gamma: PermGroup) -> OliverChain:
    """Check the hypotheses that force the fixed-point Euler characteristic to 1.

    gamma1 must be a normal subgroup of gamma of prime-power order with cyclic
    quotient.  Each failed hypothesis raises ChainHypothesisError with one of
    the reasons: not-subgroup, not-normal, quotient-not-cyclic,
    order-not-prime-power.
    """
    _check_subgroup(gamma1, gamma, "gamma1")
    pp = prime_power_order(gamma1)
    if pp is None:
        raise ChainHypothesisError(
            "order-not-prime-power", f"|gamma1| = {gamma1.order}"
        )
    if not is_normal(gamma1, gamma):
        raise ChainHypothesisError("not-normal", "gamma1 is not normal in gamma")
    if not _quotient_is_cyclic(gamma, gamma1):
        raise ChainHypothesisError("quotient-not-cyclic", "gamma/gamma1")
    return OliverChain(gamma, gamma1, None, pp[0], None, Relation.equals(1))


def verify_congruence_chain(
    gamma2: PermGroup, gamma1: PermGroup, gamma: PermGroup
) -> OliverChain:
    """Check the hypotheses that force the Euler characteristic to 1 mod q.

    gamma2 normal in gamma1 normal in gamma, gamma1/gamma2 cyclic, |gamma2| a
    prime power, |gamma/gamma1| a prime power q^b.  When gamma = gamma1 the
    congruence holds for every prime, which forces equality, so the licensed
    relation is chi = 1 in that degenerate case.
    """
    _check_subgroup(gamma2, gamma1, "gamma2")
    _check_subgroup(gamma1, gamma, "gamma1")
    pp = prime_power_order(gamma2)
    if pp is None:
        raise ChainHypothesisError(
            "order-not-prime-power", f"|gamma2| = {gamma2.order}"
        )
    index = gamma.order // gamma1.order
    q: Optional[int]
    if index == 1:
        q = None
    else:
        qp = _prime_power_base(index)
        if qp is None:
            raise ChainHypothesisError(
                "quotient-order-not-prime-power", f"|gamma/gamma1| = {index}"
            )
        q = qp
    if not is_normal(gamma2, gamma1):
        raise ChainHypothesisError("not-normal", "gamma2 is not normal in gamma1")
    if not is_normal(gamma1, gamma):
        raise ChainHypothesisError("not-normal", "gamma1 is not normal in gamma")
    if not _quotient_is_cyclic(gamma1, gamma2):
        raise ChainHypothesisError("quotient-not-cyclic", "gamma1/gamma2")
    relation = Relation.equals(1) if q is None else Relation.congruent(1, q)
    return OliverChain(gamma, gamma1, gamma2, pp[0], q, relation)


def _prime_power_base(n: int) -> Optional[int]:
    if n < 2:
        return None
    p = None
    for d in range(2, n + 1):
        if d * d > n:
            p = n if p is None else p
            break
        if n % d == 0:
            p = d
            break
    m = n
    while m % p == 0:
        m //= p
    return p if m == 1 else None


@dataclass
class SearchResult:
    chains: list[OliverChain]
    truncated: bool
    candidates_seen: int
    work_used: int


def _sub_key(g: PermGroup) -> tuple:
    return (g.order, tuple(p.images for p in g.sorted_elements()))


def search_chains(
    ambient: PermGroup,
    max_subgroup_order: Optional[int] = None,
    budget: int = 200_000,
) -> SearchResult:
    """Bounded, deterministic search for valid chains inside an ambient group.

    Candidate subgroups are the closures of single elements and of pairs of
    distinct cyclic subgroups, extended repeatedly by normalizing elements
    (the only way to reach subgroups needing more than two generators, e.g.
    elementary-abelian ones).  Every nested candidate pair is then tried as an
    equality chain and every nested triple as a congruence chain, largest top
    group first.  `budget` caps the work (closures, normalizer scans and
    verification attempts all count); on exhaustion the partial result is
    returned with the truncated flag set.  The chain list is sorted by
    (|Gamma|, |Gamma'|, |Gamma''|, generator strings), independent of the
    search schedule.
    """
    if max_subgroup_order is None:
        max_subgroup_order = ambient.order
    work = 0
    truncated = False

    def spend(units: int = 1) -> bool:
        nonlocal work, truncated
        if truncated:
            return False
        if work + units > budget:
            truncated = True
            return False
        work += units
        return True

    candidates: dict[frozenset, PermGroup] = {}

    def add(group: PermGroup) -> bool:
        if group.order <= max_subgroup_order and group.elements not in candidates:
            candidates[group.elements] = group
            return True
        return False

    add(PermGroup.trivial(ambient.degree))
    # the ambient is always available as the top of a chain, even when the
    # subgroup library itself is capped below its order
    candidates.setdefault(ambient.elements, ambient)

    elements = ambient.sorted_elements()
    cyclics: dict[frozenset, PermGroup] = {}
    for e in elements:
        if not spend():
            break
        grp = closure([e])
        cyclics.setdefault(grp.elements, grp)
        add(grp)
    cyc_list = sorted(cyclics.values(), key=_sub_key)
    for i in range(len(cyc_list)):
        if truncated:
            break
        for j in range(i + 1, len(cyc_list)):
            if not spend():
                break
            add(closure(list(cyc_list[i].generators) + list(cyc_list[j].generators)))

    # normalizer extensions, iterated to a fixpoint: adjoin one normalizing
    # element at a time (one work unit per candidate scanned, one per closure)
    while not truncated:
        added = 0
        for sub in sorted(candidates.values(), key=_sub_key):
            if truncated or sub.order >= max_subgroup_order or not sub.generators:
                continue
            if not spend():
                break
            gens = sub.generators
            for g in elements:
                if g in sub.elements:
                    continue
                ginv = g.inverse()
                if all(g * s * ginv in sub.elements for s in gens):
                    if not spend():
                        break
                    if add(closure(list(gens) + [g])):
                        added += 1
        if not added:
            break

    # nesting bookkeeping (not budgeted: pure set containment)
    ordered = sorted(candidates.values(), key=_sub_key, reverse=True)
    pp_of = {g.elements: prime_power_order(g) for g in ordered}
    contained: dict[frozenset, list[PermGroup]] = {
        big.elements: [
            s
            for s in ordered
            if s.order <= big.order
            and big.order % s.order == 0
            and s.elements <= big.elements
        ]
        for big in ordered
    }

    chains: list[OliverChain] = []
    seen: set[tuple] = set()

    def record(chain: OliverChain) -> None:
        key = (
            chain.gamma.elements,
            chain.gamma1.elements,
            chain.gamma2.elements if chain.gamma2 is not None else None,
        )
        if key not in seen:
            seen.add(key)
            chains.append(chain)

    # largest top groups first: the ambient's own chains land inside the budget
    for big in ordered:
        if truncated:
            break
        inner = contained[big.elements]
        for sub in inner:
            if pp_of[sub.elements] is None:
                continue
            if not spend():
                break
            try:
                record(verify_equality_chain(sub, big))
            except ChainHypothesisError:
                pass
        for mid in inner:
            if truncated:
                break
            if _prime_power_base(big.order // mid.order) is None and big.order != mid.order:
                continue
            for low in contained[mid.elements]:
                if pp_of[low.elements] is None:
                    continue
                if not spend():
                    break
                try:
                    record(verify_congruence_chain(low, mid, big))
                except ChainHypothesisError:
                    pass

    chains.sort(key=lambda c: c.sort_key())
    return SearchResult(chains, truncated, len(candidates), work)
