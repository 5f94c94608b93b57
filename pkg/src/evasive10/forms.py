"""Integer linear forms over catalog-class indicators.

A form is  sum(coeff * i_class) + constant  REL  k, where REL is either
equality or congruence mod q.  Forms serialize to a small text grammar,
e.g. "2*i2 - i24 + i135 - 2*i1235 = 1" and "i5 + i1234 ≡ 1 (mod 2)",
which round-trips exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Mapping, Optional

from .graphs import class_sort_key


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """Either '= k' (kind 'eq') or '≡ k (mod q)' (kind 'mod')."""

    kind: str
    k: int
    q: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("eq", "mod"):
            raise FormError(f"unknown relation kind {self.kind!r}")
        if self.kind == "mod" and (self.q is None or self.q < 2):
            raise FormError("congruence needs a modulus q >= 2")
        if self.kind == "eq" and self.q is not None:
            raise FormError("equality takes no modulus")

    @staticmethod
    def equals(k: int) -> "Relation":
        return Relation("eq", k)

    @staticmethod
    def congruent(k: int, q: int) -> "Relation":
        return Relation("mod", k, q)

    def holds(self, lhs: int) -> bool:
        if self.kind == "eq":
            return lhs == self.k
        return (lhs - self.k) % self.q == 0

    def __str__(self) -> str:
        if self.kind == "eq":
            return f"= {self.k}"
        return f"≡ {self.k} (mod {self.q})"


@dataclass(frozen=True)
class LinearForm:
    """coeffs are (class id, integer) pairs in canonical class order."""

    coeffs: tuple[tuple[str, int], ...]
    relation: Relation
    constant: int = 0

    @staticmethod
    def make(
        coeffs: Mapping[str, int], relation: Relation, constant: int = 0
    ) -> "LinearForm":
        items = tuple(
            (cid, c)
            for cid, c in sorted(coeffs.items(), key=lambda t: class_sort_key(t[0]))
            if c != 0
        )
        return LinearForm(items, relation, constant)

    @property
    def coefficients(self) -> dict[str, int]:
        return dict(self.coeffs)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(cid for cid, _ in self.coeffs)

    def is_degenerate(self) -> bool:
        return not self.coeffs

    def lhs(self, assignment: Mapping[str, int]) -> int:
        return sum(c * assignment[cid] for cid, c in self.coeffs) + self.constant

    def satisfied_by(self, assignment: Mapping[str, int]) -> bool:
        return self.relation.holds(self.lhs(assignment))

    def substitute(self, values: Mapping[str, int]) -> "LinearForm":
        """Replace some variables by fixed 0/1 values, folding them into the constant."""
        coeffs = {}
        const = self.constant
        for cid, c in self.coeffs:
            if cid in values:
                const += c * values[cid]
            else:
                coeffs[cid] = c
        return LinearForm.make(coeffs, self.relation, const)

    def normalized(self) -> "LinearForm":
        """Fold the constant into the right side and divide out a common factor.

        The common factor of the coefficients is divided out only when it also
        divides the right side (for congruences, only when it is coprime to the
        modulus is division sound, so it is skipped there); an equation like
        2*x = 1 is deliberately left intact, since its unsatisfiability over
        the integers is meaningful.
        """
        rel = self.relation
        if rel.kind == "eq":
            k = rel.k - self.constant
            g = 0
            for _, c in self.coeffs:
                g = gcd(g, abs(c))
            if g > 1 and k % g == 0:
                coeffs = {cid: c // g for cid, c in self.coeffs}
                k //= g
            else:
                coeffs = dict(self.coeffs)
            return LinearForm.make(coeffs, Relation.equals(k), 0)
        k = (rel.k - self.constant) % rel.q
        coeffs = {cid: c % rel.q for cid, c in self.coeffs}
        return LinearForm.make(coeffs, Relation.congruent(k, rel.q), 0)

    def same_constraint(self, other: "LinearForm") -> bool:
        a, b = self.normalized(), other.normalized()
        return a.coeffs == b.coeffs and a.relation == b.relation

    def __str__(self) -> str:
        parts: list[str] = []
        for cid, c in self.coeffs:
            mag = abs(c)
            term = f"i{cid}" if mag == 1 else f"{mag}*i{cid}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        if self.constant or not parts:
            mag = abs(self.constant)
            if not parts:
                parts.append(str(self.constant))
            else:
                parts.append(f"+ {mag}" if self.constant > 0 else f"- {mag}")
        return " ".join(parts) + f" {self.relation}"


_TERM_RE = re.compile(r"([+-])\s*(?:(\d+)\s*\*\s*)?(?:i([0-9A-Za-z]+)|(\d+))")
_MOD_RE = re.compile(r"(?:≡|=)\s*(-?\d+)\s*\(\s*mod\s+(\d+)\s*\)\s*$")
_EQ_RE = re.compile(r"=\s*(-?\d+)\s*$")


def parse_form(text: str) -> LinearForm:
    """Parse the textual grammar produced by str(LinearForm).

    "=" with a trailing "(mod q)" is accepted as an ASCII spelling of "≡".
    """
    m = _MOD_RE.search(text)
    if m:
        relation = Relation.congruent(int(m.group(1)), int(m.group(2)))
    else:
        m = _EQ_RE.search(text)
        if not m:
            raise FormError(f"missing or malformed relation in {text!r}")
        relation = Relation.equals(int(m.group(1)))
    body = text[: m.start()].strip()
    if not body:
        raise FormError(f"empty left side in {text!r}")
    if body[0] not in "+-":
        body = "+ " + body
    coeffs: dict[str, int] = {}
    constant = 0
    pos = 0
    for tm in _TERM_RE.finditer(body):
        if body[pos : tm.start()].strip():
            raise FormError(f"unparsed text {body[pos:tm.start()]!r} in {text!r}")
        sign = 1 if tm.group(1) == "+" else -1
        coef = int(tm.group(2)) if tm.group(2) else 1
        if tm.group(3) is not None:
            cid = tm.group(3)
            coeffs[cid] = coeffs.get(cid, 0) + sign * coef
        else:
            constant += sign * coef * int(tm.group(4))
        pos = tm.end()
    if body[pos:].strip():
        raise FormError(f"unparsed trailing text {body[pos:]!r} in {text!r}")
    return LinearForm.make(coeffs, relation, constant)
