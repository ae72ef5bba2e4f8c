"""Small finite groups as permutation groups.

Permutations are tuples of 0-based images; ``compose(f, g)`` is the
function composition f o g (g applied first), so the left-regular
representation of a group is a homomorphism.  Everything here runs by
explicit element enumeration guarded by a cap, which is the intended
scale for the decision procedures built on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapExceededError

DEFAULT_ELEMENT_CAP = 200_000

Perm = tuple[int, ...]


def perm_identity(degree: int) -> Perm:
    return tuple(range(degree))


def compose(f: Perm, g: Perm) -> Perm:
    """f o g: apply g first, then f."""
    return tuple(f[x] for x in g)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def conjugate(p: Perm, by: Perm) -> Perm:
    """by o p o by^-1."""
    return compose(compose(by, p), inverse(by))


def commutator(a: Perm, b: Perm) -> Perm:
    return compose(compose(a, b), compose(inverse(a), inverse(b)))


def perm_order(p: Perm) -> int:
    order = 1
    q = p
    ident = perm_identity(len(p))
    while q != ident:
        q = compose(q, p)
        order += 1
    return order


def _closure(degree: int, generators, cap: int) -> list[Perm]:
    """Breadth-first closure of the generated subgroup, identity first."""
    ident = perm_identity(degree)
    seen = {ident}
    order_list = [ident]
    frontier = [ident]
    gens = [g for g in generators if g != ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = compose(e, g)
                if h not in seen:
                    if len(seen) >= cap:
                        raise CapExceededError(
                            f"group closure exceeds the element cap {cap}"
                        )
                    seen.add(h)
                    order_list.append(h)
                    nxt.append(h)
        frontier = nxt
    return order_list


@dataclass(frozen=True)
class StructureReport:
    abelian: bool
    elementary_abelian: bool
    exponent: int
    elementary_prime: int | None = None


class PermGroup:
    """Finite group given by permutation generators on [0, degree)."""

    __slots__ = ("degree", "generators", "cap", "_elements", "_element_set")

    def __init__(self, degree: int, generators, cap: int = DEFAULT_ELEMENT_CAP):
        if degree < 1:
            raise ValueError("degree must be positive")
        gens = []
        for g in generators:
            g = tuple(g)
            if sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of 0..{degree - 1}")
            gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        self.cap = cap
        self._elements: list[Perm] | None = None
        self._element_set: frozenset[Perm] | None = None

    # -- enumeration ----------------------------------------------------

    def elements(self) -> list[Perm]:
        if self._elements is None:
            self._elements = _closure(self.degree, self.generators, self.cap)
            self._element_set = frozenset(self._elements)
        return self._elements

    def element_set(self) -> frozenset[Perm]:
        self.elements()
        return self._element_set

    @property
    def order(self) -> int:
        return len(self.elements())

    def __contains__(self, p: Perm) -> bool:
        return tuple(p) in self.element_set()

    def identity(self) -> Perm:
        return perm_identity(self.degree)

    def is_trivial(self) -> bool:
        return self.order == 1

    def subgroup(self, generators) -> "PermGroup":
        sub = PermGroup(self.degree, generators, cap=self.cap)
        parent = self.element_set()
        for g in sub.generators:
            if g not in parent:
                raise ValueError("subgroup generator outside the parent group")
        return sub

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(g in other for g in self.generators)

    def is_normal_in(self, other: "PermGroup") -> bool:
        if not self.is_subgroup_of(other):
            return False
        mine = self.element_set()
        return all(
            conjugate(s, g) in mine for s in self.generators for g in other.generators
        )

    # -- structure ------------------------------------------------------

    def derived_subgroup(self) -> "PermGroup":
        """Normal closure of the generator commutators."""
        seeds = [
            commutator(a, b)
            for i, a in enumerate(self.generators)
            for b in self.generators[i + 1 :]
        ]
        gens = [s for s in seeds if s != self.identity()]
        while True:
            sub = PermGroup(self.degree, gens, cap=self.cap)
            elems = sub.element_set()
            new = [
                c
                for e in elems
                for g in self.generators
                if (c := conjugate(e, g)) not in elems
            ]
            if not new:
                return sub
            gens = list(sub.generators) + new

    def sylow(self, p: int) -> "PermGroup":
        """A Sylow p-subgroup, grown through the normalizer tower."""
        n = self.order
        p_part = 1
        while n % p == 0:
            p_part *= p
            n //= p
        if p_part == 1:
            return PermGroup(self.degree, [], cap=self.cap)

        def p_element(perm: Perm) -> Perm | None:
            o = perm_order(perm)
            k = 1
            while o % p == 0:
                o //= p
                k *= p
            if k == 1:
                return None
            q = perm
            for _ in range(o - 1):
                q = compose(q, perm)
            return q  # perm^o has order k, a p-power

        seed = next(q for e in self.elements() if (q := p_element(e)) is not None)
        current = PermGroup(self.degree, [seed], cap=self.cap)
        while current.order < p_part:
            inside = current.element_set()
            normalizer = [
                g
                for g in self.elements()
                if all(conjugate(s, g) in inside for s in current.generators)
            ]
            extended = None
            for g in normalizer:
                q = p_element(g)
                if q is not None and q not in inside:
                    extended = PermGroup(
                        self.degree, list(current.generators) + [q], cap=self.cap
                    )
                    break
            if extended is None:  # pragma: no cover - Sylow theory forbids this
                raise AssertionError("normalizer tower stalled below the p-part")
            current = extended
        return current

    def quotient(self, normal: "PermGroup") -> "PermGroup":
        """Faithful action of G/N on the cosets of a verified normal subgroup."""
        if not normal.is_normal_in(self):
            raise ValueError("subgroup is not normal")
        n_elems = normal.element_set()
        coset_of: dict[Perm, int] = {}
        cosets: list[frozenset[Perm]] = []

        def add_coset(members: frozenset[Perm]) -> int:
            index = len(cosets)
            cosets.append(members)
            for m in members:
                coset_of[m] = index
            return index

        add_coset(frozenset(n_elems))
        for e in self.elements():
            if e not in coset_of:
                add_coset(frozenset(compose(e, x) for x in n_elems))
        reps = [next(iter(c)) for c in cosets]
        perms = []
        for g in self.generators:
            perms.append(tuple(coset_of[compose(g, r)] for r in reps))
        return PermGroup(len(cosets), perms, cap=self.cap)

    def element_orders(self) -> list[int]:
        return [perm_order(e) for e in self.elements()]

    def structure(self) -> StructureReport:
        """Abelianness, elementary-abelianness and the exponent."""
        abelian = all(
            compose(a, b) == compose(b, a)
            for i, a in enumerate(self.generators)
            for b in self.generators[i + 1 :]
        )
        orders = self.element_orders()
        exponent = math.lcm(*orders) if orders else 1
        elementary = False
        prime: int | None = None
        if abelian:
            nontrivial = sorted(set(orders) - {1})
            if not nontrivial:
                elementary = True
            elif len(nontrivial) == 1 and _is_small_prime(nontrivial[0]):
                elementary, prime = True, nontrivial[0]
        return StructureReport(abelian, elementary, exponent, prime)

    def is_supersolvable(self) -> bool:
        """True iff a chief series with prime-cyclic factors exists.

        Looks for an element of prime order generating a normal cyclic
        subgroup and recurses on the quotient; supersolvability is
        closed under quotients, so the first hit is conclusive.
        """
        if self.order == 1:
            return True
        for x in sorted(self.elements()):
            o = perm_order(x)
            if not _is_small_prime(o):
                continue
            powers = set()
            q = x
            for _ in range(o):
                powers.add(q)
                q = compose(q, x)
            if all(conjugate(x, g) in powers for g in self.generators):
                return self.quotient(PermGroup(self.degree, [x], cap=self.cap)).is_supersolvable()
        return False

    def all_subgroups(self) -> list["PermGroup"]:
        """Every subgroup, by closing generator sets; meant for small orders."""
        trivial = PermGroup(self.degree, [], cap=self.cap)
        found: dict[frozenset[Perm], PermGroup] = {trivial.element_set(): trivial}
        frontier = [trivial]
        elems = self.elements()
        while frontier:
            current = frontier.pop()
            inside = current.element_set()
            for e in elems:
                if e in inside:
                    continue
                bigger = PermGroup(
                    self.degree, list(current.generators) + [e], cap=self.cap
                )
                key = bigger.element_set()
                if key not in found:
                    found[key] = bigger
                    frontier.append(bigger)
        return sorted(found.values(), key=lambda g: (g.order, sorted(g.element_set())))

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "generators": [[x + 1 for x in g] for g in self.generators],
        }

    @classmethod
    def from_json_dict(cls, data: dict, cap: int = DEFAULT_ELEMENT_CAP) -> "PermGroup":
        degree = int(data["degree"])
        gens = [[int(x) - 1 for x in g] for g in data["generators"]]
        return cls(degree, gens, cap=cap)

    @classmethod
    def from_cayley_table(cls, order: int, table, cap: int = DEFAULT_ELEMENT_CAP) -> "PermGroup":
        """Left-regular representation of a group given by its 0-based table."""
        if len(table) != order or any(len(row) != order for row in table):
            raise ValueError("table must be order x order")
        perms = [tuple(table[g][x] for x in range(order)) for g in range(order)]
        return cls(order, perms, cap=cap)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"


def _is_small_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(math.isqrt(n)) + 1))
