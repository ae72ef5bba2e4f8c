"""The pseudovariety Ab(p)*Ab(d): its minimum generator, free objects,
verbal kernels and subgroup closures in the corresponding pro-topology.

Throughout, p > 2 is prime and d > 1 divides p - 1.  The two-generator
group of order pd presented by x^p = y^d = 1, y x y^-1 = x^q (with q of
multiplicative order d mod p) generates the pseudovariety, and the free
object on n generators is realized concretely as the subgroup of a
direct power of that group generated by the coordinate-projection
tuples, one coordinate per assignment of the n letters.

Free-object elements are stored in a structured form (t-part in Z_d^n,
one unit-part per assignment), which keeps single elements small even
when the free object itself is astronomically large; only operations
that genuinely enumerate elements or cosets are subject to the cap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .errors import CapExceededError
from .fplinalg import ApdPresentation
from .numtheory import mult_order, require_prime, smallest_of_order
from .permgroup import DEFAULT_ELEMENT_CAP, PermGroup
from .stallings import Automaton
from .words import Word

DEFAULT_CAP = DEFAULT_ELEMENT_CAP


class GpdElement(NamedTuple):
    """The element x^u y^t of a group C_p x| C_d."""

    u: int
    t: int


class GpdGroup:
    """The group of order pd presented by x^p = y^d = 1, y x y^-1 = x^q.

    Elements are GpdElement pairs (u, t) for x^u y^t; multiplication is
    (u, t)(u', t') = (u + q^t u' mod p, t + t' mod d).
    """

    def __init__(self, p: int, d: int, q: int | None = None):
        require_prime(p, "p")
        if p <= 2:
            raise ValueError("p must exceed 2")
        if d <= 1 or (p - 1) % d:
            raise ValueError(f"d = {d} must be a divisor of p - 1 = {p - 1} greater than 1")
        if q is None:
            q = smallest_of_order(p, d)
        elif mult_order(q, p) != d:
            raise ValueError(f"q = {q} does not have multiplicative order {d} mod {p}")
        self.p = p
        self.d = d
        self.q = q % p
        self._qpow = [1] * d
        for t in range(1, d):
            self._qpow[t] = self._qpow[t - 1] * self.q % p

    @property
    def order(self) -> int:
        return self.p * self.d

    @property
    def identity(self) -> GpdElement:
        return GpdElement(0, 0)

    @property
    def x(self) -> GpdElement:
        return GpdElement(1, 0)

    @property
    def y(self) -> GpdElement:
        return GpdElement(0, 1)

    def mul(self, a: GpdElement, b: GpdElement) -> GpdElement:
        return GpdElement((a.u + self._qpow[a.t] * b.u) % self.p, (a.t + b.t) % self.d)

    def inv(self, a: GpdElement) -> GpdElement:
        t = (-a.t) % self.d
        return GpdElement((-self._qpow[t] * a.u) % self.p, t)

    def power(self, a: GpdElement, k: int) -> GpdElement:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = self.identity
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def element_order(self, a: GpdElement) -> int:
        order = 1
        acc = a
        while acc != self.identity:
            acc = self.mul(acc, a)
            order += 1
        return order

    def elements(self) -> list[GpdElement]:
        return [GpdElement(u, t) for u in range(self.p) for t in range(self.d)]

    def evaluate(self, w: Word) -> GpdElement:
        """Image of a rank-2 word under a -> x, b -> y."""
        if w.rank != 2:
            raise ValueError("rank-2 word required")
        gens = (self.x, self.y)
        out = self.identity
        for letter in w.letters:
            g = gens[abs(letter) - 1]
            out = self.mul(out, g if letter > 0 else self.inv(g))
        return out

    def as_perm_group(self, cap: int = DEFAULT_CAP) -> PermGroup:
        """Left-regular permutation representation on the pd elements."""
        elems = self.elements()
        index = {e: i for i, e in enumerate(elems)}
        perms = [
            tuple(index[self.mul(g, e)] for e in elems) for g in (self.x, self.y)
        ]
        return PermGroup(self.order, perms, cap=cap)

    def __repr__(self) -> str:
        return f"GpdGroup(p={self.p}, d={self.d}, q={self.q})"


def format_gpd_element(e: GpdElement) -> str:
    if e.u == 0 and e.t == 0:
        return "1"
    parts = []
    if e.u:
        parts.append("x" if e.u == 1 else f"x^{e.u}")
    if e.t:
        parts.append("y" if e.t == 1 else f"y^{e.t}")
    return " ".join(parts)


def gpd_iso(p: int, d: int, q: int, r: int) -> tuple[int, int]:
    """Exponents (m, k) realizing the isomorphisms between the q- and
    r-presentations: x -> x, y -> y^m one way and y -> y^k back.

    Requires q and r of exact order d; returns m, k with r^m = q and
    q^k = r mod p, so m k = 1 mod d.  Both maps are verified to be
    mutually inverse isomorphisms on all pd elements.
    """
    for value, name in ((q, "q"), (r, "r")):
        if mult_order(value, p) != d:
            raise ValueError(f"{name} = {value} does not have order {d} mod {p}")
    m = next(m for m in range(1, d + 1) if pow(r, m, p) == q % p)
    k = next(k for k in range(1, d + 1) if pow(q, k, p) == r % p)
    assert m * k % d == 1

    gq, gr = GpdGroup(p, d, q), GpdGroup(p, d, r)

    def forward(e: GpdElement) -> GpdElement:
        return GpdElement(e.u, m * e.t % d)

    def backward(e: GpdElement) -> GpdElement:
        return GpdElement(e.u, k * e.t % d)

    for a in gq.elements():
        assert backward(forward(a)) == a
        for b in gq.elements():
            assert forward(gq.mul(a, b)) == gr.mul(forward(a), forward(b))
    for a in gr.elements():
        assert forward(backward(a)) == a
        for b in gr.elements():
            assert backward(gr.mul(a, b)) == gq.mul(backward(a), backward(b))
    return m, k


class FreeObject:
    """Free object of Ab(p)*Ab(d) on n generators.

    An element is a pair (s, u): s in Z_d^n is the d-abelianized word
    and u holds one x-exponent per assignment of the n letters into the
    pd-element generator group.  Construction is cheap; element
    enumeration (``materialize``) is the only capped step.
    """

    def __init__(self, n: int, p: int, d: int, q: int | None = None):
        if n < 1:
            raise ValueError("n must be at least 1")
        self.n = n
        self.gpd = GpdGroup(p, d, q)
        self.p = self.gpd.p
        self.d = self.gpd.d
        assignments = list(itertools.product(self.gpd.elements(), repeat=n))
        self.n_coords = len(assignments)
        # per-assignment t-vector of the n letters, and q^t lookup
        self._tvecs = [tuple(a.t for a in phi) for phi in assignments]
        self._qpow = self.gpd._qpow
        zero_s = (0,) * n
        zero_u = (0,) * self.n_coords
        self.identity = (zero_s, zero_u)
        self.generators = []
        for i in range(n):
            s = tuple(1 if j == i else 0 for j in range(n))
            u = tuple(phi[i].u for phi in assignments)
            self.generators.append((s, u))
        self._gen_inverses = [self.inv(g) for g in self.generators]
        self._elements: list | None = None
        self._cayley: Automaton | None = None

    @property
    def order_formula(self) -> int:
        return self.p ** ((self.n - 1) * self.d**self.n + 1) * self.d**self.n

    # -- element arithmetic -------------------------------------------

    def _twist(self, s) -> list[int]:
        d = self.d
        qpow = self._qpow
        return [qpow[sum(si * ti for si, ti in zip(s, tv)) % d] for tv in self._tvecs]

    def mul(self, a, b):
        p, d = self.p, self.d
        s = tuple((x + y) % d for x, y in zip(a[0], b[0]))
        tw = self._twist(a[0])
        u = tuple((x + w * y) % p for x, w, y in zip(a[1], tw, b[1]))
        return (s, u)

    def inv(self, a):
        p, d = self.p, self.d
        s = tuple((-x) % d for x in a[0])
        tw = self._twist(s)
        u = tuple((-w * x) % p for w, x in zip(tw, a[1]))
        return (s, u)

    def evaluate(self, w: Word):
        """Image of a word under the canonical map onto the free object."""
        if w.rank != self.n:
            raise ValueError(f"word rank {w.rank} does not match n = {self.n}")
        out = self.identity
        for letter in w.letters:
            g = (
                self.generators[letter - 1]
                if letter > 0
                else self._gen_inverses[-letter - 1]
            )
            out = self.mul(out, g)
        return out

    # -- enumeration ----------------------------------------------------

    def materialize(self, cap: int = DEFAULT_CAP) -> list:
        """All elements by breadth-first closure; checked against the
        structural order formula."""
        if self._elements is None:
            if self.order_formula > cap:
                raise CapExceededError(
                    f"free object has order {self.order_formula}, beyond cap {cap}"
                )
            seen = {self.identity}
            order_list = [self.identity]
            frontier = [self.identity]
            while frontier:
                nxt = []
                for e in frontier:
                    for g in self.generators:
                        h = self.mul(e, g)
                        if h not in seen:
                            seen.add(h)
                            order_list.append(h)
                            nxt.append(h)
                frontier = nxt
            if len(order_list) != self.order_formula:  # pragma: no cover
                raise AssertionError(
                    f"enumerated {len(order_list)} elements, formula says {self.order_formula}"
                )
            self._elements = order_list
        return self._elements

    @property
    def order(self) -> int:
        return self.order_formula

    def cayley_automaton(self, cap: int = DEFAULT_CAP) -> Automaton:
        """Complete automaton on the element set: the Stallings automaton
        of the kernel of the canonical map from the free group."""
        if self._cayley is None:
            elems = self.materialize(cap)
            index = {e: i for i, e in enumerate(elems)}
            perms = [
                tuple(index[self.mul(e, g)] for e in elems) for g in self.generators
            ]
            self._cayley = Automaton.from_action(self.n, perms, base=0)
        return self._cayley

    def __repr__(self) -> str:
        return f"FreeObject(n={self.n}, p={self.p}, d={self.d})"


def free_object(n: int, p: int, d: int, cap: int = DEFAULT_CAP) -> FreeObject:
    """Construct and fully enumerate the free object (order asserted)."""
    obj = FreeObject(n, p, d)
    obj.materialize(cap)
    return obj


# -- verbal kernels ------------------------------------------------------


@dataclass(frozen=True)
class KernelSpec:
    """A verbal kernel: either exponent-m abelianization (kind "K") or
    the kernel of the map onto the free object of Ab(p)*Ab(d) (kind "L")."""

    kind: str
    n: int
    m: int = 0
    p: int = 0
    d: int = 0

    @classmethod
    def abelian(cls, n: int, m: int) -> "KernelSpec":
        if m < 1:
            raise ValueError("m must be at least 1")
        return cls(kind="K", n=n, m=m)

    @classmethod
    def relatively_free(cls, n: int, p: int, d: int) -> "KernelSpec":
        require_prime(p, "p")
        if d <= 1 or (p - 1) % d:
            raise ValueError("d must divide p - 1 and exceed 1")
        return cls(kind="L", n=n, p=p, d=d)


def kernel_membership(w: Word, spec: KernelSpec) -> bool:
    if w.rank != spec.n:
        raise ValueError("word rank does not match the kernel spec")
    if spec.kind == "K":
        return all(e % spec.m == 0 for e in w.abelianization())
    if spec.kind == "L":
        obj = FreeObject(spec.n, spec.p, spec.d)
        return obj.evaluate(w) == obj.identity
    raise ValueError(f"unknown kernel kind {spec.kind!r}")


# -- closures -------------------------------------------------------------


class _ImageSubgroup:
    """Membership structure for the image of a subgroup in a free object.

    Splits the image I along its t-part projection T and spans the
    kernel part (an F_p-subspace of the unit coordinates) by Schreier
    generators, giving an exact canonical form for cosets of I without
    enumerating the free object.
    """

    def __init__(self, fobj: FreeObject, image_generators):
        self.fobj = fobj
        p, d, n = fobj.p, fobj.d, fobj.n
        gens = list(image_generators)

        # transversal of the t-part subgroup, reachable by generator products
        reps = {(0,) * n: fobj.identity}
        queue = [fobj.identity]
        while queue:
            r = queue.pop()
            for g in gens:
                e = fobj.mul(r, g)
                if e[0] not in reps:
                    reps[e[0]] = e
                    queue.append(e)
        self.t_parts = sorted(reps)
        self.reps = reps

        # Schreier generators of the unit-part kernel, reduced to RREF rows
        rows = []
        for r in reps.values():
            for g in gens:
                e = fobj.mul(r, g)
                k = fobj.mul(e, fobj.inv(reps[e[0]]))
                assert all(x == 0 for x in k[0])
                rows.append(list(k[1]))
        self.pivot_rows = _rref_rows(rows, p)

    def reduce_unit(self, u):
        p = self.fobj.p
        u = list(u)
        for pivot, row in self.pivot_rows:
            c = u[pivot]
            if c:
                u = [(x - c * y) % p for x, y in zip(u, row)]
        return tuple(u)

    def coset_key(self, element):
        """Canonical form of I * element."""
        d = self.fobj.d
        s = element[0]
        best = min(tuple((a + b) % d for a, b in zip(s, t)) for t in self.t_parts)
        delta = tuple((a - b) % d for a, b in zip(best, s))
        shifted = self.fobj.mul(self.reps[delta], element)
        assert shifted[0] == best
        return best, self.reduce_unit(shifted[1])


def _rref_rows(rows, p):
    """Row-reduce integer rows mod p; returns (pivot, normalized row) pairs."""
    pivot_rows: list[tuple[int, list[int]]] = []
    for row in rows:
        row = [x % p for x in row]
        for pivot, prow in pivot_rows:
            c = row[pivot]
            if c:
                row = [(x - c * y) % p for x, y in zip(row, prow)]
        head = next((i for i, x in enumerate(row) if x), None)
        if head is None:
            continue
        inv = pow(row[head], -1, p)
        row = [x * inv % p for x in row]
        pivot_rows.append((head, row))
    pivot_rows.sort(key=lambda pr: pr[0])
    return pivot_rows


def closure(aut: Automaton, p: int, d: int, cap: int = DEFAULT_CAP,
            fobj: FreeObject | None = None) -> Automaton:
    """Pro-(Ab(p)*Ab(d)) closure of the subgroup, as a complete automaton.

    Coset/Schreier route: the closure is the full preimage of the image
    subgroup in the free object, so its automaton is the Schreier graph
    of the free object acting on the cosets of that image.  Only cosets
    are enumerated (capped); the free object itself never is.
    """
    obj = fobj if fobj is not None else FreeObject(aut.rank, p, d)
    if (obj.n, obj.p, obj.d) != (aut.rank, p, d):
        raise ValueError("free object does not match the requested parameters")
    images = [obj.evaluate(w) for w in aut.basis()]
    image = _ImageSubgroup(obj, images)

    start = obj.identity
    verts = {image.coset_key(start): 0}
    carriers = [start]
    targets = [dict() for _ in range(aut.rank)]
    queue = [0]
    while queue:
        v = queue.pop()
        e = carriers[v]
        for i, g in enumerate(obj.generators):
            e2 = obj.mul(e, g)
            key = image.coset_key(e2)
            w = verts.get(key)
            if w is None:
                if len(carriers) >= cap:
                    raise CapExceededError(f"closure needs more than {cap} cosets")
                w = len(carriers)
                verts[key] = w
                carriers.append(e2)
                queue.append(w)
            targets[i][v] = w
    perms = [tuple(t[v] for v in range(len(carriers))) for t in targets]
    return Automaton.from_action(aut.rank, perms, base=0)


def closure_by_folding(aut: Automaton, p: int, d: int, cap: int = DEFAULT_CAP,
                       fobj: FreeObject | None = None) -> Automaton:
    """Closure by wedging with the free object's Cayley automaton and folding.

    Requires enumerating the free object, so it is only viable when its
    order fits the cap; used as the independent cross-check of
    ``closure``.
    """
    obj = fobj if fobj is not None else FreeObject(aut.rank, p, d)
    if (obj.n, obj.p, obj.d) != (aut.rank, p, d):
        raise ValueError("free object does not match the requested parameters")
    return obj.cayley_automaton(cap).join(aut)


@dataclass(frozen=True)
class ApdStatus:
    closed: bool
    dense: bool
    index_of_closure: int


def status(aut: Automaton, p: int, d: int, cap: int = DEFAULT_CAP,
           fobj: FreeObject | None = None) -> ApdStatus:
    """Closedness and density of a subgroup for the pro-(Ab(p)*Ab(d)) topology."""
    cl = closure(aut, p, d, cap=cap, fobj=fobj)
    return ApdStatus(
        closed=(cl == aut),
        dense=(cl.n_vertices == 1 and cl.is_complete()),
        index_of_closure=cl.n_vertices,
    )


# -- decomposition into minimum generators --------------------------------


@dataclass(frozen=True)
class ApdEmbedding:
    """An explicit injective homomorphism from a presented group into a
    direct product of copies of the pd-group and cyclic groups C_d.

    ``factors`` lists the codomain factors ("gpd" or "cyclic"); each
    generator image is a tuple with one entry per factor (GpdElement for
    gpd factors, an integer mod d for cyclic ones).
    """

    presentation: ApdPresentation
    q: int
    factors: tuple[str, ...]
    x_images: tuple[tuple, ...]
    y_images: tuple[tuple, ...]
    group_order: int
    image_order: int

    @property
    def injective(self) -> bool:
        return self.group_order == self.image_order


def decompose(pres: ApdPresentation, cap: int = DEFAULT_CAP) -> ApdEmbedding:
    """Embed the presented group into gpd and cyclic factors, verified
    injective by counting the image.

    Per x-generator one gpd factor receives x_i -> x and y_j -> y^k_ij
    with q^k_ij matching the presented conjugation exponent; cyclic
    factors record the y-exponents.  When a single y-generator already
    acts with full order on some x, the cyclic factor is redundant and
    dropped.
    """
    p, d, n, m = pres.p, pres.d, pres.n, pres.m
    if pres.group_order > cap:
        raise CapExceededError(
            f"presented group has order {pres.group_order}, beyond cap {cap}"
        )
    group = GpdGroup(p, d)
    q = group.q

    # discrete logs base q for every conjugation exponent
    dlog = {pow(q, k, p): k for k in range(d)}
    k_table = [[dlog[pres.exponents[i][j] % p] for j in range(m)] for i in range(n)]

    drop_cyclic = m == 1 and any(
        mult_order(pres.exponents[i][0], p) == pres.orders[0] for i in range(n)
    )
    factors = tuple(["gpd"] * n + ([] if drop_cyclic else ["cyclic"] * m))

    def embed_x(i: int):
        parts: list = [group.identity] * n + ([] if drop_cyclic else [0] * m)
        parts[i] = group.x
        return tuple(parts)

    def embed_y(j: int):
        parts: list = [GpdElement(0, k_table[i][j] % d) for i in range(n)]
        if not drop_cyclic:
            parts += [0] * m
            parts[n + j] = d // pres.orders[j]
        return tuple(parts)

    x_images = tuple(embed_x(i) for i in range(n))
    y_images = tuple(embed_y(j) for j in range(m))

    def mul(a, b):
        out = []
        for kind_index, kind in enumerate(factors):
            if kind == "gpd":
                out.append(group.mul(a[kind_index], b[kind_index]))
            else:
                out.append((a[kind_index] + b[kind_index]) % d)
        return tuple(out)

    identity = tuple(
        group.identity if kind == "gpd" else 0 for kind in factors
    )

    def power(a, k):
        out = identity
        for _ in range(k):
            out = mul(out, a)
        return out

    def inv(a):
        return tuple(
            group.inv(v) if kind == "gpd" else (-v) % d
            for kind, v in zip(factors, a)
        )

    # relation checks: the map is a well-defined homomorphism
    for i, xi in enumerate(x_images):
        assert power(xi, p) == identity
        for xi2 in x_images:
            assert mul(xi, xi2) == mul(xi2, xi)
    for j, yj in enumerate(y_images):
        assert power(yj, pres.orders[j]) == identity
        for yj2 in y_images:
            assert mul(yj, yj2) == mul(yj2, yj)
        for i, xi in enumerate(x_images):
            conj = mul(mul(yj, xi), inv(yj))
            assert conj == power(xi, pres.exponents[i][j])

    # injectivity by image counting
    seen = {identity}
    frontier = [identity]
    gens = list(x_images) + list(y_images)
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = mul(e, g)
                if h not in seen:
                    if len(seen) >= cap:
                        raise CapExceededError(f"image exceeds cap {cap}")
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    embedding = ApdEmbedding(
        presentation=pres,
        q=q,
        factors=factors,
        x_images=x_images,
        y_images=y_images,
        group_order=pres.group_order,
        image_order=len(seen),
    )
    if not embedding.injective:  # pragma: no cover - construction guarantees it
        raise AssertionError("embedding failed the image count")
    return embedding
