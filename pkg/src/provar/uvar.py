"""The pseudovariety U: the join over primes p of Ab(p)*Ab(p-1).

Membership of a finite group in U is the conjunction of three decidable
conditions: supersolvability, elementary abelian derived subgroup, and
abelian Sylow subgroups.  A finite-index subgroup of a free group is
U-closed iff its coset-action group lies in U, and its exact U-closure
is the meet of the U-closed subgroups above it.  For arbitrary
subgroups only upper approximations are available: the meet of the
per-prime closures over any finite prime set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import apd
from .permgroup import DEFAULT_ELEMENT_CAP, PermGroup
from .stallings import Automaton

DEFAULT_PRIME_BOUND = 7


@dataclass(frozen=True)
class UMembershipReport:
    verdict: bool
    supersolvable: bool
    derived_elementary_abelian: bool
    derived_witness_prime: int | None
    sylow_abelian: dict[int, bool]

    def __post_init__(self) -> None:
        expected = (
            self.supersolvable
            and self.derived_elementary_abelian
            and all(self.sylow_abelian.values())
        )
        if self.verdict != expected:
            raise ValueError("verdict must be the conjunction of the three conditions")


def is_in_u(group: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> UMembershipReport:
    """Decide membership in U via the structural characterization."""
    supersolvable = group.is_supersolvable()
    derived = group.derived_subgroup()
    derived_structure = derived.structure()
    derived_ok = derived_structure.elementary_abelian
    sylow_abelian: dict[int, bool] = {}
    order = group.order
    for p in sorted(_prime_divisors(order)):
        sylow_abelian[p] = group.sylow(p).structure().abelian
    return UMembershipReport(
        verdict=supersolvable and derived_ok and all(sylow_abelian.values()),
        supersolvable=supersolvable,
        derived_elementary_abelian=derived_ok,
        derived_witness_prime=derived_structure.elementary_prime,
        sylow_abelian=sylow_abelian,
    )


def _prime_divisors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def is_u_closed(aut: Automaton, cap: int = DEFAULT_ELEMENT_CAP) -> bool:
    """U-closedness: finite index and coset-action group in U."""
    if not aut.is_complete():
        return False
    group = aut.coset_action().to_perm_group(cap=cap)
    return is_in_u(group, cap=cap).verdict


def cl_u_finite_index(aut: Automaton, cap: int = DEFAULT_ELEMENT_CAP) -> Automaton:
    """Exact U-closure of a finite-index subgroup: the meet of the
    U-closed subgroups of the (finite) intermediate lattice."""
    closed = [
        k for k in aut.intermediate_subgroups() if is_u_closed(k, cap=cap)
    ]
    result = closed[0]
    for k in closed[1:]:
        result = result.intersect(k)
    return result


@dataclass(frozen=True)
class ClosureApprox:
    """Meet of per-prime closures: contains the U-closure, shrinking as
    primes are added; ``exact`` only when certified through the
    finite-index route."""

    primes: tuple[int, ...]
    automaton: Automaton
    exact: bool


def _mod_abelian_closure(aut: Automaton, modulus: int) -> Automaton:
    """Closure for the exponent-``modulus`` abelian pseudovariety: the
    preimage of the subgroup image in (Z/modulus)^n."""
    n = aut.rank
    vectors = [w.abelianization(modulus) for w in aut.basis()]
    zero = (0,) * n
    image = {zero}
    frontier = [zero]
    while frontier:
        v = frontier.pop()
        for g in vectors:
            w = tuple((a + b) % modulus for a, b in zip(v, g))
            if w not in image:
                image.add(w)
                frontier.append(w)
    cosets: dict[frozenset, int] = {}
    reps: list[tuple[int, ...]] = []

    def coset_id(v):
        key = frozenset(tuple((a + b) % modulus for a, b in zip(v, s)) for s in image)
        found = cosets.get(key)
        if found is None:
            found = len(reps)
            cosets[key] = found
            reps.append(v)
        return found

    coset_id(zero)
    i = 0
    while i < len(reps):
        for g in range(n):
            step = tuple(
                (x + (1 if j == g else 0)) % modulus for j, x in enumerate(reps[i])
            )
            coset_id(step)
        i += 1
    perms = []
    for g in range(n):
        perms.append(
            tuple(
                cosets[
                    frozenset(
                        tuple(
                            (x + (1 if j == g else 0) + s[j]) % modulus
                            for j, x in enumerate(rep)
                        )
                        for s in image
                    )
                ]
                for rep in reps
            )
        )
    return Automaton.from_action(n, perms, base=0)


def _one_prime_closure(aut: Automaton, p: int, cap: int) -> Automaton:
    if p == 2:
        # Ab(2)*Ab(1) = Ab(2): closure is the mod-2 abelianization preimage
        return _mod_abelian_closure(aut, 2)
    return apd.closure(aut, p, p - 1, cap=cap)


def cl_u_approx(aut: Automaton, primes, cap: int = DEFAULT_ELEMENT_CAP) -> ClosureApprox:
    """Meet of the pro-(Ab(p)*Ab(p-1)) closures over the given primes."""
    chosen = tuple(sorted(set(primes)))
    if not chosen:
        raise ValueError("need at least one prime")
    result: Automaton | None = None
    for p in chosen:
        cl = _one_prime_closure(aut, p, cap)
        result = cl if result is None else result.intersect(cl)
    exact = False
    if aut.is_complete():
        exact = result == cl_u_finite_index(aut, cap=cap)
    return ClosureApprox(primes=chosen, automaton=result, exact=exact)


def not_fg_certificate(aut: Automaton):
    """Smallest coordinate j (1-based) on which the whole subgroup
    abelianizes to zero, if any.

    When such a j exists the U-closure has infinite index and is not
    finitely generated.
    """
    vectors = [w.abelianization() for w in aut.basis()]
    for j in range(aut.rank):
        if all(v[j] == 0 for v in vectors):
            return j + 1
    return None


def _lattice_index(vectors, n: int):
    """Index of the sublattice of Z^n spanned by the vectors; None when
    the rank is deficient (infinite index).

    Euclidean column elimination: rows are processed top to bottom, and
    within a row the columns are combined until one pivot survives, so
    the pivots end up lower-triangular and the index is the product of
    their absolute values.
    """
    cols = [list(v) for v in vectors]
    index = 1
    for row in range(n):
        while True:
            nonzero = [c for c in cols if c[row] != 0]
            if len(nonzero) <= 1:
                break
            nonzero.sort(key=lambda c: abs(c[row]))
            pivot = nonzero[0]
            for c in nonzero[1:]:
                factor = c[row] // pivot[row]
                if factor:
                    for r in range(n):
                        c[r] -= factor * pivot[r]
        nonzero = [c for c in cols if c[row] != 0]
        if not nonzero:
            return None
        pivot = nonzero[0]
        index *= abs(pivot[row])
        cols = [c for c in cols if c is not pivot]
    return index


@dataclass(frozen=True)
class DensityReport:
    necessary_ok: bool
    dense_up_to_bound: bool
    prime_bound: int


def u_density_check(aut: Automaton, bound: int = DEFAULT_PRIME_BOUND,
                    cap: int = DEFAULT_ELEMENT_CAP) -> DensityReport:
    """Bounded density test: full abelianization image (necessary for
    U-density) plus per-prime density for every prime up to the bound."""
    vectors = [w.abelianization() for w in aut.basis()]
    necessary = _lattice_index(vectors, aut.rank) == 1
    dense = True
    p = 2
    while p <= bound:
        if p == 2:
            cl = _mod_abelian_closure(aut, 2)
            dense = dense and cl.n_vertices == 1
        else:
            dense = dense and apd.status(aut, p, p - 1, cap=cap).dense
        if not dense:
            break
        p = _next_prime(p)
    return DensityReport(necessary_ok=necessary, dense_up_to_bound=dense, prime_bound=bound)


def _next_prime(p: int) -> int:
    candidate = p + 1
    while True:
        if all(candidate % k for k in range(2, int(math.isqrt(candidate)) + 1)):
            return candidate
        candidate += 1
