"""Solvable Baumslag-Solitar groups BS(1,q) for prime q.

Elements live in the concrete model Z[1/q] x| Z: a maps to (1, 0), b to
(0, 1), and b acts on the rational part by multiplication by q, giving
the group law (x, j)(x', j') = (x + q^j x', j + j').  The word problem
reduces to exact rational arithmetic, and nontrivial elements are
separated in the groups C_p x| C_{p-1} for primes p with q a primitive
root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .apd import GpdElement
from .errors import BudgetExhaustedError
from .numtheory import is_primitive_root, primes_from, require_prime
from .words import Word

DEFAULT_PRIME_BUDGET = 100_000


@dataclass(frozen=True)
class BsElement:
    """Element (x, j) of Z[1/q] x| Z with x = m / q^s in lowest terms."""

    q: int
    x: Fraction
    j: int

    def __post_init__(self) -> None:
        require_prime(self.q, "q")
        den = self.x.denominator
        while den % self.q == 0:
            den //= self.q
        if den != 1:
            raise ValueError(f"denominator of {self.x} is not a power of {self.q}")

    @property
    def numerator(self) -> int:
        """m in the normal form m / q^s (coprime to q unless zero)."""
        return self.x.numerator

    @property
    def denominator_exponent(self) -> int:
        """s in the normal form m / q^s."""
        den = self.x.denominator
        s = 0
        while den > 1:
            den //= self.q
            s += 1
        return s

    def is_identity(self) -> bool:
        return self.x == 0 and self.j == 0

    def __mul__(self, other: "BsElement") -> "BsElement":
        if self.q != other.q:
            raise ValueError("mixed q")
        return BsElement(self.q, self.x + Fraction(self.q) ** self.j * other.x, self.j + other.j)

    def inverse(self) -> "BsElement":
        return BsElement(self.q, -Fraction(self.q) ** (-self.j) * self.x, -self.j)


def bs_identity(q: int) -> BsElement:
    return BsElement(q, Fraction(0), 0)


def bs_eval(u: Word, q: int) -> BsElement:
    """Image of a rank-2 word under a -> (1, 0), b -> (0, 1)."""
    if u.rank != 2:
        raise ValueError("rank-2 word required")
    a = BsElement(q, Fraction(1), 0)
    b = BsElement(q, Fraction(0), 1)
    gens = (a, b)
    out = bs_identity(q)
    for letter in u.letters:
        g = gens[abs(letter) - 1]
        out = out * (g if letter > 0 else g.inverse())
    return out


def bs_is_trivial(u: Word, q: int) -> bool:
    return bs_eval(u, q).is_identity()


def bs_separating_prime(
    g: BsElement, budget: int = DEFAULT_PRIME_BUDGET
) -> tuple[int, GpdElement]:
    """Smallest prime p != q with q a primitive root mod p sending g to a
    nontrivial element of C_p x| C_{p-1}.

    The canonical map takes m / q^s to m q^-s mod p and the b-exponent
    to its residue mod p - 1; choosing p beyond |j| and away from m
    forces a nontrivial image.
    """
    if g.is_identity():
        raise ValueError("identity element has no separating quotient")
    m = g.numerator
    s = g.denominator_exponent
    examined = 0
    for p in primes_from(3):
        examined += 1
        if examined > budget:
            raise BudgetExhaustedError(
                f"no separating prime for q = {g.q} within {budget} candidates"
            )
        if p == g.q:
            continue
        if m != 0 and m % p == 0:
            continue
        if p - 1 <= abs(g.j):
            continue
        if not is_primitive_root(g.q, p):
            continue
        x_exp = m % p * pow(g.q, -s, p) % p
        image = GpdElement(x_exp, g.j % (p - 1))
        assert image != GpdElement(0, 0)
        return p, image
    raise AssertionError("unreachable")  # pragma: no cover
