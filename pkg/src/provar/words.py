"""Reduced words of a finitely generated free group.

Letters are signed 1-based generator indices: +i is the i-th generator,
-i its inverse.  Text syntax uses lowercase letters a..z for generators
and the matching uppercase letter for the inverse; an optional power
suffix is accepted, so "aba^-3 B^2" parses fine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN = re.compile(r"([a-zA-Z])(?:\s*\^\s*(-?\d+))?")


def reduce_letters(letters) -> tuple[int, ...]:
    """Freely reduce a letter sequence (cancel adjacent x, x^-1 pairs)."""
    stack: list[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word over the rank-``rank`` free group."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        for letter in self.letters:
            if letter == 0 or abs(letter) > self.rank:
                raise ValueError(f"letter {letter} out of range for rank {self.rank}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError("word is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        self._check_rank(other)
        return Word(reduce_letters(self.letters + other.letters), self.rank)

    def inverse(self) -> "Word":
        return Word(tuple(-letter for letter in reversed(self.letters)), self.rank)

    def conjugate(self, by: "Word") -> "Word":
        """hgh^-1 for g = self, h = by."""
        self._check_rank(by)
        return by * self * by.inverse()

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word((), self.rank)
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def abelianization(self, modulus: int = 0) -> tuple[int, ...]:
        """Exponent-sum vector, reduced mod ``modulus`` when it is positive."""
        if modulus < 0:
            raise ValueError("modulus must be non-negative")
        counts = [0] * self.rank
        for letter in self.letters:
            counts[abs(letter) - 1] += 1 if letter > 0 else -1
        if modulus:
            counts = [c % modulus for c in counts]
        return tuple(counts)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        if self.rank > 26:
            return " ".join(f"g{abs(l)}^{'-1' if l < 0 else '1'}" for l in self.letters)
        chars = []
        for letter in self.letters:
            c = chr(ord("a") + abs(letter) - 1)
            chars.append(c if letter > 0 else c.upper())
        return "".join(chars)

    def _check_rank(self, other: "Word") -> None:
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")


def word(letters, rank: int) -> Word:
    """Build a Word from a raw letter sequence, freely reducing it."""
    for letter in letters:
        if letter == 0 or abs(letter) > rank:
            raise ValueError(f"letter {letter} out of range for rank {rank}")
    return Word(reduce_letters(letters), rank)


def identity(rank: int) -> Word:
    return Word((), rank)


def parse(text: str, rank: int) -> Word:
    """Parse word text ("abA", "a^-3 b^2", "1" or "" for the identity)."""
    stripped = text.replace("·", "").replace(" ", "")
    if stripped in ("", "1"):
        return identity(rank)
    letters: list[int] = []
    pos = 0
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            raise ValueError(f"cannot parse word at ...{stripped[pos:]!r}")
        char, power = m.group(1), m.group(2)
        index = ord(char.lower()) - ord("a") + 1
        if index > rank:
            raise ValueError(f"letter {char!r} exceeds rank {rank}")
        sign = 1 if char.islower() else -1
        count = int(power) if power is not None else 1
        letters.extend([sign * index if count > 0 else -sign * index] * abs(count))
        pos = m.end()
    return word(letters, rank)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()
