"""Stallings automata of finitely generated subgroups of free groups.

An automaton is a folded, basepointed, core edge-labelled graph; it is
the canonical representative of a finitely generated subgroup of F_n.
Vertices are renumbered by breadth-first search from the basepoint with
edge labels visited in the order a < a^-1 < b < b^-1 < ..., so two
automata represent the same subgroup iff their edge lists are equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import NotFiniteIndexError
from .words import Word, identity, word
from . import permgroup


def _fold(nverts: int, edges, base: int):
    """Union-find folding. Returns (find, neighbor dict per root).

    ``edges`` are (src, label, dst) with positive labels; neighbor dicts
    are keyed by signed labels, +g for outgoing, -g for incoming.
    """
    parent = list(range(nverts))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    nbr: list[dict[int, int]] = [dict() for _ in range(nverts)]
    pending: deque[tuple[int, int]] = deque()

    def attach(u: int, key: int, v: int) -> None:
        cur = nbr[u].get(key)
        if cur is None:
            nbr[u][key] = v
        else:
            pending.append((cur, v))

    for src, label, dst in edges:
        u, v = find(src), find(dst)
        attach(u, label, v)
        attach(v, -label, u)
        while pending:
            a, b = pending.popleft()
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            if len(nbr[ra]) < len(nbr[rb]):
                ra, rb = rb, ra
            parent[rb] = ra
            absorbed, nbr[rb] = nbr[rb], {}
            for key, t in absorbed.items():
                cur = nbr[ra].get(key)
                if cur is None:
                    nbr[ra][key] = t
                else:
                    pending.append((cur, t))
    return find, nbr


class Automaton:
    """Folded core automaton over the free group of rank ``rank``.

    Immutable after construction; compare and hash by canonical form.
    """

    __slots__ = ("rank", "n_vertices", "base", "succ", "pred", "_key")

    def __init__(self, rank, n_vertices, succ, pred):
        self.rank = rank
        self.n_vertices = n_vertices
        self.base = 0
        self.succ = succ
        self.pred = pred
        self._key = (
            rank,
            n_vertices,
            tuple(
                (v, g, targets[v])
                for g, targets in enumerate(succ, start=1)
                for v in sorted(targets)
            ),
        )

    # -- construction -------------------------------------------------

    @classmethod
    def from_raw(cls, rank: int, nverts: int, base: int, edges) -> "Automaton":
        """Fold, trim to the core, and canonically renumber arbitrary edge data."""
        if rank < 1:
            raise ValueError("rank must be at least 1")
        find, nbr = _fold(nverts, edges, base)
        root_base = find(base)

        # resolve stale targets, drop parts not reachable from the basepoint
        reach = {root_base}
        queue = deque([root_base])
        while queue:
            u = queue.popleft()
            for key in list(nbr[u]):
                t = find(nbr[u][key])
                nbr[u][key] = t
                if t not in reach:
                    reach.add(t)
                    queue.append(t)

        # core trim: repeatedly remove non-base vertices of degree <= 1
        dead = set()
        trim = deque(v for v in reach if v != root_base and len(nbr[v]) <= 1)
        while trim:
            v = trim.popleft()
            if v in dead or len(nbr[v]) > 1 or v == root_base:
                continue
            dead.add(v)
            for key, t in nbr[v].items():
                if t == v:
                    continue
                del nbr[t][-key]
                if t != root_base and len(nbr[t]) <= 1:
                    trim.append(t)
            nbr[v] = {}
        reach -= dead

        return cls._renumber(rank, root_base, nbr, reach)

    @classmethod
    def _renumber(cls, rank, base_vertex, nbr, live) -> "Automaton":
        order = {base_vertex: 0}
        queue = deque([base_vertex])
        signed = [s for g in range(1, rank + 1) for s in (g, -g)]
        while queue:
            u = queue.popleft()
            for key in signed:
                t = nbr[u].get(key)
                if t is not None and t not in order:
                    order[t] = len(order)
                    queue.append(t)
        if len(order) != len(live):  # pragma: no cover - folding keeps connectivity
            raise AssertionError("automaton became disconnected")
        succ = [dict() for _ in range(rank)]
        pred = [dict() for _ in range(rank)]
        for old, new in order.items():
            for key, t in nbr[old].items():
                if key > 0:
                    succ[key - 1][new] = order[t]
                    pred[key - 1][order[t]] = new
        return cls(rank, len(order), tuple(succ), tuple(pred))

    @classmethod
    def from_generators(cls, generators, rank: int) -> "Automaton":
        """Stallings automaton of the subgroup generated by the given words."""
        edges = []
        nverts = 1
        for w in generators:
            if w.rank != rank:
                raise ValueError("generator rank mismatch")
            if w.is_identity():
                continue
            prev = 0
            for i, letter in enumerate(w.letters):
                nxt = 0 if i == len(w.letters) - 1 else nverts
                if i < len(w.letters) - 1:
                    nverts += 1
                if letter > 0:
                    edges.append((prev, letter, nxt))
                else:
                    edges.append((nxt, -letter, prev))
                prev = nxt
        return cls.from_raw(rank, nverts, 0, edges)

    @classmethod
    def full_group(cls, rank: int) -> "Automaton":
        """The bouquet: automaton of the whole free group."""
        return cls.from_raw(rank, 1, 0, [(0, g, 0) for g in range(1, rank + 1)])

    @classmethod
    def trivial(cls, rank: int) -> "Automaton":
        return cls.from_raw(rank, 1, 0, [])

    @classmethod
    def from_action(cls, rank: int, perms, base: int = 0) -> "Automaton":
        """Complete automaton from one transition permutation per generator.

        The result is the Schreier graph of the group generated by the
        permutations, restricted to the orbit of ``base``; it represents
        the full preimage of the basepoint stabilizer.
        """
        if len(perms) != rank:
            raise ValueError("need one permutation per generator")
        degree = len(perms[0])
        for p in perms:
            if sorted(p) != list(range(degree)):
                raise ValueError("transitions must be permutations of the vertex set")
        edges = [(v, g, p[v]) for g, p in enumerate(perms, start=1) for v in range(degree)]
        return cls.from_raw(rank, degree, base, edges)

    # -- queries ------------------------------------------------------

    @property
    def key(self):
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Automaton) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Automaton(rank={self.rank}, vertices={self.n_vertices})"

    def step(self, v: int, letter: int):
        """Follow one signed letter; None when the edge is missing."""
        if letter > 0:
            return self.succ[letter - 1].get(v)
        return self.pred[-letter - 1].get(v)

    def membership(self, w: Word) -> bool:
        """True iff the word labels a closed path at the basepoint."""
        if w.rank != self.rank:
            raise ValueError("rank mismatch")
        v = self.base
        for letter in w.letters:
            v = self.step(v, letter)
            if v is None:
                return False
        return v == self.base

    __contains__ = membership

    def is_complete(self) -> bool:
        return all(len(targets) == self.n_vertices for targets in self.succ)

    def index(self):
        """Index in the free group: vertex count when complete, else None."""
        return self.n_vertices if self.is_complete() else None

    def _spanning_tree(self):
        """BFS tree: per-vertex word from the basepoint and the tree edge set."""
        reps: list[Word | None] = [None] * self.n_vertices
        reps[self.base] = identity(self.rank)
        tree: set[tuple[int, int, int]] = set()
        queue = deque([self.base])
        signed = [s for g in range(1, self.rank + 1) for s in (g, -g)]
        while queue:
            u = queue.popleft()
            for letter in signed:
                t = self.step(u, letter)
                if t is not None and reps[t] is None:
                    reps[t] = reps[u] * word((letter,), self.rank)
                    tree.add((u, abs(letter), t) if letter > 0 else (t, abs(letter), u))
                    queue.append(t)
        return reps, tree

    def index_and_basis(self):
        """(index or None, free basis of the subgroup via a spanning tree)."""
        reps, tree = self._spanning_tree()
        basis = []
        for g, targets in enumerate(self.succ, start=1):
            for u in sorted(targets):
                v = targets[u]
                if (u, g, v) in tree:
                    continue
                basis.append(reps[u] * word((g,), self.rank) * reps[v].inverse())
        return self.index(), basis

    def basis(self):
        return self.index_and_basis()[1]

    def coset_representatives(self):
        """One word per vertex, mapping the basepoint to that coset."""
        reps, _ = self._spanning_tree()
        return reps

    def contains_subgroup(self, other: "Automaton") -> bool:
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        return all(self.membership(w) for w in other.basis())

    # -- subgroup operations -------------------------------------------

    def join(self, other: "Automaton") -> "Automaton":
        """Automaton of the subgroup generated by both subgroups together."""
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        offset = self.n_vertices
        edges = [
            (v, g, t)
            for g, targets in enumerate(self.succ, start=1)
            for v, t in targets.items()
        ]

        def shift(v: int) -> int:
            return self.base if v == other.base else (v + offset if v < other.base else v + offset - 1)

        edges.extend(
            (shift(v), g, shift(t))
            for g, targets in enumerate(other.succ, start=1)
            for v, t in targets.items()
        )
        return Automaton.from_raw(self.rank, offset + other.n_vertices - 1, self.base, edges)

    def intersect(self, other: "Automaton") -> "Automaton":
        """Core of the product automaton: represents the intersection."""
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        start = (self.base, other.base)
        seen = {start: 0}
        queue = deque([start])
        edges = set()
        signed = [s for g in range(1, self.rank + 1) for s in (g, -g)]
        while queue:
            u1, u2 = queue.popleft()
            u = seen[(u1, u2)]
            for letter in signed:
                v1 = self.step(u1, letter)
                v2 = other.step(u2, letter)
                if v1 is None or v2 is None:
                    continue
                pair = (v1, v2)
                if pair not in seen:
                    seen[pair] = len(seen)
                    queue.append(pair)
                v = seen[pair]
                edges.add((u, letter, v) if letter > 0 else (v, -letter, u))
        return Automaton.from_raw(self.rank, len(seen), 0, sorted(edges))

    def coset_action(self) -> "CosetAction":
        """Transition permutations of a complete automaton."""
        if not self.is_complete():
            raise NotFiniteIndexError("coset action requires a finite-index subgroup")
        perms = tuple(
            tuple(targets[v] for v in range(self.n_vertices)) for targets in self.succ
        )
        return CosetAction(self.n_vertices, perms)

    def intermediate_subgroups(self):
        """All subgroups between this one and the full free group.

        Computed as the join-closure of the subgroups generated by this
        one plus a single coset representative.
        """
        if not self.is_complete():
            raise NotFiniteIndexError("intermediate subgroups require finite index")
        reps = self.coset_representatives()
        atoms = []
        seen_atoms = set()
        for v in range(self.n_vertices):
            if v == self.base:
                continue
            atom = self.join(Automaton.from_generators([reps[v]], self.rank))
            if atom.key not in seen_atoms:
                seen_atoms.add(atom.key)
                atoms.append(atom)
        found = {self.key: self}
        frontier = [self]
        while frontier:
            current = frontier.pop()
            for atom in atoms:
                joined = current.join(atom)
                if joined.key not in found:
                    found[joined.key] = joined
                    frontier.append(joined)
        return sorted(found.values(), key=lambda a: (-a.n_vertices, a.key))

    # -- serialization -------------------------------------------------

    def _label(self, g: int) -> str:
        return chr(ord("a") + g - 1) if self.rank <= 26 else str(g)

    def to_json_dict(self) -> dict:
        edges = [
            [v, self._label(g), t]
            for g, targets in enumerate(self.succ, start=1)
            for v, t in sorted(targets.items())
        ]
        return {
            "rank": self.rank,
            "vertices": self.n_vertices,
            "base": self.base,
            "edges": edges,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Automaton":
        rank = int(data["rank"])
        edges = []
        for src, label, dst in data["edges"]:
            if isinstance(label, str) and label.isalpha():
                g = ord(label.lower()) - ord("a") + 1
            else:
                g = int(label)
            if not 1 <= g <= rank:
                raise ValueError(f"edge label {label!r} out of range")
            edges.append((int(src), g, int(dst)))
        return cls.from_raw(rank, int(data["vertices"]), int(data["base"]), edges)

    def to_dot(self) -> str:
        lines = ["digraph stallings {", "  rankdir=LR;"]
        lines.append(f'  {self.base} [shape=doublecircle];')
        for v in range(self.n_vertices):
            if v != self.base:
                lines.append(f"  {v} [shape=circle];")
        for g, targets in enumerate(self.succ, start=1):
            for v, t in sorted(targets.items()):
                lines.append(f'  {v} -> {t} [label="{self._label(g)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CosetAction:
    """Transition permutations of a complete automaton on its vertex set."""

    degree: int
    perms: tuple[tuple[int, ...], ...]

    def to_perm_group(self, cap: int | None = None) -> "permgroup.PermGroup":
        kwargs = {} if cap is None else {"cap": cap}
        return permgroup.PermGroup(self.degree, list(self.perms), **kwargs)
