"""Folded core graphs for finitely generated subgroups of a free group.

A core graph is a finite folded connected graph with edges labeled by
generator indices 1..rank.  In basepointed form the loops at the basepoint
spell exactly the subgroup elements; the hull-core form is the basepointed
core with degree-<=1 vertices iteratively pruned (the quotient of the
convex hull of the subgroup's limit set).  The hull-core of the trivial
subgroup is the empty graph.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence, Union

from .errors import BasisMismatchError, FileFormatError
from .words import Basis, Word, format_word, parse_word, reduce

WordLike = Union[Word, str]


class LabeledGraph:
    """A finite labeled graph, possibly unfolded; raw input for `fold`."""

    def __init__(self, rank: int, num_vertices: int = 0,
                 edges: Iterable[tuple[int, int, int]] = (),
                 basepoint: Optional[int] = None):
        self.rank = rank
        self.num_vertices = num_vertices
        self.edges = list(edges)
        self.basepoint = basepoint

    def add_vertex(self) -> int:
        v = self.num_vertices
        self.num_vertices += 1
        return v

    def add_edge(self, src: int, dst: int, label: int) -> None:
        if not 1 <= label <= self.rank:
            raise ValueError(f"label {label} out of range for rank {self.rank}")
        self.edges.append((src, dst, label))

    def add_loop_word(self, base: int, w: Word) -> None:
        """Attach a closed path at `base` reading the word w."""
        prev = base
        n = len(w.letters)
        for i, m in enumerate(w.letters):
            nxt = base if i == n - 1 else self.add_vertex()
            if m > 0:
                self.add_edge(prev, nxt, m)
            else:
                self.add_edge(nxt, prev, -m)
            prev = nxt


class CoreGraph:
    """Immutable folded connected labeled graph (basepointed or hull-core).

    Vertices are 0..num_vertices-1.  Edges are (src, dst, label) with
    label in 1..rank.  In basepointed form every non-basepoint vertex has
    total degree >= 2; in hull-core form (basepoint None) every vertex
    does, and the graph may be empty.
    """

    __slots__ = ("rank", "num_vertices", "edges", "basepoint",
                 "_out", "_in", "_hash")

    def __init__(self, rank: int, num_vertices: int,
                 edges: Iterable[tuple[int, int, int]],
                 basepoint: Optional[int]):
        edges = tuple(sorted(edges))
        if rank < 1:
            raise ValueError("rank must be >= 1")
        out: dict[tuple[int, int], int] = {}
        inc: dict[tuple[int, int], int] = {}
        for (s, d, l) in edges:
            if not (0 <= s < num_vertices and 0 <= d < num_vertices):
                raise ValueError(f"edge {(s, d, l)} references a missing vertex")
            if not 1 <= l <= rank:
                raise ValueError(f"edge label {l} out of range for rank {rank}")
            if (s, l) in out or (d, l) in inc:
                raise ValueError(f"graph is not folded at edge {(s, d, l)}")
            out[(s, l)] = d
            inc[(d, l)] = s
        if basepoint is not None and not 0 <= basepoint < num_vertices:
            raise ValueError("basepoint out of range")
        if num_vertices > 0 and not _connected(num_vertices, edges):
            raise ValueError("graph is disconnected")
        deg = [0] * num_vertices
        for (s, d, _l) in edges:
            deg[s] += 1
            deg[d] += 1
        for v in range(num_vertices):
            if v != basepoint and deg[v] < 2:
                raise ValueError(f"vertex {v} has degree {deg[v]} < 2")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "basepoint", basepoint)
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inc)
        object.__setattr__(self, "_hash",
                           hash((rank, num_vertices, edges, basepoint)))

    def __setattr__(self, name, value):
        raise AttributeError("CoreGraph is immutable")

    def __eq__(self, other) -> bool:
        return (isinstance(other, CoreGraph)
                and self.rank == other.rank
                and self.num_vertices == other.num_vertices
                and self.edges == other.edges
                and self.basepoint == other.basepoint)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        bp = self.basepoint
        return (f"CoreGraph(rank={self.rank}, vertices={self.num_vertices}, "
                f"edges={len(self.edges)}, basepoint={bp})")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def is_hull_form(self) -> bool:
        return self.basepoint is None

    @property
    def is_empty(self) -> bool:
        return self.num_vertices == 0

    def out_vertex(self, v: int, label: int) -> Optional[int]:
        return self._out.get((v, label))

    def in_vertex(self, v: int, label: int) -> Optional[int]:
        return self._in.get((v, label))

    def step(self, v: int, letter: int) -> Optional[int]:
        """Follow a signed letter from v; None if no such edge."""
        if letter > 0:
            return self._out.get((v, letter))
        return self._in.get((v, -letter))

    def trace(self, v: int, w: Word) -> Optional[int]:
        """End vertex of the path reading w from v, or None if it leaves."""
        for m in w.letters:
            v = self.step(v, m)
            if v is None:
                return None
        return v

    def degree(self, v: int) -> int:
        return sum(1 for i in range(1, self.rank + 1)
                   if self._out.get((v, i)) is not None) + \
               sum(1 for i in range(1, self.rank + 1)
                   if self._in.get((v, i)) is not None)


def _connected(num_vertices: int, edges: Sequence[tuple[int, int, int]]) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(num_vertices)}
    for (s, d, _l) in edges:
        adj[s].append(d)
        adj[d].append(s)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == num_vertices


def _fold_edges(num_vertices: int, edges: Sequence[tuple[int, int, int]]
                ) -> tuple[int, list[tuple[int, int, int]], list[int]]:
    """Stallings folding by repeated identification; returns the quotient.

    The result is (new_count, new_edges, mapping old vertex -> new vertex).
    """
    parent = list(range(num_vertices))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    work = list(edges)
    while True:
        canon = {(find(s), find(d), l) for (s, d, l) in work}
        merged = False
        out: dict[tuple[int, int], int] = {}
        inc: dict[tuple[int, int], int] = {}
        for (s, d, l) in canon:
            if (s, l) in out and find(out[(s, l)]) != find(d):
                union(out[(s, l)], d)
                merged = True
            else:
                out[(s, l)] = d
            if (d, l) in inc and find(inc[(d, l)]) != find(s):
                union(inc[(d, l)], s)
                merged = True
            else:
                inc[(d, l)] = s
        work = list(canon)
        if not merged:
            break
    roots = sorted({find(v) for v in range(num_vertices)})
    new_id = {r: i for i, r in enumerate(roots)}
    mapping = [new_id[find(v)] for v in range(num_vertices)]
    new_edges = sorted({(mapping[s], mapping[d], l) for (s, d, l) in edges})
    return len(roots), new_edges, mapping


def _prune_edges(num_vertices: int, edges: Sequence[tuple[int, int, int]],
                 protect: Optional[int]
                 ) -> tuple[int, list[tuple[int, int, int]], dict[int, int]]:
    """Iteratively delete degree-<=1 vertices (except `protect`)."""
    alive = set(range(num_vertices))
    cur = list(edges)
    while True:
        deg: dict[int, int] = {v: 0 for v in alive}
        for (s, d, _l) in cur:
            deg[s] += 1
            deg[d] += 1
        doomed = {v for v in alive if deg[v] <= 1 and v != protect}
        if not doomed:
            break
        alive -= doomed
        cur = [(s, d, l) for (s, d, l) in cur
               if s not in doomed and d not in doomed]
    new_id = {v: i for i, v in enumerate(sorted(alive))}
    new_edges = sorted((new_id[s], new_id[d], l) for (s, d, l) in cur)
    return len(alive), new_edges, new_id


def fold(g: LabeledGraph) -> CoreGraph:
    """Fold a labeled graph into core form.

    Identifications never change the set of reduced words read by closed
    paths at the basepoint.  Degree-<=1 vertices other than the basepoint
    are trimmed afterwards so the result satisfies the core invariants;
    such vertices cannot lie on any reduced loop.
    """
    n, edges, mapping = _fold_edges(g.num_vertices, g.edges)
    base = mapping[g.basepoint] if g.basepoint is not None else None
    n, edges, keep = _prune_edges(n, edges, base)
    base = keep[base] if base is not None else None
    return CoreGraph(g.rank, n, edges, base)


def core_from_generators(gens: Sequence[WordLike], rank: int) -> CoreGraph:
    """Basepointed Stallings core of the subgroup the words generate."""
    g = LabeledGraph(rank)
    base = g.add_vertex()
    g.basepoint = base
    for w in gens:
        word = parse_word(w, rank) if isinstance(w, str) else w
        if word.rank != rank:
            raise BasisMismatchError(f"word rank {word.rank} vs rank {rank}")
        if not word.is_identity():
            g.add_loop_word(base, word)
    return fold(g)


def hull_core(c: CoreGraph) -> CoreGraph:
    """Prune degree-<=1 vertices iteratively; the basepoint has no immunity."""
    n, edges, _ = _prune_edges(c.num_vertices, c.edges, None)
    return CoreGraph(c.rank, n, edges, None)


def contains(c: CoreGraph, w: WordLike) -> bool:
    """True iff w traces a closed path at the basepoint."""
    if c.basepoint is None:
        raise ValueError("membership needs a basepointed core")
    word = parse_word(w, c.rank) if isinstance(w, str) else w
    if word.rank != c.rank:
        raise BasisMismatchError(f"word rank {word.rank} vs rank {c.rank}")
    return c.trace(c.basepoint, word) == c.basepoint


def reduced_rank(c: CoreGraph) -> int:
    """max(#edges - #vertices, 0): the negative Euler characteristic,
    clamped to 0 for trees and the empty graph."""
    return max(c.num_edges - c.num_vertices, 0)


def finite_index(c: CoreGraph) -> Optional[int]:
    """#vertices if the core is a full cover of the rose, else None.

    A basepointed core covers the rose completely iff every vertex has one
    outgoing and one incoming edge per generator; the subgroup then has
    index #vertices, and infinite index otherwise.
    """
    if c.basepoint is None:
        raise ValueError("index needs a basepointed core")
    for v in range(c.num_vertices):
        for i in range(1, c.rank + 1):
            if c.out_vertex(v, i) is None or c.in_vertex(v, i) is None:
                return None
    return c.num_vertices


def conjugate(c: CoreGraph, g: WordLike) -> CoreGraph:
    """Basepointed core of g H g^-1: attach a g-path, fold, re-core."""
    if c.basepoint is None:
        raise ValueError("conjugation needs a basepointed core")
    word = parse_word(g, c.rank) if isinstance(g, str) else g
    if word.rank != c.rank:
        raise BasisMismatchError(f"word rank {word.rank} vs rank {c.rank}")
    if word.is_identity():
        return c
    raw = LabeledGraph(c.rank, c.num_vertices, c.edges)
    new_base = raw.add_vertex()
    raw.basepoint = new_base
    prev = new_base
    n = len(word.letters)
    for i, m in enumerate(word.letters):
        nxt = c.basepoint if i == n - 1 else raw.add_vertex()
        if m > 0:
            raw.add_edge(prev, nxt, m)
        else:
            raw.add_edge(nxt, prev, -m)
        prev = nxt
    return fold(raw)


def basis_of(c: CoreGraph) -> list[Word]:
    """Spanning-tree free basis: one word per non-tree edge."""
    if c.basepoint is None:
        raise ValueError("basis extraction needs a basepointed core")
    path: dict[int, tuple[int, ...]] = {c.basepoint: ()}
    order = [c.basepoint]
    tree: set[tuple[int, int, int]] = set()
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for lab in range(1, c.rank + 1):
            for letter in (lab, -lab):
                w = c.step(v, letter)
                if w is not None and w not in path:
                    path[w] = path[v] + (letter,)
                    order.append(w)
                    edge = (v, w, lab) if letter > 0 else (w, v, lab)
                    tree.add(edge)
    words = []
    for (s, d, l) in c.edges:
        if (s, d, l) not in tree:
            letters = path[s] + (l,) + tuple(-m for m in reversed(path[d]))
            words.append(reduce(letters, c.rank))
    return words


def random_finite_cover(rank: int, degree: int, seed: int) -> CoreGraph:
    """Connected degree-`degree` cover of the rose: one random permutation
    per generator, resampled until connected.  Deterministic per seed."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    rng = random.Random(seed)
    while True:
        edges = []
        for lab in range(1, rank + 1):
            perm = list(range(degree))
            rng.shuffle(perm)
            edges.extend((v, perm[v], lab) for v in range(degree))
        if _connected(degree, edges):
            return CoreGraph(rank, degree, edges, 0)


def random_cover(c: CoreGraph, degree: int, seed: int) -> CoreGraph:
    """Connected degree-`degree` cover of a basepointed core: one random
    permutation per edge.  Reads off an index-`degree` subgroup of the
    core's subgroup, based at the lift (basepoint, sheet 0)."""
    if c.basepoint is None:
        raise ValueError("covering needs a basepointed core")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    rng = random.Random(seed)
    while True:
        edges = []
        for (s, d, l) in c.edges:
            perm = list(range(degree))
            rng.shuffle(perm)
            edges.extend((s * degree + i, d * degree + perm[i], l)
                         for i in range(degree))
        if _connected(c.num_vertices * degree, edges):
            break
    base = c.basepoint * degree
    n, edges, keep = _prune_edges(c.num_vertices * degree, edges, base)
    return CoreGraph(c.rank, n, edges, keep[base])


def _bfs_encoding(c: CoreGraph, start: int) -> tuple:
    """Canonical relabeling by BFS from `start`, scanning labels in order."""
    order = {start: 0}
    queue = [start]
    i = 0
    while i < len(queue):
        v = queue[i]
        i += 1
        for lab in range(1, c.rank + 1):
            for letter in (lab, -lab):
                w = c.step(v, letter)
                if w is not None and w not in order:
                    order[w] = len(order)
                    queue.append(w)
    edges = tuple(sorted((order[s], order[d], l) for (s, d, l) in c.edges))
    return (c.num_vertices, edges)


def _canonical_key(c: CoreGraph) -> tuple:
    if c.num_vertices == 0:
        return (0, ())
    if c.basepoint is not None:
        return _bfs_encoding(c, c.basepoint)
    return min(_bfs_encoding(c, v) for v in range(c.num_vertices))


def canonical_form(c: CoreGraph) -> CoreGraph:
    """Relabel vertices canonically: BFS from the basepoint, or from the
    vertex of least BFS signature for hull-cores."""
    n, edges = _canonical_key(c)
    base = 0 if c.basepoint is not None else None
    return CoreGraph(c.rank, n, edges, base)


def label_isomorphic(a: CoreGraph, b: CoreGraph) -> bool:
    """Label-preserving isomorphism (basepoint-respecting when present)."""
    if a.rank != b.rank:
        return False
    if (a.basepoint is None) != (b.basepoint is None):
        return False
    return _canonical_key(a) == _canonical_key(b)


class Subgroup:
    """A finitely generated subgroup, with lazily derived core and hull."""

    __slots__ = ("rank", "generators", "_core", "_hull")

    def __init__(self, generators: Iterable[WordLike], rank: int):
        gens = []
        for w in generators:
            word = parse_word(w, rank) if isinstance(w, str) else w
            if word.rank != rank:
                raise BasisMismatchError(
                    f"generator rank {word.rank} vs rank {rank}")
            gens.append(word)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "_core", None)
        object.__setattr__(self, "_hull", None)

    def __setattr__(self, name, value):
        raise AttributeError("Subgroup is immutable")

    @classmethod
    def full(cls, rank: int) -> "Subgroup":
        return cls(Basis(rank).generators(), rank)

    @classmethod
    def from_core(cls, core: CoreGraph) -> "Subgroup":
        return cls(basis_of(core), core.rank)

    @property
    def core(self) -> CoreGraph:
        if self._core is None:
            object.__setattr__(self, "_core",
                               core_from_generators(self.generators, self.rank))
        return self._core

    @property
    def hull(self) -> CoreGraph:
        if self._hull is None:
            object.__setattr__(self, "_hull", hull_core(self.core))
        return self._hull

    def contains(self, w: WordLike) -> bool:
        return contains(self.core, w)

    def reduced_rank(self) -> int:
        return reduced_rank(self.core)

    def is_trivial(self) -> bool:
        return self.core.num_edges == 0

    def equals(self, other: "Subgroup") -> bool:
        """Equality as subgroups (cores label-isomorphic)."""
        return self.rank == other.rank and label_isomorphic(self.core, other.core)

    def __repr__(self) -> str:
        gens = ", ".join(format_word(w) for w in self.generators)
        return f"Subgroup(<{gens}>, rank={self.rank})"


# ---------------------------------------------------------------------------
# file formats

def subgroup_to_text(sub: Subgroup) -> str:
    lines = [f"rank {sub.rank}"]
    lines.extend(format_word(w) for w in sub.generators)
    return "\n".join(lines) + "\n"


def subgroup_from_text(text: str) -> Subgroup:
    rank = None
    gens: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if rank is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "rank" or not parts[1].isdigit():
                raise FileFormatError(f"expected 'rank N', got {line!r}")
            rank = int(parts[1])
        else:
            gens.append(line)
    if rank is None:
        raise FileFormatError("missing 'rank N' header")
    return Subgroup(gens, rank)


def read_subgroup(path) -> Subgroup:
    with open(path, "r", encoding="utf-8") as fh:
        return subgroup_from_text(fh.read())


def write_subgroup(sub: Subgroup, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(subgroup_to_text(sub))


def graph_to_text(c: CoreGraph) -> str:
    """Plain edge-list description with labels g1..gN; re-importable."""
    lines = [f"rank {c.rank}", f"vertices {c.num_vertices}"]
    lines.append("basepoint none" if c.basepoint is None
                 else f"basepoint {c.basepoint}")
    lines.extend(f"edge {s} {d} g{l}" for (s, d, l) in c.edges)
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> CoreGraph:
    rank = None
    num = None
    base: Optional[int] = None
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "rank":
                rank = int(parts[1])
            elif parts[0] == "vertices":
                num = int(parts[1])
            elif parts[0] == "basepoint":
                base = None if parts[1] == "none" else int(parts[1])
            elif parts[0] == "edge":
                if not parts[3].startswith("g"):
                    raise FileFormatError(f"bad edge label {parts[3]!r}")
                edges.append((int(parts[1]), int(parts[2]), int(parts[3][1:])))
            else:
                raise FileFormatError(f"unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FileFormatError):
                raise
            raise FileFormatError(f"malformed line {line!r}") from exc
    if rank is None or num is None:
        raise FileFormatError("missing rank/vertices header")
    try:
        return CoreGraph(rank, num, edges, base)
    except ValueError as exc:
        raise FileFormatError(f"not a valid core graph: {exc}") from exc
