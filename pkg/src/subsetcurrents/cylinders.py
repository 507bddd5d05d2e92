"""Round-graphs of the Cayley tree and exact cylinder evaluation.

A round-graph of radius r is a finite subtree of the ball B(id, r),
encoded by its vertex set of reduced words; it indexes the cylinder of
boundary subsets whose convex hull meets the ball in exactly that
subtree.  A counting current eta_H gives the cylinder weight

    eta_H(SCyl(T)) = #{vertices v of the hull-core of H whose traced
                       radius-r neighborhood, read as words, equals T}

and finite rational combinations are evaluated entrywise.  Everything in
this module is exact: values are `fractions.Fraction`, never floats.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import BasisMismatchError, FileFormatError
from .stallings import CoreGraph, Subgroup
from .words import (free_reduce, letter_to_char, parse_word,
                    _signed_letters)

WordTuple = tuple[int, ...]

DEFAULT_MAX_RADIUS = 3


def _letter_key(m: int) -> tuple[int, bool]:
    # Generator before its inverse: x < X < y < Y ...
    return (abs(m), m < 0)


def word_key(w: WordTuple) -> tuple:
    return (len(w), tuple(_letter_key(m) for m in w))


def _canonical_words(words: Iterable[WordTuple]) -> tuple[WordTuple, ...]:
    """Length-then-lexicographic order on signed indices."""
    return tuple(sorted(set(words), key=word_key))


def validate_round_graph(words: Iterable[WordTuple], radius: int,
                         rank: int) -> bool:
    """Decide the round-graph conditions for a vertex-word set.

    The set must be the vertex set of a subtree of B(id, radius) that
    contains the root, whose vertices at distance < radius all have
    degree >= 2, and (radius >= 1) with at least two vertices at distance
    exactly radius.  These conditions hold exactly when some closed
    boundary subset's convex hull meets the ball in this subtree: sphere
    leaves extend to rays outward, and interior vertices lie on lines
    between the resulting boundary points.
    """
    ws = set()
    for w in words:
        w = tuple(w)
        if len(w) > radius:
            return False
        if any(m == 0 or abs(m) > rank for m in w):
            return False
        if free_reduce(w) != w:
            return False
        ws.add(w)
    if () not in ws:
        return False
    if radius == 0:
        return ws == {()}
    children: dict[WordTuple, int] = {w: 0 for w in ws}
    for w in ws:
        if w and w[:-1] not in ws:
            return False  # not prefix-closed, hence not a subtree
        if w:
            children[w[:-1]] += 1
    for w in ws:
        if len(w) < radius:
            degree = children[w] + (1 if w else 0)
            if degree < 2:
                return False
    if sum(1 for w in ws if len(w) == radius) < 2:
        return False
    return True


class RoundGraph:
    """Canonical rooted subtree of the radius-r ball; hashable table key."""

    __slots__ = ("rank", "radius", "words", "word_set", "_hash")

    def __init__(self, rank: int, radius: int, words: Iterable[WordTuple]):
        words = _canonical_words(words)
        if not validate_round_graph(words, radius, rank):
            raise ValueError(
                f"not a valid round-graph at radius {radius}: {words}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "word_set", frozenset(words))
        object.__setattr__(self, "_hash", hash((rank, radius, words)))

    def __setattr__(self, name, value):
        raise AttributeError("RoundGraph is immutable")

    def __eq__(self, other) -> bool:
        return (isinstance(other, RoundGraph)
                and self.rank == other.rank
                and self.radius == other.radius
                and self.words == other.words)

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (len(self.words), tuple(word_key(w) for w in self.words))

    def __lt__(self, other: "RoundGraph") -> bool:
        return self.sort_key() < other.sort_key()

    def __contains__(self, word: WordTuple) -> bool:
        return tuple(word) in self.word_set

    def __repr__(self) -> str:
        return f"RoundGraph(r={self.radius}, {round_graph_to_text(self)!r})"


def restrict(t: RoundGraph, new_radius: int) -> RoundGraph:
    """Vertices of length <= new_radius; always a valid round-graph."""
    if new_radius > t.radius:
        raise ValueError(f"cannot restrict radius {t.radius} to {new_radius}")
    return RoundGraph(t.rank, new_radius,
                      [w for w in t.words if len(w) <= new_radius])


def full_ball(rank: int, radius: int) -> RoundGraph:
    """The whole ball B(id, radius): the round-graph of the full tree."""
    return RoundGraph(rank, radius, _ball_words(rank, radius))


def axis(rank: int, generator: int, radius: int) -> RoundGraph:
    """The axis pattern of a generator: powers g^k, |k| <= radius."""
    words = [()]
    for k in range(1, radius + 1):
        words.append((generator,) * k)
        words.append((-generator,) * k)
    return RoundGraph(rank, radius, words)


@lru_cache(maxsize=None)
def _ball_words(rank: int, radius: int) -> tuple[WordTuple, ...]:
    out: list[WordTuple] = [()]
    frontier: list[WordTuple] = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            last = w[-1] if w else 0
            for m in _signed_letters(rank):
                if m != -last:
                    nxt.append(w + (m,))
        out.extend(nxt)
        frontier = nxt
    return tuple(out)


def enumerate_round_graphs(rank: int, radius: int,
                           max_radius: int = DEFAULT_MAX_RADIUS
                           ) -> Iterator[RoundGraph]:
    """Yield every round-graph rooted at the identity, lazily.

    The count grows super-exponentially in the radius (rank 2: 1, 11,
    4067, ~6.9e10 for r = 0..3), so materializing beyond r = 2 is not
    desk-scale; the generator itself is cheap per item.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius > max_radius:
        raise ValueError(
            f"radius {radius} above the configured bound {max_radius}")
    if radius == 0:
        yield RoundGraph(rank, 0, [()])
        return
    letters = _signed_letters(rank)

    def expand(done: list[WordTuple], frontier: list[WordTuple],
               depth: int) -> Iterator[list[WordTuple]]:
        if depth == radius:
            yield done + frontier
            return
        # Each frontier vertex picks a nonempty set of reduced extensions.
        options: list[list[tuple[WordTuple, ...]]] = []
        for w in frontier:
            kids = [w + (m,) for m in letters if m != -w[-1]]
            subsets: list[tuple[WordTuple, ...]] = []
            for size in range(1, len(kids) + 1):
                subsets.extend(combinations(kids, size))
            options.append(subsets)
        for chosen in _product(options):
            nxt = [w for group in chosen for w in group]
            yield from expand(done + frontier, nxt, depth + 1)

    for size in range(2, len(letters) + 1):
        for roots in combinations(letters, size):
            frontier = [(m,) for m in roots]
            for words in expand([()], frontier, 1):
                yield RoundGraph(rank, radius, words)


def _product(options: list[list]) -> Iterator[tuple]:
    if not options:
        yield ()
        return
    head, rest = options[0], options[1:]
    for item in head:
        for tail in _product(rest):
            yield (item,) + tail


def count_round_graphs(rank: int, radius: int) -> int:
    """Closed-form count of round-graphs at the identity.

    A vertex below the root has 2*rank - 1 reduced extensions and, while
    interior, picks a nonempty subset of them; the root picks >= 2 of its
    2*rank neighbors.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return 1
    f = 1
    for _ in range(radius - 1):
        f = (1 + f) ** (2 * rank - 1) - 1
    return (1 + f) ** (2 * rank) - 1 - 2 * rank * f


def realizable_witness(t: RoundGraph) -> CoreGraph:
    """A hull-core whose vertex 0 has local ball exactly t.

    Constructive content of the cylinder definition: the subtree is glued
    into a finite folded graph of minimum degree 2 by chaining its sphere
    leaves through fresh midpoint vertices.  Vertices of depth < radius
    keep exactly their subtree edges, so nothing new enters the root's
    radius-r neighborhood; in the universal cover the chains extend the
    leaves to rays.
    """
    if t.radius == 0 or t.rank == 1:
        # Any loop vertex works at radius 0; rank 1 admits only full balls,
        # which a bare cycle already unrolls to.
        return CoreGraph(t.rank, 1, [(0, 0, 1)], None)
    index = {w: i for i, w in enumerate(t.words)}
    edges: list[tuple[int, int, int]] = []
    used: set[tuple[int, int, str]] = set()

    def occupy(src: int, dst: int, label: int) -> None:
        edges.append((src, dst, label))
        used.add((src, label, "o"))
        used.add((dst, label, "i"))

    for w in t.words:
        if not w:
            continue
        parent, child, m = index[w[:-1]], index[w], w[-1]
        if m > 0:
            occupy(parent, child, m)
        else:
            occupy(child, parent, -m)

    leaves = [index[w] for w in t.words if len(w) == t.radius]
    count = len(t.words)
    for i, leaf in enumerate(leaves):
        nxt = leaves[(i + 1) % len(leaves)]
        mid = count
        count += 1
        # Attach mid to each endpoint through any free slot whose mirror
        # slot at mid is still open; mid starts fully free, so at most one
        # endpoint choice is ever blocked.
        for endpoint in (leaf, nxt):
            for label in range(1, t.rank + 1):
                if (endpoint, label, "o") not in used and \
                        (mid, label, "i") not in used:
                    occupy(endpoint, mid, label)
                    break
                if (endpoint, label, "i") not in used and \
                        (mid, label, "o") not in used:
                    occupy(mid, endpoint, label)
                    break
            else:
                raise AssertionError("no free slot; cannot happen for rank >= 2")
    return CoreGraph(t.rank, count, edges, None)


def local_ball(hull: CoreGraph, vertex: int, radius: int) -> RoundGraph:
    """Radius-r neighborhood of a hull-core vertex in the unrolled tree.

    Reduced label words of length <= radius traced from the vertex are
    exactly the vertices of g CH_H around the identity for the cosets
    over this quotient vertex.
    """
    if hull.is_empty:
        raise ValueError("the empty hull has no local balls")
    if hull.basepoint is not None:
        raise ValueError("local balls are read off the hull-core form")
    if not 0 <= vertex < hull.num_vertices:
        raise ValueError(f"vertex {vertex} out of range")
    words: list[WordTuple] = [()]
    frontier: list[tuple[WordTuple, int]] = [((), vertex)]
    for _ in range(radius):
        nxt: list[tuple[WordTuple, int]] = []
        for w, v in frontier:
            last = w[-1] if w else 0
            for m in _signed_letters(hull.rank):
                if m == -last:
                    continue
                nv = hull.step(v, m)
                if nv is not None:
                    nxt.append((w + (m,), nv))
        words.extend(w for (w, _v) in nxt)
        frontier = nxt
    return RoundGraph(hull.rank, radius, words)


# ---------------------------------------------------------------------------
# weight tables

RationalLike = Union[Fraction, int, str]


class WeightTable:
    """Finitely supported map RoundGraph -> nonnegative rational."""

    __slots__ = ("rank", "radius", "entries")

    def __init__(self, rank: int, radius: int,
                 entries: Mapping[RoundGraph, RationalLike] = ()):
        table: dict[RoundGraph, Fraction] = {}
        for t, value in dict(entries).items():
            if t.rank != rank or t.radius != radius:
                raise ValueError(
                    f"table key has rank {t.rank}, radius {t.radius}; "
                    f"expected {rank}, {radius}")
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"negative weight {value} for {t}")
            if value:
                table[t] = value
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "entries",
                           dict(sorted(table.items(),
                                       key=lambda kv: kv[0].sort_key())))

    def __setattr__(self, name, value):
        raise AttributeError("WeightTable is immutable")

    def __getitem__(self, t: RoundGraph) -> Fraction:
        return self.entries.get(t, Fraction(0))

    def __iter__(self) -> Iterator[RoundGraph]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeightTable)
                and self.rank == other.rank
                and self.radius == other.radius
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rank, self.radius, tuple(self.entries.items())))

    def __repr__(self) -> str:
        return (f"WeightTable(rank={self.rank}, radius={self.radius}, "
                f"{len(self.entries)} entries, total={self.total()})")

    def support(self) -> tuple[RoundGraph, ...]:
        return tuple(self.entries)

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def scale(self, c: RationalLike) -> "WeightTable":
        c = Fraction(c)
        return WeightTable(self.rank, self.radius,
                           {t: v * c for t, v in self.entries.items()})

    def add(self, other: "WeightTable") -> "WeightTable":
        if (self.rank, self.radius) != (other.rank, other.radius):
            raise ValueError("tables live at different rank or radius")
        merged = dict(self.entries)
        for t, v in other.entries.items():
            merged[t] = merged.get(t, Fraction(0)) + v
        return WeightTable(self.rank, self.radius, merged)

    def __add__(self, other: "WeightTable") -> "WeightTable":
        return self.add(other)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries.values())


class RationalCurrent:
    """Finite nonnegative-rational combination of counting currents.

    Terms with trivial subgroups are dropped: their counting current is
    the zero measure.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, terms: Iterable[tuple[RationalLike, Subgroup]],
                 rank: Optional[int] = None):
        kept: list[tuple[Fraction, Subgroup]] = []
        for coeff, sub in terms:
            coeff = Fraction(coeff)
            if coeff < 0:
                raise ValueError(f"negative coefficient {coeff}")
            if rank is None:
                rank = sub.rank
            if sub.rank != rank:
                raise BasisMismatchError(
                    f"subgroup rank {sub.rank} vs rank {rank}")
            if coeff and not sub.is_trivial():
                kept.append((coeff, sub))
        if rank is None:
            raise ValueError("rank is required for an empty current")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", tuple(kept))

    def __setattr__(self, name, value):
        raise AttributeError("RationalCurrent is immutable")

    @classmethod
    def eta(cls, sub: Subgroup) -> "RationalCurrent":
        return cls([(1, sub)], sub.rank)

    @classmethod
    def full(cls, rank: int) -> "RationalCurrent":
        return cls.eta(Subgroup.full(rank))

    def scale(self, c: RationalLike) -> "RationalCurrent":
        c = Fraction(c)
        return RationalCurrent([(c * a, s) for (a, s) in self.terms], self.rank)

    def __add__(self, other: "RationalCurrent") -> "RationalCurrent":
        if self.rank != other.rank:
            raise BasisMismatchError(f"rank {self.rank} vs rank {other.rank}")
        return RationalCurrent(self.terms + other.terms, self.rank)

    def __repr__(self) -> str:
        body = " + ".join(f"{a}*eta({s!r})" for (a, s) in self.terms)
        return f"RationalCurrent({body or '0'})"


def cylinder_table(current: RationalCurrent, radius: int,
                   max_radius: int = DEFAULT_MAX_RADIUS) -> WeightTable:
    """Exact cylinder weights of a rational current at one radius.

    Each hull-core vertex contributes its coefficient to the entry of its
    local ball; the total mass is the coefficient-weighted sum of hull
    vertex counts, independent of the radius.  Pass a larger max_radius
    to go beyond the default bound (supports stay small, but entries
    index ever larger trees).
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius > max_radius:
        raise ValueError(
            f"radius {radius} above the configured bound {max_radius}")
    table: dict[RoundGraph, Fraction] = {}
    for coeff, sub in current.terms:
        hull = sub.hull
        for v in range(hull.num_vertices):
            t = local_ball(hull, v, radius)
            table[t] = table.get(t, Fraction(0)) + coeff
    return WeightTable(current.rank, radius, table)


# ---------------------------------------------------------------------------
# matching equations and the cylinder pseudo-distance

@lru_cache(maxsize=None)
def lens_ball(rank: int, radius: int, generator: int) -> frozenset[WordTuple]:
    """Vertices of B(id, r) within distance r of the generator vertex."""
    inverse = (-generator,)
    return frozenset(
        w for w in _ball_words(rank, radius)
        if len(free_reduce(inverse + w)) <= radius)


def translate_words(words: Iterable[WordTuple], letter: int
                    ) -> frozenset[WordTuple]:
    """Left-translate a vertex set by a single signed letter."""
    return frozenset(free_reduce((letter,) + w) for w in words)


class MatchingViolation:
    """One failed matching row: generator, lens, and the two sums."""

    __slots__ = ("generator", "lens", "lhs", "rhs")

    def __init__(self, generator: int, lens: tuple[WordTuple, ...],
                 lhs: Fraction, rhs: Fraction):
        self.generator = generator
        self.lens = lens
        self.lhs = lhs
        self.rhs = rhs

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatchingViolation)
                and (self.generator, self.lens, self.lhs, self.rhs)
                == (other.generator, other.lens, other.lhs, other.rhs))

    def __repr__(self) -> str:
        lens = ",".join(word_tuple_to_text(w) for w in self.lens)
        return (f"MatchingViolation(g{self.generator}, lens={lens!r}, "
                f"{self.lhs} != {self.rhs})")


def check_matching(table: WeightTable) -> list[MatchingViolation]:
    """Verify every per-generator lens balance over the table's support.

    For generator u with lens L = B(id, r) & B(u, r), each lens class J
    must satisfy: the weight of round-graphs containing u and meeting L
    in J equals the weight of those containing u^-1 whose u-translate
    meets L in J.  Rows indexed by lenses outside both supports are 0 = 0
    and need no check.
    """
    violations: list[MatchingViolation] = []
    for gen in range(1, table.rank + 1):
        lens = lens_ball(table.rank, table.radius, gen)
        lhs: dict[tuple[WordTuple, ...], Fraction] = {}
        rhs: dict[tuple[WordTuple, ...], Fraction] = {}
        for t, value in table.entries.items():
            if (gen,) in t.word_set:
                key = _canonical_words(t.word_set & lens)
                lhs[key] = lhs.get(key, Fraction(0)) + value
            if (-gen,) in t.word_set:
                key = _canonical_words(translate_words(t.words, gen) & lens)
                rhs[key] = rhs.get(key, Fraction(0)) + value
        for key in sorted(set(lhs) | set(rhs)):
            a = lhs.get(key, Fraction(0))
            b = rhs.get(key, Fraction(0))
            if a != b:
                violations.append(MatchingViolation(gen, key, a, b))
    return violations


def distance(t1: WeightTable, t2: WeightTable) -> Fraction:
    """Sup over round-graphs of |t1 - t2|: the cylinder pseudo-distance.

    Off the union of supports both tables vanish, so the sup is attained
    on the union.
    """
    if (t1.rank, t1.radius) != (t2.rank, t2.radius):
        raise ValueError("tables live at different rank or radius")
    best = Fraction(0)
    for t in set(t1.entries) | set(t2.entries):
        gap = abs(t1[t] - t2[t])
        if gap > best:
            best = gap
    return best


# ---------------------------------------------------------------------------
# text forms

def word_tuple_to_text(w: WordTuple) -> str:
    return "e" if w == () else "".join(letter_to_char(m) for m in w)


def round_graph_to_text(t: RoundGraph) -> str:
    """Comma-separated compact words, the empty word as 'e'."""
    return ",".join(word_tuple_to_text(w) for w in t.words)


def round_graph_from_text(text: str, rank: int, radius: int) -> RoundGraph:
    words = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise FileFormatError(f"empty word token in {text!r}")
        words.append(parse_word(token, rank).letters)
    return RoundGraph(rank, radius, words)


def table_to_text(table: WeightTable) -> str:
    lines = [f"rank {table.rank}", f"radius {table.radius}"]
    for t, value in table.entries.items():
        lines.append(f"{round_graph_to_text(t)} = {value}")
    return "\n".join(lines) + "\n"


def table_from_text(text: str) -> WeightTable:
    rank = None
    radius = None
    entries: dict[RoundGraph, Fraction] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "rank" and len(parts) == 2:
            rank = int(parts[1])
            continue
        if parts[0] == "radius" and len(parts) == 2:
            radius = int(parts[1])
            continue
        if rank is None or radius is None:
            raise FileFormatError("table entries before rank/radius header")
        if "=" not in line:
            raise FileFormatError(f"malformed table line {line!r}")
        graph_part, value_part = line.split("=", 1)
        try:
            value = Fraction(value_part.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FileFormatError(f"bad rational {value_part!r}") from exc
        try:
            key = round_graph_from_text(graph_part.strip(), rank, radius)
        except ValueError as exc:
            raise FileFormatError(f"bad round-graph {graph_part!r}: {exc}") \
                from exc
        entries[key] = entries.get(key, Fraction(0)) + value
    if rank is None or radius is None:
        raise FileFormatError("missing rank/radius header")
    return WeightTable(rank, radius, entries)


def read_table(path) -> WeightTable:
    with open(path, "r", encoding="utf-8") as fh:
        return table_from_text(fh.read())


def write_table(table: WeightTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(table_to_text(table))
