"""Integral weight realization: admissible integer tables as SC-graphs.

An admissible weight system assigns a nonnegative integer to every
round-graph at a fixed radius, satisfying the per-generator lens balance
equations.  The realization builds the quotient graph with theta(T)
copies of each round-graph as vertices and, per generator and lens
class, a positional bijection between the side containing the generator
and the side containing its inverse.  Components of the quotient are
hull-cores of subgroups; the sum of their counting currents evaluates on
cylinders to exactly the input weights.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import AdmissibilityError
from .cylinders import (DEFAULT_MAX_RADIUS, RationalCurrent, RoundGraph,
                        WeightTable, WordTuple, _canonical_words,
                        check_matching, cylinder_table,
                        enumerate_round_graphs, lens_ball, translate_words)
from .stallings import CoreGraph, Subgroup, canonical_form

LensKey = tuple[WordTuple, ...]


class WeightSystem:
    """An integer-valued admissible weight table with positive support."""

    __slots__ = ("table",)

    def __init__(self, table: WeightTable):
        if not table.is_integral():
            raise ValueError("weight system entries must be integers")
        if len(table) == 0:
            raise ValueError("weight system needs at least one positive weight")
        violations = check_matching(table)
        if violations:
            first = violations[0]
            raise AdmissibilityError(first.generator, first.lens,
                                     first.lhs, first.rhs)
        object.__setattr__(self, "table", table)

    def __setattr__(self, name, value):
        raise AttributeError("WeightSystem is immutable")

    @classmethod
    def from_entries(cls, rank: int, radius: int,
                     weights: Mapping[RoundGraph, int]) -> "WeightSystem":
        return cls(WeightTable(rank, radius, weights))

    @property
    def rank(self) -> int:
        return self.table.rank

    @property
    def radius(self) -> int:
        return self.table.radius

    def weight(self, t: RoundGraph) -> int:
        return int(self.table[t])

    def total(self) -> int:
        return int(self.table.total())

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightSystem) and self.table == other.table

    def __repr__(self) -> str:
        return f"WeightSystem({self.table!r})"


class MatchingSystem:
    """The lens-balance equations as an integer matrix over round-graphs.

    Row (u, J) carries +1 on columns T with u in T and T-meet-lens = J,
    and -1 on columns T with u^-1 in T whose u-translate meets the lens
    in J; a column satisfying both conditions nets to 0.  Admissible
    vectors are exactly the nonnegative kernel points.
    """

    __slots__ = ("rank", "radius", "columns", "column_index", "rows")

    def __init__(self, rank: int, radius: int,
                 columns: Sequence[RoundGraph]):
        columns = tuple(sorted(columns, key=lambda t: t.sort_key()))
        index = {t: j for j, t in enumerate(columns)}
        rows: dict[tuple[int, LensKey], dict[int, int]] = {}
        for j, t in enumerate(columns):
            for gen in range(1, rank + 1):
                lens = lens_ball(rank, radius, gen)
                if (gen,) in t.word_set:
                    key = (gen, _canonical_words(t.word_set & lens))
                    row = rows.setdefault(key, {})
                    row[j] = row.get(j, 0) + 1
                if (-gen,) in t.word_set:
                    key = (gen,
                           _canonical_words(translate_words(t.words, gen) & lens))
                    row = rows.setdefault(key, {})
                    row[j] = row.get(j, 0) - 1
        cleaned = []
        for key in sorted(rows):
            entries = {j: c for j, c in rows[key].items() if c}
            if entries:
                cleaned.append((key, entries))
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "column_index", index)
        object.__setattr__(self, "rows", tuple(cleaned))

    def __setattr__(self, name, value):
        raise AttributeError("MatchingSystem is immutable")

    def matrix(self) -> list[list[int]]:
        out = []
        for _key, entries in self.rows:
            row = [0] * len(self.columns)
            for j, c in entries.items():
                row[j] = c
            out.append(row)
        return out

    def vector_of(self, table: WeightTable) -> list[Fraction]:
        """The table as a coordinate vector over this system's columns."""
        if any(t not in self.column_index for t in table.support()):
            raise ValueError("table support is not covered by the columns")
        vec = [Fraction(0)] * len(self.columns)
        for t in table.support():
            vec[self.column_index[t]] = table[t]
        return vec

    def residuals(self, table: WeightTable) -> list[Fraction]:
        """Row values A.x for the table's coordinate vector."""
        vec = self.vector_of(table)
        return [sum((c * vec[j] for j, c in entries.items()), Fraction(0))
                for _key, entries in self.rows]

    def __repr__(self) -> str:
        return (f"MatchingSystem(rank={self.rank}, radius={self.radius}, "
                f"{len(self.rows)} rows x {len(self.columns)} columns)")


def matching_system(rank: int, radius: int,
                    max_radius: int = DEFAULT_MAX_RADIUS) -> MatchingSystem:
    """The full system over every round-graph at this radius."""
    columns = list(enumerate_round_graphs(rank, radius, max_radius))
    return MatchingSystem(rank, radius, columns)


def support_system(rank: int, radius: int,
                   support: Iterable[RoundGraph]) -> MatchingSystem:
    """The system restricted to the given columns.

    A vector supported on these columns lies in the full kernel iff it
    lies in this restricted kernel: rows not meeting the support vanish
    on it identically.
    """
    return MatchingSystem(rank, radius, tuple(support))


class SCGraphQuotient:
    """Quotient of a realized SC-graph: theta(T) copies of each T, with a
    labeled matching per generator.  Immersed over the rose, minimum
    degree 2."""

    __slots__ = ("rank", "radius", "vertices", "edges", "components")

    def __init__(self, rank: int, radius: int,
                 vertices: Sequence[tuple[RoundGraph, int]],
                 edges: Iterable[tuple[int, int, int]]):
        vertices = tuple(vertices)
        edges = tuple(sorted(edges))
        n = len(vertices)
        out: set[tuple[int, int]] = set()
        inc: set[tuple[int, int]] = set()
        degree = [0] * n
        for (s, d, l) in edges:
            if not (0 <= s < n and 0 <= d < n and 1 <= l <= rank):
                raise ValueError(f"bad edge {(s, d, l)}")
            if (s, l) in out or (d, l) in inc:
                raise ValueError(f"not an immersion at edge {(s, d, l)}")
            out.add((s, l))
            inc.add((d, l))
            degree[s] += 1
            degree[d] += 1
        for i, (t, _copy) in enumerate(vertices):
            if radius >= 1:
                for gen in range(1, rank + 1):
                    if ((i, gen) in out) != ((gen,) in t.word_set):
                        raise ValueError(
                            f"vertex {i} disagrees with its round-graph on "
                            f"generator {gen}")
                    if ((i, gen) in inc) != ((-gen,) in t.word_set):
                        raise ValueError(
                            f"vertex {i} disagrees with its round-graph on "
                            f"inverse generator {gen}")
            if degree[i] < 2:
                raise ValueError(f"vertex {i} has degree {degree[i]} < 2")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "components", _components(n, edges))

    def __setattr__(self, name, value):
        raise AttributeError("SCGraphQuotient is immutable")

    def __repr__(self) -> str:
        return (f"SCGraphQuotient(rank={self.rank}, radius={self.radius}, "
                f"{len(self.vertices)} vertices, "
                f"{len(self.components)} components)")

    def component_graph(self, index: int) -> CoreGraph:
        """One component as a hull-core graph."""
        comp = self.components[index]
        ids = {v: k for k, v in enumerate(comp)}
        edges = [(ids[s], ids[d], l) for (s, d, l) in self.edges
                 if s in ids]
        return CoreGraph(self.rank, len(comp), edges, None)


def _components(n: int, edges: Sequence[tuple[int, int, int]]
                ) -> tuple[tuple[int, ...], ...]:
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for (s, d, _l) in edges:
        adj[s].append(d)
        adj[d].append(s)
    seen: set[int] = set()
    comps = []
    for v in range(n):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        i = 0
        while i < len(comp):
            for w in adj[comp[i]]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
            i += 1
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def realize(theta: WeightSystem) -> SCGraphQuotient:
    """Build the quotient SC-graph realizing an admissible weight system.

    Vertices are (T, i) for i = 1..theta(T).  For each generator u and
    lens class J, the vertices whose round-graph contains u and meets the
    lens in J are matched positionally (both sides sorted by canonical
    key, then copy index) with those whose round-graph contains u^-1 and
    whose u-translate meets the lens in J; each matched pair gets a
    u-edge.  The balance equations make the two sides equinumerous, so
    the matching is total; the output is identical across runs.

    At radius 0 the only round-graph is the bare root and carries no
    matching constraints; each copy becomes a single vertex with a loop
    of the first generator, realizing the weight as copies of a cyclic
    subgroup's current.
    """
    table = theta.table
    violations = check_matching(table)
    if violations:
        first = violations[0]
        raise AdmissibilityError(first.generator, first.lens,
                                 first.lhs, first.rhs)
    vertices: list[tuple[RoundGraph, int]] = []
    for t in table.support():
        for i in range(1, theta.weight(t) + 1):
            vertices.append((t, i))
    index = {v: k for k, v in enumerate(vertices)}
    edges: list[tuple[int, int, int]] = []
    if theta.radius == 0:
        edges = [(k, k, 1) for k in range(len(vertices))]
        return SCGraphQuotient(theta.rank, 0, vertices, edges)
    for gen in range(1, theta.rank + 1):
        lens = lens_ball(theta.rank, theta.radius, gen)
        out_side: dict[LensKey, list[tuple[RoundGraph, int]]] = {}
        in_side: dict[LensKey, list[tuple[RoundGraph, int]]] = {}
        for v in vertices:
            t = v[0]
            if (gen,) in t.word_set:
                key = _canonical_words(t.word_set & lens)
                out_side.setdefault(key, []).append(v)
            if (-gen,) in t.word_set:
                key = _canonical_words(translate_words(t.words, gen) & lens)
                in_side.setdefault(key, []).append(v)
        for key in sorted(set(out_side) | set(in_side)):
            sources = out_side.get(key, [])
            targets = in_side.get(key, [])
            if len(sources) != len(targets):
                raise AdmissibilityError(gen, key,
                                         Fraction(len(sources)),
                                         Fraction(len(targets)))
            edges.extend((index[s], index[d], gen)
                         for s, d in zip(sources, targets))
    return SCGraphQuotient(theta.rank, theta.radius, vertices, edges)


def decompose(quotient: SCGraphQuotient) -> RationalCurrent:
    """One counting current per component of the quotient.

    Each component is a hull-core; its subgroup is read off a
    spanning-tree basis at the vertex of least canonical signature.
    Reading a different basepoint would change the subgroup only within
    its conjugacy class, which counting currents do not see.
    """
    terms = []
    for k in range(len(quotient.components)):
        hull = canonical_form(quotient.component_graph(k))
        core = CoreGraph(hull.rank, hull.num_vertices, hull.edges, 0)
        terms.append((Fraction(1), Subgroup.from_core(core)))
    return RationalCurrent(terms, quotient.rank)


def verify_realization(theta: WeightSystem, current: RationalCurrent) -> bool:
    """True iff the current's cylinder table equals theta entrywise."""
    return cylinder_table(current, theta.radius) == theta.table
