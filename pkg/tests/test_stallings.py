import random
from itertools import product

import pytest

from subsetcurrents import (CoreGraph, LabeledGraph, Subgroup, basis_of,
                            canonical_form, concat, conjugate, contains,
                            core_from_generators, finite_index, fold,
                            graph_from_text, graph_to_text, hull_core, invert,
                            label_isomorphic, parse_word, random_cover,
                            random_finite_cover, reduce, reduced_rank,
                            subgroup_from_text, write_subgroup, read_subgroup)
from subsetcurrents.errors import FileFormatError
from subsetcurrents.stallings import subgroup_to_text

from helpers import random_subgroup, random_word

ROSE = core_from_generators(["x", "y"], 2)
DOUBLE_COVER = CoreGraph(2, 2, [(0, 1, 1), (1, 0, 1), (0, 0, 2), (1, 1, 2)], 0)


def brute_fold(num_vertices, edges):
    """Independent folding oracle: rescan and merge one pair at a time.

    Finds any vertex with two same-label edges in the same direction and
    rewrites the whole edge list identifying the two far endpoints.
    """
    edges = set(edges)
    while True:
        outgoing, incoming = {}, {}
        merge = None
        for (s, d, l) in sorted(edges):
            if (s, l) in outgoing and outgoing[(s, l)] != d:
                merge = (outgoing[(s, l)], d)
                break
            outgoing[(s, l)] = d
            if (d, l) in incoming and incoming[(d, l)] != s:
                merge = (incoming[(d, l)], s)
                break
            incoming[(d, l)] = s
        if merge is None:
            return edges
        keep, drop = min(merge), max(merge)
        edges = {(keep if s == drop else s, keep if d == drop else d, l)
                 for (s, d, l) in edges}


def as_core(rank, edges, basepoint):
    vertices = sorted({v for (s, d, _l) in edges for v in (s, d)} | {basepoint})
    ids = {v: i for i, v in enumerate(vertices)}
    return CoreGraph(rank, len(vertices),
                     [(ids[s], ids[d], l) for (s, d, l) in edges],
                     ids[basepoint])


def test_core_examples():
    c = core_from_generators(["x"], 2)
    assert (c.num_vertices, c.num_edges) == (1, 1)
    assert (ROSE.num_vertices, ROSE.num_edges) == (1, 2)
    c = core_from_generators(["xy", "xY"], 2)
    assert (c.num_vertices, c.num_edges) == (2, 3)
    expected = CoreGraph(2, 2, [(0, 1, 1), (1, 0, 2), (0, 1, 2)], 0)
    assert label_isomorphic(c, expected)


def test_core_of_empty_generator_list():
    c = core_from_generators([], 2)
    assert (c.num_vertices, c.num_edges) == (1, 0)
    assert contains(c, "e")
    assert not contains(c, "x")


def test_fold_is_idempotent_on_folded_input():
    refolded = fold(LabeledGraph(2, ROSE.num_vertices, ROSE.edges,
                                 ROSE.basepoint))
    assert refolded == ROSE


def test_fold_merges_parallel_loops():
    g = LabeledGraph(2, 1, [(0, 0, 1), (0, 0, 1)], 0)
    c = fold(g)
    assert (c.num_vertices, c.num_edges) == (1, 1)


def test_fold_agrees_with_brute_oracle():
    rng = random.Random(42)
    for _ in range(60):
        g = LabeledGraph(2)
        base = g.add_vertex()
        g.basepoint = base
        for _ in range(rng.randint(1, 3)):
            g.add_loop_word(base, random_word(rng, 2, 5))
        expected = as_core(2, brute_fold(g.num_vertices, g.edges), base)
        assert label_isomorphic(fold(g), expected)


def test_fold_preserves_basepoint_loop_labels():
    rng = random.Random(53)
    for _ in range(30):
        g = LabeledGraph(2)
        base = g.add_vertex()
        g.basepoint = base
        words = [random_word(rng, 2, 5) for _ in range(rng.randint(1, 3))]
        for w in words:
            g.add_loop_word(base, w)
        folded = fold(g)
        for w in words:
            assert contains(folded, w)


def test_fold_is_confluent_under_edge_order():
    rng = random.Random(7)
    for _ in range(30):
        g = LabeledGraph(2)
        base = g.add_vertex()
        g.basepoint = base
        for _ in range(rng.randint(1, 3)):
            g.add_loop_word(base, random_word(rng, 2, 4))
        reference = fold(g)
        shuffled = list(g.edges)
        rng.shuffle(shuffled)
        assert label_isomorphic(fold(LabeledGraph(2, g.num_vertices, shuffled,
                                                  base)), reference)


def test_hull_core_examples():
    tail = core_from_generators(["xyX"], 2)
    hull = hull_core(tail)
    assert label_isomorphic(hull, CoreGraph(2, 1, [(0, 0, 2)], None))
    assert label_isomorphic(hull_core(ROSE),
                            CoreGraph(2, 1, [(0, 0, 1), (0, 0, 2)], None))
    assert hull_core(core_from_generators([], 2)).is_empty


def test_hull_core_is_idempotent():
    rng = random.Random(3)
    for _ in range(30):
        h = random_subgroup(rng).hull
        assert hull_core(h) == h


def test_contains_examples():
    cx = core_from_generators(["x"], 2)
    assert contains(cx, "xx")
    assert not contains(cx, "y")
    c = core_from_generators(["xy", "xY"], 2)
    assert contains(c, "xyyX")  # (xy)(xY)^-1


def test_contains_bfs_products_oracle():
    gens = [parse_word(s, 2) for s in ("xy", "xY")]
    elements = {reduce([], 2)}
    for k in range(1, 4):
        for combo in product([1, -1, 2, -2], repeat=k):
            w = reduce([], 2)
            for c in combo:
                g = gens[abs(c) - 1]
                w = concat(w, g if c > 0 else invert(g))
            elements.add(w)
    c = core_from_generators(["xy", "xY"], 2)
    for w in elements:
        assert contains(c, w)


def test_contains_agrees_with_core_isomorphism_oracle():
    # w is in H iff adjoining w to the generators leaves the core unchanged.
    rng = random.Random(11)
    for _ in range(25):
        sub = random_subgroup(rng, max_gens=3, max_len=4)
        for _ in range(6):
            w = random_word(rng, 2, 4)
            enlarged = core_from_generators(list(sub.generators) + [w], 2)
            assert contains(sub.core, w) == label_isomorphic(sub.core,
                                                             enlarged)


def test_contains_accepts_short_generator_products():
    rng = random.Random(16)
    for _ in range(15):
        sub = random_subgroup(rng, max_gens=3, max_len=4)
        gens = sub.generators
        for combo in product(range(-len(gens), len(gens) + 1), repeat=3):
            w = reduce([], 2)
            for c in combo:
                if c:
                    g = gens[abs(c) - 1]
                    w = concat(w, g if c > 0 else invert(g))
            assert sub.contains(w)


def test_reduced_rank_examples():
    assert reduced_rank(ROSE) == 1
    assert reduced_rank(core_from_generators(["x"], 2)) == 0
    assert reduced_rank(core_from_generators([], 2)) == 0
    assert reduced_rank(hull_core(core_from_generators([], 2))) == 0


def test_finite_index_examples():
    assert finite_index(ROSE) == 1
    assert finite_index(core_from_generators(["x"], 2)) is None
    assert finite_index(DOUBLE_COVER) == 2


def test_finite_index_against_coset_enumeration():
    # Count right cosets Hw among all short words, using membership only.
    sub = Subgroup.from_core(DOUBLE_COVER)
    representatives = []
    for length in range(5):
        for combo in product([1, -1, 2, -2], repeat=length):
            w = reduce(combo, 2)
            if all(not sub.contains(concat(w, invert(r)))
                   for r in representatives):
                representatives.append(w)
    assert len(representatives) == 2


def test_conjugate_examples():
    cy = core_from_generators(["y"], 2)
    assert label_isomorphic(conjugate(cy, "x"),
                            core_from_generators(["xyX"], 2))
    assert conjugate(cy, "e") == cy
    assert label_isomorphic(hull_core(conjugate(cy, "x")), hull_core(cy))


def test_conjugate_hull_invariance_randomized():
    rng = random.Random(19)
    for _ in range(40):
        sub = random_subgroup(rng)
        g = random_word(rng, 2, 4)
        assert label_isomorphic(hull_core(conjugate(sub.core, g)), sub.hull)


def test_conjugate_membership():
    rng = random.Random(23)
    for _ in range(20):
        sub = random_subgroup(rng, max_gens=2, max_len=4)
        g = random_word(rng, 2, 3)
        moved = conjugate(sub.core, g)
        w = random_word(rng, 2, 4)
        assert contains(moved, concat(concat(g, w), invert(g))) == \
            contains(sub.core, w)


def test_random_finite_cover_examples():
    assert label_isomorphic(random_finite_cover(2, 1, seed=5), ROSE)
    c = random_finite_cover(2, 2, seed=9)
    assert finite_index(c) == 2
    for degree in range(1, 9):
        for rank in (2, 3):
            c = random_finite_cover(rank, degree, seed=degree * 10 + rank)
            assert finite_index(c) == degree
            assert reduced_rank(c) == degree * (rank - 1)


def test_random_finite_cover_is_deterministic():
    assert random_finite_cover(2, 5, seed=77) == random_finite_cover(2, 5,
                                                                     seed=77)


def test_random_cover_index_and_membership():
    rng = random.Random(31)
    for i in range(10):
        sub = random_subgroup(rng, max_gens=2, max_len=4)
        cover = random_cover(sub.core, 3, seed=i)
        lifted = Subgroup.from_core(cover)
        # H' is a subgroup of H: every generator word of H' lies in H.
        for w in lifted.generators:
            assert sub.contains(w)


def test_basis_of_examples():
    assert sorted(w.letters for w in basis_of(ROSE)) == [(1,), (2,)]
    assert [w.letters for w in basis_of(core_from_generators(["x"], 2))] == \
        [(1,)]
    words = basis_of(DOUBLE_COVER)
    assert len(words) == 3  # Schreier: 2 * (2 - 1) + 1
    for w in words:
        assert contains(DOUBLE_COVER, w)
    rebuilt = core_from_generators(words, 2)
    assert label_isomorphic(rebuilt, DOUBLE_COVER)


def test_basis_of_size_matches_rank():
    rng = random.Random(13)
    for _ in range(30):
        sub = random_subgroup(rng)
        core = sub.core
        words = basis_of(core)
        assert len(words) == core.num_edges - (core.num_vertices - 1)
        assert label_isomorphic(core_from_generators(words, 2), core)


def test_core_graph_validation():
    with pytest.raises(ValueError):
        CoreGraph(2, 2, [(0, 0, 1), (0, 1, 1)], 0)  # not folded
    with pytest.raises(ValueError):
        CoreGraph(2, 2, [(0, 0, 1), (1, 1, 2)], 0)  # disconnected
    with pytest.raises(ValueError):
        CoreGraph(2, 2, [(0, 1, 1)], 0)  # dangling non-basepoint vertex
    with pytest.raises(ValueError):
        CoreGraph(2, 1, [(0, 0, 3)], 0)  # label out of range


def test_canonical_form_stability():
    rng = random.Random(37)
    for _ in range(20):
        sub = random_subgroup(rng)
        canon = canonical_form(sub.core)
        assert label_isomorphic(canon, sub.core)
        assert canonical_form(canon) == canon


def test_subgroup_file_roundtrip(tmp_path):
    sub = Subgroup(["xy", "xY"], 2)
    path = tmp_path / "sub.txt"
    write_subgroup(sub, path)
    again = read_subgroup(path)
    assert again.rank == 2
    assert again.equals(sub)
    text = "# a comment\nrank 2\nxy # trailing\n\nxY\n"
    assert subgroup_from_text(text).equals(sub)
    assert "rank 2" in subgroup_to_text(sub)


def test_subgroup_file_errors():
    with pytest.raises(FileFormatError):
        subgroup_from_text("xy\nxY\n")  # missing header
    with pytest.raises(FileFormatError):
        subgroup_from_text("rank two\nxy\n")


def test_graph_text_roundtrip():
    rng = random.Random(41)
    for _ in range(10):
        core = random_subgroup(rng).core
        again = graph_from_text(graph_to_text(core))
        assert again == core
    hull = random_subgroup(rng).hull
    assert graph_from_text(graph_to_text(hull)) == hull


def test_graph_text_errors():
    with pytest.raises(FileFormatError):
        graph_from_text("vertices 1\n")
    with pytest.raises(FileFormatError):
        graph_from_text("rank 2\nvertices 2\nbasepoint 0\nedge 0 1 q1\n")
    with pytest.raises(FileFormatError):
        graph_from_text("rank 2\nvertices 2\nbasepoint 0\nedge 0 1 g1\n"
                        "edge 0 1 g1\n")
