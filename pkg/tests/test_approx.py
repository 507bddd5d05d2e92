import random
from fractions import Fraction

import pytest

from subsetcurrents import (KernelProblem, RationalCurrent, Subgroup,
                            approximate_table, check_matching,
                            convergence_run, cylinder_table, finite_index,
                            full_ball, integerize, nullspace_basis,
                            rational_kernel_point, rationalize, realize,
                            decompose, subgroup_Gn, subgroup_Hn,
                            support_system, verify_realization)
from subsetcurrents.cylinders import WeightTable, table_from_text
from subsetcurrents.errors import InfeasibleKernelError
from subsetcurrents.realize import matching_system

from helpers import random_current


def test_rationalize():
    assert rationalize(0.5) == Fraction(1, 2)
    assert rationalize(1 / 3) == Fraction(1, 3)
    assert rationalize(Fraction(7, 11)) == Fraction(7, 11)
    assert rationalize(2) == 2
    assert rationalize(0.0) == 0


def test_kernel_problem_validation():
    with pytest.raises(ValueError):
        KernelProblem([[1, 0]], [1], 1)  # width mismatch
    with pytest.raises(ValueError):
        KernelProblem([[1]], [-1], 1)  # negative target
    with pytest.raises(ValueError):
        KernelProblem([[1]], [1], 0)  # zero tolerance


def test_nullspace_basis_small_cases():
    basis = nullspace_basis([[1, -1]], 2)
    assert len(basis) == 1 and basis[0][0] == basis[0][1]
    assert nullspace_basis([[1, 0], [0, 1]], 2) == []
    identity_kernel = nullspace_basis([], 3)
    assert len(identity_kernel) == 3


def test_kernel_point_passthrough_when_already_in_kernel():
    problem = KernelProblem([[1, -1, 0]],
                            [Fraction(2, 3), Fraction(2, 3), Fraction(1, 5)],
                            Fraction(1, 1000))
    assert rational_kernel_point(problem) == (Fraction(2, 3), Fraction(2, 3),
                                              Fraction(1, 5))


def test_kernel_point_zero_matrix():
    problem = KernelProblem([], [Fraction(1, 7), Fraction(0)],
                            Fraction(1, 10))
    assert rational_kernel_point(problem) == (Fraction(1, 7), Fraction(0))


def test_kernel_point_projects_perturbed_current_table():
    # the cylinder vector of eta_<xy> at r=1, nudged off the kernel
    sub = Subgroup(["xy"], 2)
    table = cylinder_table(RationalCurrent.eta(sub), 1)
    system = support_system(2, 1, table.support())
    target = system.vector_of(table)
    target[0] += Fraction(1, 10 ** 9)
    problem = KernelProblem(system.matrix(), target, Fraction(1, 1000))
    v = rational_kernel_point(problem)
    for row in system.matrix():
        assert sum(c * x for c, x in zip(row, v)) == 0
    assert all(x >= 0 for x in v)
    assert max(abs(a - b) for a, b in zip(v, target)) < Fraction(1, 1000)
    assert v[0] == v[1] == 1 + Fraction(1, 2 * 10 ** 9)


def test_kernel_point_float_derived_mixture():
    # float-derived (1/3) * (eta_F + 2 * eta_<x>) at r = 1
    full = RationalCurrent.full(2)
    ex = RationalCurrent.eta(Subgroup(["x"], 2))
    exact = cylinder_table(full + ex.scale(2), 1).scale(Fraction(1, 3))
    floats = WeightTable(2, 1, {t: rationalize(float(v))
                                for t, v in exact.entries.items()})
    system = support_system(2, 1, floats.support())
    problem = KernelProblem(system.matrix(), system.vector_of(floats),
                            Fraction(1, 1000))
    v = rational_kernel_point(problem)
    assert list(v) == system.vector_of(exact)


def test_kernel_point_preserves_zero_coordinates():
    problem = KernelProblem([[1, -1, 0], [0, 0, 1]],
                            [Fraction(1), Fraction(1), Fraction(0)],
                            Fraction(1, 100))
    v = rational_kernel_point(problem)
    assert v[2] == 0


def test_kernel_point_infeasible():
    problem = KernelProblem([[1]], [Fraction(1)], Fraction(1, 1000))
    with pytest.raises(InfeasibleKernelError):
        rational_kernel_point(problem)


def test_integerize_examples():
    ex = cylinder_table(RationalCurrent.eta(Subgroup(["x"], 2)), 1)
    theta, scale = integerize(ex)
    assert scale == 1 and theta.table == ex
    half_full = cylinder_table(RationalCurrent.full(2), 1).scale(
        Fraction(1, 2))
    theta, scale = integerize(half_full)
    assert scale == 2
    assert theta.table == cylinder_table(RationalCurrent.full(2), 1)
    mixed = cylinder_table(
        RationalCurrent.full(2).scale(Fraction(1, 3))
        + RationalCurrent.eta(Subgroup(["x"], 2)).scale(Fraction(1, 4)), 1)
    _theta, scale = integerize(mixed)
    assert scale == 12


def test_approximate_table_pipeline():
    text = ("rank 2\nradius 1\n"
            "e,x,Y = 0.3333333333\n"
            "e,X,y = 0.3333333334\n"
            "e,x,X,y,Y = 0.25\n")
    table = table_from_text(text)
    theta, scale, exact = approximate_table(table, Fraction(1, 1000))
    assert check_matching(exact) == []
    assert check_matching(theta.table) == []
    assert theta.table == exact.scale(scale)
    assert verify_realization(theta, decompose(realize(theta)))


def test_approximate_table_accepts_exact_current_tables():
    rng = random.Random(2)
    for _ in range(5):
        table = cylinder_table(random_current(rng), 1)
        theta, scale, exact = approximate_table(table, Fraction(1, 10 ** 6))
        assert exact == table
        assert theta.table == table.scale(scale)


def test_subgroup_Hn_structure():
    h2 = subgroup_Hn(2)
    assert [str(w) for w in h2.generators] == ["yy", "yxY"]
    assert h2.reduced_rank() == 1
    assert subgroup_Hn(3).reduced_rank() == 2
    for n in range(2, 9):
        hn = subgroup_Hn(n)
        assert hn.hull.num_vertices == n
        assert hn.reduced_rank() == n - 1
        # y-cycle with x-loops at all vertices but one
        x_loops = sum(1 for (s, d, l) in hn.hull.edges if s == d and l == 1)
        y_edges = sum(1 for (_s, _d, l) in hn.hull.edges if l == 2)
        assert x_loops == n - 1 and y_edges == n
    with pytest.raises(ValueError):
        subgroup_Hn(1)


def test_subgroup_Gn_structure():
    for n in (2, 3, 5):
        gn = subgroup_Gn(n)
        assert finite_index(gn.core) == n
        assert gn.reduced_rank() == n
        for w in subgroup_Hn(n).generators:
            assert gn.contains(w)
    with pytest.raises(ValueError):
        subgroup_Gn(1)


def test_Gn_table_is_n_times_full_ball():
    for n in (2, 3, 4):
        gn = subgroup_Gn(n)
        for r in (0, 1, 2):
            table = cylinder_table(RationalCurrent.eta(gn), r)
            assert table.entries == {full_ball(2, r): Fraction(n)}


def test_convergence_run_values():
    assert [d for _n, d in convergence_run(0, [2, 4, 8, 16])] == [0, 0, 0, 0]
    assert convergence_run(1, [2, 4, 8, 16]) == [
        (2, Fraction(1, 2)), (4, Fraction(1, 4)),
        (8, Fraction(1, 8)), (16, Fraction(1, 16))]
    assert convergence_run(2, [2, 4, 8, 16]) == [
        (2, Fraction(1)), (4, Fraction(3, 4)),
        (8, Fraction(3, 8)), (16, Fraction(3, 16))]


def test_convergence_monotone_under_doubling():
    for r in (1, 2):
        values = dict(convergence_run(r, [2, 4, 8, 16]))
        for n in (2, 4, 8):
            assert values[2 * n] < values[n]


def test_convergence_scaling_factor():
    for r in (1, 2):
        values = dict(convergence_run(r, [2, 16]))
        k2 = 2 * values[2]
        k16 = 16 * values[16]
        assert k16 <= 2 * k2 and k2 <= 2 * k16


def test_mass_identity_for_scaled_Hn():
    for n in (2, 5, 9):
        scaled = RationalCurrent([(Fraction(1, n), subgroup_Hn(n))], 2)
        for r in (0, 1):
            assert cylinder_table(scaled, r).total() == 1


def test_integerized_kernel_points_feed_realize():
    rng = random.Random(31)
    for _ in range(5):
        table = cylinder_table(random_current(rng), 1)
        system = support_system(2, 1, table.support())
        problem = KernelProblem(system.matrix(), system.vector_of(table),
                                Fraction(1, 1000))
        v = rational_kernel_point(problem)
        repaired = WeightTable(2, 1, {t: v[j]
                                      for j, t in enumerate(system.columns)})
        theta, _scale = integerize(repaired)
        assert verify_realization(theta, decompose(realize(theta)))


def test_full_matching_system_residuals_at_r2():
    table = cylinder_table(RationalCurrent.eta(Subgroup(["xy", "yxY"], 2)), 2)
    ms = matching_system(2, 2)
    assert all(x == 0 for x in ms.residuals(table))
