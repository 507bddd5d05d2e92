"""Rational approximation in the matching kernel and the H_n experiment.

The matching equations form an integer homogeneous system; any
nonnegative real solution can be approximated, coordinate support
preserved, by a nonnegative rational solution.  This module does that
exactly: fraction-free elimination produces a rational kernel basis, the
target is projected orthogonally onto the kernel, and coordinates forced
negative are zeroed inductively (they can only be noise below the
tolerance).  Scaling by the least common denominator then yields an
admissible integer weight system.

The second half builds the rank-2 subgroup families G_n (index n,
generated by x, y^n and the conjugates y^i x y^-i) and H_n (the same
without x) and measures the cylinder distance from (1/n) eta_{H_n} to
eta_F, which shrinks like 1/n.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from .errors import InfeasibleKernelError
from .cylinders import (RationalCurrent, WeightTable, cylinder_table,
                        distance)
from .realize import WeightSystem, support_system
from .stallings import Subgroup
from .words import Word

Rational = Union[Fraction, int]

FLOAT_DENOMINATOR_BOUND = 10 ** 6


def rationalize(value, bound: int = FLOAT_DENOMINATOR_BOUND) -> Fraction:
    """Snap a float to a nearby small-denominator rational; exact inputs
    (int, Fraction, decimal string) pass through limit_denominator too,
    which leaves them unchanged when already small."""
    return Fraction(value).limit_denominator(bound)


def rationalize_table(table: WeightTable,
                      bound: int = FLOAT_DENOMINATOR_BOUND) -> WeightTable:
    return WeightTable(table.rank, table.radius,
                       {t: rationalize(v, bound)
                        for t, v in table.entries.items()})


class KernelProblem:
    """Find a nonnegative rational kernel point near a target vector."""

    __slots__ = ("matrix", "target", "tolerance")

    def __init__(self, matrix: Iterable[Iterable[int]],
                 target: Iterable[Rational], tolerance: Rational):
        matrix = tuple(tuple(int(c) for c in row) for row in matrix)
        target = tuple(Fraction(x) for x in target)
        tolerance = Fraction(tolerance)
        width = len(target)
        for row in matrix:
            if len(row) != width:
                raise ValueError("matrix width disagrees with target length")
        if any(x < 0 for x in target):
            raise ValueError("target must be nonnegative")
        if tolerance <= 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "tolerance", tolerance)

    def __setattr__(self, name, value):
        raise AttributeError("KernelProblem is immutable")

    def __repr__(self) -> str:
        return (f"KernelProblem({len(self.matrix)} rows x "
                f"{len(self.target)} cols, eps={self.tolerance})")


def _bareiss_echelon(matrix: Sequence[Sequence[int]]
                     ) -> tuple[list[list[int]], list[int]]:
    """Fraction-free integer row echelon; returns rows and pivot columns."""
    mat = [list(row) for row in matrix]
    m = len(mat)
    n = len(mat[0]) if mat else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                mat[i][j] = (mat[r][c] * mat[i][j]
                             - mat[i][c] * mat[r][j]) // prev
            mat[i][c] = 0
        prev = mat[r][c]
        pivots.append(c)
        r += 1
    return mat[:r], pivots


def nullspace_basis(matrix: Sequence[Sequence[int]], width: int
                    ) -> list[list[Fraction]]:
    """Rational basis of the kernel, one vector per free column."""
    if not matrix:
        return [[Fraction(i == j) for j in range(width)]
                for i in range(width)]
    echelon, pivots = _bareiss_echelon(matrix)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * width
        vec[f] = Fraction(1)
        for k in reversed(range(len(pivots))):
            c = pivots[k]
            row = echelon[k]
            s = sum((row[j] * vec[j] for j in range(c + 1, width)
                     if row[j]), Fraction(0))
            vec[c] = -s / row[c]
        basis.append(vec)
    return basis


def _solve_rational(gram: list[list[Fraction]], rhs: list[Fraction]
                    ) -> list[Fraction]:
    """Gaussian elimination for a square nonsingular rational system."""
    n = len(gram)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(gram)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                factor = aug[i][c]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def _project_onto_kernel(basis: list[list[Fraction]],
                         target: Sequence[Fraction]) -> list[Fraction]:
    """Orthogonal projection of the target onto the kernel span, exactly."""
    k = len(basis)
    gram = [[sum((basis[a][i] * basis[b][i] for i in range(len(target))
                  if basis[a][i] and basis[b][i]), Fraction(0))
             for b in range(k)] for a in range(k)]
    rhs = [sum((basis[a][i] * target[i] for i in range(len(target))
                if basis[a][i] and target[i]), Fraction(0))
           for a in range(k)]
    coeffs = _solve_rational(gram, rhs)
    return [sum((coeffs[a] * basis[a][i] for a in range(k)
                 if basis[a][i]), Fraction(0))
            for i in range(len(target))]


def rational_kernel_point(problem: KernelProblem) -> tuple[Fraction, ...]:
    """A nonnegative rational v with A.v = 0 and ||u - v||_inf < eps.

    Coordinates of the target equal to 0 stay 0.  Coordinates whose
    projection comes out negative are zeroed and the projection repeated,
    but only while the target there is below the tolerance; a coordinate
    both large and forced negative means the support admits no nearby
    kernel point.
    """
    u = problem.target
    eps = problem.tolerance
    n = len(u)
    support = [i for i in range(n) if u[i] > 0]
    v = [Fraction(0)] * n
    while support:
        sub_rows = []
        for row in problem.matrix:
            cut = [row[i] for i in support]
            if any(cut):
                sub_rows.append(cut)
        basis = nullspace_basis(sub_rows, len(support))
        if not basis:
            raise InfeasibleKernelError(
                "the kernel restricted to the support is trivial")
        proj = _project_onto_kernel(basis, [u[i] for i in support])
        negatives = [k for k in range(len(support)) if proj[k] < 0]
        if not negatives:
            v = [Fraction(0)] * n
            for k, i in enumerate(support):
                v[i] = proj[k]
            break
        drop = [support[k] for k in negatives if u[support[k]] < eps]
        if not drop:
            raise InfeasibleKernelError(
                "projection forces a coordinate negative beyond tolerance")
        support = [i for i in support if i not in drop]
    gap = max((abs(u[i] - v[i]) for i in range(n)), default=Fraction(0))
    if gap >= eps:
        raise InfeasibleKernelError(
            f"no kernel point within {eps} of the target (gap {gap})")
    for row in problem.matrix:
        assert sum(c * x for c, x in zip(row, v) if c) == 0
    return tuple(v)


def integerize(table: WeightTable) -> tuple[WeightSystem, int]:
    """Scale an admissible rational table by the least common denominator.

    Returns (theta, M) with theta = M * table entrywise; scaling preserves
    the integer balance equations, so theta is admissible.
    """
    scale = lcm(*(v.denominator for v in table.entries.values())) \
        if len(table) else 1
    return WeightSystem(table.scale(scale)), scale


def approximate_table(table: WeightTable, tolerance: Rational,
                      bound: int = FLOAT_DENOMINATOR_BOUND
                      ) -> tuple[WeightSystem, int, WeightTable]:
    """Full pipeline: rationalize, repair to the kernel, integerize.

    Returns (theta, M, exact) where exact is the nonnegative rational
    kernel table within `tolerance` of the input (sup-norm over
    round-graphs) and theta = M * exact.
    """
    snapped = rationalize_table(table, bound)
    support = snapped.support()
    system = support_system(snapped.rank, snapped.radius, support)
    problem = KernelProblem(system.matrix(), system.vector_of(snapped),
                            tolerance)
    v = rational_kernel_point(problem)
    exact = WeightTable(snapped.rank, snapped.radius,
                        {t: v[j] for j, t in enumerate(system.columns)})
    theta, scale = integerize(exact)
    return theta, scale, exact


# ---------------------------------------------------------------------------
# the rank-2 subgroup families of the convergence experiment

def subgroup_Hn(n: int) -> Subgroup:
    """<y^n, y x y^-1, ..., y^(n-1) x y^-(n-1)>: hull-core is an n-cycle of
    y-edges with x-loops at all vertices but one; reduced rank n - 1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    x, y = 1, 2
    gens = [(y,) * n]
    gens.extend((y,) * i + (x,) + (-y,) * i for i in range(1, n))
    return Subgroup([Word(2, g) for g in gens], 2)


def subgroup_Gn(n: int) -> Subgroup:
    """The index-n normal subgroup family: subgroup_Hn's generators plus x."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return Subgroup((Word(2, (1,)),) + subgroup_Hn(n).generators, 2)


def convergence_run(radius: int, ns: Iterable[int]
                    ) -> list[tuple[int, Fraction]]:
    """Exact cylinder distances from (1/n) eta_{H_n} to eta_F."""
    reference = cylinder_table(RationalCurrent.full(2), radius)
    out = []
    for n in ns:
        if n < 2:
            raise ValueError("each n must be >= 2")
        scaled = RationalCurrent([(Fraction(1, n), subgroup_Hn(n))], 2)
        out.append((n, distance(cylinder_table(scaled, radius), reference)))
    return out
