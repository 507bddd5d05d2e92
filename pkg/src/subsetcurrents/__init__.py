"""Subset currents on free groups, at desk scale and in exact arithmetic.

Core graphs for finitely generated subgroups, fiber products and the
product N(H, K), round-graphs and cylinder tables, the integral weight
realization algorithm, and rational kernel approximation.
"""

from .errors import (AdmissibilityError, BasisMismatchError,
                     FileFormatError, InfeasibleKernelError,
                     LetterRangeError)
from .words import (Basis, Word, concat, cyclic_reduce, format_word,
                    invert, parse_word, reduce)
from .stallings import (CoreGraph, LabeledGraph, Subgroup, basis_of,
                        canonical_form, conjugate, contains,
                        core_from_generators, finite_index, fold,
                        graph_from_text, graph_to_text, hull_core,
                        label_isomorphic, random_cover,
                        random_finite_cover, read_subgroup, reduced_rank,
                        subgroup_from_text, subgroup_to_text,
                        write_subgroup)
from .fiber import (ProductGraph, component_census, fiber_product,
                    intersection, product_rank, shnc_margin)
from .cylinders import (RationalCurrent, RoundGraph, WeightTable, axis,
                        check_matching, count_round_graphs, cylinder_table,
                        distance, enumerate_round_graphs, full_ball,
                        local_ball, read_table, realizable_witness, restrict,
                        round_graph_from_text, round_graph_to_text,
                        table_from_text, table_to_text,
                        validate_round_graph, write_table)
from .realize import (MatchingSystem, SCGraphQuotient, WeightSystem,
                      decompose, matching_system, realize,
                      support_system, verify_realization)
from .approx import (KernelProblem, approximate_table, convergence_run,
                     integerize, nullspace_basis, rational_kernel_point,
                     rationalize, subgroup_Gn, subgroup_Hn)

__version__ = "0.1.0"
