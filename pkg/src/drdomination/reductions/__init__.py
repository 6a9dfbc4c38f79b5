"""Kernelization and compressions for (d,r)-domination."""
from .colored import (ColoredInstance, StructureCheck, is_colored_dominating, lift_colored_solution,
                      reduce_to_colored, solution_structure_check, solve_colored_bruteforce, top_partition)
from .ilp import IlpInstance, IlpSolution, build_ilp, expand_ilp_solution, parse_lp, solve_ilp_enumeration
from .kernel import KernelReport, class_bound_witness, kernelize_nd, lift_kernel_solution

__all__ = [
    "ColoredInstance", "StructureCheck", "is_colored_dominating", "lift_colored_solution", "reduce_to_colored",
    "solution_structure_check", "solve_colored_bruteforce", "top_partition",
    "IlpInstance", "IlpSolution", "build_ilp", "expand_ilp_solution", "parse_lp", "solve_ilp_enumeration",
    "KernelReport", "class_bound_witness", "kernelize_nd", "lift_kernel_solution",
]
