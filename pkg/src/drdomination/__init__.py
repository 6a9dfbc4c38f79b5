"""Exact solvers for (d,r)-domination parameterized by modular structure."""
from .decomposition import (ParseNode, ParseTree, StructuralParams, itp_number, modular_decomposition,
                            neighborhood_diversity, structural_params, type_partition, validate_parse_tree)
from .graph import (DominationInstance, Graph, GraphParseError, InvariantError, OracleCapExceeded, Solution,
                    all_minimum_solutions, brute_force_min, forced_vertices, format_edge_list, graph_power,
                    is_dr_dominating, parse_edge_list, read_edge_list)
from .solver import (CostTable, ModularDP, cost_table_extended, cost_table_paper, solve_d1_modular, solve_dr)

__all__ = [
    "ParseNode", "ParseTree", "StructuralParams", "itp_number", "modular_decomposition", "neighborhood_diversity",
    "structural_params", "type_partition", "validate_parse_tree",
    "DominationInstance", "Graph", "GraphParseError", "InvariantError", "OracleCapExceeded", "Solution",
    "all_minimum_solutions", "brute_force_min", "forced_vertices", "format_edge_list", "graph_power",
    "is_dr_dominating", "parse_edge_list", "read_edge_list",
    "CostTable", "ModularDP", "cost_table_extended", "cost_table_paper", "solve_d1_modular", "solve_dr",
]
