"""detcode: error-detecting identification codes on graphs and grids.

The package computes and verifies detector placements that let a monitor
locate any target vertex from the set of detectors that report it, for
four detection disciplines (IC, LD, OLD, and the error-detecting DETIC
that survives one missed report). It ships exact solvers, an executable
hardness reduction from 3-SAT, and periodic-pattern machinery for five
infinite lattices.
"""

from .graphs import (
    CUBIC_MAX_N,
    CUBIC_MIN_N,
    FamilySpec,
    Graph,
    GraphError,
    TORUS_LATTICES,
    build_graph,
    closed_neighborhood,
    complete_graph,
    cycle_graph,
    enumerate_cubic,
    find_twins,
    g77,
    generate,
    hypercube,
    ladder,
    open_neighborhood,
    parse_family,
    path_graph,
    prism,
    random_gnp,
    random_tree,
    read_detectors,
    read_graph,
    to_dot,
    torus,
    triangle_count_edge,
    write_detectors,
    write_graph,
)
from .codes import (
    CodeKind,
    ExistenceReport,
    VerifyReport,
    Violation,
    check_cubic_propositions,
    detic_exists,
    domination_level,
    is_k_distinguished,
    is_sharp2_distinguished,
    is_valid_code,
    verify_code,
)
from .solver import (
    InfeasibleError,
    SolveResult,
    SolverLimitError,
    SolverTimeout,
    TIME_LIMIT_ENV,
    compile_constraints,
    extremal_cubic,
    forced_detectors,
    min_code,
    min_code_bruteforce,
    propagate,
)
from .reduction import (
    ContractReport,
    Formula,
    FormulaError,
    ReductionInstance,
    assignment_to_code,
    code_to_assignment,
    parse_dimacs,
    read_instance_map,
    reduce_to_detic,
    verify_gadget_contracts,
    write_instance_map,
)
from .grids import (
    LATTICES,
    PatternError,
    PatternReport,
    PeriodicPattern,
    TorusReport,
    bundled_pattern,
    bundled_pattern_names,
    bundled_patterns,
    ladder_proof_facts,
    lattice_neighbors,
    pattern_density,
    read_pattern,
    search_pattern,
    shift_pattern,
    tile_pattern,
    torus_consistency,
    verify_pattern,
    write_pattern,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
