"""Coalition structure search on induced subgraph games.

The pipeline: a game is an agent set with a symmetric synergy matrix; the
driver recursively bipartitions the grand coalition, accepting a split
whenever it doesn't lose value; each bipartition step is a weighted min-cut,
solved exactly, as a classical QUBO, or by a built-in QAOA statevector
simulator.  Exact baselines (subset DP, full partition enumeration) and a
benchmark harness round out the toolkit.
"""

from .errors import (
    CoalcutError,
    GameFormatError,
    OracleError,
    SolverError,
    ValidationError,
)
from .game import (
    MAX_AGENTS,
    VALUE_ATOL,
    CoalitionStructure,
    GameSpec,
    ISGame,
    Normal,
    Uniform,
    coalition_value,
    cs_value,
    distribution_from_json,
    full_mask,
    game_from_json,
    game_to_json,
    generate_game,
    load_game,
    lowest_set_bit,
    mask_from_members,
    mask_members,
    mask_size,
    sample_game,
    save_game,
    subset_values,
)
from .exact import (
    SplitResult,
    best_split_bruteforce,
    dp_optimal_cs,
    enumerate_all_partitions,
    iter_set_partitions,
)
from .qubo import (
    AnnealConfig,
    IsingProblem,
    QuboProblem,
    QuboSolution,
    build_mincut_qubo,
    canonical_assignment,
    cut_table,
    energy_table,
    objective_table,
    qubo_to_ising,
    solve_qubo_annealing,
    solve_qubo_exhaustive,
)
from .qaoa import (
    MAX_QUBITS,
    CircuitReport,
    QaoaConfig,
    QaoaParams,
    apply_cnot,
    apply_cost_layer,
    apply_cost_layer_gates,
    apply_mixer_layer,
    apply_rx,
    apply_rz,
    circuit_report,
    coupling_scale,
    expectation,
    init_uniform,
    optimize_params,
    run_qaoa,
    sample_and_select,
    sample_bitstrings,
)
from .driver import (
    ExhaustiveSplitOracle,
    OracleStats,
    QaoaSplitOracle,
    QuacsRun,
    QuacsStep,
    QuboClassicalOracle,
    SplitOracle,
    make_oracle,
    quacs_solve,
)
from .bench import (
    BenchRow,
    approx_error,
    make_distribution,
    run_bench,
    run_solver,
)

__version__ = "0.1.0"
