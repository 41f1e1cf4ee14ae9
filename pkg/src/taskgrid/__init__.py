"""Trajectory planning and game-theoretic learning for cooperative tasks.

Robots on an obstacle grid plan episode trajectories that start and end at
their stations. Time-windowed tasks award value when enough robots stay at
their locations; marginal-contribution utilities make the total value an
exact potential, and the package provides minimal action-set construction,
best-response and log-linear learning, and exact equilibrium analysis on top
of that structure, plus a scenario-file CLI.
"""

from .actions import (
    ActionSet,
    ExtendedAction,
    build_minimal_action_set,
    extend_action_set,
    service_times,
    signature,
    theta,
    verify_cover,
)
from .analysis import (
    EquilibriumReport,
    brute_force_optimum,
    check_poa_bound,
    empirical_occupancy,
    enumerate_nash,
    full_space_optimum,
    is_nash,
    lll_stationary_distribution,
    price_of_anarchy,
    profile_values,
    total_variation,
)
from .errors import (
    BudgetExceededError,
    ConvergenceError,
    DomainError,
    InapplicableError,
    TaskgridError,
    ValidationError,
)
from .game import (
    GameInstance,
    JointPlan,
    ProfileState,
    counters,
    global_value,
    local_robots,
    local_tasks,
    utility,
    verify_potential_identity,
)
from .grid import (
    Grid,
    count_feasible_trajectories,
    enumerate_feasible_trajectories,
    is_feasible_trajectory,
    trajectory_issue,
)
from .learning import (
    BatchResult,
    LearningConfig,
    RunTrace,
    best_response_set,
    lll_distribution,
    run,
    run_batch,
    run_best_response,
    run_log_linear,
)
from .report import (
    RunReport,
    format_number,
    write_report_json,
    write_series_csv,
    write_trace_csv,
)
from .scenario import (
    EpisodeSuite,
    Scenario,
    build_game,
    fixture_names,
    fixture_path,
    load_any,
    load_episodes,
    load_fixture,
    load_scenario,
    parse_scenario,
    scenario_digest,
    serialize_scenario,
)
from .tasks import (
    Task,
    ValueFunction,
    check_no_overlap,
    evaluate_value,
    validate_monotonicity,
)

__version__ = "0.1.0"

__all__ = [
    "ActionSet",
    "BatchResult",
    "BudgetExceededError",
    "ConvergenceError",
    "DomainError",
    "EpisodeSuite",
    "EquilibriumReport",
    "ExtendedAction",
    "GameInstance",
    "Grid",
    "InapplicableError",
    "JointPlan",
    "LearningConfig",
    "ProfileState",
    "RunReport",
    "RunTrace",
    "Scenario",
    "Task",
    "TaskgridError",
    "ValidationError",
    "ValueFunction",
    "best_response_set",
    "brute_force_optimum",
    "build_game",
    "build_minimal_action_set",
    "check_no_overlap",
    "check_poa_bound",
    "count_feasible_trajectories",
    "counters",
    "empirical_occupancy",
    "enumerate_feasible_trajectories",
    "enumerate_nash",
    "evaluate_value",
    "extend_action_set",
    "fixture_names",
    "fixture_path",
    "format_number",
    "full_space_optimum",
    "global_value",
    "is_feasible_trajectory",
    "is_nash",
    "lll_distribution",
    "lll_stationary_distribution",
    "load_any",
    "load_episodes",
    "load_fixture",
    "load_scenario",
    "local_robots",
    "local_tasks",
    "parse_scenario",
    "price_of_anarchy",
    "profile_values",
    "run",
    "run_batch",
    "run_best_response",
    "run_log_linear",
    "scenario_digest",
    "serialize_scenario",
    "service_times",
    "signature",
    "theta",
    "total_variation",
    "trajectory_issue",
    "utility",
    "validate_monotonicity",
    "verify_cover",
    "verify_potential_identity",
    "write_report_json",
    "write_series_csv",
    "write_trace_csv",
]
