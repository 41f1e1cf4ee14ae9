import numpy as np
import pytest
from support import random_game, random_plan_walk

from taskgrid import (
    DomainError,
    GameInstance,
    Grid,
    JointPlan,
    ProfileState,
    Task,
    ValidationError,
    ValueFunction,
    counters,
    global_value,
    local_robots,
    local_tasks,
    utility,
    verify_potential_identity,
)


class TestWorkedThreeRobotInstance:
    """The three-robot single-task game shipped as example_1.json."""

    def test_action_sets_collapse_to_one_trajectory_each(self, games):
        game = games["example_1.json"]
        assert game.action_set_sizes() == (1, 1, 1)
        assert game.trajectory_of(1, 0) == (
            (2, 2), (3, 3), (3, 3), (3, 3), (3, 3), (3, 3), (2, 2)
        )
        assert game.trajectory_of(3, 0) == (
            (4, 5), (3, 4), (3, 3), (3, 3), (3, 3), (3, 4), (4, 5)
        )

    def test_counters_and_marginal_utilities(self, games):
        game = games["example_1.json"]
        plan = JointPlan((0, 0, 0))
        task = game.tasks[0]
        assert counters(game, plan, task) == (0, 2, 3, 3, 2, 0)
        assert counters(game, plan, task, exclude_robot=3) == (0, 2, 2, 2, 2, 0)
        assert global_value(game, plan) == 1
        assert [utility(game, plan, r) for r in game.robot_ids] == [0, 0, 0]

    def test_exclusion_removes_at_most_one_robot_per_step(self, games):
        game = games["example_1.json"]
        plan = JointPlan((0, 0, 0))
        task = game.tasks[0]
        full = counters(game, plan, task)
        for robot_id in game.robot_ids:
            rest = counters(game, plan, task, exclude_robot=robot_id)
            assert all(f - r in (0, 1) for f, r in zip(full, rest))


class TestExtendedMode:
    def test_auto_mode_resolution(self, games):
        assert games["example_2.json"].mode == "extended"
        assert games["example_3.json"].mode == "plain"

    def test_plain_mode_rejected_under_overlap(self, scenarios):
        sc = scenarios["example_2.json"]
        with pytest.raises(ValidationError, match="tasks 1 and 2"):
            GameInstance(sc.grid, sc.horizon, sc.robot_stations, sc.tasks, mode="plain")

    def test_forcing_extended_without_overlap_keeps_sizes(self, scenarios):
        sc = scenarios["example_3.json"]
        plain = GameInstance(sc.grid, sc.horizon, sc.robot_stations, sc.tasks)
        forced = GameInstance(
            sc.grid, sc.horizon, sc.robot_stations, sc.tasks, mode="extended"
        )
        assert forced.mode == "extended"
        assert forced.action_set_sizes() == plain.action_set_sizes()

    def test_commitments_decide_which_task_is_served(self, games):
        game = games["example_2.json"]
        task_1, task_2 = game.tasks
        stay_on_first = JointPlan((0,))  # commitments (None, 1, 1, None)
        split = JointPlan((1,))  # commitments (None, 1, 2, None)
        assert counters(game, stay_on_first, task_1) == (0, 1, 1)
        assert counters(game, stay_on_first, task_2) == (0, 0)
        assert counters(game, split, task_1) == (0, 1, 0)
        assert counters(game, split, task_2) == (1, 0)
        assert global_value(game, stay_on_first) == 1
        assert global_value(game, split) == 2


class TestConstructionValidation:
    def test_duplicate_task_ids(self):
        grid = Grid(3, 3, stations=[(2, 2)])
        vf = ValueFunction.simple(1)
        tasks = [Task(1, (1, 1), 0, 2, vf), Task(1, (1, 2), 0, 2, vf)]
        with pytest.raises(ValidationError, match="unique"):
            GameInstance(grid, 2, [1], tasks)

    def test_departure_beyond_horizon(self):
        grid = Grid(3, 3, stations=[(2, 2)])
        tasks = [Task(1, (1, 1), 0, 5, ValueFunction.simple(1))]
        with pytest.raises(ValidationError, match="exceeds the horizon"):
            GameInstance(grid, 3, [1], tasks)

    def test_task_on_obstacle(self):
        grid = Grid(3, 3, obstacles=[(1, 1)], stations=[(2, 2)])
        tasks = [Task(1, (1, 1), 0, 2, ValueFunction.simple(1))]
        with pytest.raises(ValidationError, match="not a feasible cell"):
            GameInstance(grid, 2, [1], tasks)

    def test_non_monotone_table_rejected(self):
        grid = Grid(3, 3, stations=[(2, 2)])
        decreasing = ValueFunction.table([((0,), 1), ((1,), 0)], 1, default=0)
        tasks = [Task(1, (1, 1), 1, 2, decreasing)]
        with pytest.raises(ValidationError, match="monotone"):
            GameInstance(grid, 3, [1], tasks)

    def test_unknown_mode_and_bad_station(self):
        grid = Grid(3, 3, stations=[(2, 2)])
        with pytest.raises(ValidationError):
            GameInstance(grid, 2, [1], [], mode="fast")
        with pytest.raises(DomainError):
            GameInstance(grid, 2, [2], [])
        with pytest.raises(ValidationError):
            GameInstance(grid, 2, [], [])
        with pytest.raises(ValidationError):
            GameInstance(grid, 0, [1], [])

    def test_validate_plan(self, games):
        game = games["example_3.json"]
        with pytest.raises(DomainError):
            game.validate_plan(JointPlan((0,)))
        with pytest.raises(DomainError):
            game.validate_plan(JointPlan((0, 3)))
        game.validate_plan(JointPlan((2, 1)))

    def test_random_plan_reproducible(self, games):
        game = games["example_3.json"]
        a = game.random_plan(np.random.default_rng(9))
        b = game.random_plan(np.random.default_rng(9))
        assert a == b
        game.validate_plan(a)

    def test_contributions_are_window_offsets(self, games):
        game = games["example_1.json"]
        assert game.contributions_of(1, 0) == ((0, (1, 2, 3, 4)),)
        assert game.contributions_of(3, 0) == ((0, (2, 3)),)


class TestProfileStateAgainstNaive:
    """The incremental engine must agree with the naive recomputations."""

    def test_utilities_match_on_fixtures(self, all_games):
        rng = np.random.default_rng(21)
        for game in all_games.values():
            plan = game.random_plan(rng)
            state = ProfileState(game, plan)
            robot_id = int(rng.integers(game.n_robots)) + 1
            fast = state.utilities_over_actions(robot_id)
            slow = [
                utility(game, plan.replace(robot_id - 1, a), robot_id)
                for a in range(game.n_actions(robot_id))
            ]
            assert fast == slow
            assert state.plan() == plan  # evaluation must not disturb the state

    def test_utilities_match_on_random_games(self):
        rng = np.random.default_rng(33)
        for _ in range(8):
            game = random_game(rng)
            plan = game.random_plan(rng)
            state = ProfileState(game, plan)
            for robot_id in game.robot_ids:
                fast = state.utilities_over_actions(robot_id)
                slow = [
                    utility(game, plan.replace(robot_id - 1, a), robot_id)
                    for a in range(game.n_actions(robot_id))
                ]
                assert fast == slow

    def test_switch_tracks_global_value(self):
        rng = np.random.default_rng(55)
        for _ in range(5):
            game = random_game(rng)
            state = ProfileState(game, game.random_plan(rng))
            for robot_id, action_id in random_plan_walk(rng, game, 30):
                state.switch(robot_id, action_id)
                assert state.global_value() == global_value(game, state.plan())

    def test_repeated_evaluation_is_stable(self, games):
        game = games["example_3.json"]
        state = ProfileState(game, JointPlan((0, 1)))
        first = state.utilities_over_actions(1)
        second = state.utilities_over_actions(1)
        assert first == second
        fresh = ProfileState(game, JointPlan((0, 1)))
        assert state.counters == fresh.counters
        assert state.total == fresh.total


class TestLocality:
    def test_strict_half_horizon_rule(self):
        grid = Grid(9, 1, stations=[(1, 1)])
        vf = ValueFunction.simple(1)
        near = Task(1, (2, 1), 0, 4, vf)
        boundary = Task(2, (3, 1), 0, 4, vf)
        even = GameInstance(grid, 4, [1], [near, boundary])
        # distance 2 with horizon 4 gives no time to stay: excluded
        assert local_tasks(even, 1) == {near}
        odd = GameInstance(grid, 5, [1], [near, boundary])
        assert local_tasks(odd, 1) == {near, boundary}

    def test_unreachable_task_is_never_local(self):
        grid = Grid(5, 1, obstacles=[(3, 1)], stations=[(1, 1)])
        cutoff = Task(1, (5, 1), 0, 4, ValueFunction.simple(1))
        game = GameInstance(grid, 8, [1], [cutoff])
        assert local_tasks(game, 1) == set()

    def test_robots_linked_by_shared_tasks(self):
        grid = Grid(9, 1, stations=[(1, 1), (5, 1), (9, 1)])
        vf = ValueFunction.simple(1)
        tasks = [Task(1, (3, 1), 0, 6, vf), Task(2, (7, 1), 0, 6, vf)]
        game = GameInstance(grid, 6, [1, 2, 3], tasks)
        # the middle robot reaches both tasks, the outer robots one each
        assert local_robots(game, 1) == {1, 2}
        assert local_robots(game, 2) == {1, 2, 3}
        assert local_robots(game, 3) == {2, 3}

    def test_robot_with_no_reachable_task_is_isolated(self):
        grid = Grid(9, 1, stations=[(1, 1), (9, 1)])
        tasks = [Task(1, (2, 1), 0, 4, ValueFunction.simple(1))]
        game = GameInstance(grid, 4, [1, 2], tasks)
        assert local_robots(game, 2) == set()


class TestPotentialIdentity:
    def test_holds_on_the_shipped_examples(self, games):
        for name in ("example_1.json", "example_2.json", "example_3.json"):
            assert verify_potential_identity(games[name], samples=200, seed=3)

    def test_holds_on_random_games(self):
        rng = np.random.default_rng(77)
        for seed in range(4):
            game = random_game(rng)
            assert verify_potential_identity(game, samples=100, seed=seed)
