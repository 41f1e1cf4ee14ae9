import pytest

from taskgrid import build_game, load_fixture

SCENARIO_FIXTURES = (
    "example_1.json",
    "example_2.json",
    "example_3.json",
    "case_study_1.json",
    "case_study_2.json",
)


@pytest.fixture(scope="session")
def scenarios():
    return {name: load_fixture(name) for name in SCENARIO_FIXTURES}


@pytest.fixture(scope="session")
def episode_suite():
    return load_fixture("experiment_episodes.json")


@pytest.fixture(scope="session")
def games(scenarios):
    return {name: build_game(sc) for name, sc in scenarios.items()}


@pytest.fixture(scope="session")
def episode_games(episode_suite):
    return {name: build_game(sc) for name, sc in episode_suite.episodes}


@pytest.fixture(scope="session")
def all_games(games, episode_games):
    """Every game shipped in the package data, labeled."""
    out = dict(games)
    for name, game in episode_games.items():
        out[f"experiment_episodes.json:{name}"] = game
    return out
