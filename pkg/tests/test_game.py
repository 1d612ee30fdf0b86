import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonneg_regular_games, regular_games, seeds
from spgames import game as gm
from spgames import models
from spgames.functions import Identity, Linear, Log, Power, Quadratic
from spgames.game import classify, game_from_dict, make_game


@pytest.fixture
def simple2():
    return models.gamma_s([1.0, 2.0], qbar=3.0)


def test_payoff_potential_welfare_examples(simple2):
    x = np.array([0.5, 1.0])
    assert gm.payoff(simple2, x, 0) == pytest.approx(1.25, abs=1e-15)
    assert gm.potential(simple2, x) == pytest.approx(0.75, abs=1e-15)
    assert simple2.total_weight == 3.0
    assert gm.welfare(simple2, x) == pytest.approx(1.0833333333333333, abs=1e-12)


def test_zero_profile_gives_zero(simple2):
    z = np.zeros(2)
    assert np.all(gm.payoffs(simple2, z) == 0)
    assert gm.potential(simple2, z) == 0
    assert gm.welfare(simple2, z) == 0


def test_hnl_payoff_at_one_one():
    assert gm.payoff(models.hnl(), [1.0, 1.0], 0) == 0.0
    assert gm.payoff(models.hnl(), [1.0, 0.0], 0) == pytest.approx(-1.0)


def test_piecewise_potential_at_half():
    assert gm.potential(models.piecewise(), [0.5, 0.5]) == pytest.approx(0.5)


def test_batch_evaluation_matches_single(simple2, rng):
    X = rng.uniform(0, 3, (7, 2))
    batch = gm.payoffs(simple2, X)
    for row, x in zip(batch, X):
        np.testing.assert_allclose(row, gm.payoffs(simple2, x), rtol=0, atol=0)


def test_shadow_prices(simple2):
    x_ne = np.array(simple2.alpha) / 2
    np.testing.assert_allclose(gm.shadow_prices(simple2, x_ne), 1.0, rtol=1e-15)
    assert np.all(gm.shadow_prices(simple2, np.zeros(2)) == 0)


def test_shadow_price_undefined_where_contribution_flat():
    g = make_game([1.0, 2.0], Linear(1.0, 0.0), Quadratic(1.0), 1.0, h=[Identity(), Quadratic(-1.0, 2.0)])
    rho = gm.shadow_prices(g, [0.5, 1.0])
    assert rho[0] == pytest.approx(1.0)
    assert np.isnan(rho[1])


@pytest.mark.parametrize(
    "name, regular, strict",
    [("gamma_s", True, True), ("gamma_delta", True, True), ("underprovision", True, False),
     ("piecewise", True, False), ("hnl", False, False), ("nu", True, False)],
)
def test_classification_of_named_games(name, regular, strict):
    cls = classify(models.make_model(name))
    assert (cls.is_regular, cls.is_strict) == (regular, strict)


def test_piecewise_reason():
    assert "H not continuously differentiable" in classify(models.piecewise()).reasons


def test_nonidentity_contribution_is_not_regular():
    g = make_game([1.0, 2.0], Linear(1.0, 0.0), Quadratic(1.0), 1.0, h=Power(1.0, 2.0))
    cls = classify(g)
    assert not cls.is_regular and "h_i not all identity" in cls.reasons


def test_benefit_outside_domain_is_not_regular():
    g = make_game([1.0, 2.0], Log(1.0, 0.0), Quadratic(1.0), 1.0)
    assert not classify(g).is_regular


def test_classification_ignores_input_order():
    a = make_game([3.0, 1.0, 2.0], Log(1.0, 0.5), [Quadratic(1.0), Power(1.0, 2.5), Linear(1.0, 0.0)], 2.0)
    b = make_game([1.0, 2.0, 3.0], Log(1.0, 0.5), [Power(1.0, 2.5), Linear(1.0, 0.0), Quadratic(1.0)], 2.0)
    assert a == GameSpecEq(b)
    assert classify(a) == classify(b)


class GameSpecEq:
    """Compare games ignoring the recorded input permutation."""

    def __init__(self, game):
        self.game = game

    def __eq__(self, other):
        g = self.game
        return (g.alpha, g.H, g.h, g.g, g.qbar) == (other.alpha, other.H, other.h, other.g, other.qbar)


def test_make_game_sorts_and_remembers_order():
    g = make_game([3.0, 1.0, 2.0], Linear(1.0, 0.0), [Quadratic(3.0), Quadratic(1.0), Quadratic(2.0)], 1.0)
    assert g.alpha == (1.0, 2.0, 3.0)
    assert g.perm == (1, 2, 0)
    assert [c.a for c in g.g] == [1.0, 2.0, 3.0]
    doc = g.to_dict()
    assert doc["alpha"] == [3.0, 1.0, 2.0]
    assert game_from_dict(doc) == g


@pytest.mark.parametrize(
    "kwargs, match",
    [(dict(alpha=[1.0]), "at least 2 players"), (dict(alpha=[1.0, -1.0]), "alpha"), (dict(qbar=0.0), "qbar")],
)
def test_invalid_games(kwargs, match):
    args = dict(alpha=[1.0, 2.0], H=Linear(1.0, 0.0), g=Quadratic(1.0), qbar=1.0)
    args.update(kwargs)
    with pytest.raises(ValueError, match=match):
        make_game(**args)


def test_game_file_errors_name_the_key():
    base = {"n": 2, "qbar": 1, "alpha": [1, 2], "H": {"family": "linear", "a": 1, "b": 0},
            "g": [{"family": "quadratic", "a": 1}, {"family": "quadratic", "a": 1}]}
    assert game_from_dict(base).n == 2
    with pytest.raises(ValueError, match="missing key 'H'"):
        game_from_dict({k: v for k, v in base.items() if k != "H"})
    with pytest.raises(ValueError, match=r"'g\[1\]'"):
        game_from_dict({**base, "g": [base["g"][0], {"family": "nope"}]})
    with pytest.raises(ValueError, match="'alpha'"):
        game_from_dict({**base, "alpha": [1, 2, 3]})
    with pytest.raises(ValueError, match="'n'"):
        game_from_dict({**base, "n": "two"})


def test_profile_checks(simple2):
    with pytest.raises(ValueError):
        gm.check_profile(simple2, [0.5, 3.5])
    with pytest.raises(ValueError):
        gm.check_profile(simple2, [0.5, 0.5, 0.5])
    assert gm.aggregate([0.5, 1.0, 2.0], [0, 2]) == 2.5


# -- properties -------------------------------------------------------------

@given(regular_games, seeds)
def test_potential_difference_identity(game, seed):
    r = np.random.default_rng(seed)
    x = r.uniform(0, game.qbar, game.n)
    i = int(r.integers(game.n))
    y = x.copy()
    y[i] = r.uniform(0, game.qbar)
    d_pi = gm.payoff(game, y, i) - gm.payoff(game, x, i)
    d_p = gm.potential(game, y) - gm.potential(game, x)
    assert abs(d_pi - game.alpha[i] * d_p) <= 1e-9 * (1 + abs(d_pi))


@given(regular_games, seeds)
def test_total_payoff_is_scaled_welfare(game, seed):
    x = np.random.default_rng(seed).uniform(0, game.qbar, (5, game.n))
    total = gm.payoffs(game, x).sum(axis=-1)
    np.testing.assert_allclose(game.total_weight * gm.welfare(game, x), total, rtol=1e-9, atol=1e-12)


@given(nonneg_regular_games, seeds)
def test_potential_below_welfare_for_nonnegative_costs(game, seed):
    x = np.random.default_rng(seed).uniform(0, game.qbar, (5, game.n))
    assert np.all(gm.potential(game, x) <= gm.welfare(game, x) + 1e-12)


def test_potential_can_exceed_welfare_with_negative_costs():
    g = make_game([0.5, 1.0], Linear(1.0, 0.0), Linear(0.0, -1.0), 1.0)
    x = np.zeros(2)
    assert gm.potential(g, x) > gm.welfare(g, x)


@given(regular_games)
def test_classify_is_deterministic(game):
    assert classify(game) == classify(game)
    assert classify(game).is_regular
