import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reopen import engine, shocks
from reopen.data import (CriticalityMatrix, DataValidationError, EconParams,
                         InventoryTargets, generate_synthetic_economy)
from reopen.engine import (capacity_limit, consume_inputs_and_update_inventories,
                           household_income, init_steady_state, input_limit,
                           intermediate_orders, labor_adjustment,
                           preference_shares, realize_and_ration,
                           run_simulation, step, total_consumption_demand,
                           usage_binding_mask)

def zero_shock_schedule(economy, horizon):
    n = economy.n
    T = horizon + 1
    return shocks.ShockSchedule(
        scenario_id="PreLockdown", eps_S=np.zeros((T, n)),
        eps=np.zeros((T, n)), f_d=np.tile(economy.f0, (T, 1)),
        xi=np.ones(T), lockdown=np.zeros(T, dtype=bool), nu=0.0, xi_L=1.0)


class TestInitSteadyState:
    def test_toy_inventories(self, toy_economy, toy_targets):
        state = init_steady_state(toy_economy, toy_targets, EconParams())
        np.testing.assert_allclose(state.S, [[100.0, 200.0], [300.0, 50.0]])

    def test_zero_flow_inventories(self):
        from reopen.data import make_economy
        eco = make_economy(["a", "b"], np.zeros((2, 2)), [10, 20], [4.1, 8.2],
                           [5.9, 11.8], [5.0, 10.0], e0=[0, 0])
        state = init_steady_state(eco, InventoryTargets(np.array([3.0, 3.0])),
                                  EconParams())
        assert np.all(state.S == 0)

    def test_step_invariance_bundled(self, bundled):
        params = bundled.params
        schedule = zero_shock_schedule(bundled.economy, 1)
        state = init_steady_state(bundled.economy, bundled.targets, params)
        nxt = step(state, bundled.economy, bundled.criticality,
                   bundled.targets, params, schedule)
        for agg in ("x", "l", "pi", "c"):
            a0 = getattr(state, agg).sum()
            a1 = getattr(nxt, agg).sum()
            assert abs(a1 - a0) / abs(a0) < 1e-9


class TestConsumptionDemand:
    def test_steady_state_identity(self):
        p = EconParams()
        out = total_consumption_demand(82.0, 100.0, 100.0, 1.0, 0.0, p)
        assert out == pytest.approx(82.0, rel=1e-12)

    def test_fixed_functional_form(self):
        p = EconParams(cons_fn="fixed")
        assert total_consumption_demand(5.0, 70.0, 100.0, 0.9, 0.3, p) \
            == pytest.approx(82.0)

    def test_keynesian_tracks_current_income(self):
        p = EconParams(cons_fn="keynesian")
        assert total_consumption_demand(5.0, 70.0, 100.0, 0.9, 0.3, p) \
            == pytest.approx(0.82 * 70.0)

    def test_one_step_adjustment_at_rho_zero(self):
        p = EconParams(rho=0.01)  # effectively instant adjustment
        out = total_consumption_demand(50.0, 100.0, 100.0, 1.0, 0.0, p)
        expected = math.exp(0.01 * math.log(50.0) + 0.99 * math.log(82.0))
        assert out == pytest.approx(expected, rel=1e-12)

    def test_nonpositive_income_rejected(self):
        with pytest.raises(engine.NumericalError):
            total_consumption_demand(82.0, 0.0, 100.0, 1.0, 0.0, EconParams())


class TestPreferenceShares:
    def test_no_shock_identity(self):
        theta0 = np.array([0.25, 0.75])
        theta, eps = preference_shares(theta0, np.zeros(2), 0.5, 0.987)
        np.testing.assert_allclose(theta, theta0)
        assert eps == 0.0

    def test_hand_case(self):
        theta, eps = preference_shares(np.array([0.5, 0.5]),
                                       np.array([1.0, 0.0]), 0.5, 0.987)
        np.testing.assert_allclose(theta, [0.0, 1.0])
        assert eps == pytest.approx(0.5 * 0.5 * 0.013)

    @given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6),
           st.lists(st.floats(0.0, 0.99), min_size=2, max_size=6))
    @settings(max_examples=50, deadline=None)
    def test_normalization(self, raw_theta, eps_list):
        n = min(len(raw_theta), len(eps_list))
        theta0 = np.array(raw_theta[:n])
        theta0 /= theta0.sum()
        theta, _ = preference_shares(theta0, np.array(eps_list[:n]), 0.5, 0.99)
        assert theta.sum() == pytest.approx(1.0, abs=1e-12)

    def test_total_shock_rejected(self):
        with pytest.raises(DataValidationError):
            preference_shares(np.array([0.5, 0.5]), np.ones(2), 0.5, 0.99)


class TestOrdersCapacityInputs:
    def test_order_hand_case(self, toy_economy):
        # A=0.2, d=100, n=10, Z0=20, S=150, tau=10 -> 20 + 5.
        S = np.array([[100.0, 150.0], [300.0, 50.0]])
        O = intermediate_orders(S, np.array([100.0, 100.0]), toy_economy,
                                InventoryTargets(np.array([10.0, 10.0])),
                                EconParams())
        assert O[0, 1] == pytest.approx(25.0)

    def test_orders_at_target(self, toy_economy, toy_targets):
        state = init_steady_state(toy_economy, toy_targets, EconParams())
        O = intermediate_orders(state.S, state.d_prev, toy_economy,
                                toy_targets, EconParams())
        np.testing.assert_allclose(O, toy_economy.Z0)

    def test_orders_floor_at_zero(self, toy_economy):
        S = np.array([[100.0, 400.0], [300.0, 50.0]])
        O = intermediate_orders(S, np.array([100.0, 100.0]), toy_economy,
                                InventoryTargets(np.array([10.0, 10.0])),
                                EconParams())
        assert O[0, 1] == 0.0

    def test_capacity(self):
        from reopen.data import make_economy
        eco = make_economy(["a"], [[0.0]], [100.0], [50.0], [50.0], [30.0],
                           e0=[10.0])
        np.testing.assert_allclose(capacity_limit(np.array([15.0]), eco), [50.0])
        np.testing.assert_allclose(capacity_limit(eco.l0, eco), eco.x0)

    def test_input_limit_modes(self):
        from reopen.data import make_economy
        # One producing industry with two inputs; identity accounting.
        Z = np.array([[0.0, 0.0, 10.0], [0.0, 0.0, 30.0], [0.0, 0.0, 0.0]])
        eco = make_economy(["i1", "i2", "p"], Z, [100.0, 100.0, 100.0],
                           [60.0, 40.0, 60.0], [30.0, 30.0, 40.0],
                           [20.0, 20.0, 20.0], e0=[5.0, 5.0, 5.0])
        S = np.zeros((3, 3))
        S[0, 2], S[1, 2] = 5.0, 12.0
        # A column p is (0.1, 0.3); rate both inputs critical.
        ratings = np.zeros((3, 3))
        np.fill_diagonal(ratings, 1.0)
        ratings[0, 2] = ratings[1, 2] = 1.0
        crit = CriticalityMatrix(ratings=ratings, codes=eco.codes)
        np.testing.assert_allclose(eco.A[:2, 2], [0.1, 0.3])
        out = input_limit(S, eco, crit, "critical_baseline")
        assert out[2] == pytest.approx(40.0)
        out = input_limit(S, eco, crit, "leontief")
        assert out[2] == pytest.approx(40.0)
        out = input_limit(S, eco, crit, "linear")
        assert out[2] == pytest.approx(17.0 / 0.4)
        # Depleted important input: production falls to half of capacity.
        ratings[0, 2], ratings[1, 2] = 0.5, 0.0
        crit = CriticalityMatrix(ratings=ratings, codes=eco.codes)
        S[0, 2] = 0.0
        out = input_limit(S, eco, crit, "important_half")
        assert out[2] == pytest.approx(0.5 * (0.0 + 100.0))
        # No constraining inputs: unconstrained.
        out = input_limit(S, eco, crit, "critical_baseline")
        assert out[0] == np.inf

    def test_mode_dominance(self, synth10):
        # Raw input limits nest by set inclusion; the half-critical mode
        # nests only once capped at baseline capacity (beyond it the limit
        # never binds, since capacity cannot exceed baseline output).
        economy, criticality, _, _ = synth10
        rng = np.random.default_rng(5)
        for _ in range(20):
            S = rng.uniform(0, 50, size=(10, 10)) * economy.Z0
            leo = input_limit(S, economy, criticality, "leontief")
            imp = input_limit(S, economy, criticality, "important_critical")
            half = input_limit(S, economy, criticality, "important_half")
            base = input_limit(S, economy, criticality, "critical_baseline")
            lin = input_limit(S, economy, criticality, "linear")
            assert np.all(leo <= imp + 1e-9)
            assert np.all(imp <= base + 1e-9)
            assert np.all(half <= base + 1e-9)
            # The pooled (linear) bound dominates the all-inputs minimum;
            # it is not ordered against subset minima.
            finite = np.isfinite(leo)
            assert np.all(leo[finite] <= lin[finite] + 1e-9)
            x0 = economy.x0
            assert np.all(np.minimum(imp, x0) <= np.minimum(half, x0) + 1e-9)


class TestRationing:
    def test_hand_case(self):
        O = np.array([[0.0, 30.0], [15.0, 0.0]])
        c_d = np.array([20.0, 5.0])
        f_d = np.array([10.0, 1.0])
        d = O.sum(axis=1) + c_d + f_d
        x, Z, c, f = realize_and_ration(O, c_d, f_d,
                                        np.array([50.0, 100.0]),
                                        np.array([40.0, np.inf]), d)
        assert x[0] == pytest.approx(40.0)
        np.testing.assert_allclose(Z[0] / O[0, 1], [0.0, 2.0 / 3.0])
        assert c[0] == pytest.approx(20.0 * 2.0 / 3.0)

    def test_unconstrained_serves_demand(self):
        O = np.array([[0.0, 5.0], [5.0, 0.0]])
        c_d = np.array([3.0, 3.0])
        f_d = np.array([1.0, 1.0])
        d = O.sum(axis=1) + c_d + f_d
        x, Z, c, f = realize_and_ration(O, c_d, f_d, np.full(2, 100.0),
                                        np.full(2, np.inf), d)
        np.testing.assert_allclose(x, d)
        np.testing.assert_allclose(Z, O)

    def test_zero_demand(self):
        x, Z, c, f = realize_and_ration(np.zeros((1, 1)), np.zeros(1),
                                        np.zeros(1), np.array([5.0]),
                                        np.array([np.inf]), np.zeros(1))
        assert x[0] == 0.0

    @given(st.integers(2, 5), st.integers(0, 1000))
    @settings(max_examples=50, deadline=None)
    def test_delivery_conservation(self, n, seed):
        rng = np.random.default_rng(seed)
        O = rng.uniform(0, 10, size=(n, n))
        c_d = rng.uniform(0, 5, size=n)
        f_d = rng.uniform(0, 5, size=n)
        d = O.sum(axis=1) + c_d + f_d
        x, Z, c, f = realize_and_ration(O, c_d, f_d, rng.uniform(0, 15, n),
                                        rng.uniform(0, 15, n), d)
        np.testing.assert_allclose(Z.sum(axis=1) + c + f, x, rtol=1e-12)


class TestInventoryUpdate:
    def test_noncritical_capped_at_stock(self):
        from reopen.data import make_economy
        Z0 = np.array([[0.0, 10.0], [0.0, 0.0]])
        eco = make_economy(["i", "p"], Z0, [100.0, 100.0], [60.0, 60.0],
                           [30.0, 40.0], [20.0, 20.0], e0=[5.0, 5.0])
        ratings = np.eye(2)
        crit = CriticalityMatrix(ratings=ratings, codes=eco.codes)
        S = np.array([[0.0, 3.0], [0.0, 0.0]])
        binding = usage_binding_mask(crit, eco, "critical_baseline")
        # Required usage 0.1 * 50 = 5 exceeds the stock of 3.
        S_new, usage = consume_inputs_and_update_inventories(
            S, np.zeros((2, 2)), np.array([0.0, 50.0]), eco, binding)
        assert usage[0, 1] == pytest.approx(3.0)
        assert S_new[0, 1] == 0.0

    def test_steady_state_fixed_point(self, toy_economy, toy_targets):
        state = init_steady_state(toy_economy, toy_targets, EconParams())
        binding = np.zeros((2, 2), dtype=bool)
        S_new, _ = consume_inputs_and_update_inventories(
            state.S, toy_economy.Z0, toy_economy.x0, toy_economy, binding)
        np.testing.assert_allclose(S_new, state.S)


class TestLaborAdjustment:
    def test_firing_hand_case(self):
        l = labor_adjustment(np.array([30.0]), np.array([30.0]),
                             np.array([100.0]), np.array([100.0]),
                             np.array([80.0]), np.array([90.0]),
                             EconParams())
        assert l[0] == pytest.approx(30.0 - 6.0 / 15.0)

    def test_balanced_steady_state(self):
        l = labor_adjustment(np.array([30.0]), np.array([30.0]),
                             np.array([100.0]), np.array([100.0]),
                             np.array([np.inf]), np.array([100.0]),
                             EconParams())
        assert l[0] == pytest.approx(30.0)

    def test_hiring_rate(self):
        # Capacity binding below demand: hire at gamma_H toward the gap.
        l = labor_adjustment(np.array([15.0]), np.array([30.0]),
                             np.array([100.0]), np.array([50.0]),
                             np.array([np.inf]), np.array([100.0]),
                             EconParams())
        assert l[0] == pytest.approx(15.0 + (1.0 / 30.0) * 0.3 * 50.0)

    def test_payroll_never_exceeds_baseline(self):
        l = labor_adjustment(np.array([30.0]), np.array([30.0]),
                             np.array([100.0]), np.array([50.0]),
                             np.array([np.inf]), np.array([500.0]),
                             EconParams(gamma_H=1.0, gamma_F=1.0))
        assert l[0] == pytest.approx(30.0)

    def test_household_income(self):
        assert household_income(80.0, 100.0, 0.8) == pytest.approx(96.0)
        assert household_income(80.0, 100.0, 0.0) == pytest.approx(80.0)
        assert household_income(80.0, 100.0, 1.0) == pytest.approx(100.0)


class TestStepAndRun:
    def test_zero_shock_step_is_identity(self, synth10):
        economy, criticality, _, targets = synth10
        params = EconParams()
        schedule = zero_shock_schedule(economy, 5)
        state = init_steady_state(economy, targets, params)
        nxt = step(state, economy, criticality, targets, params, schedule)
        np.testing.assert_allclose(nxt.x, state.x, rtol=1e-12)
        np.testing.assert_allclose(nxt.S, state.S, rtol=1e-12)
        np.testing.assert_allclose(nxt.l, state.l, rtol=1e-12)

    def test_lockdown_drops_output(self, bundled):
        schedule = shocks.build_schedule(bundled.economy, bundled.calibration,
                                         bundled.params, "Lockdown", 5)
        series = run_simulation(bundled.economy, bundled.criticality,
                                bundled.targets, bundled.params, schedule, 5)
        assert series.x_tot[2] < series.x_tot[0]

    def test_determinism(self, bundled):
        def go():
            schedule = shocks.build_schedule(bundled.economy,
                                             bundled.calibration,
                                             bundled.params, "Lockdown", 40)
            return run_simulation(bundled.economy, bundled.criticality,
                                  bundled.targets, bundled.params, schedule, 40)
        a, b = go(), go()
        np.testing.assert_array_equal(a.x, b.x)
        np.testing.assert_array_equal(a.va_tot, b.va_tot)

    def test_horizon_zero(self, bundled):
        schedule = zero_shock_schedule(bundled.economy, 0)
        series = run_simulation(bundled.economy, bundled.criticality,
                                bundled.targets, bundled.params, schedule, 0)
        assert len(series) == 1

    def test_run_invariants_under_lockdown(self, synth10):
        economy, criticality, calib, targets = synth10
        params = EconParams()
        schedule = shocks.build_schedule(economy, calib, params, "Lockdown", 80)
        state = init_steady_state(economy, targets, params)
        theta0 = economy.c0 / economy.c0.sum()
        for _ in range(80):
            state = step(state, economy, criticality, targets, params, schedule)
            np.testing.assert_allclose(state.Z.sum(axis=1) + state.c + state.f,
                                       state.x, rtol=1e-12, atol=1e-12)
            assert np.all(state.S >= 0)
            assert state.theta.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(state.x <= state.x_cap * (1 + 1e-12) + 1e-12)
            assert np.all(state.x <= state.d * (1 + 1e-12) + 1e-12)
            assert np.all(state.l <= state.l_max + 1e-12)

    def test_gamma_zero_keeps_labor_constant(self, synth10):
        economy, criticality, calib, targets = synth10
        params = EconParams(gamma_H=0.0, gamma_F=0.0)
        calib = calib.without_supply_shocks()
        schedule = shocks.build_schedule(economy, calib, params, "Lockdown", 30)
        series = run_simulation(economy, criticality, targets, params,
                                schedule, 30)
        np.testing.assert_allclose(
            series.l, np.broadcast_to(economy.l0, series.l.shape))

    def test_series_export_round_trip(self, bundled, tmp_path):
        schedule = zero_shock_schedule(bundled.economy, 3)
        series = run_simulation(bundled.economy, bundled.criticality,
                                bundled.targets, bundled.params, schedule, 3)
        series.to_csv(tmp_path / "series.csv")
        series.to_json(tmp_path / "series.json")
        import csv as csv_mod
        import json
        with open(tmp_path / "series.csv") as fh:
            rows = list(csv_mod.reader(fh))
        assert len(rows) == 5
        assert float(rows[1][1]) == pytest.approx(series.x_tot[0])
        with open(tmp_path / "series.json") as fh:
            doc = json.load(fh)
        assert doc["aggregates"]["x_tot"][0] == pytest.approx(series.x_tot[0])
