import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_unitary_2x2
from qclonedel import closed_forms as cf
from qclonedel.errors import DomainError, UsageError
from qclonedel.machines import (
    ImperfectDeleterParams,
    bh_machine,
    catalog,
    imperfect_delete_machine,
    pb_delete_machine,
    qiu_machine,
    wz_machine,
)
from qclonedel.metrics import average_over_alpha2, universality_deviation
from qclonedel.scenarios import (
    GramConvention,
    alpha2_grid,
    clone_curves,
    clone_delete_scenario,
    clone_report,
    clone_scenario,
    delete_curves,
    delete_report,
    delete_scenario,
    perturbation_table,
    pipeline_curves,
    pipeline_output,
    pipeline_report,
    reproduce_paper,
)
from qclonedel.qlin import inner_product

XI = 1 / 6
GRID = alpha2_grid()
PAPER, STRICT = GramConvention.PAPER, GramConvention.STRICT


@pytest.fixture(scope="module")
def sym():
    return imperfect_delete_machine(ImperfectDeleterParams.symmetric_example())


def random_imperfect_params(seed, count=5):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        u = random_unitary_2x2(rng)
        out.append(ImperfectDeleterParams(u[0, 0], u[1, 0], u[0, 1], u[1, 1], rng.uniform(0, math.pi)))
    return out


class TestClone:
    @pytest.mark.parametrize("x", [0.0, 0.25, 0.5, 1.0])
    def test_wz_distortion(self, x):
        assert clone_scenario(wz_machine(), x).D_a == pytest.approx(2 * x * (1 - x), abs=1e-12)

    def test_bh_half(self):
        r = clone_scenario(bh_machine(XI), 0.5)
        assert r.D_a == pytest.approx(1 / 18, abs=1e-12)
        # shrinking factor eta = 2/3 on the Bloch vector
        assert r.rho_a.matrix[0, 1].real == pytest.approx(1 / 3, abs=1e-12)

    def test_bh_copies_are_symmetric(self):
        r = clone_scenario(bh_machine(0.3), 0.2)
        np.testing.assert_allclose(r.rho_a.matrix, r.rho_b.matrix, atol=1e-12)

    @pytest.mark.parametrize("xi", [1 / 6, 0.25, 0.4, 0.5])
    def test_bh_general_closed_form(self, xi):
        m = bh_machine(xi)
        for x in (0.0, 0.3, 0.5, 0.8):
            assert clone_scenario(m, x).D_a == pytest.approx(cf.bh_clone_distortion(xi, x), abs=1e-12)

    def test_rejects_deleter(self):
        with pytest.raises(UsageError):
            clone_scenario(pb_delete_machine(), 0.5)

    def test_report_shape(self):
        rep = clone_report(wz_machine(), [0.0, 0.5, 1.0])
        assert [r["alpha2"] for r in rep.rows] == [0.0, 0.5, 1.0]
        assert rep.averages["D"] == pytest.approx(1 / 3, abs=1e-13)
        assert set(rep.rows[0]) == {"alpha2", "D", "D_ab"}


class TestDelete:
    def test_pb_half(self):
        r = delete_scenario(pb_delete_machine(), 0.5)
        assert r.F == pytest.approx(0.75, abs=1e-12)
        assert r.F_input == pytest.approx(0.5, abs=1e-12)

    def test_pb_closed_forms(self):
        pb = pb_delete_machine()
        for x in GRID[::10]:
            r = delete_scenario(pb, x)
            assert r.F == pytest.approx(cf.pb_deletion_fidelity(x), abs=1e-12)
            assert r.F_input == pytest.approx(cf.pb_input_fidelity(x), abs=1e-12)

    def test_pb_averages(self):
        rep = delete_report(pb_delete_machine())
        assert rep.averages["F"] == pytest.approx(5 / 6, abs=1e-12)
        assert rep.averages["F_input"] == pytest.approx(2 / 3, abs=1e-12)

    def test_symmetric_imperfect_averages(self, sym):
        rep = delete_report(sym)
        assert rep.averages["D"] == pytest.approx(1 / 3, abs=1e-12)
        assert rep.averages["F"] == pytest.approx(5 / 6, abs=1e-12)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_imperfect_pointwise_closed_forms(self, seed):
        for p in random_imperfect_params(seed):
            m = imperfect_delete_machine(p)
            for x in GRID[::5]:
                r = delete_scenario(m, x)
                assert r.D == pytest.approx(cf.imperfect_distortion(p.k, x), abs=1e-12)
                assert r.F == pytest.approx(cf.imperfect_fidelity(p.k1, x), abs=1e-12)

    def test_imperfect_average_closed_forms(self):
        for p in random_imperfect_params(7):
            m = imperfect_delete_machine(p)
            d = average_over_alpha2(lambda x: delete_scenario(m, x).D)
            f = average_over_alpha2(lambda x: delete_scenario(m, x).F)
            assert d == pytest.approx(cf.imperfect_average_distortion(p.gg, p.hh), abs=1e-12)
            assert f == pytest.approx(cf.imperfect_average_fidelity(p.gg, p.hh, p.m2), abs=1e-12)

    def test_requires_sigma(self):
        with pytest.raises(UsageError):
            delete_scenario(wz_machine(), 0.5)

    def test_qiu_runs(self):
        r = delete_scenario(qiu_machine(1, 0, 1, 0), 0.3)
        assert 0 <= r.F <= 1


class TestPipelines:
    def test_wz_pb(self):
        rep = pipeline_report(wz_machine(), pb_delete_machine(), PAPER)
        assert np.all(np.abs(rep.column("F") - 1) <= 1e-12)
        assert rep.averages["D"] == pytest.approx(1 / 3, abs=1e-12)

    def test_wz_imperfect_matches_wz_pb(self, sym):
        a = pipeline_report(wz_machine(), pb_delete_machine(), PAPER)
        b = pipeline_report(wz_machine(), sym, PAPER)
        np.testing.assert_allclose(a.column("D"), b.column("D"), atol=1e-12)
        np.testing.assert_allclose(b.column("F"), 1, atol=1e-12)

    def test_bh_pb_spot_values(self):
        bh, pb = bh_machine(XI), pb_delete_machine()
        assert clone_delete_scenario(bh, pb, 0.0).D == pytest.approx(1 / 32, abs=1e-12)
        assert clone_delete_scenario(bh, pb, 0.5).F == pytest.approx(7 / 8, abs=1e-12)
        rep = pipeline_report(bh, pb, PAPER)
        assert rep.averages["D"] == pytest.approx(11 / 32, abs=1e-12)
        assert rep.averages["F"] == pytest.approx(7 / 8, abs=1e-12)

    def test_bh_pb_pointwise_identity(self):
        bh, pb = bh_machine(XI), pb_delete_machine()
        for x in GRID:
            assert clone_delete_scenario(bh, pb, x).D == pytest.approx(cf.bh_pb_distortion(XI, x), abs=1e-12)

    @pytest.mark.parametrize("xi", [0.2, 0.35, 0.5])
    def test_bh_pb_other_xi(self, xi):
        bh, pb = bh_machine(xi), pb_delete_machine()
        avg = average_over_alpha2(lambda x: clone_delete_scenario(bh, pb, x).D)
        assert avg == pytest.approx(cf.bh_pb_average_distortion(xi), abs=1e-12)
        assert clone_delete_scenario(bh, pb, 0.37).F == pytest.approx(cf.bh_pb_fidelity(xi), abs=1e-12)

    def test_bh_imperfect_coincides_with_bh_pb(self, sym):
        bh, pb = bh_machine(XI), pb_delete_machine()
        for x in GRID:
            a = clone_delete_scenario(bh, pb, x)
            b = clone_delete_scenario(bh, sym, x)
            assert abs(a.D - b.D) <= 1e-12
            assert abs(a.F - b.F) <= 1e-12

    @pytest.mark.parametrize("delta", [-0.7, -0.2, 0.3, 0.9])
    def test_bh_imperfect_closed_form(self, delta):
        p = ImperfectDeleterParams.from_delta(delta, sigma_theta=0.4)
        m = imperfect_delete_machine(p)
        bh = bh_machine(XI)
        for x in GRID[::10]:
            r = clone_delete_scenario(bh, m, x)
            assert r.D == pytest.approx(cf.bh_imperfect_distortion(XI, p.gg, p.hh, x), abs=1e-12)
            assert r.F == pytest.approx(cf.bh_imperfect_fidelity(XI, p.gg, p.hh, p.m2), abs=1e-12)
        avg = average_over_alpha2(lambda x: clone_delete_scenario(bh, m, x).D)
        assert avg == pytest.approx(cf.bh_imperfect_average_distortion(XI, p.gg, p.hh), abs=1e-12)

    @pytest.mark.parametrize("delta", [-0.5, 0.25, 1.0])
    def test_delta_endpoint_differences(self, delta):
        bh, pb = bh_machine(XI), pb_delete_machine()
        m = imperfect_delete_machine(ImperfectDeleterParams.from_delta(delta))
        scale = 2 * XI**2 / (1 + 2 * XI) ** 2
        at0 = clone_delete_scenario(bh, m, 0.0).D - clone_delete_scenario(bh, pb, 0.0).D
        at1 = clone_delete_scenario(bh, m, 1.0).D - clone_delete_scenario(bh, pb, 1.0).D
        # at alpha^2 = 0 only the |1> branch (weight gg*) survives; at 1 only hh*
        assert at0 == pytest.approx(scale * ((1 + delta) ** 2 - 1), abs=1e-12)
        assert at1 == pytest.approx(scale * ((1 - delta) ** 2 - 1), abs=1e-12)

    @pytest.mark.parametrize("cloner", ["wz", "bh"])
    @pytest.mark.parametrize("deleter", ["pb", "imperfect", "general", "qiu"])
    def test_strict_outputs_are_normalized(self, cloner, deleter):
        c, d = catalog()[cloner], catalog()[deleter]
        for x in (0.0, 0.3, 0.5, 0.9):
            out = pipeline_output(c, d, x, STRICT)
            assert inner_product(out, out).real == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("delta", [-1.0, -0.3, 0.0, 0.6])
    def test_paper_prefactor(self, delta):
        p = ImperfectDeleterParams.from_delta(delta)
        m = imperfect_delete_machine(p)
        bh = bh_machine(XI)
        for x in (0.0, 0.4, 1.0):
            assert clone_delete_scenario(bh, m, x, PAPER).norm2 == pytest.approx(
                1 + (p.gg + p.hh) * XI, abs=1e-12
            )

    def test_strict_bh_pb_values(self):
        # not a published value; fixed here as a regression anchor
        bh, pb = bh_machine(XI), pb_delete_machine()
        avg = average_over_alpha2(lambda x: clone_delete_scenario(bh, pb, x, STRICT).D)
        f = average_over_alpha2(lambda x: clone_delete_scenario(bh, pb, x, STRICT).F)
        assert avg == pytest.approx(19 / 54, abs=1e-12)
        assert f == pytest.approx(5 / 6, abs=1e-12)

    def test_convention_accepts_strings(self):
        a = clone_delete_scenario(bh_machine(XI), pb_delete_machine(), 0.3, "strict")
        b = clone_delete_scenario(bh_machine(XI), pb_delete_machine(), 0.3, STRICT)
        assert a.D == b.D

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            clone_delete_scenario(bh_machine(XI), pb_delete_machine(), 0.3, "loose")


class TestReducedStates:
    @pytest.mark.parametrize("name", ["pb", "imperfect", "general", "qiu"])
    def test_delete_marginals_are_states(self, name):
        m = catalog()[name]
        for x in GRID[::20]:
            r = delete_scenario(m, x)
            for rho in (r.rho_1, r.rho_2):
                assert rho.trace == pytest.approx(1, abs=1e-12)
                assert rho.is_psd()
                np.testing.assert_allclose(rho.matrix, rho.matrix.conj().T, atol=1e-12)


class TestBatched:
    xs = np.linspace(0, 1, 37)

    @pytest.mark.parametrize("name", ["wz", "bh"])
    def test_clone(self, name):
        m = catalog()[name]
        got = clone_curves(m, self.xs)
        for i, x in enumerate(self.xs):
            r = clone_scenario(m, x)
            assert got["D"][i] == pytest.approx(r.D_a, abs=1e-13)
            assert got["D_ab"][i] == pytest.approx(r.D_ab, abs=1e-13)

    @pytest.mark.parametrize("name", ["pb", "imperfect", "general", "qiu"])
    def test_delete(self, name):
        m = catalog()[name]
        got = delete_curves(m, self.xs)
        for i, x in enumerate(self.xs):
            r = delete_scenario(m, x)
            assert got["D"][i] == pytest.approx(r.D, abs=1e-13)
            assert got["F"][i] == pytest.approx(r.F, abs=1e-13)
            assert got["F_input"][i] == pytest.approx(r.F_input, abs=1e-13)

    @pytest.mark.parametrize("conv", [PAPER, STRICT])
    @pytest.mark.parametrize("pair", [("wz", "pb"), ("bh", "pb"), ("bh", "imperfect"), ("bh", "general")])
    def test_pipeline(self, pair, conv):
        c, d = catalog()[pair[0]], catalog()[pair[1]]
        got = pipeline_curves(c, d, self.xs, conv)
        for i, x in enumerate(self.xs):
            r = clone_delete_scenario(c, d, x, conv)
            assert got["D"][i] == pytest.approx(r.D, abs=1e-13)
            assert got["F"][i] == pytest.approx(r.F, abs=1e-13)


class TestPerturbation:
    def test_delta_zero(self):
        (row,) = perturbation_table([0.0], 0.5)
        assert row.D_sim == pytest.approx(1 / 3, abs=1e-12)
        assert row.F_sim == pytest.approx(5 / 6, abs=1e-12)

    def test_delta_one_full_overlap(self):
        (row,) = perturbation_table([1.0], 1.0)
        assert row.D_sim == pytest.approx(0.4, abs=1e-12)
        assert row.F_sim == pytest.approx(1.0, abs=1e-12)

    def test_negative_delta_blank_zero(self):
        (row,) = perturbation_table([-0.2], 0.0)
        assert row.D_sim == pytest.approx((1 + 0.008) / 3, abs=1e-12)
        assert row.F_sim == pytest.approx(2 / 3 + 1.2 / 6, abs=1e-12)

    def test_sweep_matches_closed_form(self):
        for m2 in (0.0, 0.3, 1.0):
            for row in perturbation_table(np.linspace(-1, 1, 9), m2):
                d, f = cf.delta_chart_averages(row.delta, m2)
                assert row.max_error <= 1e-12
                assert row.D_sim == pytest.approx(d, abs=1e-12)
                assert row.F_sim == pytest.approx(f, abs=1e-12)
                assert row.gg + row.hh == pytest.approx(2, abs=1e-12)

    def test_m2_out_of_range(self):
        with pytest.raises(DomainError):
            perturbation_table([0.0], 1.5)


def test_epsilon_expansion_evaluated_verbatim():
    # two-parameter formula, not realizable by a unitary machine unless eps = -2 eps1
    assert cf.epsilon_expansion(0, 0, 0.4) == pytest.approx((1 / 3, 5 / 6))
    d, f = cf.epsilon_expansion(0.2, -0.1, 1.0)
    assert d == pytest.approx(1 / 3 + (0.01 + 0.01) / 30)
    assert f == pytest.approx(5 / 6 + 0.1 / 6)
    # on the unitary slice eps = 2 delta, eps1 = -delta it reduces to the delta chart
    for delta in (-0.4, 0.7):
        for m2 in (0.0, 0.6):
            assert cf.epsilon_expansion(2 * delta, -delta, m2) == pytest.approx(
                cf.delta_chart_averages(delta, m2), abs=1e-15
            )


@settings(max_examples=25, deadline=None)
@given(st.floats(-1, 1), st.floats(0, 1))
def test_delta_chart_is_unitary(delta, m2):
    p = ImperfectDeleterParams.from_delta(delta, math.asin(math.sqrt(m2)))
    assert max(c.residual for c in p.constraints()) < 1e-12
    assert p.gg == pytest.approx(1 + delta, abs=1e-12)


@pytest.fixture(scope="module")
def table():
    return reproduce_paper()


class TestReproduce:
    def test_all_rows_pass(self, table):
        assert table.passed, [(r.quantity, r.simulated, r.paper_value) for r in table.failures()]

    @pytest.mark.parametrize(
        "quantity,value",
        [("F̄_b (PB)", 5 / 6), ("D̄₄ (BH+PB)", 11 / 32), ("F₄ (BH+PB)", 7 / 8), ("D̄₃ (WZ+PB)", 1 / 3)],
    )
    def test_named_rows(self, table, quantity, value):
        assert table[quantity].simulated == pytest.approx(value, abs=1e-12)
        assert table[quantity].abs_error <= 1e-10

    def test_strict_rows_unpinned(self, table):
        strict = [r for r in table.rows if r.paper_value is None]
        assert len(strict) == 4
        assert all(r.convention == "strict" and r.passed for r in strict)

    def test_no_commas_in_names(self, table):
        assert not any("," in r.quantity for r in table.rows)

    def test_notes(self, table):
        assert any("0.33" in n for n in table.notes)

    def test_deterministic(self, table):
        again = reproduce_paper()
        assert [(r.quantity, r.simulated) for r in again.rows] == [
            (r.quantity, r.simulated) for r in table.rows
        ]

    def test_unknown_row(self, table):
        with pytest.raises(KeyError):
            table["no such row"]


def test_universality_of_bh_pb_fidelity():
    bh, pb = bh_machine(XI), pb_delete_machine()
    assert universality_deviation(lambda x: clone_delete_scenario(bh, pb, x).F) <= 1e-12


def test_alpha2_grid():
    g = alpha2_grid()
    assert len(g) == 101 and g[0] == 0 and g[-1] == 1
    with pytest.raises(DomainError):
        alpha2_grid(1)
