"""Heisenberg dynamics: Hamiltonian structure, flows, audits, residuals."""

import numpy as np
import pytest

from grading_lab.dense import ChainSpec, gauge_project, op_norm, realize
from grading_lab.dressing import dressed_matrix_unit, dressed_weyl
from grading_lab.dynamics import (
    FREE_FLOW_RATE_D2,
    build_hamiltonian,
    claimed_commutator_audit,
    commutator_decay,
    d2_effective_hopping,
    gauge_invariance_defect,
    heisenberg_evolve,
    reconstruct_spin_evolution,
    smear,
    span_residual,
)
from grading_lab.oneparticle import Hopping, OneParticleVector, evolve
from grading_lab.weyl import AlgebraElement, GradingParams, WeylMonomial

D2 = GradingParams(2, 1, 1)
D3 = GradingParams(3, 1, 1)
IM_NN = Hopping({1: -1j / 16, -1: 1j / 16})


def d2_model(L=8, scale=1.0):
    return build_hamiltonian(
        Hopping({1: -1j * scale / 16, -1: 1j * scale / 16}), D2, ChainSpec(2, L)
    )


class TestBuildHamiltonian:
    def test_zero_hopping(self):
        model = build_hamiltonian(Hopping({}), D3, ChainSpec(3, 4))
        assert not model.hamiltonian.terms

    def test_symbolically_self_adjoint(self):
        model = build_hamiltonian(Hopping({1: 0.5, -1: 0.5}), D3, ChainSpec(3, 5))
        assert model.hamiltonian.isclose(model.hamiltonian.adjoint(), 1e-13)

    def test_gauge_invariant(self):
        for model in (d2_model(), build_hamiltonian(Hopping({1: 0.5, -1: 0.5}), D3, ChainSpec(3, 5))):
            assert model.hamiltonian.is_gauge_invariant(1e-14)
            assert gauge_invariance_defect(model) < 1e-12

    def test_d2_matches_independent_majorana_chain(self):
        # one-sided strings make the d=2 Hamiltonian the one-species
        # Majorana hopping chain sum_{z,x} 2i Im h(x) g_z g_{z+x}; rebuild it
        # from raw Pauli matrices and compare exactly
        L = 6
        model = d2_model(L)
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        Z = np.diag([1.0, -1.0]).astype(complex)

        def gamma(z):
            ops = [np.eye(2, dtype=complex)] * L
            ops[z] = X
            for w in range(z + 1, L):
                ops[w] = Z
            out = np.eye(1, dtype=complex)
            for o in ops:
                out = np.kron(out, o)
            return out

        g = [gamma(z) for z in range(L)]
        ref = np.zeros((2**L, 2**L), dtype=complex)
        for x, a in model.hopping.coefficients.items():
            for z in range(L):
                if 0 <= z + x < L:
                    ref += 2j * a.imag * (g[z] @ g[z + x])
        assert np.abs(model.dense_hamiltonian.entries - ref).max() < 1e-12

    def test_support_too_large(self):
        with pytest.raises(ValueError):
            build_hamiltonian(Hopping({4: 1.0, -4: 1.0}), D2, ChainSpec(2, 4))


class TestHeisenbergEvolve:
    def test_t0_is_realization(self):
        model = d2_model(6)
        a = dressed_weyl(2, 1, D2, model.chain).as_element()
        got = heisenberg_evolve(a, model, 0.0).entries
        assert np.abs(got - realize(a, model.chain).entries).max() < 1e-12

    def test_norm_preserved(self):
        model = d2_model(6)
        a = dressed_matrix_unit(2, 0, 1, D2, model.chain)
        n0 = op_norm(realize(a, model.chain))
        nt = op_norm(heisenberg_evolve(a, model, 3.7))
        assert abs(nt - n0) < 1e-10

    def test_group_law(self):
        model = d2_model(6)
        a = realize(dressed_weyl(2, 1, D2, model.chain).as_element(), model.chain)
        one = heisenberg_evolve(heisenberg_evolve(a, model, 1.3), model, 2.1).entries
        two = heisenberg_evolve(a, model, 3.4).entries
        assert np.abs(one - two).max() < 1e-10

    def test_commutes_with_gauge_projection(self):
        model = d2_model(6)
        rng = np.random.default_rng(31)
        m = realize(
            AlgebraElement.from_monomials(
                [
                    (complex(rng.standard_normal(), rng.standard_normal()),
                     WeylMonomial.from_labels(2, {1: (0, 1), 3: (1, 1)})),
                    (complex(rng.standard_normal(), rng.standard_normal()),
                     WeylMonomial.from_labels(2, {2: (1, 0)})),
                ]
            ),
            model.chain,
        )
        lhs = gauge_project(heisenberg_evolve(m, model, 1.9)).entries
        rhs = heisenberg_evolve(gauge_project(m), model, 1.9).entries
        assert np.abs(lhs - rhs).max() < 1e-10

    def test_free_flow_dictionary(self):
        # dense flow of the charge-0-flavor field equals the one-particle
        # multiplier with symbol scaled by FREE_FLOW_RATE_D2; the hopping is
        # kept small so boundary leakage stays far below the tolerance
        model = d2_model(8, scale=0.01)
        f0 = OneParticleVector.from_amplitudes(2, 8, {(3, 0): 1.0, (4, 0): 0.5 - 0.25j})
        heff = d2_effective_hopping(model)
        assert heff.coefficients[1] == pytest.approx(FREE_FLOW_RATE_D2 * (-0.01j / 16))
        a0 = realize(smear(f0, D2, model.chain), model.chain)
        for t in (0.5, 1.5):
            lhs = heisenberg_evolve(a0, model, t).entries
            rhs = realize(smear(evolve(f0, heff, t), D2, model.chain), model.chain).entries
            dev = np.abs(lhs - rhs).max()
            signal = np.abs(lhs - a0.entries).max()
            assert dev < 1e-6
            assert signal > 1e-3  # the comparison tracks a real evolution

    def test_orthogonal_flavor_frozen(self):
        # the charge-1 flavor generators commute with the d=2 Hamiltonian
        model = d2_model(6)
        f1 = OneParticleVector.from_amplitudes(2, 6, {(2, 1): 1.0})
        a = realize(smear(f1, D2, model.chain), model.chain)
        got = heisenberg_evolve(a, model, 2.0).entries
        assert np.abs(got - a.entries).max() < 1e-12


class TestCommutatorDecay:
    def test_disjoint_supports_start_at_zero(self):
        model = d2_model(8)
        a = dressed_matrix_unit(1, 1, 1, D2, model.chain)
        b = dressed_matrix_unit(5, 1, 1, D2, model.chain)
        res = commutator_decay(a, b, model, [0.0, 0.4])
        assert res.points[0].norm < 1e-12
        assert res.a_gauge_invariant and res.b_gauge_invariant

    def test_series_deterministic_and_sorted(self):
        model = d2_model(6)
        a = dressed_matrix_unit(1, 1, 1, D2, model.chain)
        b = dressed_matrix_unit(3, 1, 1, D2, model.chain)
        r1 = commutator_decay(a, b, model, [2.0, 0.5, 1.0])
        r2 = commutator_decay(a, b, model, [0.5, 1.0, 2.0])
        assert np.array_equal(r1.times, np.array([0.5, 1.0, 2.0]))
        assert np.array_equal(r1.norms, r2.norms)

    def test_d2_free_contrast_frozen(self):
        # frozen from the first oracle run (L=10, h = -i/16 a = 1):
        # the gauge-invariant density pair dips below 0.1 of its window peak
        # while the bare charged pair never drops below 0.5 of its peak after
        # the front arrives; the asserted property is the ordering
        model = build_hamiltonian(IM_NN, D2, ChainSpec(2, 10))
        gi_a = dressed_matrix_unit(3, 1, 1, D2, model.chain)
        gi_b = dressed_matrix_unit(5, 1, 1, D2, model.chain)
        bare_a = WeylMonomial.single(2, 3, 0, 1).as_element()
        bare_b = WeylMonomial.single(2, 5, 0, 1).as_element()
        grid = [0.0, 1.5, 3.0, 4.5, 5.0, 6.0, 7.5, 9.0, 10.5, 11.0, 12.5, 14.0, 15.0]
        gi = commutator_decay(gi_a, gi_b, model, grid)
        bare = commutator_decay(bare_a, bare_b, model, grid)
        assert not bare.a_gauge_invariant
        gi_ratio = gi.norms.min(initial=np.inf, where=gi.times > 0) / gi.norms.max()
        assert gi.norms.max() == pytest.approx(0.2430, abs=0.02)
        assert gi_ratio < 0.1
        ipk = int(np.argmax(bare.norms))
        bare_ratio = bare.norms[ipk:].min() / bare.norms.max()
        assert bare.norms.max() == pytest.approx(1.9995, abs=0.01)
        assert bare_ratio > 0.5
        assert gi_ratio < bare_ratio


class TestClaimedCommutatorAudit:
    def test_rows_and_statuses(self):
        model = build_hamiltonian(Hopping({1: 0.5, -1: 0.5}), D3, ChainSpec(3, 5))
        rows = claimed_commutator_audit(model, x=3, z=1)
        ids = [r.claim_id for r in rows]
        assert "midpoint_reduction" in ids
        assert "endpoint_reduction_left" in ids
        assert "endpoint_reduction_right" in ids
        for r in rows:
            assert r.status in ("MATCH", "MISMATCH")
            assert r.payload

    def test_derivative_closure_row(self):
        model = build_hamiltonian(Hopping({1: 0.5, -1: 0.5}), D3, ChainSpec(3, 5))
        rows = claimed_commutator_audit(model, x=1, z=2)
        ids = [r.claim_id for r in rows]
        assert "derivative_closure" in ids

    def test_outside_interval_vanishes(self):
        model = build_hamiltonian(Hopping({1: 0.5, -1: 0.5}), D3, ChainSpec(3, 5))
        rows = claimed_commutator_audit(model, x=2, z=3)
        van = [r for r in rows if r.claim_id == "midpoint_vanishing"]
        assert van and van[0].status == "MATCH"


class TestSpanResidual:
    def test_d2_free_closure(self):
        model = d2_model(8)
        f = OneParticleVector.from_amplitudes(2, 8, {(3, 0): 1.0, (4, 1): 0.5, (5, 0): 0.25j})
        res, coeffs = span_residual(model, f)
        assert res < 1e-10
        assert coeffs

    def test_zero_hopping(self):
        model = build_hamiltonian(Hopping({}), D2, ChainSpec(2, 6))
        f = OneParticleVector.from_amplitudes(2, 6, {(2, 0): 1.0})
        res, coeffs = span_residual(model, f)
        assert res == 0.0 and not coeffs

    def test_d3_residual_reported(self):
        model = build_hamiltonian(Hopping({1: 0.5, -1: 0.5}), D3, ChainSpec(3, 5))
        f = OneParticleVector.from_amplitudes(3, 6, {(2, 0): 1.0})
        res, _ = span_residual(model, f)
        assert 0.0 < res <= 1.0


class TestReconstruction:
    def test_t0_identity(self):
        model = d2_model(6)
        rep = reconstruct_spin_evolution(model, 0.0)
        assert rep.deviation < 1e-12

    def test_d2_t1(self):
        rep = reconstruct_spin_evolution(d2_model(8), 1.0)
        assert rep.deviation < 1e-10

    def test_factor_order_irrelevant(self):
        model = build_hamiltonian(Hopping({1: 0.5, -1: 0.5}), D3, ChainSpec(3, 4))
        rep = reconstruct_spin_evolution(model, 0.8)
        assert rep.deviation < 1e-10
        assert rep.deviation_reversed < 1e-10
