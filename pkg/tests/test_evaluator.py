from fractions import Fraction

import pytest

from birkhoff.enumeration import circ_exact, enumerate_valid, graft_comb, tree_class
from birkhoff.hamiltonian import (
    GENERATOR_SCALE,
    Kernel,
    ModeLattice,
    ResonanceConfig,
    apply_phase_filter,
    h0,
    h1,
    phase,
    poisson_bracket,
    split_resonant,
)
from birkhoff.evaluator import (
    CLASS_INDEX_OFFSET,
    EvalConfig,
    cancellation_check,
    f_transform,
    normal_form,
    pi,
)
from birkhoff.trees import (
    Decoration,
    TreeError,
    degree,
    leaf,
    node,
    parse,
    relabel_root,
    render,
    symmetry_factor,
)

O, K, N, R = Decoration.CIRC, Decoration.K, Decoration.N, Decoration.R


def make_cfg(K_radius=2, threshold=0, cutoff=8):
    return EvalConfig(
        ModeLattice(1, K_radius), ResonanceConfig(threshold), cutoff
    )


def n_building_block(cfg):
    return apply_phase_filter(cfg.h1(), cfg.resonance).scale(GENERATOR_SCALE)


class TestPi:
    def test_leaves(self):
        cfg = make_cfg()
        assert pi(leaf(K), cfg) == h0(cfg.lattice, cfg.cutoff)
        assert pi(leaf(O), cfg) == h1(cfg.lattice, cfg.cutoff)
        assert pi(leaf(R), cfg) == split_resonant(cfg.h1(), cfg.resonance).res
        assert pi(leaf(N), cfg) == n_building_block(cfg)

    def test_intro_displays(self):
        cfg = make_cfg()
        nf1 = n_building_block(cfg)
        assert pi(parse("(o (o) (n))"), cfg) == poisson_bracket(cfg.h1(), nf1)
        expected = poisson_bracket(poisson_bracket(cfg.h0(), nf1), nf1)
        assert pi(parse("(o (o (k) (n)) (n))"), cfg) == expected

    def test_internal_projections(self):
        cfg = make_cfg()
        bracket = poisson_bracket(cfg.h1(), n_building_block(cfg))
        assert pi(parse("(r (o) (n))"), cfg) == split_resonant(
            bracket, cfg.resonance
        ).res
        assert pi(parse("(n (o) (n))"), cfg) == apply_phase_filter(
            bracket, cfg.resonance
        ).scale(GENERATOR_SCALE)

    def test_rejects_invalid(self):
        with pytest.raises(TreeError):
            pi(node(O, leaf(N), leaf(N)), make_cfg())

    def test_degree_bound_and_attainment(self):
        cfg = make_cfg(K_radius=1, cutoff=12)
        for t in enumerate_valid(8):
            k = pi(t, cfg)
            assert k.term_degree() <= degree(t)
            if not k.is_zero:
                assert k.term_degree() == degree(t)

    def test_truncation_matches_restriction(self):
        full = make_cfg(cutoff=10)
        cut = make_cfg(cutoff=6)
        for t in enumerate_valid(8):
            assert pi(t, cut) == pi(t, full).with_cutoff(6)

    def test_relabel_laws(self):
        cfg = make_cfg()
        for m in (3, 4):
            for t in tree_class(circ_exact(m)):
                base = pi(t, cfg)
                assert pi(relabel_root(t, R), cfg) == split_resonant(
                    base, cfg.resonance
                ).res
                assert pi(relabel_root(t, N), cfg) == apply_phase_filter(
                    base, cfg.resonance
                ).scale(GENERATOR_SCALE)

    def test_cache_hits(self):
        cfg = make_cfg()
        pi(parse("(o (o (k) (n)) (n))"), cfg)
        assert "(o (k) (n))" in cfg._cache
        assert "(n)" in cfg._cache


class TestFTransform:
    def test_f1_single_entry(self):
        cfg = make_cfg(cutoff=4)
        ledger = f_transform(1, cfg)
        assert len(ledger.entries) == 1
        entry = ledger.entries[0]
        assert render(entry.tree) == "(n)"
        assert entry.weight == 1
        assert ledger.total == n_building_block(cfg)

    def test_f2_weights(self):
        ledger = f_transform(2, make_cfg(cutoff=6))
        assert [str(e.weight) for e in ledger.entries] == ["1", "1/2"]

    def test_f3_trees_and_weights(self):
        ledger = f_transform(3, make_cfg(cutoff=8))
        got = {render(e.tree): e.weight for e in ledger.entries}
        assert got == {
            "(n (o (o) (n)) (n))": Fraction(1, 2),
            "(n (o (o (k) (n)) (n)) (n))": Fraction(1, 6),
            "(n (r) (n (o) (n)))": Fraction(1),
            "(n (r) (n (o (k) (n)) (n)))": Fraction(1, 2),
        }

    def test_degree_and_phase_of_generators(self):
        cfg = make_cfg(cutoff=8)
        for i in (1, 2, 3):
            total = f_transform(i, cfg).total
            for m in total.support():
                assert m.degree == 2 * i + 2
                assert abs(phase(m)) > cfg.resonance.threshold

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            f_transform(0, make_cfg())


class TestNormalForm:
    def test_index_offset(self):
        assert CLASS_INDEX_OFFSET == 2

    def test_ledger_structure_1_3(self):
        cfg = make_cfg(cutoff=6)
        ledger = normal_form(1, 3, cfg)
        trees = [render(e.tree) for e in ledger.entries]
        assert trees == [
            "(k)",
            "(r)",
            "(o (o) (n))",
            "(o (o (k) (n)) (n))",
        ]
        assert [str(e.weight) for e in ledger.entries] == ["1", "1", "1", "1/2"]

    def test_ledger_structure_2_4(self):
        ledger = normal_form(2, 4, make_cfg(cutoff=8))
        weights = [str(e.weight) for e in ledger.entries]
        # kinetic + 3 resonant trees + 4 bracket trees
        assert len(ledger.entries) == 1 + 3 + 4
        assert weights == ["1", "1", "1", "1/2", "1/2", "1/6", "1", "1/2"]

    def test_total_is_weighted_sum(self):
        cfg = make_cfg(cutoff=6)
        ledger = normal_form(1, 3, cfg)
        total = Kernel.zero(cfg.lattice, cfg.cutoff)
        for e in reversed(ledger.entries):
            total = total + e.kernel.scale(e.weight)
        assert total == ledger.total

    def test_range_trees_appear(self):
        cfg = make_cfg(K_radius=1, cutoff=10)
        ledger = normal_form(1, 5, cfg)
        degs = sorted({degree(e.tree) for e in ledger.entries})
        assert degs == [2, 4, 6, 8, 10]

    def test_low_degree_block_is_resonant(self):
        for threshold in (0, 3):
            cfg = make_cfg(threshold=threshold, cutoff=6)
            total = normal_form(1, 3, cfg).total
            for m in total.support():
                if m.degree <= 2 * (1 + CLASS_INDEX_OFFSET) - 2:
                    assert abs(phase(m)) <= threshold

    def test_preconditions(self):
        cfg = make_cfg(cutoff=6)
        with pytest.raises(ValueError):
            normal_form(3, 3, cfg)
        with pytest.raises(ValueError):
            normal_form(1, 4, cfg)  # cutoff mismatch

    def test_json_shape(self):
        cfg = make_cfg(cutoff=6)
        data = normal_form(1, 3, cfg).to_json(cfg)
        assert data["m"] == 1 and data["ell"] == 3
        assert data["config"]["radius"] == 2
        assert data["entries"][0]["tree"] == "(k)"
        assert data["entries"][3]["S"] == 2
        assert {"u", "ubar", "re", "im"} <= set(
            data["total"]["terms"][0]
        )


class TestPropositionCheck:
    def test_comb_factorization(self):
        cfg = make_cfg(cutoff=12)
        tails = [parse("(n (o) (n))"), parse("(n (o (k) (n)) (n))")]
        for base in (leaf(K), leaf(R)):
            for tail in ([tails[0], tails[0]], [tails[0], tails[1]]):
                comb = graft_comb(base, tail, O)
                s_comb = symmetry_factor(comb)
                lhs = pi(comb, cfg).scale(Fraction(1, s_comb))
                nested = pi(base, cfg).scale(
                    Fraction(1, symmetry_factor(base))
                )
                for t in tail:
                    nested = poisson_bracket(
                        nested,
                        pi(t, cfg).scale(Fraction(1, symmetry_factor(t))),
                    )
                rhs = nested.scale(Fraction(1, 2))  # 1/p! with p = 2
                assert lhs == rhs


class TestCancellation:
    def test_small_indices(self):
        for threshold in (0, 1, 3):
            cfg = make_cfg(threshold=threshold, cutoff=6)
            assert cancellation_check(1, cfg).is_zero

    def test_second_order(self):
        assert cancellation_check(2, make_cfg(cutoff=6)).is_zero
