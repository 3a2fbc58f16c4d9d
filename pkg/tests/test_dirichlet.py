import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fundom.actions import Plain, Tensor, cyclic, dihedral, flatten, symmetric
from fundom.dirichlet import (DirichletConfig, DirichletError, brute_force_min, default_generating_set, descend,
                              descend_multi_seed, objective, seed_elements)
from fundom.group import PermGroup, build_chain, random_element
from fundom.perm import apply_to_vector, transposition


def test_objective():
    assert objective([1, 3], [1, 2]) == 7
    assert objective([0, 0], [1, 2]) == 0
    assert {objective(v, [1, 2]) for v in ([1, 3], [3, 1])} == {7, 5}
    with pytest.raises(DirichletError):
        objective([1, 2, 3], [1, 2])


def test_descend_s2():
    cfg = DirichletConfig.for_spec(symmetric(2), reference=[1, 2])
    res = descend([1, 3], cfg)
    assert res.canonical.tolist() == [3, 1]
    assert res.objective == 5 and res.steps == 1 and res.converged


def test_descend_fixpoint():
    cfg = DirichletConfig.for_spec(symmetric(3))
    res = descend([3, 2, 1], cfg)
    assert res.steps == 0 and res.witness.is_identity()
    assert res.canonical.tolist() == [3, 2, 1]


def test_descend_s3_adjacent():
    cfg = DirichletConfig.for_spec(symmetric(3))
    assert {t.array for t in cfg.generating_set} == {transposition(1, 2, 3).array, transposition(2, 3, 3).array}
    assert descend([1, 2, 3], cfg).canonical.tolist() == [3, 2, 1]


def test_step_cap():
    cfg = DirichletConfig.for_spec(symmetric(6), max_steps=2)
    res = descend(np.arange(6.0), cfg)
    assert res.steps == 2 and not res.converged


def test_config_validation():
    with pytest.raises(DirichletError):
        DirichletConfig.for_spec(symmetric(3), reference=[1, 1, 2])
    with pytest.raises(DirichletError):
        DirichletConfig.for_spec(cyclic(3), generating_set=[transposition(1, 2, 3)])


def test_brute_force():
    ch = build_chain(symmetric(2))
    assert brute_force_min(ch, [1, 3], [1, 2]).canonical.tolist() == [3, 1]
    assert brute_force_min(build_chain(PermGroup.trivial(3)), [4, 1, 2]).canonical.tolist() == [4, 1, 2]
    assert brute_force_min(build_chain(dihedral(5)), [2.0] * 5).canonical.tolist() == [2.0] * 5


def test_multi_seed():
    spec = Tensor((cyclic(2), cyclic(2)))
    assert len(seed_elements(spec)) == 4
    big = Tensor((cyclic(12), cyclic(15)))
    assert len(seed_elements(big)) == 180
    cfg = DirichletConfig.for_spec(spec)
    x = np.array([[3.0, 1.0], [0.0, 2.0]])
    assert descend_multi_seed(x, spec, cfg).objective <= descend(x, cfg).objective
    with pytest.raises(DirichletError):
        seed_elements(Tensor((PermGroup.from_cycles(3, ["(1 2)"]), cyclic(3))))


def test_determinism():
    spec = Tensor((cyclic(3), cyclic(3)))
    cfg = DirichletConfig.for_spec(spec)
    x = np.random.default_rng(0).integers(0, 10, (3, 3)).astype(float)
    a, b = descend_multi_seed(x, spec, cfg), descend_multi_seed(x, spec, cfg)
    assert np.array_equal(a.canonical, b.canonical) and a.witness == b.witness


SPECS = [Plain(cyclic(5)), Plain(dihedral(5)), Plain(symmetric(4)), Tensor((cyclic(3), cyclic(3))),
         Tensor((symmetric(2), cyclic(3)))]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPECS), st.integers(0, 10**6))
def test_descent_properties(spec, seed):
    x = np.random.default_rng(seed).integers(0, 10, spec.degree).astype(float)
    cfg = DirichletConfig.for_spec(spec)
    chain = build_chain(flatten(spec))
    res = descend(x, cfg)
    assert all(b < a for a, b in zip(res.trace, res.trace[1:]))
    assert chain.contains(res.witness)
    assert np.array_equal(apply_to_vector(res.witness, x), res.canonical)
    exact = brute_force_min(chain, x, cfg.r)
    assert exact.objective <= res.objective <= objective(x, cfg.r)
    g = random_element(flatten(spec), 20, seed)
    vals = [objective(apply_to_vector(h, x), cfg.r) for h in chain.elements(10**4)]
    if sum(v == exact.objective for v in vals) == 1:
        assert np.array_equal(brute_force_min(chain, apply_to_vector(g, x), cfg.r).canonical, exact.canonical)


def test_default_generating_sets():
    gens = default_generating_set(Tensor((symmetric(3), cyclic(3))))
    chain = build_chain(flatten(Tensor((symmetric(3), cyclic(3)))))
    assert all(chain.contains(t) for t in gens)
    assert not any(t.is_identity() for t in gens)
