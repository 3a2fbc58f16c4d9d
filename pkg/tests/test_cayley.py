import numpy as np
import pytest

from fundom.actions import Tensor, symmetric
from fundom.cayley import (CayleyError, cayley_demo, check_group_table, order8_tables, permuted_samples,
                           two_step_sort)
from fundom.project import Projector


def test_tables_are_groups():
    tables = order8_tables()
    assert set(tables) == {"C8", "C4xC2", "D4", "Q8", "C2^3"}
    for T in tables.values():
        assert np.array_equal(T[0], np.arange(1, 9)) and np.array_equal(T[:, 0], np.arange(1, 9))
    # abelian exactly for the three abelian groups
    assert {k for k, T in tables.items() if np.array_equal(T, T.T)} == {"C8", "C4xC2", "C2^3"}
    # element orders distinguish the classes
    def order_profile(T):
        M = T - 1
        out = []
        for a in range(8):
            k, x = 1, a
            while x != 0:
                x, k = M[x, a], k + 1
            out.append(k)
        return sorted(out)
    assert order_profile(tables["Q8"]) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert order_profile(tables["D4"]) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_check_rejects():
    T = order8_tables()["C8"].copy()
    T[0, 0], T[0, 1] = T[0, 1], T[0, 0]
    with pytest.raises(CayleyError):
        check_group_table(T)


def test_two_step_matches_generic():
    P = Projector(Tensor((symmetric(8), symmetric(8))))
    rng = np.random.default_rng(1)
    for T in order8_tables().values():
        S = permuted_samples(T, 20, rng)
        canon, _ = P.project_batch(S.reshape(20, -1), "asc")
        for s, c in zip(S, canon):
            assert np.array_equal(two_step_sort(s), c)


def test_demo_small():
    rep = cayley_demo(per_class=1, seed=0)
    assert rep.accuracy == 1.0 and rep.passed
    js = cayley_demo(per_class=20, seed=5).to_json()
    assert js["accuracy"] == 1.0 and js["two_step_matches"] == 100
    with pytest.raises(CayleyError):
        cayley_demo(per_class=0)
