import math
import random
from fractions import Fraction

import numpy as np
import pytest

from dioapprox.errors import DependentBasis, HypothesisViolated
from dioapprox.exactpow import pp
from dioapprox.lattice import (SiegelInstance, approx_siegel, lll_reduce)


def test_lll_identity():
    basis = lll_reduce([[1, 0], [0, 1]])
    assert basis == [(1, 0), (0, 1)]


def test_lll_finds_short_vector():
    basis = lll_reduce([[1, 0], [4, 1]])
    assert sum(x * x for x in basis[0]) == 1


def test_lll_rank_one():
    basis = lll_reduce([[201, 37]])
    assert basis[0] in ((201, 37), (-201, -37))


def test_lll_dependent():
    with pytest.raises(DependentBasis):
        lll_reduce([[1, 2], [2, 4]])


def test_lll_lovasz_postcondition():
    rng = random.Random(3)
    for _ in range(20):
        rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
        try:
            red = lll_reduce(rows, Fraction(3, 4))
        except DependentBasis:
            continue
        # recompute exact GSO and check Lovasz + size reduction
        from dioapprox.lattice import _gso_exact
        ortho, mu, norms = _gso_exact(red)
        for i in range(1, len(red)):
            assert norms[i] >= (Fraction(3, 4) - mu[i][i - 1] ** 2) * norms[i - 1]
            for j in range(i):
                assert abs(mu[i][j]) <= Fraction(1, 2)


def test_siegel_single_row_example():
    inst = SiegelInstance.from_matrix([[3, 4]], 7)
    sol = approx_siegel(inst, "exact")
    assert sol.f in ((1, -1), (-1, 1))
    assert sol.achieved_sup == 1
    assert abs(inst.row_dot(0, sol.f)) == 1
    assert sol.sup_bound_ok and sol.image_bound_ok


def test_siegel_identity_rows():
    inst = SiegelInstance.from_matrix([[1, 0], [0, 1]], 3)
    sol = approx_siegel(inst, "exact")
    assert sol.achieved_sup <= 3
    assert sol.sup_bound_ok and sol.image_bound_ok


def test_siegel_kernel_vector():
    inst = SiegelInstance.from_matrix([[1, 1, 1]], 5)
    sol = approx_siegel(inst, "exact")
    assert inst.row_dot(0, sol.f) == 0
    assert sol.image_bound_ok


def test_siegel_hypothesis_violated():
    inst = SiegelInstance.from_matrix([[30, 40]], 1)
    with pytest.raises(HypothesisViolated):
        approx_siegel(inst, "exact")


def _random_instance(rng):
    M = rng.integers(1, 5)
    N = rng.integers(M, 13)
    A = rng.integers(-10, 11, size=(int(M), int(N)))
    while any((A[i] == 0).all() for i in range(int(M))):
        A = rng.integers(-10, 11, size=(int(M), int(N)))
    inst = SiegelInstance.from_matrix(A.tolist(), 1)
    hyp = pp(4 * inst.N) ** Fraction(1, 2) * inst.delta() ** Fraction(1, inst.N)
    Q = int(math.floor(hyp.enclosure(64)[1])) + 1
    return SiegelInstance.from_matrix(A.tolist(), Q)


def test_siegel_random_instances_both_modes():
    rng = np.random.default_rng(2024)
    unrelaxed = 0
    trials = 60
    for _ in range(trials):
        inst = _random_instance(rng)
        sol = approx_siegel(inst, "exact")
        assert sol.sup_bound_ok and sol.image_bound_ok
        red = approx_siegel(inst, "reduced")
        assert red.sup_bound_ok or red.achieved_sup <= \
            (pp(2) ** Fraction(inst.N - 1, 2) * inst.Q).enclosure(64)[1]
        assert red.image_bound_ok_relaxed
        if red.image_bound_ok and red.sup_bound_ok:
            unrelaxed += 1
    # recorded statistic, not an assertion per the contract; keep visible
    print(f"reduced mode unrelaxed on {unrelaxed}/{trials}")


def test_siegel_determinism():
    rng = np.random.default_rng(5)
    inst = _random_instance(rng)
    a = approx_siegel(inst, "exact")
    b = approx_siegel(inst, "exact")
    assert a.f == b.f


def test_siegel_permutation_invariance():
    rng = np.random.default_rng(6)
    for _ in range(15):
        inst = _random_instance(rng)
        sol = approx_siegel(inst, "exact")
        perm = list(rng.permutation(inst.N))
        vecs_p = [tuple(row[j] for j in perm) for row in inst.vecs]
        inst_p = SiegelInstance(vecs_p, inst.scales, inst.Q)
        sol_p = approx_siegel(inst_p, "exact")
        unperm = [0] * inst.N
        for new_pos, old_pos in enumerate(perm):
            unperm[old_pos] = sol_p.f[new_pos]
        minima = {tuple(v) for v in sol.minima}
        from dioapprox.lattice import _canonical_sign
        assert _canonical_sign(tuple(unperm)) in minima
