import random

from sp6coh.lattice import (
    IntPoly,
    bareiss_det,
    det_pencil,
    hnf_canonical,
    identity_matrix,
    mat_inverse_unimodular,
    mat_mul,
    mat_rank,
    poly_from_roots,
    saturation_basis,
    smith_normal_form,
    solve_in_row_basis,
)


def test_snf_coprime_pair():
    sf = smith_normal_form([[2, 0], [0, 3]])
    assert sf.diagonal == [1, 6]


def test_snf_identity():
    sf = smith_normal_form(identity_matrix(4))
    assert sf.D == identity_matrix(4)


def test_snf_hand_elimination():
    M = [[2, 4], [6, 8]]
    sf = smith_normal_form(M)
    assert sf.diagonal == [2, 4]
    assert mat_mul(mat_mul(sf.U, M), sf.V) == sf.D


def test_snf_random_reconstruction():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 4)
        m = rng.randint(1, 4)
        M = [[rng.randint(-9, 9) for _ in range(m)] for _ in range(n)]
        sf = smith_normal_form(M)
        Uinv = mat_inverse_unimodular(sf.U)
        Vinv = mat_inverse_unimodular(sf.V)
        assert mat_mul(mat_mul(Uinv, sf.D), Vinv) == M
        d = sf.diagonal
        assert all(x >= 0 for x in d)
        for a, b in zip(d, d[1:]):
            assert b % a == 0 if a else b == 0


def test_det_pencil_examples():
    assert det_pencil(identity_matrix(2)) == poly_from_roots([1, 1])
    p = det_pencil([[-1]])
    assert p == IntPoly((-1, -1))
    assert abs(p(5)) == 6
    assert det_pencil([[0, 1], [-1, 0]]) == IntPoly((1, 0, 1))


def test_det_pencil_matches_cofactor_expansion():
    rng = random.Random(5)
    for _ in range(25):
        A = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        p = det_pencil(A)
        for q in range(2, 11):
            M = [[q * A[i][j] - (1 if i == j else 0) for j in range(3)] for i in range(3)]
            assert p(q) == bareiss_det(M)


def test_hnf_examples():
    assert hnf_canonical([(2, 0), (0, 2), (1, 1)]) == [[1, 1], [0, 2]]
    assert hnf_canonical([(1, 0), (0, 1)]) == identity_matrix(2)
    assert hnf_canonical([(3, 0)]) == [[3, 0]]
    assert hnf_canonical([]) == []


def test_hnf_invariance_under_recombination():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(2, 4)
        k = rng.randint(1, 4)
        gens = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(k)]
        base = hnf_canonical(gens)
        shuffled = gens[:]
        rng.shuffle(shuffled)
        # Unimodular recombination: add a multiple of one generator to another.
        if len(shuffled) >= 2:
            i, j = rng.sample(range(len(shuffled)), 2)
            c = rng.randint(-3, 3)
            shuffled[i] = [a + c * b for a, b in zip(shuffled[i], shuffled[j])]
        assert hnf_canonical(shuffled) == base


def test_saturation_and_solve():
    sat, full = saturation_basis([[2, 0, 0], [0, 2, 2]], 3)
    assert len(sat) == 2
    assert abs(bareiss_det(full)) == 1
    # (1, 1, 1) = (2,0,0)/2 + (0,2,2)/2 lies in the saturation.
    assert solve_in_row_basis(sat, [1, 1, 1]) is not None
    assert solve_in_row_basis([[2, 0], [0, 2]], [1, 1]) is None
    assert solve_in_row_basis([[2, 0], [0, 2]], [4, -2]) == [2, -1]


def test_poly_arithmetic():
    p = IntPoly((1, 2)) * IntPoly((-1, 1))
    assert p == IntPoly((-1, -1, 2))
    assert p.exact_div(IntPoly((1, 2))) == IntPoly((-1, 1))
    assert IntPoly(()).degree == -1
    assert IntPoly((0, 0)).degree == -1
    assert p(3) == 14
    assert p.format() == "-1-q+2q^2"


def test_rank():
    assert mat_rank([[1, 2], [2, 4]]) == 1
    assert mat_rank([[1, 0], [0, 1]]) == 2
    assert mat_rank([]) == 0
