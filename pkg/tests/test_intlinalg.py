from hypothesis import given, strategies as st

from depthcalc import intlinalg as la

small = st.integers(-6, 6)


@st.composite
def matrices(draw):
    m, n = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    return [[draw(small) for _ in range(n)] for _ in range(m)]


@given(matrices())
def test_smith_factorisation(M):
    m, n = len(M), len(M[0])
    U, D, V, _ = la.smith(M, nrows=m, ncols=n)
    assert la.matmul(la.matmul(U, M), V) == D
    d = la.diagonal(D)
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0


@given(matrices())
def test_hnf_spans_same_lattice(M):
    n = len(M[0])
    H = la.hnf_rows(M, n)
    for row in M:
        assert la.solve_in_basis(H, row) is not None or not any(row)
    # adding the HNF rows back does not enlarge the lattice
    assert la.hnf_rows(M + H, n) == H
    assert len(H) == la.rank(M, ncols=n)
