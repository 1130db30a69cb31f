import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xmodhom import intlin
from xmodhom.intlin import (
    BiComplexAb,
    ChainComplex,
    ComplexSES,
    FgAbelian,
    PresentedAb,
    canonical_form,
    check_exactness_at,
    column_hnf,
    connecting_homomorphism,
    eye,
    homology_of_complex,
    induced_map_on_homology,
    kernel_basis,
    lattice_contains,
    smith_normal_form,
    snf_diagonal,
    solve_columns,
    total_complex,
    zeros,
)


def is_unimodular(m):
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    assert m.shape == (n, n)
    # exact integer determinant via fraction-free elimination is overkill
    # for test sizes; Bareiss on Python ints
    a = [[int(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    det = sign * (a[-1][-1] if n else 1)
    return det in (1, -1)


class TestSmithNormalForm:
    def test_small_example(self):
        m = np.array([[2, 4], [6, 8]])
        d, u, v = smith_normal_form(m)
        assert np.array_equal(u @ m @ v, d)
        # det = -8, gcd of entries = 2, so invariant factors are 2 and 4
        assert snf_diagonal(m) == [2, 4]

    def test_transforms_unimodular(self):
        m = np.array([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        d, u, v = smith_normal_form(m)
        assert np.array_equal(u @ m @ v, d)
        assert is_unimodular(u)
        assert is_unimodular(v)
        diag = [int(d[i, i]) for i in range(3)]
        assert all(diag[i + 1] % diag[i] == 0 for i in range(2)
                   if diag[i])

    def test_inverse_transforms(self):
        m = np.array([[6, 0, -3], [0, 10, 5]])
        r = intlin._snf(m)
        assert np.array_equal(r.u @ r.uinv, eye(2))
        assert np.array_equal(r.uinv @ r.u, eye(2))
        assert np.array_equal(r.v @ r.vinv, eye(3))
        assert np.array_equal(r.u @ np.asarray(m) @ r.v, r.d)

    def test_zero_and_empty(self):
        d, u, v = smith_normal_form(zeros(2, 3))
        assert not np.any(d)
        assert snf_diagonal(zeros(0, 5)) == []
        assert snf_diagonal(zeros(4, 0)) == []

    def test_large_entries_exact(self):
        # forces promotion off int64 during elimination
        m = np.array([[2**40, 3], [5, 2**40]], dtype=object)
        d, u, v = smith_normal_form(m)
        assert np.array_equal(np.asarray(u, dtype=object) @ m
                              @ np.asarray(v, dtype=object),
                              np.asarray(d, dtype=object))
        assert int(d[0, 0]) == 1

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        m = rng.integers(-9, 10, size=(6, 7))
        a = smith_normal_form(m)
        b = smith_normal_form(m.copy())
        for x, y in zip(a, b):
            assert np.array_equal(x, y)

    @given(st.lists(st.lists(st.integers(-30, 30), min_size=4, max_size=4),
                    min_size=4, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_property_snf_contract(self, rows):
        m = np.array(rows)
        d, u, v = smith_normal_form(m)
        assert np.array_equal(np.asarray(u, dtype=object)
                              @ m.astype(object)
                              @ np.asarray(v, dtype=object),
                              np.asarray(d, dtype=object))
        diag = [int(d[i, i]) for i in range(4)]
        assert all(x >= 0 for x in diag)
        for a, b in zip(diag, diag[1:]):
            assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
        assert is_unimodular(u) and is_unimodular(v)


class TestLattices:
    def test_column_hnf_canonical(self):
        m = np.array([[2, 4], [0, 6]])
        h = column_hnf(m)
        # same lattice both ways
        assert lattice_contains(m, h)
        assert lattice_contains(h, m)
        # off-pivot entries reduced below the pivot
        assert int(h[0, 1]) < abs(int(h[1, 1])) or int(h[1, 1]) == 0

    def test_hnf_invariant_under_column_ops(self):
        rng = np.random.default_rng(3)
        m = rng.integers(-5, 6, size=(4, 5))
        h1 = column_hnf(m)
        shuffled = m[:, [4, 2, 0, 3, 1]].copy()
        shuffled[:, 0] += 3 * shuffled[:, 2]
        h2 = column_hnf(shuffled)
        assert np.array_equal(h1, h2)

    def test_kernel_basis(self):
        m = np.array([[1, 2, 3]])
        k = kernel_basis(m)
        assert k.shape == (3, 2)
        assert not np.any(np.asarray(m) @ k)
        # (2, -1, 0) and (3, 0, -1) span the kernel
        assert lattice_contains(k, np.array([[2], [-1], [0]]))
        assert lattice_contains(k, np.array([[3], [0], [-1]]))

    def test_kernel_trivial(self):
        assert kernel_basis(eye(3)).shape == (3, 0)

    def test_solve_columns(self):
        m = np.array([[2, 0], [0, 3]])
        x = solve_columns(m, np.array([[4], [9]]))
        assert np.array_equal(np.asarray(m) @ x, np.array([[4], [9]]))
        assert solve_columns(m, np.array([[1], [0]])) is None

    def test_reduction_keeps_pivot_rows_unique(self):
        # feed order chosen so a gcd step happens at row 1 while the column
        # is still nonzero at row 0; the reducer must not end up with two
        # pivots on the same row (rank would be overcounted and kernel
        # vectors lost)
        red = intlin.ColumnReduction(3)
        red.add(np.array([0, 2, 0]))
        red.add(np.array([1, 3, 0]))
        red.add(np.array([0, 1, 0]))
        assert red.rank == 2
        rows = [r for r, _ in red.pivots]
        assert len(set(rows)) == len(rows)
        # each pivot column vanishes above its pivot row
        for r, c in red.pivots:
            assert not np.any(c[:r])
        assert np.array_equal(red.hnf(), np.array([[1, 0], [0, 1], [0, 0]]))

    def test_kernel_rank_matches_snf_rank(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            m = rng.integers(-4, 5, size=(5, 8))
            rank = sum(1 for d in snf_diagonal(m) if d)
            k = kernel_basis(m)
            assert k.shape[1] == 8 - rank
            assert not np.any(np.asarray(m, dtype=object) @ k)

    def test_lattice_membership(self):
        m = np.array([[2, 0], [0, 4]])
        assert lattice_contains(m, np.array([[6], [8]]))
        assert not lattice_contains(m, np.array([[1], [0]]))
        assert not lattice_contains(m, np.array([[0], [2]]))


class TestCanonicalForm:
    def test_grammar(self):
        assert str(FgAbelian(0, ())) == "0"
        assert str(FgAbelian(1, ())) == "Z"
        assert str(FgAbelian(3, ())) == "Z^3"
        assert str(FgAbelian(0, (2,))) == "Z/2"
        assert str(FgAbelian(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
        assert FgAbelian(0, (2, 6)).order == 12
        assert FgAbelian(1, ()).order is None

    def test_divisor_chain_enforced(self):
        with pytest.raises(ValueError):
            FgAbelian(0, (4, 2))
        with pytest.raises(ValueError):
            FgAbelian(0, (1,))

    def test_presentations(self):
        assert canonical_form(PresentedAb.free(2)) == FgAbelian(2, ())
        assert canonical_form(PresentedAb.cyclic(6)) == FgAbelian(0, (6,))
        assert canonical_form(PresentedAb.cyclic(1)).is_trivial()
        # Z^2 / <(2,0),(0,2)> = (Z/2)^2, invariant factors (2, 2)
        a = PresentedAb(2, 2 * eye(2))
        assert canonical_form(a) == FgAbelian(0, (2, 2))

    @given(st.lists(st.lists(st.integers(-8, 8), min_size=3, max_size=3),
                    min_size=2, max_size=5))
    @settings(max_examples=40, deadline=None)
    def test_invariant_under_unimodular_change(self, cols):
        rel = np.array(cols).T
        base = canonical_form(PresentedAb(3, rel))
        # change basis of the generators by a fixed unimodular matrix
        w = np.array([[1, 2, 0], [0, 1, 3], [0, 0, 1]])
        assert canonical_form(PresentedAb(3, w @ rel)) == base
        # column operations on the relations do not change the group
        rel2 = rel[:, ::-1].copy()
        rel2[:, 0] += 2 * rel2[:, -1]
        assert canonical_form(PresentedAb(3, rel2)) == base


class TestChainComplexHomology:
    def test_times_two_on_z(self):
        # 0 -> Z --2--> Z -> 0
        c = ChainComplex([PresentedAb.free(1), PresentedAb.free(1)],
                         [np.array([[2]])])
        c.validate()
        assert homology_of_complex(c, 0).group == FgAbelian(0, (2,))
        assert homology_of_complex(c, 1).group.is_trivial()

    def test_circle(self):
        # simplicial circle: Z^2 <- Z^2 with boundary [v1-v0 twice]
        d = np.array([[-1, -1], [1, 1]])
        c = ChainComplex([PresentedAb.free(2), PresentedAb.free(2)], [d])
        assert homology_of_complex(c, 0).group == FgAbelian(1, ())
        assert homology_of_complex(c, 1).group == FgAbelian(1, ())

    def test_periodic_cyclic_complex(self):
        # ... Z --0--> Z --2--> Z --0--> Z over the group ring picture of C2,
        # computing H_*(C2): Z, Z/2, 0, Z/2
        terms = [PresentedAb.free(1)] * 4
        bnds = [np.array([[0]]), np.array([[2]]), np.array([[0]])]
        c = ChainComplex(terms, bnds)
        # degree 0 here has no incoming augmentation so H0 = Z
        assert homology_of_complex(c, 0).group == FgAbelian(1, ())
        assert homology_of_complex(c, 1).group == FgAbelian(0, (2,))
        assert homology_of_complex(c, 2).group.is_trivial()

    def test_presented_terms(self):
        # (Z/4) --2--> (Z/4): kernel {0,2}, image {0,2}, H = 0 at degree 0
        t = PresentedAb.cyclic(4)
        c = ChainComplex([t, t], [np.array([[2]])])
        c.validate()
        h0 = homology_of_complex(c, 0)
        assert h0.group == FgAbelian(0, (2,))
        h1 = homology_of_complex(c, 1)
        assert h1.group == FgAbelian(0, (2,))

    def test_class_of_representatives(self):
        c = ChainComplex([PresentedAb.free(1), PresentedAb.free(1)],
                         [np.array([[3]])])
        h = homology_of_complex(c, 0)
        assert h.group == FgAbelian(0, (3,))
        rep = h.reps[:, 0]
        assert np.array_equal(h.class_of(rep), np.array([1]))
        assert np.array_equal(h.class_of(4 * rep), np.array([1]))
        assert np.array_equal(h.class_of(3 * rep), np.array([0]))

    def test_invalid_complex_detected(self):
        c = ChainComplex([PresentedAb.free(1)] * 3,
                         [np.array([[1]]), np.array([[1]])])
        with pytest.raises(ValueError):
            c.validate()


class TestInducedAndConnecting:
    def _mod_complex(self, m):
        return ChainComplex([PresentedAb.free(1), PresentedAb.free(1)],
                            [np.array([[m]])])

    def test_induced_map(self):
        # multiplication by 1: Z/2 -> Z/4 induced by (Z -2-> Z) -> (Z -4-> Z)
        src = self._mod_complex(2)
        dst = self._mod_complex(4)
        f = [np.array([[2]]), np.array([[1]])]
        mat, sh, dh = induced_map_on_homology(f, src, dst, 0)
        assert sh.group == FgAbelian(0, (2,))
        assert dh.group == FgAbelian(0, (4,))
        assert mat.shape == (1, 1)
        assert int(mat[0, 0]) % 4 == 2

    def test_not_a_chain_map_rejected(self):
        src = self._mod_complex(2)
        dst = self._mod_complex(4)
        f = [np.array([[1]]), np.array([[1]])]
        with pytest.raises(ValueError):
            induced_map_on_homology(f, src, dst, 0)

    def test_exactness_check(self):
        a = PresentedAb.cyclic(2)
        b = PresentedAb.cyclic(4)
        c = PresentedAb.cyclic(2)
        # 0 -> Z/2 --2--> Z/4 --1--> Z/2 -> 0
        assert check_exactness_at(np.array([[2]]), np.array([[1]]), a, b, c)
        # Z/2 --0--> Z/4 --1--> Z/2 is not exact at the middle
        assert not check_exactness_at(np.array([[0]]), np.array([[1]]),
                                      a, b, c)

    def test_connecting_snake(self):
        # levelwise 0 -> (Z -2-> Z) -> (Z -4- wrong; use compatible maps)
        # sub:  Z --4--> Z   (H0 = Z/4, H1 = 0)
        # mid:  Z^2 with d = [[4,1],[0,2]] ... keep it simple instead:
        # classic: 0 -> C' -> C -> C'' -> 0 with
        #   C'  : 0 -> Z --1--> Z   (acyclic)
        #   C   : 0 -> Z --0--> Z
        #   C'' : 0 -> 0 ------> 0 replaced by cokernels is awkward;
        # use the standard snake producing delta: H1(quot) -> H0(sub).
        sub = ChainComplex([PresentedAb.free(1), PresentedAb.free(1)],
                           [np.array([[2]])])
        mid = ChainComplex([PresentedAb.free(2), PresentedAb.free(2)],
                           [np.array([[2, 1], [0, 1]])])
        quot = ChainComplex([PresentedAb.free(1), PresentedAb.free(1)],
                            [np.array([[1]])])
        inject = [np.array([[1], [0]]), np.array([[1], [0]])]
        project = [np.array([[0, 1]]), np.array([[0, 1]])]
        ses = ComplexSES(sub, mid, quot, inject, project)
        ses.validate([0, 1])
        # H1(quot) = 0 so the connecting map is trivially fine; check shapes
        mat, qh, sh = connecting_homomorphism(ses, 1)
        assert qh.group.is_trivial()
        assert sh.group == FgAbelian(0, (2,))
        assert mat.shape == (1, 0)

    def test_connecting_nontrivial(self):
        # sub = (0 -> Z), mid = (Z -1-> Z), quot = (Z -> 0):
        # delta: H1(quot) = Z -> H0(sub) = Z is an isomorphism (up to sign)
        sub = ChainComplex([PresentedAb.free(1), PresentedAb(0, zeros(0, 0))],
                           [zeros(1, 0)])
        mid = ChainComplex([PresentedAb.free(1), PresentedAb.free(1)],
                           [np.array([[1]])])
        quot = ChainComplex([PresentedAb(0, zeros(0, 0)), PresentedAb.free(1)],
                            [zeros(0, 1)])
        inject = [np.array([[1]]), zeros(1, 0)]
        project = [zeros(0, 1), np.array([[1]])]
        ses = ComplexSES(sub, mid, quot, inject, project)
        ses.validate([0, 1])
        mat, qh, sh = connecting_homomorphism(ses, 1)
        assert qh.group == FgAbelian(1, ())
        assert sh.group == FgAbelian(1, ())
        assert abs(int(mat[0, 0])) == 1


class TestBiComplex:
    def test_total_of_two_column_grid(self):
        # columns p=0,1 each the complex Z --2--> Z, horizontal identity maps
        free = PresentedAb.free(1)
        entries = {(p, q): free for p in (0, 1) for q in (0, 1)}
        vertical = {(p, 1): np.array([[2]]) for p in (0, 1)}
        horizontal = {(1, q): np.array([[1]]) for q in (0, 1)}
        b = BiComplexAb(entries, vertical, horizontal)
        b.validate_squares()
        tot, offsets = total_complex(b)
        tot.validate()
        assert tot.terms[1].gens == 2
        assert offsets[(0, 0)] == (0, 0)
        assert offsets[(1, 1)] == (2, 0)
        # total complex of the cone on an iso-ish square: H agrees with
        # direct computation
        d1 = tot.boundaries[1]
        d2 = tot.boundaries[2]
        assert not np.any(np.asarray(d1) @ np.asarray(d2))
        # this bicomplex is the cone of the identity, so it is acyclic in
        # positive degrees and H0 = coker of d1
        assert homology_of_complex(tot, 1).group.is_trivial()
        assert homology_of_complex(tot, 2).group.is_trivial()

    def test_sign_convention(self):
        free = PresentedAb.free(1)
        entries = {(0, 0): free, (1, 0): free, (0, 1): free, (1, 1): free}
        vertical = {(0, 1): np.array([[3]]), (1, 1): np.array([[3]])}
        horizontal = {(1, 0): np.array([[5]]), (1, 1): np.array([[5]])}
        b = BiComplexAb(entries, vertical, horizontal)
        tot, _ = total_complex(b)
        d1, d2 = tot.boundaries[1], tot.boundaries[2]
        assert not np.any(np.asarray(d1) @ np.asarray(d2))
