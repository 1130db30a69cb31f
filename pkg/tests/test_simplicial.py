import numpy as np
import pytest

from xmodhom import crossed as xm
from xmodhom import groups as gr
from xmodhom import simplicial as sp
from xmodhom.intlin import FgAbelian, PresentedAb


def c2():
    return gr.cyclic_group(2)


def c4():
    return gr.cyclic_group(4)


def inclusion_c2_c4():
    g = c4()
    return xm.inclusion_xmod(g, gr.subgroup_closure(g, [2]))


class TestNerve:
    def test_level_orders(self):
        x = inclusion_c2_c4()
        s = sp.nerve(x, 3)
        assert [lvl.order for lvl in s.levels] == [4, 8, 16, 32]

    def test_trivial_top_constant(self):
        x = xm.zero_boundary_xmod(gr.trivial_group(), c4())
        s = sp.nerve(x, 3)
        assert all(lvl.order == 4 for lvl in s.levels)
        for i in range(2):
            assert np.array_equal(s.faces[1][i].images, np.arange(4))

    def test_identity_xmod_level_one(self):
        # nerve of (G, G, id) at level 1 is G x| G of order |G|^2
        s = sp.nerve(xm.identity_xmod(c2()), 2)
        assert s.levels[1].order == 4

    def test_level_two_middle_face(self):
        # d_1(h1, h2, g) = (h1 h2, g)
        x = xm.zero_boundary_xmod(c2(), c2())
        s = sp.nerve(x, 2)
        e = 1 * (2 * 2) + 1 * 2 + 0  # (h1, h2, g) = (1, 1, 0)
        assert int(s.faces[2][1].images[e]) == 0  # (1+1, 0) = (0, 0)

    def test_last_face_applies_boundary(self):
        # d_1(h, g) = mu(h) + g on the inclusion C2 < C4
        x = inclusion_c2_c4()
        s = sp.nerve(x, 1)
        e = 1 * 4 + 1  # (h, g) = (1, 1); mu(1) = 2 so image is 3
        assert int(s.faces[1][1].images[e]) == 3
        assert int(s.faces[1][0].images[e]) == 1

    def test_identities_validated(self):
        s = sp.nerve(inclusion_c2_c4(), 3)
        assert s.validate_identities()

    def test_degeneracy_inserts_identity(self):
        x = inclusion_c2_c4()
        s = sp.nerve(x, 2)
        # s_0(g) = (1_H, g) has id 0*4 + g
        assert np.array_equal(s.degeneracies[0][0].images, np.arange(4))


class TestMoore:
    def test_nerve_moore_is_the_crossed_module(self):
        x = inclusion_c2_c4()
        s = sp.nerve(x, 3)
        subs = sp.moore_complex(s)
        assert subs[0].order == 4        # M_0 = G
        assert subs[1].order == 2        # M_1 = H (kernel of d_0)
        assert subs[2].order == 1        # trivial from level 2 on
        assert subs[3].order == 1

    def test_constant_simplicial_group(self):
        s = sp.constant_simplicial_group(c4(), 3)
        subs = sp.moore_complex(s)
        assert subs[0].order == 4
        assert all(sub.order == 1 for sub in subs[1:])


class TestHomotopy:
    def test_pi0_is_cokernel(self):
        x = inclusion_c2_c4()
        s = sp.nerve(x, 2)
        pi0 = sp.homotopy_group(s, 0)
        assert pi0.order == 2  # C4 / C2

    def test_pi1_is_kernel(self):
        x = xm.zero_boundary_xmod(c2(), c2())
        s = sp.nerve(x, 2)
        assert sp.homotopy_group(s, 1).order == 2  # Ker(0) = C2
        assert sp.homotopy_group(s, 0).order == 2  # C2 / 0

    def test_pi1_trivial_for_injective_boundary(self):
        s = sp.nerve(inclusion_c2_c4(), 2)
        assert sp.homotopy_group(s, 1).order == 1

    def test_higher_homotopy_trivial(self):
        s = sp.nerve(inclusion_c2_c4(), 4)
        assert sp.homotopy_group(s, 2).order == 1
        assert sp.homotopy_group(s, 3).order == 1

    def test_constant_group(self):
        s = sp.constant_simplicial_group(c4(), 2)
        assert sp.homotopy_group(s, 0).order == 4
        assert sp.homotopy_group(s, 1).order == 1


class TestNerveMorphism:
    def test_identity_morphism(self):
        x = inclusion_c2_c4()
        src, dst, homs = sp.nerve_morphism(xm.identity_morphism(x), 2)
        for h in homs:
            assert np.array_equal(h.images, np.arange(h.src.order))

    def test_projection_morphism(self):
        x = xm.identity_xmod(c2())
        t = xm.identity_xmod(gr.trivial_group())
        m = xm.XModMorphism(x, t, gr.trivial_hom(x.top, t.top),
                            gr.trivial_hom(x.bottom, t.bottom))
        src, dst, homs = sp.nerve_morphism(m, 2)
        assert all(h.is_surjective() for h in homs)


class TestAbelianNerve:
    def test_constant_integral(self):
        s = sp.constant_simplicial_abelian(PresentedAb.free(1), 3)
        assert s.validate_identities()
        assert all(lvl.gens == 1 for lvl in s.levels)

    def test_level_structure(self):
        m = xm.AbelianXMod(c2(), c4(), gr.GroupHom(c2(), c4(), [0, 2]))
        ab, s, vecs, gens = sp.abelian_nerve(m, 2)
        # level p has order |C|^p * |A|
        assert [lvl.order for lvl in s.levels] == [4, 8, 16]
        assert ab.validate_identities()

    def test_last_face_formula(self):
        # d_1(c, a) = nu(c) + a for (C2, C4, x2) at level 1
        m = xm.AbelianXMod(c2(), c4(), gr.GroupHom(c2(), c4(), [0, 2]))
        ab, s, vecs, gens = sp.abelian_nerve(m, 1)
        e = 1 * 4 + 1  # (c, a) = (1, 1) -> nu(1) + 1 = 3
        assert int(s.faces[1][1].images[e]) == 3


class TestNerveAction:
    def test_trivial_action(self):
        actor = xm.zero_boundary_xmod(c2(), c2())
        mod = xm.AbelianXMod(c2(), c2(), gr.trivial_hom(c2(), c2()))
        data = sp.nerve_action(xm.trivial_xmod_action(actor, mod), 2)
        assert data.is_trivial()
        for mats in data.matrices:
            for g in range(mats.shape[0]):
                assert np.array_equal(mats[g],
                                      np.eye(mats.shape[1], dtype=np.int64))

    def test_nontrivial_bottom_action(self):
        # actor (0, C2, 0) inverting C3: every level acts by the same
        # inversion
        actor = xm.zero_boundary_xmod(gr.trivial_group(), c2())
        c3 = gr.cyclic_group(3)
        mod = xm.AbelianXMod(gr.trivial_group(), c3,
                             gr.trivial_hom(gr.trivial_group(), c3))
        actA = gr.GroupActionOnGroup(actor.bottom, c3, [[0, 1, 2], [0, 2, 1]])
        a = xm.XModAction(actor, mod,
                          gr.trivial_action(actor.bottom, mod.top),
                          actA, np.zeros((1, 3), dtype=np.int64))
        data = sp.nerve_action(a, 2)
        assert not data.is_trivial()
        for lvl_act in data.level_actions:
            assert np.array_equal(lvl_act.act[1], [0, 2, 1])
