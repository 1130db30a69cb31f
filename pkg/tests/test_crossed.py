import numpy as np
import pytest

from xmodhom import groups as gr
from xmodhom import crossed as xm
from xmodhom.intlin import FgAbelian, canonical_form


def c2():
    return gr.cyclic_group(2)


def c4():
    return gr.cyclic_group(4)


def s3():
    return gr.symmetric_group(3)


def inclusion_c2_c4():
    g = c4()
    return xm.inclusion_xmod(g, gr.subgroup_closure(g, [2]))


def inclusion_a3_s3():
    g = s3()
    three = next(x for x in range(6) if g.element_order(x) == 3)
    return xm.inclusion_xmod(g, gr.subgroup_closure(g, [three]))


def zero_c2_c2():
    return xm.zero_boundary_xmod(c2(), c2())


class TestValidation:
    def test_inclusion_valid(self):
        assert xm.validate_xmod(inclusion_c2_c4()).ok
        assert xm.validate_xmod(inclusion_a3_s3()).ok

    def test_zero_map_valid(self):
        assert xm.validate_xmod(zero_c2_c2()).ok

    def test_identity_xmod(self):
        x = xm.identity_xmod(s3())
        assert xm.validate_xmod(x).ok
        assert x.top.order == 6 and x.bottom.order == 6

    def test_equivariance_failure_witnessed(self):
        # C2 -> S3 hitting a transposition, trivial action: conjugating the
        # transposition by a 3-cycle moves it, breaking equivariance
        g = s3()
        two = next(x for x in range(6) if g.element_order(x) == 2)
        h = c2()
        mu = gr.GroupHom(h, g, [0, two])
        x = xm.CrossedModule(h, g, mu, gr.trivial_action(g, h), check=False)
        rep = xm.validate_xmod(x)
        assert not rep.ok
        assert "equivariance" in rep.failures[0]

    def test_peiffer_failure_witnessed(self):
        # (S3, C1, 0): trivial bottom forces trivial action, but S3 is not
        # abelian so the Peiffer identity fails
        g = gr.trivial_group()
        h = s3()
        x = xm.CrossedModule(h, g, gr.trivial_hom(h, g),
                             gr.trivial_action(g, h), check=False)
        rep = xm.validate_xmod(x)
        assert not rep.ok
        assert "Peiffer" in rep.failures[0]

    def test_non_normal_rejected(self):
        g = s3()
        two = next(x for x in range(6) if g.element_order(x) == 2)
        with pytest.raises(ValueError):
            xm.inclusion_xmod(g, gr.subgroup_closure(g, [two]))


class TestMorphisms:
    def test_identity_morphism(self):
        m = xm.identity_morphism(inclusion_c2_c4())
        m.validate()

    def test_square_must_commute(self):
        x = zero_c2_c2()
        y = xm.identity_xmod(c2())
        with pytest.raises(ValueError):
            xm.XModMorphism(x, y, gr.identity_hom(x.top),
                            gr.identity_hom(x.bottom))

    def test_projection_to_quotient(self):
        x = inclusion_c2_c4()
        ab, proj = xm.abelianise(x)
        proj.validate()


class TestAbelianise:
    def test_abelian_fixed_point(self):
        x = zero_c2_c2()
        ab, _ = xm.abelianise(x)
        assert ab.top.order == 2 and ab.bottom.order == 2
        assert gr.abelian_invariants(ab.top) == FgAbelian(0, (2,))

    def test_identity_s3(self):
        # (S3, S3, id) abelianises to (C2, C2, id): [G, H] = [S3, S3] = A3
        ab, _ = xm.abelianise(xm.identity_xmod(s3()))
        assert ab.top.order == 2 and ab.bottom.order == 2
        assert np.array_equal(ab.boundary.images, [0, 1])

    def test_inclusion_a3_s3(self):
        # [S3, A3] = A3 so the top quotient is trivial
        ab, _ = xm.abelianise(inclusion_a3_s3())
        assert ab.top.order == 1 and ab.bottom.order == 2

    def test_idempotent(self):
        ab1, _ = xm.abelianise(xm.identity_xmod(s3()))
        ab2, _ = xm.abelianise(ab1.as_crossed_module())
        assert (gr.abelian_invariants(ab1.top)
                == gr.abelian_invariants(ab2.top))
        assert (gr.abelian_invariants(ab1.bottom)
                == gr.abelian_invariants(ab2.bottom))


class TestAbelianXMod:
    def test_presented_view(self):
        g = c4()
        m = xm.AbelianXMod(c2(), g, gr.GroupHom(c2(), g, [0, 2]))
        assert canonical_form(m.pres_top) == FgAbelian(0, (2,))
        assert canonical_form(m.pres_bottom) == FgAbelian(0, (4,))
        assert m.boundary_matrix.shape == (1, 1)
        # the generator of C2 hits twice the generator of C4
        assert int(m.boundary_matrix[0, 0]) % 4 == 2

    def test_requires_abelian(self):
        with pytest.raises(ValueError):
            xm.AbelianXMod(s3(), gr.trivial_group(),
                           gr.trivial_hom(s3(), gr.trivial_group()))


class TestActions:
    def module_c2_c4(self):
        return xm.AbelianXMod(c2(), c4(), gr.GroupHom(c2(), c4(), [0, 2]))

    def test_trivial_action_valid(self):
        a = xm.trivial_xmod_action(inclusion_c2_c4(), self.module_c2_c4())
        assert xm.validate_xmod_action(a).ok

    def test_bad_xi_witnessed(self):
        a = xm.trivial_xmod_action(zero_c2_c2(), self.module_c2_c4())
        bad = a.xi.copy()
        bad[1, 1] = 1  # xi(h, p) = 1 breaks nu.xi = (mu(h).p) - p = 0
        b = xm.XModAction(a.actor, a.module, a.actG_C, a.actG_A, bad)
        rep = xm.validate_xmod_action(b)
        assert not rep.ok

    def test_nontrivial_bottom_action(self):
        # actor (0, C2, 0), module (0, C3, 0), C2 inverting C3
        actor = xm.zero_boundary_xmod(gr.trivial_group(), c2())
        c3 = gr.cyclic_group(3)
        mod = xm.AbelianXMod(gr.trivial_group(), c3,
                             gr.trivial_hom(gr.trivial_group(), c3))
        actA = gr.GroupActionOnGroup(c2(), c3, [[0, 1, 2], [0, 2, 1]])
        actA = gr.GroupActionOnGroup(actor.bottom, mod.bottom, actA.act)
        a = xm.XModAction(actor, mod,
                          gr.trivial_action(actor.bottom, mod.top),
                          actA, np.zeros((1, 3), dtype=np.int64))
        assert xm.validate_xmod_action(a).ok

    def test_restriction(self):
        x = inclusion_c2_c4()
        a = xm.trivial_xmod_action(x, self.module_c2_c4())
        ab, proj = xm.abelianise(xm.identity_xmod(c2()))
        m = xm.XModMorphism(x, x, gr.identity_hom(x.top),
                            gr.identity_hom(x.bottom), check=False)
        r = xm.restrict_action(a, m)
        assert xm.validate_xmod_action(r).ok


class TestSemidirect:
    def test_trivial_action_gives_product(self):
        actor = zero_c2_c2()
        mod = xm.AbelianXMod(c2(), c2(), gr.trivial_hom(c2(), c2()))
        sd = xm.semidirect_xmod(xm.trivial_xmod_action(actor, mod))
        assert sd.xmod.top.order == 4
        assert sd.xmod.bottom.order == 4
        assert sd.xmod.top.is_abelian()
        rep = xm.validate_ses(sd.ses)
        assert rep.ok

    def test_nontrivial_bottom(self):
        # module (0, C3, 0) with inversion under actor (0, C2, 0):
        # bottom becomes C3 x| C2 = S3
        actor = xm.zero_boundary_xmod(gr.trivial_group(), c2())
        c3 = gr.cyclic_group(3)
        mod = xm.AbelianXMod(gr.trivial_group(), c3,
                             gr.trivial_hom(gr.trivial_group(), c3))
        actA = gr.GroupActionOnGroup(actor.bottom, c3, [[0, 1, 2], [0, 2, 1]])
        a = xm.XModAction(actor, mod,
                          gr.trivial_action(actor.bottom, mod.top),
                          actA, np.zeros((1, 3), dtype=np.int64))
        sd = xm.semidirect_xmod(a)
        assert sd.xmod.top.order == 1
        assert gr.is_isomorphic(sd.xmod.bottom, gr.symmetric_group(3))

    def test_sections_and_kernels(self):
        actor = inclusion_c2_c4()
        mod = xm.AbelianXMod(c2(), c4(), gr.GroupHom(c2(), c4(), [0, 2]))
        sd = xm.semidirect_xmod(xm.trivial_xmod_action(actor, mod))
        sd.inject.validate()
        sd.project.validate()
        sd.section.validate()


class TestDerivedActions:
    def test_trivial(self):
        a = xm.trivial_xmod_action(
            zero_c2_c2(),
            xm.AbelianXMod(c2(), c4(), gr.GroupHom(c2(), c4(), [0, 2])))
        onk, onc = xm.derived_boundary_actions(a)
        assert onk.actor.order == 2  # G/Im mu = C2/0
        assert onk.is_trivial() and onc.is_trivial()

    def test_surjective_mu(self):
        a = xm.trivial_xmod_action(
            xm.identity_xmod(c2()),
            xm.AbelianXMod(c2(), c2(), gr.trivial_hom(c2(), c2())))
        onk, onc = xm.derived_boundary_actions(a)
        assert onk.actor.order == 1
        assert onc.actor.order == 1


class TestWeakEquivalence:
    def test_identity(self):
        assert xm.is_weak_equivalence(
            xm.identity_morphism(inclusion_c2_c4()))

    def test_contractible_to_point(self):
        x = xm.identity_xmod(c2())
        t = xm.identity_xmod(gr.trivial_group())
        m = xm.XModMorphism(x, t, gr.trivial_hom(x.top, t.top),
                            gr.trivial_hom(x.bottom, t.bottom))
        assert xm.is_weak_equivalence(m)

    def test_kernel_mismatch(self):
        x = zero_c2_c2()
        y = xm.zero_boundary_xmod(gr.trivial_group(), c2())
        m = xm.XModMorphism(x, y, gr.trivial_hom(x.top, y.top),
                            gr.identity_hom(x.bottom))
        assert not xm.is_weak_equivalence(m)


class TestSES:
    def make_cyclic_ses(self):
        # 0 -> (0,C2,0) -> (0,C4,0) -> (0,C2,0) -> 0
        t = gr.trivial_group()
        x1 = xm.zero_boundary_xmod(t, c2())
        x2 = xm.zero_boundary_xmod(t, c4())
        x3 = xm.zero_boundary_xmod(t, c2())
        left = xm.XModMorphism(x1, x2, gr.identity_hom(t),
                               gr.GroupHom(c2(), x2.bottom, [0, 2]))
        right = xm.XModMorphism(x2, x3, gr.identity_hom(t),
                                gr.GroupHom(x2.bottom, c2(), [0, 1, 0, 1]))
        return xm.ShortExactXMod(left, right)

    def test_cyclic_ses_valid(self):
        ses = self.make_cyclic_ses()
        # middle objects are the same crossed module instance chain
        ses = xm.ShortExactXMod(
            ses.left,
            xm.XModMorphism(ses.left.dst, ses.right.dst, ses.right.rho,
                            gr.GroupHom(ses.left.dst.bottom,
                                        ses.right.dst.bottom, [0, 1, 0, 1])))
        assert xm.validate_ses(ses).ok

    def test_non_surjective_detected(self):
        t = gr.trivial_group()
        x1 = xm.zero_boundary_xmod(t, c2())
        x2 = xm.zero_boundary_xmod(t, c2())
        left = xm.identity_morphism(x1)
        right = xm.XModMorphism(x1, x2, gr.identity_hom(t),
                                gr.trivial_hom(x1.bottom, x2.bottom))
        rep = xm.validate_ses(xm.ShortExactXMod(left, right))
        assert not rep.ok
