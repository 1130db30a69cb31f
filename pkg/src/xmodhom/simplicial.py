"""Simplicial groups up to a dimension bound.

The central construction is the nerve of a crossed module mu: H -> G:
level n is H^n x| G built iteratively as semidirect products, with

    d_0(h_1, ..., h_n, g) = (h_2, ..., h_n, g)
    d_i(h_1, ..., h_n, g) = (h_1, ..., h_i h_{i+1}, ..., h_n, g)
    d_n(h_1, ..., h_n, g) = (h_1, ..., h_{n-1}, mu(h_n) g)
    s_i inserts the identity after slot i.

Elements are mixed-radix ids: (h_1, ..., h_n, g) has id
(((h_1 |H| + h_2) |H| + ...) |H| + h_n) |G| + g, so faces and degeneracies
are cheap vectorized recodings.  All simplicial identities are checked
exhaustively on construction.
"""

from __future__ import annotations

import numpy as np

from . import crossed as xm
from . import groups as gr
from .groups import FiniteGroup, GroupActionOnGroup, GroupHom, Subgroup
from .intlin import PresentedAb, as_matrix, lattice_contains, zeros


class SimplicialGroup:
    """Levels 0..bound with faces[n][i]: n -> n-1, degen[n][i]: n -> n+1."""

    def __init__(self, levels, faces, degeneracies, check=True):
        self.levels = list(levels)
        self.bound = len(self.levels) - 1
        self.faces = [None] + [list(fs) for fs in faces]
        self.degeneracies = [list(ss) for ss in degeneracies]
        if len(self.faces) != self.bound + 1:
            raise ValueError("need faces at each level 1..bound")
        if len(self.degeneracies) != self.bound:
            raise ValueError("need degeneracies at each level 0..bound-1")
        for n in range(1, self.bound + 1):
            if len(self.faces[n]) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} faces")
        for n in range(self.bound):
            if len(self.degeneracies[n]) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} degeneracies")
        if check:
            self.validate_identities()

    def face(self, n, i) -> GroupHom:
        return self.faces[n][i]

    def degeneracy(self, n, i) -> GroupHom:
        return self.degeneracies[n][i]

    def validate_identities(self):
        """All simplicial identities, exhaustively on element ids."""
        d, s = self.faces, self.degeneracies
        for n in range(2, self.bound + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = d[n - 1][i].images[d[n][j].images]
                    rhs = d[n - 1][j - 1].images[d[n][i].images]
                    if not np.array_equal(lhs, rhs):
                        raise ValueError(
                            f"d_{i} d_{j} != d_{j - 1} d_{i} at level {n}")
        for n in range(self.bound - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = s[n + 1][i].images[s[n][j].images]
                    rhs = s[n + 1][j + 1].images[s[n][i].images]
                    if not np.array_equal(lhs, rhs):
                        raise ValueError(
                            f"s_{i} s_{j} != s_{j + 1} s_{i} at level {n}")
        for n in range(self.bound):
            ident = np.arange(self.levels[n].order)
            for j in range(n + 1):
                for i in range(n + 2):
                    comp = d[n + 1][i].images[s[n][j].images]
                    if i == j or i == j + 1:
                        ok = np.array_equal(comp, ident)
                        label = "id"
                    elif i < j:
                        ok = np.array_equal(
                            comp, s[n - 1][j - 1].images[d[n][i].images])
                        label = f"s_{j - 1} d_{i}"
                    else:
                        ok = np.array_equal(
                            comp, s[n - 1][j].images[d[n][i - 1].images])
                        label = f"s_{j} d_{i - 1}"
                    if not ok:
                        raise ValueError(
                            f"d_{i} s_{j} != {label} at level {n}")
        return True


def _decode(ids, n, h_order, g_order):
    """Split mixed-radix ids into (hs, g): hs has shape (n, len(ids))."""
    rest = np.asarray(ids)
    g = rest % g_order
    rest = rest // g_order
    hs = np.zeros((n, len(ids)), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        hs[k] = rest % h_order
        rest = rest // h_order
    return hs, g


def _encode(hs, g, h_order, g_order):
    out = np.zeros_like(g)
    for k in range(hs.shape[0]):
        out = out * h_order + hs[k]
    return out * g_order + g


def nerve(x: xm.CrossedModule, bound: int) -> SimplicialGroup:
    """Nerve of a crossed module up to the given level bound."""
    h_ord, g_ord = x.top.order, x.bottom.order
    mu = x.boundary.images
    levels = [x.bottom]
    # psi_n: level n -> G, (h_1, ..., h_n, g) -> mu(h_1)...mu(h_n) g
    psi = [np.arange(g_ord)]
    for n in range(1, bound + 1):
        prev = levels[-1]
        act = GroupActionOnGroup(prev, x.top, x.action.act[psi[-1]],
                                 check=False)
        sd = gr.semidirect_product(act, name=f"nerve level {n}")
        levels.append(sd.group)
        e = np.arange(sd.group.order)
        h1, rest = e // prev.order, e % prev.order
        psi.append(x.bottom.table[mu[h1], psi[-1][rest]])

    faces, degens = [], []
    for n in range(1, bound + 1):
        size = levels[n].order
        hs, g = _decode(np.arange(size), n, h_ord, g_ord)
        fs = []
        for i in range(n + 1):
            if i == 0:
                img = _encode(hs[1:], g, h_ord, g_ord)
            elif i < n:
                merged = np.vstack([hs[:i - 1],
                                    x.top.table[hs[i - 1], hs[i]][None, :],
                                    hs[i + 1:]])
                img = _encode(merged, g, h_ord, g_ord)
            else:
                img = _encode(hs[:-1], x.bottom.table[mu[hs[-1]], g],
                              h_ord, g_ord)
            fs.append(GroupHom(levels[n], levels[n - 1], img))
        faces.append(fs)
    for n in range(bound):
        size = levels[n].order
        hs, g = _decode(np.arange(size), n, h_ord, g_ord)
        ss = []
        zero = np.zeros((1, size), dtype=np.int64)
        for i in range(n + 1):
            padded = np.vstack([hs[:i], zero, hs[i:]])
            ss.append(GroupHom(levels[n], levels[n + 1],
                               _encode(padded, g, h_ord, g_ord)))
        degens.append(ss)
    return SimplicialGroup(levels, faces, degens)


def constant_simplicial_group(g: FiniteGroup, bound: int) -> SimplicialGroup:
    ident = gr.identity_hom(g)
    return SimplicialGroup([g] * (bound + 1),
                           [[ident] * (n + 1) for n in range(1, bound + 1)],
                           [[ident] * (n + 1) for n in range(bound)])


def nerve_morphism(m: xm.XModMorphism, bound: int, src=None, dst=None):
    """Levelwise homomorphisms induced by a crossed-module morphism.

    Returns (src nerve, dst nerve, list of GroupHoms); commutation with all
    faces and degeneracies is asserted.  Prebuilt nerves may be passed in.
    """
    src = src if src is not None else nerve(m.src, bound)
    dst = dst if dst is not None else nerve(m.dst, bound)
    rho, nu = m.rho.images, m.nu.images
    homs = []
    for n in range(bound + 1):
        size = src.levels[n].order
        hs, g = _decode(np.arange(size), n,
                        m.src.top.order, m.src.bottom.order)
        img = _encode(rho[hs] if n else hs, nu[g],
                      m.dst.top.order, m.dst.bottom.order)
        homs.append(GroupHom(src.levels[n], dst.levels[n], img))
    for n in range(1, bound + 1):
        for i in range(n + 1):
            lhs = homs[n - 1].images[src.faces[n][i].images]
            rhs = dst.faces[n][i].images[homs[n].images]
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"induced map breaks d_{i} at level {n}")
    for n in range(bound):
        for i in range(n + 1):
            lhs = homs[n + 1].images[src.degeneracies[n][i].images]
            rhs = dst.degeneracies[n][i].images[homs[n].images]
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"induced map breaks s_{i} at level {n}")
    return src, dst, homs


# ---------------------------------------------------------------------------
# Moore complex and homotopy groups


def moore_complex(s: SimplicialGroup):
    """Moore normalisation: M_n = intersection of Ker d_i for i < n, with
    boundary the restriction of the last face.

    Returns (subgroups M_n of the levels, boundary images on parent ids).
    The composite of consecutive boundaries is asserted trivial.
    """
    subs = [Subgroup(s.levels[0], tuple(range(s.levels[0].order)))]
    for n in range(1, s.bound + 1):
        members = np.ones(s.levels[n].order, dtype=bool)
        for i in range(n):
            members &= s.faces[n][i].images == 0
        subs.append(Subgroup(s.levels[n], tuple(np.nonzero(members)[0])))
    for n in range(1, s.bound):
        last = s.faces[n][n].images if n >= 1 else None
        for e in subs[n + 1].elements:
            v = int(s.faces[n + 1][n + 1].images[e])
            if not subs[n].contains(v):
                raise ValueError(f"boundary leaves M_{n}")
            if n >= 1 and int(last[v]) != 0:
                raise ValueError(f"Moore boundary squared nonzero at {n + 1}")
    return subs


def homotopy_group(s: SimplicialGroup, n: int) -> FiniteGroup:
    """pi_n = Ker(d restricted to M_n) / Im(d from M_{n+1}).

    Level 0 is treated unaugmented: pi_0 = level 0 / Im d_1|M_1.
    """
    if not 0 <= n < s.bound:
        raise ValueError("need n + 1 <= bound")
    subs = moore_complex(s)
    mn, embed_n = subs[n].as_group()
    if n == 0:
        kernel = Subgroup(mn, tuple(range(mn.order)))
    else:
        bnd = s.faces[n][n].images
        kernel = Subgroup(mn, tuple(
            i for i, v in enumerate(embed_n) if int(bnd[v]) == 0))
    bnd_up = s.faces[n + 1][n + 1].images
    pos = {int(v): i for i, v in enumerate(embed_n)}
    image_elems = sorted({pos[int(bnd_up[e])] for e in subs[n + 1].elements})
    kgrp, kembed = kernel.as_group()
    kpos = {int(v): i for i, v in enumerate(kembed)}
    img_sub = Subgroup(kgrp, tuple(kpos[v] for v in image_elems))
    q, _ = gr.quotient_group(kgrp, img_sub)
    return q


# ---------------------------------------------------------------------------
# simplicial abelian groups (presented view)


class SimplicialAbelian:
    """Presented-abelian levels with face/degeneracy matrices."""

    def __init__(self, levels, faces, degeneracies, check=True):
        self.levels = list(levels)
        self.bound = len(self.levels) - 1
        self.faces = [None] + [[as_matrix(f, rows=self.levels[n - 1].gens,
                                          cols=self.levels[n].gens)
                                for f in fs]
                               for n, fs in enumerate(faces, start=1)]
        self.degeneracies = [[as_matrix(f, rows=self.levels[n + 1].gens,
                                        cols=self.levels[n].gens)
                              for f in fs]
                             for n, fs in enumerate(degeneracies)]
        if check:
            self.validate_identities()

    def _eq_mod(self, a, b, level):
        diff = a - b
        if diff.size == 0 or not diff.any():
            return True
        return lattice_contains(self.levels[level].relations, diff)

    def validate_identities(self):
        d, s = self.faces, self.degeneracies
        for n in range(2, self.bound + 1):
            for j in range(n + 1):
                for i in range(j):
                    if not self._eq_mod(d[n - 1][i] @ d[n][j],
                                        d[n - 1][j - 1] @ d[n][i], n - 2):
                        raise ValueError(
                            f"d_{i} d_{j} != d_{j - 1} d_{i} at level {n}")
        for n in range(self.bound):
            eye_n = np.eye(self.levels[n].gens, dtype=np.int64)
            for j in range(n + 1):
                for i in range(n + 2):
                    comp = d[n + 1][i] @ s[n][j]
                    if i == j or i == j + 1:
                        ok = self._eq_mod(comp, eye_n, n)
                    elif i < j:
                        ok = self._eq_mod(comp, s[n - 1][j - 1] @ d[n][i], n)
                    else:
                        ok = self._eq_mod(comp, s[n - 1][j] @ d[n][i - 1], n)
                    if not ok:
                        raise ValueError(f"d_{i} s_{j} identity fails "
                                         f"at level {n}")
        return True


def constant_simplicial_abelian(a: PresentedAb, bound: int):
    ident = np.eye(a.gens, dtype=np.int64)
    return SimplicialAbelian([a] * (bound + 1),
                             [[ident] * (n + 1)
                              for n in range(1, bound + 1)],
                             [[ident] * (n + 1) for n in range(bound)])


def _bridge_levels(s: SimplicialGroup):
    """Present each (abelian) level and convert all structure maps to
    matrices on the chosen generators."""
    pres, vecs, gens = [], [], []
    for lvl in s.levels:
        p, v, g = gr.presented_from_abelian_group(lvl)
        pres.append(p)
        vecs.append(v)
        gens.append(g)

    def to_matrix(hom_images, src_level, dst_level):
        cols = [vecs[dst_level][:, int(hom_images[e])]
                for e in gens[src_level]]
        return (np.stack(cols, axis=1) if cols
                else zeros(pres[dst_level].gens, 0))

    faces = [[to_matrix(s.faces[n][i].images, n, n - 1)
              for i in range(n + 1)]
             for n in range(1, s.bound + 1)]
    degens = [[to_matrix(s.degeneracies[n][i].images, n, n + 1)
               for i in range(n + 1)]
              for n in range(s.bound)]
    return SimplicialAbelian(pres, faces, degens), vecs, gens


def abelian_nerve(m: xm.AbelianXMod, bound: int):
    """Nerve of an abelian crossed module, in presented form.

    Returns (SimplicialAbelian, underlying SimplicialGroup, vecs, gens)
    where vecs/gens give the per-level element coordinates used to express
    group-level data (like actions) in matrix form.
    """
    s = nerve(m.as_crossed_module(), bound)
    ab, vecs, gens = _bridge_levels(s)
    return ab, s, vecs, gens


# ---------------------------------------------------------------------------
# simplicial actions


class SimplicialActionData:
    """Levelwise action of a nerve on an abelian nerve, in both group form
    (tables) and presented form (one matrix per actor element)."""

    def __init__(self, actor: SimplicialGroup, module: SimplicialAbelian,
                 level_actions, matrices,
                 module_group=None, vecs=None, gens=None):
        self.actor = actor
        self.module = module
        self.level_actions = level_actions  # GroupActionOnGroup per level
        self.matrices = matrices            # per level: (order, gens, gens)
        self.module_group = module_group    # the module nerve as groups
        self.vecs = vecs                    # per level element coordinates
        self.gens = gens                    # per level generator element ids

    def is_trivial(self):
        return all(a.is_trivial() for a in self.level_actions)


def nerve_action(a: xm.XModAction, bound: int) -> SimplicialActionData:
    """Simplicial action induced by a crossed-module action.

    Built from the split exact sequence of the semidirect crossed module:
    the section embeds the actor nerve, the kernel embeds the module
    nerve, and the actor acts by conjugation inside the semidirect nerve.
    Equivariance of faces and degeneracies is asserted.
    """
    sd = xm.semidirect_xmod(a)
    big = nerve(sd.xmod, bound)
    src_a, dst_a, sec = nerve_morphism(sd.section, bound, dst=big)
    src_m, dst_m, inc = nerve_morphism(
        xm.XModMorphism(a.module.as_crossed_module(), sd.xmod,
                        sd.inject.rho, sd.inject.nu), bound, dst=big)
    mod_ab, vecs, gens = _bridge_levels(src_m)

    level_actions = []
    matrices = []
    for n in range(bound + 1):
        actor_lvl = src_a.levels[n]
        mod_lvl = src_m.levels[n]
        inc_img = inc[n].images
        pos = {int(v): i for i, v in enumerate(inc_img)}
        big_lvl = dst_a.levels[n]
        act = np.zeros((actor_lvl.order, mod_lvl.order), dtype=np.int64)
        for g in range(actor_lvl.order):
            gg = int(sec[n].images[g])
            conj = big_lvl.table[big_lvl.table[gg, inc_img],
                                 big_lvl.inv[gg]]
            for i, w in enumerate(conj):
                if int(w) not in pos:
                    raise ValueError("conjugation leaves the module nerve")
                act[g, i] = pos[int(w)]
        level_actions.append(GroupActionOnGroup(actor_lvl, mod_lvl, act))
        mats = np.zeros((actor_lvl.order, mod_ab.levels[n].gens,
                         mod_ab.levels[n].gens), dtype=np.int64)
        for g in range(actor_lvl.order):
            for j, e in enumerate(gens[n]):
                mats[g, :, j] = vecs[n][:, act[g, e]]
        matrices.append(mats)

    # faces and degeneracies are equivariant for the constructed actions
    for n in range(1, bound + 1):
        for i in range(n + 1):
            fa = src_a.faces[n][i].images
            fm = src_m.faces[n][i].images
            lhs = fm[level_actions[n].act]
            rhs = level_actions[n - 1].act[fa][:, fm]
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"action not equivariant for d_{i} "
                                 f"at level {n}")
    return SimplicialActionData(src_a, mod_ab, level_actions, matrices,
                                module_group=src_m, vecs=vecs, gens=gens)
