"""Finite groups given by multiplication tables.

Elements are dense integer ids 0..n-1 with 0 the identity.  Groups can be
entered as explicit tables or generated from permutations; larger groups
(semidirect products, nerve levels) are built from validated constructions.

All bulk checks (associativity, homomorphism and action laws) are done with
vectorized numpy table lookups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .intlin import FgAbelian, PresentedAb, SizeCapError, column_hnf

# exhaustive associativity is cubic in the order; above this bound groups
# are trusted to their construction unless validate(full=True) is requested
_ASSOC_FULL_BOUND = 256

# hard bound on multiplication tables built in memory
_TABLE_ORDER_CAP = 8192

# bound for groups entered directly by table or permutations
BASE_ORDER_CAP = 64


class FiniteGroup:
    """Group of order n on elements 0..n-1 with identity 0.

    ``table[a, b]`` is the product a*b.  ``inv[a]`` is the inverse.
    """

    def __init__(self, table, name="", check=True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("multiplication table must be square")
        self.table = table
        self.order = table.shape[0]
        self.name = name
        if self.order == 0:
            raise ValueError("a group has at least the identity")
        if check:
            self._check_basic()
        inv = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        if check and np.any(inv < 0):
            raise ValueError("some element has no inverse")
        self.inv = inv
        self._orders = None

    def _check_basic(self):
        n = self.order
        t = self.table
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries out of range")
        if not (np.array_equal(t[0], np.arange(n))
                and np.array_equal(t[:, 0], np.arange(n))):
            raise ValueError("element 0 must be the identity")
        ar = np.arange(n)
        if not (np.array_equal(np.sort(t, axis=1), np.broadcast_to(ar, t.shape))
                and np.array_equal(np.sort(t, axis=0),
                                   np.broadcast_to(ar[:, None], t.shape))):
            raise ValueError("table rows/columns must be permutations")

    def validate(self, full=False):
        """Check the group axioms.  Associativity is verified exhaustively
        when the order is small or ``full`` is set; otherwise the group is
        accepted on the strength of its construction."""
        self._check_basic()
        if not (full or self.order <= _ASSOC_FULL_BOUND):
            return True
        t = self.table
        n = self.order
        for a in range(n):
            # (a*b)*c == a*(b*c) for all b, c at once
            if not np.array_equal(t[t[a], :], t[a][t]):
                raise ValueError(f"associativity fails at element {a}")
        return True

    def mul(self, a, b):
        return int(self.table[a, b])

    def conj(self, g, x):
        """g x g^-1."""
        return int(self.table[self.table[g, x], self.inv[g]])

    def element_order(self, a):
        k, x = 1, int(a)
        while x:
            x = int(self.table[x, a])
            k += 1
        return k

    def element_orders(self):
        if self._orders is None:
            self._orders = np.array([self.element_order(a)
                                     for a in range(self.order)])
        return self._orders

    def is_abelian(self):
        return np.array_equal(self.table, self.table.T)

    def elements(self):
        return range(self.order)

    def __repr__(self):
        label = self.name or "group"
        return f"<{label} of order {self.order}>"


def same_group(a: FiniteGroup, b: FiniteGroup):
    """Equality as tables; groups are compared structurally, not by id."""
    return a is b or (a.order == b.order and np.array_equal(a.table, b.table))


def make_group(table=None, permutations=None, name="",
               max_order=BASE_ORDER_CAP):
    """Build a group from an explicit table or from permutation generators.

    Permutations are given as image lists over a common domain; the group
    is their closure under composition, with elements numbered in the
    deterministic breadth-first discovery order (identity first, then the
    generators in the order given).
    """
    if (table is None) == (permutations is None):
        raise ValueError("give exactly one of table, permutations")
    if table is not None:
        g = FiniteGroup(table, name=name)
        if g.order > max_order:
            raise SizeCapError(f"group order {g.order} exceeds {max_order}")
        g.validate(full=True)
        return g

    perms = [tuple(int(i) for i in p) for p in permutations]
    if not perms:
        raise ValueError("need at least one permutation")
    d = len(perms[0])
    for p in perms:
        if len(p) != d or sorted(p) != list(range(d)):
            raise ValueError("generators must be permutations of one domain")
    ident = tuple(range(d))
    elems = [ident]
    index = {ident: 0}
    gens = []
    for p in perms:
        if p not in index:
            index[p] = len(elems)
            elems.append(p)
        gens.append(p)
    queue = list(elems)
    while queue:
        x = queue.pop(0)
        for s in gens:
            y = tuple(x[s[i]] for i in range(d))  # x after s
            if y not in index:
                if len(elems) >= max_order:
                    raise SizeCapError(
                        f"permutation closure exceeds {max_order} elements")
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    n = len(elems)
    t = np.zeros((n, n), dtype=np.int64)
    for a, pa in enumerate(elems):
        for b, pb in enumerate(elems):
            t[a, b] = index[tuple(pa[pb[i]] for i in range(d))]
    g = FiniteGroup(t, name=name)
    g.validate(full=True)
    g.permutations = elems
    return g


def trivial_group():
    return FiniteGroup(np.zeros((1, 1), dtype=np.int64), name="1")


def cyclic_group(n):
    i = np.arange(n)
    return FiniteGroup((i[:, None] + i[None, :]) % n, name=f"C{n}")


def klein_four():
    return FiniteGroup(np.array([[0, 1, 2, 3], [1, 0, 3, 2],
                                 [2, 3, 0, 1], [3, 2, 1, 0]]), name="K4")


def symmetric_group(n):
    if n <= 1:
        return trivial_group()
    gens = []
    for k in range(n - 1):
        p = list(range(n))
        p[k], p[k + 1] = p[k + 1], p[k]
        gens.append(p)
    return make_group(permutations=gens, name=f"S{n}",
                      max_order=max(BASE_ORDER_CAP, 120))


def direct_product(g, h):
    """G x H with element id (a, b) -> a*|H| + b."""
    act = trivial_action(h, g)
    return semidirect_product(act)


# ---------------------------------------------------------------------------
# subgroups and quotients


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    def __post_init__(self):
        elems = tuple(sorted(int(x) for x in self.elements))
        object.__setattr__(self, "elements", elems)
        if not elems or elems[0] != 0:
            raise ValueError("a subgroup contains the identity")
        s = set(elems)
        for a in elems:
            if int(self.parent.inv[a]) not in s:
                raise ValueError("subgroup not closed under inverses")
            for b in elems:
                if int(self.parent.table[a, b]) not in s:
                    raise ValueError("subgroup not closed under products")

    @property
    def order(self):
        return len(self.elements)

    def contains(self, x):
        return int(x) in set(self.elements)

    def is_normal(self):
        s = set(self.elements)
        for g in range(self.parent.order):
            for x in self.elements:
                if self.parent.conj(g, x) not in s:
                    return False
        return True

    def as_group(self, name=""):
        """Return (group, embedding array into the parent).

        Element ids follow the sorted parent ids, so the identity stays 0.
        """
        embed = np.array(self.elements, dtype=np.int64)
        pos = {int(x): i for i, x in enumerate(self.elements)}
        n = len(embed)
        t = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                t[i, j] = pos[int(self.parent.table[embed[i], embed[j]])]
        return FiniteGroup(t, name=name), embed


def subgroup_closure(g: FiniteGroup, elements) -> Subgroup:
    """Smallest subgroup of ``g`` containing ``elements``."""
    s = {0}
    queue = [0]
    gens = sorted({int(x) for x in elements} | {0})
    gens += [int(g.inv[x]) for x in gens]
    for x in gens:
        if x not in s:
            s.add(x)
            queue.append(x)
    while queue:
        x = queue.pop()
        for y in gens:
            z = int(g.table[x, y])
            if z not in s:
                s.add(z)
                queue.append(z)
    return Subgroup(g, tuple(sorted(s)))


def quotient_group(g: FiniteGroup, sub: Subgroup, name=""):
    """Quotient by a normal subgroup.

    Returns (quotient, projection hom).  Cosets are numbered by their
    minimal representative in ascending order, so the identity coset is 0.
    """
    if not same_group(sub.parent, g):
        raise ValueError("subgroup belongs to a different group")
    if not sub.is_normal():
        raise ValueError("can only quotient by a normal subgroup")
    coset_of = np.full(g.order, -1, dtype=np.int64)
    reps = []
    for x in range(g.order):
        if coset_of[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        for h in sub.elements:
            coset_of[int(g.table[x, h])] = c
    m = len(reps)
    t = np.zeros((m, m), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            t[i, j] = coset_of[int(g.table[a, b])]
    q = FiniteGroup(t, name=name or (g.name + "/" + "sub" if g.name else ""))
    return q, GroupHom(g, q, coset_of)


def commutator_subgroup(g: FiniteGroup) -> Subgroup:
    """The derived subgroup [G, G]."""
    a = np.arange(g.order)[:, None]
    b = np.arange(g.order)[None, :]
    ab = g.table[a, b]
    comm = g.table[g.table[ab, g.inv[a]], g.inv[b]]
    return subgroup_closure(g, np.unique(comm))


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """Homomorphism given by its full image array."""

    def __init__(self, src: FiniteGroup, dst: FiniteGroup, images,
                 check=True):
        self.src = src
        self.dst = dst
        self.images = np.asarray(images, dtype=np.int64)
        if self.images.shape != (src.order,):
            raise ValueError("need one image per source element")
        if check:
            self.validate()

    def validate(self):
        f, ts, td = self.images, self.src.table, self.dst.table
        if f.min() < 0 or f.max() >= self.dst.order:
            raise ValueError("images out of range")
        if int(f[0]) != 0:
            raise ValueError("identity must map to identity")
        a = np.arange(self.src.order)
        if not np.array_equal(f[ts], td[np.ix_(f[a], f[a])]):
            raise ValueError("not a homomorphism")
        return True

    def __call__(self, x):
        return int(self.images[x])

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.dst is not self.src:
            raise ValueError("composition mismatch")
        return GroupHom(other.src, self.dst, self.images[other.images],
                        check=False)

    def is_injective(self):
        return len(set(self.images.tolist())) == self.src.order

    def is_surjective(self):
        return len(set(self.images.tolist())) == self.dst.order


def identity_hom(g):
    return GroupHom(g, g, np.arange(g.order), check=False)


def trivial_hom(src, dst):
    return GroupHom(src, dst, np.zeros(src.order, dtype=np.int64),
                    check=False)


def hom_from_generator_images(src: FiniteGroup, dst: FiniteGroup, pairs):
    """Extend generator images to a homomorphism by closure, then verify.

    ``pairs`` is a list of (source element, target element).  Raises when
    the pairs do not generate the source or do not define a homomorphism.
    """
    images = np.full(src.order, -1, dtype=np.int64)
    images[0] = 0
    gens = [(int(a), int(b)) for a, b in pairs]
    queue = [0]
    while queue:
        x = queue.pop()
        for a, b in gens:
            y = int(src.table[x, a])
            img = int(dst.table[images[x], b])
            if images[y] < 0:
                images[y] = img
                queue.append(y)
            elif int(images[y]) != img:
                raise ValueError("generator images are inconsistent")
    if np.any(images < 0):
        raise ValueError("given elements do not generate the source group")
    return GroupHom(src, dst, images)


def kernel_image(f: GroupHom):
    ker = tuple(int(x) for x in np.nonzero(f.images == 0)[0])
    img = tuple(sorted(set(int(y) for y in f.images)))
    return Subgroup(f.src, ker), Subgroup(f.dst, img)


# ---------------------------------------------------------------------------
# actions


class GroupActionOnGroup:
    """Action of ``actor`` on ``target`` by automorphisms.

    ``act[g, x]`` is the image of target element x under actor element g.
    """

    def __init__(self, actor: FiniteGroup, target: FiniteGroup, act,
                 check=True):
        self.actor = actor
        self.target = target
        self.act = np.asarray(act, dtype=np.int64)
        if self.act.shape != (actor.order, target.order):
            raise ValueError("action table has the wrong shape")
        if check:
            report = validate_action(self)
            if not report.ok:
                raise ValueError("invalid action: " + report.failures[0])

    def __call__(self, g, x):
        return int(self.act[g, x])

    def is_trivial(self):
        return np.array_equal(self.act,
                              np.broadcast_to(np.arange(self.target.order),
                                              self.act.shape))


@dataclass
class ActionReport:
    ok: bool
    failures: list = field(default_factory=list)


def validate_action(a: GroupActionOnGroup) -> ActionReport:
    """Exhaustively check the automorphism-action laws, with witnesses."""
    failures = []
    act, tt = a.act, a.target.table
    nt = a.target.order
    if act.min() < 0 or act.max() >= nt:
        return ActionReport(False, ["action values out of range"])
    if not np.array_equal(act[0], np.arange(nt)):
        failures.append("identity of the actor must act as the identity")
    for g in range(a.actor.order):
        row = act[g]
        if len(set(row.tolist())) != nt:
            failures.append(f"actor element {g} does not act bijectively")
            continue
        if int(row[0]) != 0:
            failures.append(f"actor element {g} moves the target identity")
        bad = np.argwhere(row[tt] != tt[np.ix_(row, row)])
        if bad.size:
            x, y = (int(v) for v in bad[0])
            failures.append(
                f"actor element {g} is not multiplicative: "
                f"g.({x}*{y}) != (g.{x})*(g.{y})")
    comp = act[a.actor.table]              # (g, h, x) -> (gh).x
    via = np.stack([act[g][act] for g in range(a.actor.order)])  # g.(h.x)
    bad = np.argwhere(comp != via)
    if bad.size:
        g, h, x = (int(v) for v in bad[0])
        failures.append(f"action is not a homomorphism: (gh).x != g.(h.x) "
                        f"at g={g}, h={h}, x={x}")
    return ActionReport(not failures, failures)


def trivial_action(actor, target):
    act = np.broadcast_to(np.arange(target.order),
                          (actor.order, target.order)).copy()
    return GroupActionOnGroup(actor, target, act, check=False)


def conjugation_action(g: FiniteGroup, sub: Subgroup):
    """Action of ``g`` on ``sub.as_group()`` by conjugation (sub normal)."""
    h, embed = sub.as_group()
    pos = {int(x): i for i, x in enumerate(embed)}
    act = np.zeros((g.order, h.order), dtype=np.int64)
    for a in range(g.order):
        for i, x in enumerate(embed):
            y = g.conj(a, int(x))
            if y not in pos:
                raise ValueError("subgroup is not normal")
            act[a, i] = pos[y]
    return GroupActionOnGroup(g, h, act), h, embed


def displacement_subgroup(a: GroupActionOnGroup) -> Subgroup:
    """Subgroup of the target generated by (g.h) * h^-1, closed under the
    action.  For a crossed module action this is the commutator [G, H]."""
    t = a.target
    gh = a.act                     # (g, h) grid of g.h
    disp = t.table[gh, t.inv[np.arange(t.order)][None, :]]
    gens = set(int(x) for x in np.unique(disp))
    # close under the actor action and conjugation in the target
    changed = True
    while changed:
        changed = False
        for x in sorted(gens):
            for g in range(a.actor.order):
                y = int(a.act[g, x])
                if y not in gens:
                    gens.add(y)
                    changed = True
            for h in range(t.order):
                y = t.conj(h, x)
                if y not in gens:
                    gens.add(y)
                    changed = True
        before = len(gens)
        gens = set(subgroup_closure(t, gens).elements)
        changed = changed or len(gens) != before
    return Subgroup(t, tuple(sorted(gens)))


# ---------------------------------------------------------------------------
# semidirect products


@dataclass
class SemidirectProduct:
    """N x| K for an action of K on N; element (n, k) has id n*|K| + k."""

    group: FiniteGroup
    inj_target: GroupHom   # N -> N x| K
    inj_actor: GroupHom    # K -> N x| K
    proj: GroupHom         # N x| K -> K
    target_order: int
    actor_order: int

    def encode(self, n, k):
        return int(n) * self.actor_order + int(k)

    def decode(self, e):
        return int(e) // self.actor_order, int(e) % self.actor_order


def semidirect_product(a: GroupActionOnGroup, name="") -> SemidirectProduct:
    """(n1, k1) * (n2, k2) = (n1 * (k1.n2), k1 * k2)."""
    nt, nk = a.target.order, a.actor.order
    order = nt * nk
    if order > _TABLE_ORDER_CAP:
        raise SizeCapError(
            f"semidirect product of order {order} exceeds the table cap "
            f"{_TABLE_ORDER_CAP}")
    ids = np.arange(order)
    n1, k1 = ids // nk, ids % nk
    n2, k2 = n1, k1
    twisted = a.act[k1[:, None], n2[None, :]]
    npart = a.target.table[n1[:, None], twisted]
    kpart = a.actor.table[k1[:, None], k2[None, :]]
    table = npart * nk + kpart
    g = FiniteGroup(table, name=name, check=False)
    inj_t = GroupHom(a.target, g, np.arange(nt) * nk, check=False)
    inj_k = GroupHom(a.actor, g, np.arange(nk), check=False)
    proj = GroupHom(g, a.actor, k1, check=False)
    return SemidirectProduct(g, inj_t, inj_k, proj, nt, nk)


# ---------------------------------------------------------------------------
# abelian structure and isomorphism testing


def presented_from_abelian_group(g: FiniteGroup):
    """Present an abelian group as an integer matrix cokernel.

    Returns (presentation, vecs, gens) where vecs[:, x] are coordinates of
    element x in the chosen generator elements ``gens``.  Generators are
    picked greedily by descending element order (ties by lowest id); the
    zero element gets the zero vector and coordinates are consistent with
    the group law modulo the relation lattice.
    """
    if not g.is_abelian():
        raise ValueError("group is not abelian")
    orders = g.element_orders()
    gens = []
    reached = {0}
    while len(reached) < g.order:
        best = None
        for x in range(1, g.order):
            if x in reached:
                continue
            key = (-int(orders[x]), x)
            if best is None or key < best[0]:
                best = (key, x)
        gens.append(best[1])
        reached = set(subgroup_closure(g, gens).elements)
    k = len(gens)
    vecs = np.full((k, g.order), 0, dtype=np.int64)
    seen = np.zeros(g.order, dtype=bool)
    seen[0] = True
    queue = [0]
    while queue:
        x = queue.pop(0)
        for i, s in enumerate(gens):
            y = int(g.table[x, s])
            if not seen[y]:
                seen[y] = True
                vecs[:, y] = vecs[:, x]
                vecs[i, y] += 1
                queue.append(y)
    # relation lattice: v(x) + e_i - v(x * g_i) for all x, i
    cols = []
    for x in range(g.order):
        for i, s in enumerate(gens):
            y = int(g.table[x, s])
            c = vecs[:, x] - vecs[:, y]
            c[i] += 1
            if np.any(c):
                cols.append(c)
    rel = (column_hnf(np.stack(cols, axis=1)) if cols
           else np.zeros((k, 0), dtype=np.int64))
    return PresentedAb(k, rel), vecs, gens


def abelian_invariants(g: FiniteGroup) -> FgAbelian:
    from .intlin import canonical_form
    pres, _, _ = presented_from_abelian_group(g)
    return canonical_form(pres)


def _generating_sequence(g: FiniteGroup):
    gens = []
    reached = {0}
    while len(reached) < g.order:
        for x in range(g.order):
            if x not in reached:
                gens.append(x)
                reached = set(subgroup_closure(g, gens).elements)
                break
    return gens


def is_isomorphic(g1: FiniteGroup, g2: FiniteGroup):
    """Isomorphism test: invariant factors for abelian groups, exhaustive
    generator-image search otherwise (small orders only)."""
    if g1.order != g2.order:
        return False
    o1 = sorted(g1.element_orders().tolist())
    o2 = sorted(g2.element_orders().tolist())
    if o1 != o2:
        return False
    if g1.is_abelian() != g2.is_abelian():
        return False
    if g1.is_abelian():
        return abelian_invariants(g1) == abelian_invariants(g2)
    if g1.order > 16:
        raise SizeCapError(
            "non-abelian isomorphism testing is limited to order <= 16")
    gens = _generating_sequence(g1)
    orders2 = g2.element_orders()

    def extend(i, pairs):
        if i == len(gens):
            try:
                f = hom_from_generator_images(g1, g2, pairs)
            except ValueError:
                return False
            return f.is_injective()
        want = g1.element_order(gens[i])
        for y in range(g2.order):
            if int(orders2[y]) == want and extend(i + 1, pairs + [(gens[i], y)]):
                return True
        return False

    return extend(0, [])
