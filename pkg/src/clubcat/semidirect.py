"""The semidirect product of category-valued diagrams and its monoidal laws.

Objects of a product X ⋉ Y pair an object d of the left base with a functor
psi from the left fiber over d into the right base.  Morphisms pair a base
morphism f with a natural transformation phi: psi1 => psi2 ∘ R(f).  The fiber
over (d, psi) is the category of pairs (a, b) with a in R(d) and b in the
right fiber over psi(a); composition twists the second component through the
transported first, exactly like the group-theoretic semidirect product.

All constructions here are table-level and deterministic: object ids of a
product are "<d>:psi<rank>" with rank the position of psi in the lexicographic
enumeration of functors at d, so restricted and unrestricted builds of the
same product agree on ids.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import DEFAULT_GUARDRAILS, Guardrails
from .diagram import (DiagramInCat, DiagramMorphism, diagram_morphism_equal,
                      identity_diagram_morphism, unit_diagram,
                      validate_diagram, validate_diagram_morphism)
from .errors import GuardrailExceeded, InputError
from .fincat import (FinCategory, Functor, compose_functors,
                     enumerate_functors, enumerate_nat_trans, functor_key,
                     terminal_category)


# ---------------------------------------------------------------------------
# pair categories (total categories of a category-valued diagram)

class PairCategory:
    """The category of pairs (a, b) over a diagram W: objects of the base
    paired with objects of their fibers, morphisms twisted through the fiber
    functors.  Keeps id lookups in both directions."""

    def __init__(self, diagram: DiagramInCat, name=""):
        self.diagram = diagram
        base = diagram.base
        objects = []
        self.obj_data = {}
        self.obj_id = {}
        for a in base.objects:
            for b in diagram.fiber_obj[a].objects:
                pid = f"p{len(objects)}"
                objects.append(pid)
                self.obj_data[pid] = (a, b)
                self.obj_id[(a, b)] = pid
        morphisms = []
        self.mor_data = {}
        self.mor_id = {}
        for alpha in base.mor_ids:
            a1, a2 = base.src[alpha], base.tgt[alpha]
            transport = diagram.fiber_mor[alpha]
            fib2 = diagram.fiber_obj[a2]
            for b1 in diagram.fiber_obj[a1].objects:
                tb1 = transport.omap[b1]
                for beta in fib2.mor_ids:
                    if fib2.src[beta] != tb1:
                        continue
                    mid = f"q{len(morphisms)}"
                    morphisms.append(
                        (mid, self.obj_id[(a1, b1)], self.obj_id[(a2, fib2.tgt[beta])]))
                    self.mor_data[mid] = (alpha, b1, beta)
                    self.mor_id[(alpha, b1, beta)] = mid
        identities = {}
        for pid, (a, b) in self.obj_data.items():
            identities[pid] = self.mor_id[
                (base.identity(a), b, diagram.fiber_obj[a].identity(b))]
        comp = {}
        mor_by_src = {}
        for (mid, s, t) in morphisms:
            mor_by_src.setdefault(s, []).append(mid)
        for (mid1, s1, t1) in morphisms:
            alpha1, b1, beta1 = self.mor_data[mid1]
            for mid2 in mor_by_src.get(t1, []):
                alpha2, _, beta2 = self.mor_data[mid2]
                a3 = base.tgt[alpha2]
                fib3 = diagram.fiber_obj[a3]
                moved = diagram.fiber_mor[alpha2].mmap[beta1]
                comp[(mid2, mid1)] = self.mor_id[
                    (base.comp[(alpha2, alpha1)], b1, fib3.comp[(beta2, moved)])]
        self.cat = FinCategory(objects, morphisms, identities, comp, name=name)


def pullback_diagram(psi: Functor, right: DiagramInCat):
    """Restrict the right diagram's fibers along psi: a -> fibers over psi(a)."""
    return DiagramInCat(
        psi.src,
        {a: right.fiber_obj[psi.omap[a]] for a in psi.src.objects},
        {m: right.fiber_mor[psi.mmap[m]] for m in psi.src.mor_ids},
        name=f"pullback({right.name})")


def fiber_semidirect(left: DiagramInCat, d, psi: Functor, right: DiagramInCat):
    """The fiber category over (d, psi): pairs twisted by the right diagram."""
    if psi.src is not left.fiber_obj[d] and psi.src.objects != left.fiber_obj[d].objects:
        raise InputError("psi must start at the left fiber over d")
    if psi.tgt is not right.base and psi.tgt.objects != right.base.objects:
        raise InputError("psi must land in the right base")
    return PairCategory(pullback_diagram(psi, right), name=f"fiber({d})").cat


# ---------------------------------------------------------------------------
# the product construction

def _is_discrete(c: FinCategory):
    return all(c.is_identity(m) for m in c.mor_ids)


def _enumerate_psis(fiber: FinCategory, target: FinCategory, keep_keys, guard):
    """Yield (rank, psi) in lexicographic order, honouring an optional key filter.

    The rank is the position in the full enumeration so that ids agree
    between restricted and unrestricted builds of the same product.
    """
    if _is_discrete(fiber):
        objs = fiber.objects
        n = len(target.objects)
        prefixes = None
        if keep_keys is not None:
            prefixes = set()
            for (omap_t, _) in keep_keys:
                for i in range(len(omap_t) + 1):
                    prefixes.add(omap_t[:i])
        weights = [n ** (len(objs) - 1 - i) for i in range(len(objs))]
        obj_index = {o: i for i, o in enumerate(target.objects)}

        out = []

        def rec(i, chosen):
            if prefixes is not None and tuple(chosen) not in prefixes:
                return
            if i == len(objs):
                omap = dict(zip(objs, chosen))
                mmap = {fiber.identities[x]: target.identities[omap[x]] for x in objs}
                psi = Functor(fiber, target, omap, mmap)
                key = functor_key(psi)
                if keep_keys is None or key in keep_keys:
                    rank = sum(weights[j] * obj_index[chosen[j]] for j in range(len(objs)))
                    out.append((rank, psi))
                return
            for o in target.objects:
                chosen.append(o)
                rec(i + 1, chosen)
                chosen.pop()

        rec(0, [])
        return out
    bound = len(target.objects) ** max(1, len(fiber.objects))
    if bound > 200_000:
        raise GuardrailExceeded(
            f"functor enumeration bound {bound} too large for a non-discrete fiber")
    out = []
    for rank, psi in enumerate(enumerate_functors(fiber, target, guard.max_enum_morphisms)):
        if keep_keys is None or functor_key(psi) in keep_keys:
            out.append((rank, psi))
    return out


class SemidirectProduct:
    """A (possibly domain-restricted) semidirect product with id lookups.

    ``obj_id`` maps (d, functor_key(psi)) to the product object id;
    ``mor_id`` maps (f, phi-components-tuple) to the product morphism id;
    ``fibers`` holds the pair category over each product object.
    """

    def __init__(self, left, right, diagram, obj_data, obj_id, mor_data, mor_id, fibers):
        self.left = left
        self.right = right
        self.diagram = diagram
        self.obj_data = obj_data
        self.obj_id = obj_id
        self.mor_data = mor_data
        self.mor_id = mor_id
        self.fibers = fibers

    def describe_object(self, oid):
        d, psi = self.obj_data[oid]
        targets = ",".join(psi.omap[a] for a in psi.src.objects)
        return f"({d}; {targets})"


def build_semidirect(x: DiagramInCat, y: DiagramInCat,
                     guard: Guardrails = DEFAULT_GUARDRAILS, keep=None):
    """Construct X ⋉ Y, optionally restricted to a set of object keys.

    ``keep`` is None for the full product, or a dict mapping left-base object
    ids to sets of functor keys to retain over that object.
    """
    for base in (x.base, y.base):
        if len(base.objects) > guard.max_base_objects:
            raise GuardrailExceeded(
                f"base with {len(base.objects)} objects exceeds {guard.max_base_objects}")
    for d in x.base.objects:
        fib = x.fiber_obj[d]
        if len(fib.mor_ids) > guard.max_fiber_morphisms:
            raise GuardrailExceeded(
                f"fiber at {d!r} has {len(fib.mor_ids)} morphisms, "
                f"limit {guard.max_fiber_morphisms}")

    objects = []
    obj_data, obj_id = {}, {}
    for d in x.base.objects:
        keys = None if keep is None else keep.get(d, set())
        pairs = _enumerate_psis(x.fiber_obj[d], y.base, keys, guard)
        for rank, psi in pairs:
            oid = f"{d}:psi{rank}"
            objects.append(oid)
            obj_data[oid] = (d, psi)
            obj_id[(d, functor_key(psi))] = oid
            if len(objects) > guard.max_product_objects:
                raise GuardrailExceeded(
                    f"product would exceed {guard.max_product_objects} objects")

    morphisms = []
    mor_data, mor_id = {}, {}
    identities = {}
    for oid1 in objects:
        d1, psi1 = obj_data[oid1]
        for oid2 in objects:
            d2, psi2 = obj_data[oid2]
            for f in x.base.hom_set(d1, d2):
                shifted = compose_functors(psi2, x.fiber_mor[f])
                for phi in enumerate_nat_trans(psi1, shifted):
                    mid = f"m{len(morphisms)}"
                    morphisms.append((mid, oid1, oid2))
                    mor_data[mid] = (f, phi)
                    key = (oid1, oid2, f,
                           tuple(phi.components[a] for a in psi1.src.objects))
                    mor_id[key] = mid
                    if (f == x.base.identity(d1) and oid1 == oid2
                            and all(y.base.is_identity(c) for c in phi.components.values())):
                        identities[oid1] = mid

    comp = {}
    mor_by_src = {}
    for (mid, s, t) in morphisms:
        mor_by_src.setdefault(s, []).append(mid)
    by_mid_endpoints = {mid: (s, t) for (mid, s, t) in morphisms}
    for (mid1, s1, t1) in morphisms:
        f1, phi1 = mor_data[mid1]
        d1, psi1 = obj_data[s1]
        rf1 = x.fiber_mor[f1]
        for mid2 in mor_by_src.get(t1, []):
            f2, phi2 = mor_data[mid2]
            comp_f = x.base.comp[(f2, f1)]
            comps = tuple(
                y.base.comp[(phi2.components[rf1.omap[a]], phi1.components[a])]
                for a in psi1.src.objects)
            comp[(mid2, mid1)] = mor_id[
                (s1, by_mid_endpoints[mid2][1], comp_f, comps)]

    base = FinCategory(objects, morphisms, identities, comp,
                       name=f"({x.base.name}|x|{y.base.name})")

    fibers = {oid: PairCategory(pullback_diagram(obj_data[oid][1], y),
                                name=f"fib({oid})")
              for oid in objects}

    fiber_obj = {oid: fibers[oid].cat for oid in objects}
    fiber_mor = {}
    for (mid, s, t) in morphisms:
        f, phi = mor_data[mid]
        d1, psi1 = obj_data[s]
        src_fib, tgt_fib = fibers[s], fibers[t]
        rf = x.fiber_mor[f]
        omap, mmap = {}, {}
        for pid, (a, b) in src_fib.obj_data.items():
            a2 = rf.omap[a]
            b2 = y.fiber_mor[phi.components[a]].omap[b]
            omap[pid] = tgt_fib.obj_id[(a2, b2)]
        for qid, (alpha, b1, beta) in src_fib.mor_data.items():
            a1, a2 = psi1.src.src[alpha], psi1.src.tgt[alpha]
            mmap[qid] = tgt_fib.mor_id[(
                rf.mmap[alpha],
                y.fiber_mor[phi.components[a1]].omap[b1],
                y.fiber_mor[phi.components[a2]].mmap[beta])]
        fiber_mor[mid] = Functor(src_fib.cat, tgt_fib.cat, omap, mmap)

    diagram = DiagramInCat(base, fiber_obj, fiber_mor,
                           name=f"({x.name}|x|{y.name})")
    return SemidirectProduct(x, y, diagram, obj_data, obj_id, mor_data, mor_id, fibers)


def semidirect(x: DiagramInCat, y: DiagramInCat,
               guard: Guardrails = DEFAULT_GUARDRAILS):
    """The full product X ⋉ Y as a diagram."""
    return build_semidirect(x, y, guard).diagram


# ---------------------------------------------------------------------------
# functoriality of the product

def semidirect_on_morphisms(a: DiagramMorphism, b: DiagramMorphism,
                            p_src: SemidirectProduct = None,
                            p_tgt: SemidirectProduct = None,
                            guard: Guardrails = DEFAULT_GUARDRAILS):
    """The product morphism a ⋉ b: X1 ⋉ Y1 -> X2 ⋉ Y2.

    On objects, (d, psi) goes to (A(d), B ∘ psi ∘ rho^A_d); fiber components
    send a pair (a', b') to (rho^A(a'), rho^B(b')).
    """
    x1, y1 = a.src, b.src
    x2, y2 = a.tgt, b.tgt
    p_src = p_src if p_src is not None else build_semidirect(x1, y1, guard)
    p_tgt = p_tgt if p_tgt is not None else build_semidirect(x2, y2, guard)

    fa = a.base_functor
    fb = b.base_functor
    omap, mmap = {}, {}
    for oid, (d, psi) in p_src.obj_data.items():
        shifted = compose_functors(fb, compose_functors(psi, a.rho[d]))
        omap[oid] = p_tgt.obj_id[(fa.omap[d], functor_key(shifted))]
    for mid, (f, phi) in p_src.mor_data.items():
        d1 = x1.base.src[f]
        rho_a = a.rho[d1]
        fiber2 = x2.fiber_obj[fa.omap[d1]]
        comps = tuple(fb.mmap[phi.components[rho_a.omap[ap]]]
                      for ap in fiber2.objects)
        s1 = p_src.diagram.base.src[mid]
        t1 = p_src.diagram.base.tgt[mid]
        mmap[mid] = p_tgt.mor_id[(omap[s1], omap[t1], fa.mmap[f], comps)]
    base = Functor(p_src.diagram.base, p_tgt.diagram.base, omap, mmap)

    rho = {}
    for oid, (d, psi) in p_src.obj_data.items():
        src_fib = p_tgt.fibers[omap[oid]]
        tgt_fib = p_src.fibers[oid]
        rho_a = a.rho[d]
        fomap, fmmap = {}, {}
        for pid, (ap, bp) in src_fib.obj_data.items():
            av = rho_a.omap[ap]
            bv = b.rho[psi.omap[av]].omap[bp]
            fomap[pid] = tgt_fib.obj_id[(av, bv)]
        for qid, (alpha, b1, beta) in src_fib.mor_data.items():
            fib2 = x2.fiber_obj[fa.omap[d]]
            a1p, a2p = fib2.src[alpha], fib2.tgt[alpha]
            av1, av2 = rho_a.omap[a1p], rho_a.omap[a2p]
            fmmap[qid] = tgt_fib.mor_id[(
                rho_a.mmap[alpha],
                b.rho[psi.omap[av1]].omap[b1],
                b.rho[psi.omap[av2]].mmap[beta])]
        rho[oid] = Functor(src_fib.cat, tgt_fib.cat, fomap, fmmap)

    return DiagramMorphism(p_src.diagram, p_tgt.diagram, base, rho,
                           name=f"({a.name}|x|{b.name})")


# ---------------------------------------------------------------------------
# coherence morphisms

@dataclass
class IsoPair:
    forward: DiagramMorphism
    inverse: DiagramMorphism


def _verify_iso(pair: IsoPair):
    from .diagram import compose_diagram_morphisms
    problems = validate_diagram_morphism(pair.forward)
    problems += validate_diagram_morphism(pair.inverse)
    if problems:
        raise InputError(f"coherence morphism invalid: {problems[:3]}")
    fwd_then_back = compose_diagram_morphisms(pair.inverse, pair.forward)
    back_then_fwd = compose_diagram_morphisms(pair.forward, pair.inverse)
    if not diagram_morphism_equal(fwd_then_back,
                                  identity_diagram_morphism(pair.forward.src)):
        raise InputError("round trip on the source is not the identity")
    if not diagram_morphism_equal(back_then_fwd,
                                  identity_diagram_morphism(pair.inverse.src)):
        raise InputError("round trip on the target is not the identity")
    return pair


@dataclass
class AssociatorResult:
    iso: IsoPair
    p_xy: SemidirectProduct
    p_xy_z: SemidirectProduct
    p_yz: SemidirectProduct
    p_x_yz: SemidirectProduct


def associator(x: DiagramInCat, y: DiagramInCat, z: DiagramInCat,
               guard: Guardrails = DEFAULT_GUARDRAILS,
               p_xy=None, p_xy_z=None, p_yz=None, p_x_yz=None):
    """The rebracketing isomorphism (X⋉Y)⋉Z -> X⋉(Y⋉Z), with verified inverse.

    The object formula is currying: ((d, psi), chi) goes to (d, a -> (psi(a),
    chi restricted to the pairs over a)).
    """
    p_xy = p_xy or build_semidirect(x, y, guard)
    p_xy_z = p_xy_z or build_semidirect(p_xy.diagram, z, guard)
    p_yz = p_yz or build_semidirect(y, z, guard)
    p_x_yz = p_x_yz or build_semidirect(x, p_yz.diagram, guard)

    def curry_object(oid):
        """(d, xi) data for a triple-product object ((d, psi), chi)."""
        d1, chi = p_xy_z.obj_data[oid]
        d, psi = p_xy.obj_data[d1]
        fib_xy = p_xy.fibers[d1]
        fiber_d = x.fiber_obj[d]
        xi_omap, xi_mmap = {}, {}
        for a in fiber_d.objects:
            ya = psi.omap[a]
            fib_y = y.fiber_obj[ya]
            c_omap = {bb: chi.omap[fib_xy.obj_id[(a, bb)]] for bb in fib_y.objects}
            c_mmap = {beta: chi.mmap[fib_xy.mor_id[(fiber_d.identity(a),
                                                    fib_y.src[beta], beta)]]
                      for beta in fib_y.mor_ids}
            xi_omap[a] = p_yz.obj_id[(ya, (tuple(c_omap[bb] for bb in fib_y.objects),
                                           tuple(c_mmap[m] for m in fib_y.mor_ids)))]
        for alpha in fiber_d.mor_ids:
            a1, a2 = fiber_d.src[alpha], fiber_d.tgt[alpha]
            fib_y1 = y.fiber_obj[psi.omap[a1]]
            ry_alpha = y.fiber_mor[psi.mmap[alpha]]
            fib_y2 = y.fiber_obj[psi.omap[a2]]
            comps = tuple(
                chi.mmap[fib_xy.mor_id[(alpha, bb,
                                        fib_y2.identity(ry_alpha.omap[bb]))]]
                for bb in fib_y1.objects)
            xi_mmap[alpha] = p_yz.mor_id[(xi_omap[a1], xi_omap[a2],
                                          psi.mmap[alpha], comps)]
        return d, d1, psi, chi, fib_xy, Functor(x.fiber_obj[d], p_yz.diagram.base,
                                                xi_omap, xi_mmap)

    omap, mmap = {}, {}
    curried = {}
    for oid in p_xy_z.diagram.base.objects:
        d, d1, psi, chi, fib_xy, xi = curry_object(oid)
        curried[oid] = (d, d1, psi, chi, fib_xy, xi)
        omap[oid] = p_x_yz.obj_id[(d, functor_key(xi))]
    for mid in p_xy_z.diagram.base.mor_ids:
        f1, theta = p_xy_z.mor_data[mid]
        f, phi = p_xy.mor_data[f1]
        s1 = p_xy_z.diagram.base.src[mid]
        t1 = p_xy_z.diagram.base.tgt[mid]
        d, d1, psi, chi, fib_xy, xi = curried[s1]
        xi2 = curried[t1][5]
        rf = x.fiber_mor[f]
        fiber_d = x.fiber_obj[d]
        comps = []
        for a in fiber_d.objects:
            fib_y = y.fiber_obj[psi.omap[a]]
            theta_a = tuple(theta.components[fib_xy.obj_id[(a, bb)]]
                            for bb in fib_y.objects)
            comps.append(p_yz.mor_id[(xi.omap[a], xi2.omap[rf.omap[a]],
                                      phi.components[a], theta_a)])
        mmap[mid] = p_x_yz.mor_id[(omap[s1], omap[t1], f, tuple(comps))]
    base_fwd = Functor(p_xy_z.diagram.base, p_x_yz.diagram.base, omap, mmap)

    rho_fwd = {}
    for oid in p_xy_z.diagram.base.objects:
        d, d1, psi, chi, fib_xy, xi = curried[oid]
        src_fib = p_x_yz.fibers[omap[oid]]       # pairs (a, (b, c))
        tgt_fib = p_xy_z.fibers[oid]             # pairs ((a, b), c)
        fiber_d = x.fiber_obj[d]
        fomap, fmmap = {}, {}
        for pid, (a, byz) in src_fib.obj_data.items():
            inner = p_yz.fibers[xi.omap[a]]
            bb, cc = inner.obj_data[byz]
            fomap[pid] = tgt_fib.obj_id[(fib_xy.obj_id[(a, bb)], cc)]
        for qid, (alpha, byz1, bmor) in src_fib.mor_data.items():
            a1, a2 = fiber_d.src[alpha], fiber_d.tgt[alpha]
            inner1 = p_yz.fibers[xi.omap[a1]]
            inner2 = p_yz.fibers[xi.omap[a2]]
            b1, c1 = inner1.obj_data[byz1]
            beta, _, gamma = inner2.mor_data[bmor]
            fmmap[qid] = tgt_fib.mor_id[(fib_xy.mor_id[(alpha, b1, beta)], c1, gamma)]
        rho_fwd[oid] = Functor(src_fib.cat, tgt_fib.cat, fomap, fmmap)

    forward = DiagramMorphism(p_xy_z.diagram, p_x_yz.diagram, base_fwd, rho_fwd,
                              name="assoc")

    # inverse: uncurry
    omap_inv, mmap_inv = {}, {}
    uncurried = {}
    for oid in p_x_yz.diagram.base.objects:
        d, xi = p_x_yz.obj_data[oid]
        fiber_d = x.fiber_obj[d]
        psi_omap, psi_mmap = {}, {}
        for a in fiber_d.objects:
            psi_omap[a] = p_yz.obj_data[xi.omap[a]][0]
        for alpha in fiber_d.mor_ids:
            psi_mmap[alpha] = p_yz.mor_data[xi.mmap[alpha]][0]
        psi = Functor(fiber_d, y.base, psi_omap, psi_mmap)
        d1 = p_xy.obj_id[(d, functor_key(psi))]
        fib_xy = p_xy.fibers[d1]
        chi_omap, chi_mmap = {}, {}
        for pid, (a, bb) in fib_xy.obj_data.items():
            inner = p_yz.obj_data[xi.omap[a]][1]
            chi_omap[pid] = inner.omap[bb]
        for qid, (alpha, b1, beta) in fib_xy.mor_data.items():
            a1, a2 = fiber_d.src[alpha], fiber_d.tgt[alpha]
            chi_a2 = p_yz.obj_data[xi.omap[a2]][1]
            phi_alpha = p_yz.mor_data[xi.mmap[alpha]][1]
            chi_mmap[qid] = z.base.comp[(chi_a2.mmap[beta],
                                         phi_alpha.components[b1])]
        chi = Functor(fib_xy.cat, z.base, chi_omap, chi_mmap)
        uncurried[oid] = (d, xi, psi, d1, fib_xy, chi)
        omap_inv[oid] = p_xy_z.obj_id[(d1, functor_key(chi))]
    for mid in p_x_yz.diagram.base.mor_ids:
        f, theta = p_x_yz.mor_data[mid]
        s1 = p_x_yz.diagram.base.src[mid]
        t1 = p_x_yz.diagram.base.tgt[mid]
        d, xi, psi, d1, fib_xy, chi = uncurried[s1]
        d1_tgt = uncurried[t1][3]
        fiber_d = x.fiber_obj[d]
        phi_comps, theta_pair = {}, {}
        for a in fiber_d.objects:
            inner_mor = p_yz.mor_data[theta.components[a]]
            phi_comps[a] = inner_mor[0]
            for bb in y.fiber_obj[psi.omap[a]].objects:
                theta_pair[fib_xy.obj_id[(a, bb)]] = inner_mor[1].components[bb]
        f1 = p_xy.mor_id[(d1, d1_tgt, f,
                          tuple(phi_comps[a] for a in fiber_d.objects))]
        mmap_inv[mid] = p_xy_z.mor_id[(
            omap_inv[s1], omap_inv[t1], f1,
            tuple(theta_pair[pid] for pid in fib_xy.cat.objects))]
    base_inv = Functor(p_x_yz.diagram.base, p_xy_z.diagram.base, omap_inv, mmap_inv)

    rho_inv = {}
    for oid in p_x_yz.diagram.base.objects:
        d, xi, psi, d1, fib_xy, chi = uncurried[oid]
        src_fib = p_xy_z.fibers[omap_inv[oid]]   # pairs ((a, b), c)
        tgt_fib = p_x_yz.fibers[oid]             # pairs (a, (b, c))
        fomap, fmmap = {}, {}
        for pid, (pxy, cc) in src_fib.obj_data.items():
            a, bb = fib_xy.obj_data[pxy]
            inner = p_yz.fibers[xi.omap[a]]
            fomap[pid] = tgt_fib.obj_id[(a, inner.obj_id[(bb, cc)])]
        for qid, (pair_mor, c1, gamma) in src_fib.mor_data.items():
            alpha, b1, beta = fib_xy.mor_data[pair_mor]
            a1 = x.fiber_obj[d].src[alpha]
            a2 = x.fiber_obj[d].tgt[alpha]
            inner1 = p_yz.fibers[xi.omap[a1]]
            inner2 = p_yz.fibers[xi.omap[a2]]
            tc1 = _transported_c(x, y, z, psi, chi, fib_xy, alpha, b1, c1)
            fmmap[qid] = tgt_fib.mor_id[(
                alpha, inner1.obj_id[(b1, c1)], inner2.mor_id[(beta, tc1, gamma)])]
        rho_inv[oid] = Functor(src_fib.cat, tgt_fib.cat, fomap, fmmap)

    inverse = DiagramMorphism(p_x_yz.diagram, p_xy_z.diagram, base_inv, rho_inv,
                              name="assoc_inv")
    iso = _verify_iso(IsoPair(forward, inverse))
    return AssociatorResult(iso, p_xy, p_xy_z, p_yz, p_x_yz)


def _transported_c(x, y, z, psi, chi, fib_xy, alpha, b1, c1):
    """The image of c1 under R_Z of chi applied to the pair morphism (alpha, id)."""
    fiber_d = psi.src
    a2 = fiber_d.tgt[alpha]
    ry_alpha = y.fiber_mor[psi.mmap[alpha]]
    fib_y2 = y.fiber_obj[psi.omap[a2]]
    tb1 = ry_alpha.omap[b1]
    step = chi.mmap[fib_xy.mor_id[(alpha, b1, fib_y2.identity(tb1))]]
    return z.fiber_mor[step].omap[c1]


# ---------------------------------------------------------------------------
# unitors

def right_unitor(x: DiagramInCat, guard: Guardrails = DEFAULT_GUARDRAILS,
                 product: SemidirectProduct = None):
    """The isomorphism X ⋉ 1 -> X (with verified inverse)."""
    p = product if product is not None else build_semidirect(x, unit_diagram(), guard)
    one = terminal_category()
    omap, mmap = {}, {}
    for oid, (d, psi) in p.obj_data.items():
        omap[oid] = d
    for mid, (f, phi) in p.mor_data.items():
        mmap[mid] = f
    base_fwd = Functor(p.diagram.base, x.base, omap, mmap)
    rho_fwd = {}
    for oid, (d, psi) in p.obj_data.items():
        fib = p.fibers[oid]
        fiber_d = x.fiber_obj[d]
        fomap = {a: fib.obj_id[(a, "*")] for a in fiber_d.objects}
        fmmap = {alpha: fib.mor_id[(alpha, "*", one.identity("*"))]
                 for alpha in fiber_d.mor_ids}
        rho_fwd[oid] = Functor(fiber_d, fib.cat, fomap, fmmap)
    forward = DiagramMorphism(p.diagram, x, base_fwd, rho_fwd, name="runit")

    unique_oid = {d: p.obj_id[(d, functor_key(psi))]
                  for oid, (d, psi) in p.obj_data.items()}
    omap_inv = {d: unique_oid[d] for d in x.base.objects}
    mmap_inv = {}
    for f in x.base.mor_ids:
        d1 = x.base.src[f]
        comps = tuple("id_*" for _ in x.fiber_obj[d1].objects)
        mmap_inv[f] = p.mor_id[(omap_inv[d1], omap_inv[x.base.tgt[f]], f, comps)]
    base_inv = Functor(x.base, p.diagram.base, omap_inv, mmap_inv)
    rho_inv = {}
    for d in x.base.objects:
        fib = p.fibers[omap_inv[d]]
        fomap = {pid: ab[0] for pid, ab in fib.obj_data.items()}
        fmmap = {qid: data[0] for qid, data in fib.mor_data.items()}
        rho_inv[d] = Functor(fib.cat, x.fiber_obj[d], fomap, fmmap)
    inverse = DiagramMorphism(x, p.diagram, base_inv, rho_inv, name="runit_inv")
    return _verify_iso(IsoPair(forward, inverse)), p


def left_unitor(x: DiagramInCat, guard: Guardrails = DEFAULT_GUARDRAILS,
                product: SemidirectProduct = None):
    """The isomorphism 1 ⋉ X -> X (with verified inverse)."""
    p = product if product is not None else build_semidirect(unit_diagram(), x, guard)
    one = terminal_category()
    omap, mmap = {}, {}
    for oid, (star, psi) in p.obj_data.items():
        omap[oid] = psi.omap["*"]
    for mid, (f, phi) in p.mor_data.items():
        mmap[mid] = phi.components["*"]
    base_fwd = Functor(p.diagram.base, x.base, omap, mmap)
    rho_fwd = {}
    for oid, (star, psi) in p.obj_data.items():
        fib = p.fibers[oid]
        d = psi.omap["*"]
        fiber_d = x.fiber_obj[d]
        fomap = {b: fib.obj_id[("*", b)] for b in fiber_d.objects}
        fmmap = {beta: fib.mor_id[(one.identity("*"), fiber_d.src[beta], beta)]
                 for beta in fiber_d.mor_ids}
        rho_fwd[oid] = Functor(fiber_d, fib.cat, fomap, fmmap)
    forward = DiagramMorphism(p.diagram, x, base_fwd, rho_fwd, name="lunit")

    omap_inv, mmap_inv = {}, {}
    for d in x.base.objects:
        psi = Functor(one, x.base, {"*": d}, {"id_*": x.base.identity(d)})
        omap_inv[d] = p.obj_id[("*", functor_key(psi))]
    for f in x.base.mor_ids:
        mmap_inv[f] = p.mor_id[(omap_inv[x.base.src[f]], omap_inv[x.base.tgt[f]],
                                one.identity("*"), (f,))]
    base_inv = Functor(x.base, p.diagram.base, omap_inv, mmap_inv)
    rho_inv = {}
    for d in x.base.objects:
        fib = p.fibers[omap_inv[d]]
        fomap = {pid: ab[1] for pid, ab in fib.obj_data.items()}
        fmmap = {qid: data[2] for qid, data in fib.mor_data.items()}
        rho_inv[d] = Functor(fib.cat, x.fiber_obj[d], fomap, fmmap)
    inverse = DiagramMorphism(x, p.diagram, base_inv, rho_inv, name="lunit_inv")
    return _verify_iso(IsoPair(forward, inverse)), p


def unitors(x: DiagramInCat, guard: Guardrails = DEFAULT_GUARDRAILS):
    """Both unit isomorphisms (left, right), each with a verified inverse."""
    left, _ = left_unitor(x, guard)
    right, _ = right_unitor(x, guard)
    return left, right


# ---------------------------------------------------------------------------
# coherence identities

def triangle_check(x: DiagramInCat, y: DiagramInCat,
                   guard: Guardrails = DEFAULT_GUARDRAILS):
    """(id_X ⋉ lunit_Y) ∘ assoc = runit_X ⋉ id_Y as maps (X⋉1)⋉Y -> X⋉Y."""
    from .diagram import compose_diagram_morphisms
    u = unit_diagram()
    assoc = associator(x, u, y, guard)
    lu, p_uy = left_unitor(y, guard, product=assoc.p_yz)
    ru, p_xu = right_unitor(x, guard, product=assoc.p_xy)
    p_xy = build_semidirect(x, y, guard)
    left_path = compose_diagram_morphisms(
        semidirect_on_morphisms(identity_diagram_morphism(x), lu.forward,
                                p_src=assoc.p_x_yz, p_tgt=p_xy, guard=guard),
        assoc.iso.forward)
    right_path = semidirect_on_morphisms(
        ru.forward, identity_diagram_morphism(y),
        p_src=assoc.p_xy_z, p_tgt=p_xy, guard=guard)
    return diagram_morphism_equal(left_path, right_path)


def pentagon_check(w: DiagramInCat, x: DiagramInCat, y: DiagramInCat,
                   z: DiagramInCat, guard: Guardrails = DEFAULT_GUARDRAILS):
    """The two rebracketing paths ((W⋉X)⋉Y)⋉Z -> W⋉(X⋉(Y⋉Z)) agree."""
    from .diagram import compose_diagram_morphisms
    a_wxy = associator(w, x, y, guard)
    p_wx = a_wxy.p_xy
    p_wx_y = a_wxy.p_xy_z
    p_xy = a_wxy.p_yz
    p_w_xy = a_wxy.p_x_yz
    a_wx_y_z = associator(p_wx.diagram, y, z, guard, p_xy=p_wx_y)
    p_wx_y_z = a_wx_y_z.p_xy_z
    p_yz = a_wx_y_z.p_yz
    p_wx_yz = a_wx_y_z.p_x_yz
    a_xyz = associator(x, y, z, guard, p_xy=p_xy, p_yz=p_yz)
    p_xy_z = a_xyz.p_xy_z
    p_x_yz = a_xyz.p_x_yz
    a_w_xy_z = associator(w, p_xy.diagram, z, guard,
                          p_xy=p_w_xy, p_yz=p_xy_z)
    p_w_xy_z = a_w_xy_z.p_xy_z
    p_w_xy_z2 = a_w_xy_z.p_x_yz
    a_w_x_yz = associator(w, x, p_yz.diagram, guard,
                          p_xy=p_wx, p_xy_z=p_wx_yz, p_yz=p_x_yz)

    path1 = compose_diagram_morphisms(a_w_x_yz.iso.forward, a_wx_y_z.iso.forward)
    step1 = semidirect_on_morphisms(a_wxy.iso.forward,
                                    identity_diagram_morphism(z),
                                    p_src=p_wx_y_z, p_tgt=p_w_xy_z, guard=guard)
    step3 = semidirect_on_morphisms(identity_diagram_morphism(w),
                                    a_xyz.iso.forward,
                                    p_src=p_w_xy_z2, p_tgt=a_w_x_yz.p_x_yz,
                                    guard=guard)
    path2 = compose_diagram_morphisms(
        step3, compose_diagram_morphisms(a_w_xy_z.iso.forward, step1))
    return diagram_morphism_equal(path1, path2)


# ---------------------------------------------------------------------------
# clubs: monoids for the semidirect product

@dataclass
class ClubStructure:
    """A carrier diagram with multiplication and unit morphisms.

    ``product`` is the (possibly truncated) C ⋉ C the multiplication is
    defined on; ``mu`` maps its diagram to the carrier and ``eta`` maps the
    unit diagram to the carrier.
    """

    carrier: DiagramInCat
    product: SemidirectProduct
    mu: DiagramMorphism
    eta: DiagramMorphism


def trivial_club(guard: Guardrails = DEFAULT_GUARDRAILS):
    """The one-object club: carrier the unit diagram, multiplication the unitor."""
    u = unit_diagram()
    iso, p = left_unitor(u, guard)
    return ClubStructure(u, p, iso.forward, identity_diagram_morphism(u))


def club_check(s: ClubStructure, guard: Guardrails = DEFAULT_GUARDRAILS,
               stop_early=False):
    """Exhaustively check the monoid axioms for a club structure.

    Verifies that mu and eta are valid diagram morphisms, that both unit
    triangles commute against the explicit unitors, and that the two
    evaluation orders through the rebracketing isomorphism agree on every
    object, morphism and fiber component of the (truncated) triple product.
    Returns a list of failure descriptions; empty means the axioms hold.
    """
    report = []

    def note(msg):
        report.append(msg)
        return stop_early

    c = s.carrier
    bad = validate_diagram(c)
    if bad:
        return [f"carrier: {r}" for r in bad]
    bad = validate_diagram_morphism(s.mu)
    if bad:
        report.extend(f"mu: {r}" for r in bad)
    bad = validate_diagram_morphism(s.eta)
    if bad:
        report.extend(f"eta: {r}" for r in bad)
    if report:
        return report
    if len(s.eta.src.base.objects) != 1 or len(s.eta.src.base.mor_ids) != 1:
        return ["eta does not start at the unit diagram"]
    p = s.product
    mu, eta = s.mu, s.eta
    e_obj = eta.base_functor.omap["*"]

    # --- unit laws ------------------------------------------------------
    if _unit_laws(s, p, guard, note, e_obj) and stop_early:
        return report

    # --- associativity --------------------------------------------------
    for oid1 in p.diagram.base.objects:
        d, psi = p.obj_data[oid1]
        fib = p.fibers[oid1]
        b1 = mu.base_functor.omap[oid1]
        rho1 = mu.rho[oid1]
        chis = enumerate_functors(fib.cat, c.base, guard.max_enum_morphisms)
        for chi in chis:
            lhs_defined, lhs_oid2 = _route_left(s, p, oid1, b1, rho1, chi)
            lhs = None if lhs_oid2 is None else mu.base_functor.omap[lhs_oid2]
            rhs_defined, rhs, xi_oids, omega = _route_right(s, p, oid1, d, psi, fib, chi)
            where = f"object ({p.describe_object(oid1)}, chi={functor_key(chi)})"
            if lhs_defined != rhs_defined:
                if note(f"associativity domain mismatch at {where}: "
                        f"left defined={lhs_defined}, right defined={rhs_defined}"):
                    return report
                continue
            if not lhs_defined:
                continue
            if lhs != rhs:
                if note(f"associativity fails on base objects at {where}: "
                        f"{lhs!r} != {rhs!r}"):
                    return report
                continue
            fails = _rho_route_compare(s, p, oid1, chi, b1, rho1, lhs,
                                       xi_oids, omega)
            for msg in fails:
                if note(f"associativity fails on fiber components at {where}: {msg}"):
                    return report
    # morphism-level associativity
    for msg in _assoc_on_morphisms(s, p, guard):
        if note(msg):
            return report
    return report


def _unit_laws(s, p, guard, note, e_obj):
    c = s.carrier
    mu = s.mu
    one = terminal_category()
    stop = False

    # left unit: mu ∘ (eta ⋉ id) against the left unitor on 1 ⋉ C
    p_uc = build_semidirect(unit_diagram(), c, guard)
    lu, _ = left_unitor(c, guard, product=p_uc)
    img_of_left = {}
    for oid, (star, psi) in p_uc.obj_data.items():
        yv = psi.omap["*"]
        fiber_e = c.fiber_obj[e_obj]
        shifted = Functor(fiber_e, c.base,
                          {a: yv for a in fiber_e.objects},
                          {m: c.base.identity(yv) for m in fiber_e.mor_ids})
        key = (e_obj, functor_key(shifted))
        img = p.obj_id.get(key)
        img_of_left[oid] = img
        if img is None:
            stop = note(f"left unit composite leaves the domain at {yv!r}")
            if stop:
                return True
            continue
        got = mu.base_functor.omap[img]
        if got != yv:
            if note(f"left unit law fails on object {yv!r}: mu gives {got!r}"):
                return True
        # fiber components: mu-rho then (eta ⋉ id)-rho equals the unitor rho
        rho_mu = mu.rho[img]
        fib_img = p.fibers[img]
        fib_u = p_uc.fibers[oid]
        for b in c.fiber_obj[yv].objects:
            pid = rho_mu.omap[b]
            a_part, b_part = fib_img.obj_data[pid]
            lhs = fib_u.obj_id[("*", b_part)]
            if lhs != lu.forward.rho[oid].omap[b]:
                if note(f"left unit law fails on fiber object {b!r} over {yv!r}"):
                    return True
        for m in c.fiber_obj[yv].mor_ids:
            qid = rho_mu.mmap[m]
            alpha, bb1, beta = fib_img.mor_data[qid]
            lhs = fib_u.mor_id[(one.identity("*"), bb1, beta)]
            if lhs != lu.forward.rho[oid].mmap[m]:
                if note(f"left unit law fails on fiber morphism {m!r} over {yv!r}"):
                    return True
    for mid, (f_unit, phi) in p_uc.mor_data.items():
        g = phi.components["*"]
        s1 = p_uc.diagram.base.src[mid]
        t1 = p_uc.diagram.base.tgt[mid]
        if img_of_left.get(s1) is None or img_of_left.get(t1) is None:
            continue
        fiber_e = c.fiber_obj[e_obj]
        comps = tuple(g for _ in fiber_e.objects)
        key = (img_of_left[s1], img_of_left[t1], c.base.identity(e_obj), comps)
        img_mor = p.mor_id.get(key)
        if img_mor is None:
            if note(f"left unit composite morphism leaves the domain at {g!r}"):
                return True
            continue
        if mu.base_functor.mmap[img_mor] != g:
            if note(f"left unit law fails on morphism {g!r}"):
                return True

    # right unit: mu ∘ (id ⋉ eta) against the right unitor on C ⋉ 1
    p_cu = build_semidirect(c, unit_diagram(), guard)
    ru, _ = right_unitor(c, guard, product=p_cu)
    img_of_right = {}
    for oid, (d, bang) in p_cu.obj_data.items():
        fiber_d = c.fiber_obj[d]
        shifted = Functor(fiber_d, c.base,
                          {a: e_obj for a in fiber_d.objects},
                          {m: c.base.identity(e_obj) for m in fiber_d.mor_ids})
        key = (d, functor_key(shifted))
        img = p.obj_id.get(key)
        img_of_right[oid] = img
        if img is None:
            if note(f"right unit composite leaves the domain at {d!r}"):
                return True
            continue
        got = mu.base_functor.omap[img]
        if got != d:
            if note(f"right unit law fails on object {d!r}: mu gives {got!r}"):
                return True
        rho_mu = mu.rho[img]
        fib_img = p.fibers[img]
        fib_u = p_cu.fibers[oid]
        eta_rho = s.eta.rho["*"]
        for b in fiber_d.objects:
            pid = rho_mu.omap[b]
            a_part, b_part = fib_img.obj_data[pid]
            lhs = fib_u.obj_id[(a_part, "*")]
            if lhs != ru.forward.rho[oid].omap[b]:
                if note(f"right unit law fails on fiber object {b!r} over {d!r}"):
                    return True
        for m in fiber_d.mor_ids:
            qid = rho_mu.mmap[m]
            alpha, bb1, beta = fib_img.mor_data[qid]
            lhs = fib_u.mor_id[(alpha, "*", one.identity("*"))]
            if lhs != ru.forward.rho[oid].mmap[m]:
                if note(f"right unit law fails on fiber morphism {m!r} over {d!r}"):
                    return True
    for mid, (f, phi) in p_cu.mor_data.items():
        s1 = p_cu.diagram.base.src[mid]
        t1 = p_cu.diagram.base.tgt[mid]
        if img_of_right.get(s1) is None or img_of_right.get(t1) is None:
            continue
        d = p_cu.obj_data[s1][0]
        fiber_d = c.fiber_obj[d]
        comps = tuple(c.base.identity(e_obj) for _ in fiber_d.objects)
        key = (img_of_right[s1], img_of_right[t1], f, comps)
        img_mor = p.mor_id.get(key)
        if img_mor is None:
            if note(f"right unit composite morphism leaves the domain at {f!r}"):
                return True
            continue
        if mu.base_functor.mmap[img_mor] != f:
            if note(f"right unit law fails on morphism {f!r}"):
                return True
    return False


def _curried_fiber_functor(s, p, oid1, fib, chi, a):
    """chi restricted to the pairs over a: a functor fiber(psi(a)) -> base."""
    c = s.carrier
    d, psi = p.obj_data[oid1]
    fiber_d = c.fiber_obj[d]
    ya = psi.omap[a]
    fib_y = c.fiber_obj[ya]
    omap = tuple(chi.omap[fib.obj_id[(a, b)]] for b in fib_y.objects)
    mmap = tuple(chi.mmap[fib.mor_id[(fiber_d.identity(a), fib_y.src[m], m)]]
                 for m in fib_y.mor_ids)
    return ya, (omap, mmap)


def _route_left(s, p, oid1, b1, rho1, chi):
    """mu(mu ⋉ id): transport chi along mu's fiber component, then multiply.

    Returns (defined, the product object the outer mu is applied to).
    """
    c = s.carrier
    fiber_b1 = c.fiber_obj[b1]
    omap = tuple(chi.omap[rho1.omap[a]] for a in fiber_b1.objects)
    mmap = tuple(chi.mmap[rho1.mmap[m]] for m in fiber_b1.mor_ids)
    oid2 = p.obj_id.get((b1, (omap, mmap)))
    if oid2 is None:
        return False, None
    return True, oid2


def _route_right(s, p, oid1, d, psi, fib, chi):
    """mu(id ⋉ mu) through currying: multiply each curried fiber, then the outer."""
    c = s.carrier
    fiber_d = c.fiber_obj[d]
    xi_oids = {}
    omega_omap = {}
    for a in fiber_d.objects:
        ya, key = _curried_fiber_functor(s, p, oid1, fib, chi, a)
        inner = p.obj_id.get((ya, key))
        if inner is None:
            return False, None, None, None
        xi_oids[a] = inner
        omega_omap[a] = s.mu.base_functor.omap[inner]
    omega_mmap = {}
    for alpha in fiber_d.mor_ids:
        a1, a2 = fiber_d.src[alpha], fiber_d.tgt[alpha]
        fib_y1 = c.fiber_obj[psi.omap[a1]]
        ry_alpha = c.fiber_mor[psi.mmap[alpha]]
        fib_y2 = c.fiber_obj[psi.omap[a2]]
        comps = tuple(
            chi.mmap[fib.mor_id[(alpha, b, fib_y2.identity(ry_alpha.omap[b]))]]
            for b in fib_y1.objects)
        inner_mor = p.mor_id.get((xi_oids[a1], xi_oids[a2], psi.mmap[alpha], comps))
        if inner_mor is None:
            return False, None, None, None
        omega_mmap[alpha] = s.mu.base_functor.mmap[inner_mor]
    oid_out = p.obj_id.get((d, (tuple(omega_omap[a] for a in fiber_d.objects),
                                tuple(omega_mmap[m] for m in fiber_d.mor_ids))))
    if oid_out is None:
        return False, None, None, None
    return True, s.mu.base_functor.omap[oid_out], xi_oids, (omega_omap, omega_mmap, oid_out)


def _rho_route_compare(s, p, oid1, chi, b1, rho1, b_final, xi_oids, omega):
    """Compare the two composite fiber components as maps into the triple fiber.

    Both sides are expressed as raw key tuples ((pair-id, c) and
    (pair-morphism-id, c, gamma)) so no triple fiber is materialized.
    """
    c = s.carrier
    fails = []
    _, _, oid_out = omega
    oid2 = p.obj_id[(b1, (tuple(chi.omap[rho1.omap[a]] for a in c.fiber_obj[b1].objects),
                          tuple(chi.mmap[rho1.mmap[m]] for m in c.fiber_obj[b1].mor_ids)))]
    fib2 = p.fibers[oid2]
    rho_mu2 = s.mu.rho[oid2]
    fib_out = p.fibers[oid_out]
    rho_mu_out = s.mu.rho[oid_out]
    d = p.obj_data[oid1][0]
    fiber_final = c.fiber_obj[b_final]
    for xobj in fiber_final.objects:
        ap, cp = fib2.obj_data[rho_mu2.omap[xobj]]
        lhs = (rho1.omap[ap], cp)
        a, q = fib_out.obj_data[rho_mu_out.omap[xobj]]
        inner_fib = p.fibers[xi_oids[a]]
        bq, cq = inner_fib.obj_data[s.mu.rho[xi_oids[a]].omap[q]]
        rhs = (p.fibers[oid1].obj_id[(a, bq)], cq)
        if lhs != rhs:
            fails.append(f"fiber object {xobj!r}: {lhs!r} != {rhs!r}")
    for xmor in fiber_final.mor_ids:
        alpha2, c1p, gammap = fib2.mor_data[rho_mu2.mmap[xmor]]
        lhs = (rho1.mmap[alpha2], c1p, gammap)
        alpha, q1, betaq = fib_out.mor_data[rho_mu_out.mmap[xmor]]
        fiber_d = c.fiber_obj[d]
        a1, a2 = fiber_d.src[alpha], fiber_d.tgt[alpha]
        inner1 = p.fibers[xi_oids[a1]]
        inner2 = p.fibers[xi_oids[a2]]
        b1q, c1q = inner1.obj_data[s.mu.rho[xi_oids[a1]].omap[q1]]
        beta, _, gamma = inner2.mor_data[s.mu.rho[xi_oids[a2]].mmap[betaq]]
        rhs = (p.fibers[oid1].mor_id[(alpha, b1q, beta)], c1q, gamma)
        if lhs != rhs:
            fails.append(f"fiber morphism {xmor!r}: {lhs!r} != {rhs!r}")
    return fails


def _assoc_on_morphisms(s, p, guard):
    """Morphism-level agreement of the two evaluation orders."""
    c = s.carrier
    mu = s.mu
    out = []
    base = p.diagram.base
    for mid in base.mor_ids:
        oid1, oid1b = base.src[mid], base.tgt[mid]
        f, phi = p.mor_data[mid]
        d1, psi1 = p.obj_data[oid1]
        d2, psi2 = p.obj_data[oid1b]
        fib1, fib1b = p.fibers[oid1], p.fibers[oid1b]
        transport = p.diagram.fiber_mor[mid]
        chis1 = enumerate_functors(fib1.cat, c.base, guard.max_enum_morphisms)
        chis2 = enumerate_functors(fib1b.cat, c.base, guard.max_enum_morphisms)
        for chi1 in chis1:
            for chi2 in chis2:
                shifted = compose_functors(chi2, transport)
                for theta in enumerate_nat_trans(chi1, shifted):
                    ok, msg = _assoc_single_morphism(
                        s, p, mid, f, phi, oid1, oid1b, chi1, chi2, theta)
                    if not ok:
                        out.append(msg)
    return out


def _assoc_single_morphism(s, p, mid, f, phi, oid1, oid1b, chi1, chi2, theta):
    c = s.carrier
    mu = s.mu
    b1 = mu.base_functor.omap[oid1]
    b1b = mu.base_functor.omap[oid1b]
    rho1, rho1b = mu.rho[oid1], mu.rho[oid1b]
    fib1, fib1b = p.fibers[oid1], p.fibers[oid1b]
    d1, psi1 = p.obj_data[oid1]
    d2, psi2 = p.obj_data[oid1b]
    where = f"morphism {mid!r} with theta={tuple(sorted(theta.components.items()))!r}"

    # left route: transport theta along mu's fiber components, multiply
    ok_l1, lhs_src = _route_left(s, p, oid1, b1, rho1, chi1)
    ok_l2, lhs_tgt = _route_left(s, p, oid1b, b1b, rho1b, chi2)
    lhs = None
    if ok_l1 and ok_l2:
        fiber_b1 = c.fiber_obj[b1]
        comps = tuple(theta.components[rho1.omap[a]] for a in fiber_b1.objects)
        mid2 = p.mor_id.get((lhs_src, lhs_tgt, mu.base_functor.mmap[mid], comps))
        if mid2 is not None:
            lhs = mu.base_functor.mmap[mid2]

    # right route: curried components, inner multiplication, outer lookup
    ok_r1, _, xi1, om1 = _route_right(s, p, oid1, d1, psi1, fib1, chi1)
    ok_r2, _, xi2, om2 = _route_right(s, p, oid1b, d2, psi2, fib1b, chi2)
    rhs = None
    if ok_r1 and ok_r2:
        rf = c.fiber_mor[f]
        fiber_d1 = c.fiber_obj[d1]
        theta_inner = {}
        defined = True
        for a in fiber_d1.objects:
            fib_y = c.fiber_obj[psi1.omap[a]]
            comps_a = tuple(theta.components[fib1.obj_id[(a, b)]]
                            for b in fib_y.objects)
            inner_mid = p.mor_id.get((xi1[a], xi2[rf.omap[a]],
                                      phi.components[a], comps_a))
            if inner_mid is None:
                defined = False
                break
            theta_inner[a] = mu.base_functor.mmap[inner_mid]
        if defined:
            outer = p.mor_id.get((om1[2], om2[2], f,
                                  tuple(theta_inner[a] for a in fiber_d1.objects)))
            if outer is not None:
                rhs = mu.base_functor.mmap[outer]
    if (lhs is None) != (rhs is None):
        return False, f"associativity domain mismatch at {where}"
    if lhs is not None and lhs != rhs:
        return False, f"associativity fails on base morphisms at {where}: {lhs!r} != {rhs!r}"
    return True, ""
