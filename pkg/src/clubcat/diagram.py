"""Diagrams in Cat and their morphisms.

A diagram is a base category D together with a fiber category R(d) for every
object and a fiber functor R(f) for every morphism, all stored as tables.

A diagram morphism (F, rho) carries a base functor F: D -> D' and, for every
object d of D, a component functor

    rho_d : R'(F(d)) -> R(d),

i.e. the components point from the target's fibers back to the source's.
Naturality is strict equality of functor tables per square.
"""

from __future__ import annotations

from .errors import InputError
from .fincat import (FinCategory, Functor, compose_functors, fincat_equal,
                     functor_equal, identity_functor, terminal_category,
                     validate_category, validate_functor)


class DiagramInCat:
    """A base category with a category-valued functor on it, as tables."""

    def __init__(self, base: FinCategory, fiber_obj, fiber_mor, name=""):
        self.base = base
        self.fiber_obj = dict(fiber_obj)   # object id -> FinCategory
        self.fiber_mor = dict(fiber_mor)   # morphism id -> Functor
        self.name = name

    def fiber(self, d):
        return self.fiber_obj[d]

    def fiber_map(self, f):
        return self.fiber_mor[f]

    def __repr__(self):
        return f"DiagramInCat({self.name!r}, base={self.base!r})"


def validate_diagram(x: DiagramInCat):
    """Exhaustive functoriality check of the fiber assignment."""
    report = list(validate_category(x.base))
    if report:
        return [f"base: {r}" for r in report]
    for d in x.base.objects:
        if d not in x.fiber_obj:
            report.append(f"fiber missing at object {d!r}")
            continue
        bad = validate_category(x.fiber_obj[d])
        report.extend(f"fiber at {d!r}: {r}" for r in bad)
    for m in x.base.mor_ids:
        if m not in x.fiber_mor:
            report.append(f"fiber functor missing at morphism {m!r}")
    if report:
        return report
    for m in x.base.mor_ids:
        fun = x.fiber_mor[m]
        if not fincat_equal(fun.src, x.fiber_obj[x.base.src[m]]):
            report.append(f"fiber functor at {m!r} has wrong source")
        elif not fincat_equal(fun.tgt, x.fiber_obj[x.base.tgt[m]]):
            report.append(f"fiber functor at {m!r} has wrong target")
        else:
            report.extend(f"fiber functor at {m!r}: {r}" for r in validate_functor(fun))
    if report:
        return report
    for d in x.base.objects:
        if not functor_equal(x.fiber_mor[x.base.identity(d)],
                             identity_functor(x.fiber_obj[d])):
            report.append(f"fiber of identity at {d!r} is not the identity functor")
    for (g, f), gf in x.base.comp.items():
        composite = compose_functors(x.fiber_mor[g], x.fiber_mor[f])
        if not functor_equal(x.fiber_mor[gf], composite):
            report.append(f"fiber functoriality fails at pair ({g!r}, {f!r})")
    return report


class DiagramMorphism:
    """A base functor together with per-object fiber components rho_d."""

    def __init__(self, src: DiagramInCat, tgt: DiagramInCat,
                 base_functor: Functor, rho, name=""):
        self.src = src
        self.tgt = tgt
        self.base_functor = base_functor
        self.rho = dict(rho)               # object of src.base -> Functor
        self.name = name

    def on_obj(self, d):
        return self.base_functor.omap[d]

    def on_mor(self, m):
        return self.base_functor.mmap[m]

    def __repr__(self):
        return f"DiagramMorphism({self.name!r})"


def validate_diagram_morphism(a: DiagramMorphism):
    report = []
    f = a.base_functor
    if not (f.src is a.src.base or fincat_equal(f.src, a.src.base)):
        report.append("base functor source mismatch")
    if not (f.tgt is a.tgt.base or fincat_equal(f.tgt, a.tgt.base)):
        report.append("base functor target mismatch")
    report.extend(f"base functor: {r}" for r in validate_functor(f))
    if report:
        return report
    for d in a.src.base.objects:
        comp = a.rho.get(d)
        if comp is None:
            report.append(f"rho component missing at {d!r}")
            continue
        if not fincat_equal(comp.src, a.tgt.fiber_obj[f.omap[d]]):
            report.append(f"rho at {d!r} has wrong source fiber")
        elif not fincat_equal(comp.tgt, a.src.fiber_obj[d]):
            report.append(f"rho at {d!r} has wrong target fiber")
        else:
            report.extend(f"rho at {d!r}: {r}" for r in validate_functor(comp))
    if report:
        return report
    # naturality per base morphism: R(f) ∘ rho_d1 = rho_d2 ∘ R'(F(f))
    for m in a.src.base.mor_ids:
        d1, d2 = a.src.base.src[m], a.src.base.tgt[m]
        left = compose_functors(a.src.fiber_mor[m], a.rho[d1])
        right = compose_functors(a.rho[d2], a.tgt.fiber_mor[f.mmap[m]])
        if not functor_equal(left, right):
            report.append(f"rho naturality fails at base morphism {m!r}")
    return report


def identity_diagram_morphism(x: DiagramInCat):
    return DiagramMorphism(x, x, identity_functor(x.base),
                           {d: identity_functor(x.fiber_obj[d]) for d in x.base.objects},
                           name="id")


def compose_diagram_morphisms(b: DiagramMorphism, a: DiagramMorphism):
    """Composite b∘a: base functors compose, rho components whisker backwards."""
    if not (a.tgt is b.src or (fincat_equal(a.tgt.base, b.src.base))):
        raise InputError("diagram morphism composition endpoint mismatch")
    base = compose_functors(b.base_functor, a.base_functor)
    rho = {}
    for d in a.src.base.objects:
        rho[d] = compose_functors(a.rho[d], b.rho[a.base_functor.omap[d]])
    return DiagramMorphism(a.src, b.tgt, base, rho)


def diagram_morphism_equal(a: DiagramMorphism, b: DiagramMorphism):
    if a.base_functor.omap != b.base_functor.omap:
        return False
    if a.base_functor.mmap != b.base_functor.mmap:
        return False
    if set(a.rho) != set(b.rho):
        return False
    return all(functor_equal(a.rho[d], b.rho[d]) for d in a.rho)


def constantify(m: FinCategory, name=None):
    """The diagram with base m and every fiber the one-object category."""
    one = terminal_category()
    fiber_obj = {d: one for d in m.objects}
    fiber_mor = {f: identity_functor(one) for f in m.mor_ids}
    return DiagramInCat(m, fiber_obj, fiber_mor,
                        name=name if name is not None else f"const({m.name})")


def unit_diagram():
    """The monoidal unit: the one-object category over itself."""
    return constantify(terminal_category(), name="unit")


def lift_functor(f: Functor):
    """Lift a plain functor to a morphism of constant-fiber diagrams."""
    src = constantify(f.src)
    tgt = constantify(f.tgt)
    one = terminal_category()
    rho = {d: identity_functor(one) for d in f.src.objects}
    return DiagramMorphism(src, tgt, f, rho, name="lift")


def full_subdiagram(x: DiagramInCat, objects):
    """The full subdiagram spanned by the given base objects."""
    keep = [d for d in x.base.objects if d in set(objects)]
    keep_set = set(keep)
    missing = set(objects) - keep_set
    if missing:
        raise InputError(f"unknown base objects {sorted(missing)!r}")
    morphisms = [(m, s, t) for (m, s, t) in x.base.morphisms
                 if s in keep_set and t in keep_set]
    mor_set = {m for (m, _, _) in morphisms}
    base = FinCategory(
        keep, morphisms,
        {d: x.base.identities[d] for d in keep},
        {(g, f): gf for (g, f), gf in x.base.comp.items()
         if g in mor_set and f in mor_set},
        name=f"{x.base.name}|sub")
    return DiagramInCat(base,
                        {d: x.fiber_obj[d] for d in keep},
                        {m: x.fiber_mor[m] for m in mor_set},
                        name=f"{x.name}|sub")


def find_diagram_isomorphism(x: DiagramInCat, y: DiagramInCat):
    """Search for an invertible diagram morphism x -> y on small inputs.

    Tries base isomorphisms in enumeration order and, for each, searches
    fiberwise isomorphisms satisfying strict naturality.  Returns a valid
    DiagramMorphism with invertible components or None.
    """
    from .fincat import enumerate_functors, find_isomorphism

    if len(x.base.objects) != len(y.base.objects):
        return None
    if len(x.base.mor_ids) != len(y.base.mor_ids):
        return None

    def base_isos():
        seen = find_isomorphism(x.base, y.base)
        if seen is None:
            return
        # enumerate all functors and filter to bijective ones; small inputs only
        for f in enumerate_functors(x.base, y.base):
            if (len(set(f.omap.values())) == len(y.base.objects)
                    and len(set(f.mmap.values())) == len(y.base.mor_ids)):
                yield f

    for f in base_isos():
        rho = {}
        ok = True
        for d in x.base.objects:
            iso = find_isomorphism(y.fiber_obj[f.omap[d]], x.fiber_obj[d])
            if iso is None:
                ok = False
                break
            rho[d] = iso
        if not ok:
            continue
        cand = DiagramMorphism(x, y, f, rho)
        if not validate_diagram_morphism(cand):
            return cand
        # retry with exhaustive fiber iso choices when the greedy pick fails
        cand = _search_fiber_isos(x, y, f)
        if cand is not None:
            return cand
    return None


def _search_fiber_isos(x, y, f):
    from .fincat import enumerate_functors

    objs = x.base.objects
    choices = []
    for d in objs:
        cands = [g for g in enumerate_functors(y.fiber_obj[f.omap[d]], x.fiber_obj[d])
                 if len(set(g.omap.values())) == len(x.fiber_obj[d].objects)
                 and len(set(g.mmap.values())) == len(x.fiber_obj[d].mor_ids)]
        if not cands:
            return None
        choices.append(cands)
    rho = {}

    def backtrack(i):
        if i == len(objs):
            return True
        for cand in choices[i]:
            rho[objs[i]] = cand
            # check naturality only on morphisms between assigned objects
            good = True
            for m in x.base.mor_ids:
                d1, d2 = x.base.src[m], x.base.tgt[m]
                if d1 in rho and d2 in rho:
                    left = compose_functors(x.fiber_mor[m], rho[d1])
                    right = compose_functors(rho[d2], y.fiber_mor[f.mmap[m]])
                    if not functor_equal(left, right):
                        good = False
                        break
            if good and backtrack(i + 1):
                return True
            del rho[objs[i]]
        return False

    if backtrack(0):
        return DiagramMorphism(x, y, f, dict(rho))
    return None
