"""Runnable law-check suites with deterministic machine-readable reports.

Every suite draws its fixtures from a seeded generator, runs a fixed list of
checks, and returns a plain dict: the same seed and configuration always
produce byte-identical serialized reports.  Each check carries a
self-describing law identifier, a pass/fail status and witness details.
"""

from __future__ import annotations

import random

from .config import DEFAULT_GUARDRAILS
from .errors import GuardrailExceeded
from .fincat import discrete_category, find_isomorphism, identity_functor
from . import generate as gen
from .operads import (associative_operad, club_to_operad,
                      commutative_operad, cyclic_group_operad,
                      free_operad, ns_iso_check, operad_to_club,
                      swap_pair_operad, sym_inclusion, sym_operad_to_club)
from .semidirect import (associator, club_check, pentagon_check,
                         semidirect, triangle_check, trivial_club, unitors)
from .simpset import (boundary, iso_sset, is_kan_fibration, one_point,
                      product, standard_simplex)
from .sset_club import (ClubObjectSSet, associativity_check, compose,
                        constant_family, delta_functor, delta_is_isomorphism,
                        delta_naturality_check, identity_club_morphism,
                        pair_category_sset, unit_law_check)
from .algebra import (algebra_associativity_check, colimit_act,
                      constant_algebra_object, i_points,
                      sset_stability_check)


class _Suite:
    def __init__(self, name, config):
        self.name = name
        self.config = config
        self.checks = []

    def record(self, law, ok, details=None):
        self.checks.append({
            "law": law,
            "status": "pass" if ok else "fail",
            "details": details if details is not None else {},
        })
        return ok

    def report(self):
        from .config import SCHEMA_VERSION
        passed = sum(1 for c in self.checks if c["status"] == "pass")
        return {
            "tool": "clubcat",
            "schema": SCHEMA_VERSION,
            "suite": self.name,
            "config": {
                "seed": self.config.get("seed"),
                "samples": self.config.get("samples"),
                "trunc": self.config.get("trunc"),
            },
            "checks": self.checks,
            "summary": {
                "passed": passed,
                "failed": len(self.checks) - passed,
                "total": len(self.checks),
            },
        }


def _monoidal_laws(config):
    suite = _Suite("monoidal-laws", config)
    rng = random.Random(config["seed"])
    samples = config["samples"]
    guard = DEFAULT_GUARDRAILS

    # the one-object/two-object witness that the product has no symmetry
    left = semidirect(
        _pointed_diagram(["d"], [2]), _pointed_diagram(["u", "v"], [1, 1]))
    right = semidirect(
        _pointed_diagram(["u", "v"], [1, 1]), _pointed_diagram(["d"], [2]))
    suite.record("product-non-symmetry",
                 len(left.base.objects) == 4 and len(right.base.objects) == 2
                 and find_isomorphism(left.base, right.base) is None,
                 {"left_objects": len(left.base.objects),
                  "right_objects": len(right.base.objects)})

    done = 0
    resampled = 0
    failures = []
    while done < samples:
        try:
            x, y, z = gen.random_triple(rng)
            res = associator(x, y, z, guard)
            lu, ru = unitors(x, guard)
            tri = triangle_check(x, y, guard)
            pent = None
            for _ in range(3):
                w = gen.random_tiny_diagram(rng)
                try:
                    pent = pentagon_check(x, y, z, w, guard)
                    break
                except GuardrailExceeded:
                    continue
            if pent is None:
                resampled += 1
                continue
        except GuardrailExceeded:
            resampled += 1
            continue
        if not tri:
            failures.append({"sample": done, "law": "unit-triangle"})
        if not pent:
            failures.append({"sample": done, "law": "five-term-rebracketing"})
        done += 1
    suite.record("rebracketing-and-unit-isomorphisms", not failures,
                 {"samples": done, "resampled": resampled,
                  "failures": failures})
    return suite.report()


def _pointed_diagram(base_objs, fiber_sizes):
    from .diagram import DiagramInCat
    base = discrete_category(base_objs)
    fibers = {d: discrete_category([f"{d}f{i}" for i in range(n)])
              for d, n in zip(base_objs, fiber_sizes)}
    fiber_mor = {base.identity(d): identity_functor(fibers[d])
                 for d in base_objs}
    return DiagramInCat(base, fibers, fiber_mor)


def _club_check_suite(config):
    suite = _Suite("club-check", config)
    fixtures = [
        ("one-object-club", trivial_club()),
        ("word-concatenation-club",
         operad_to_club(associative_operad(3, with_nullary=True))),
        ("binary-tree-club", operad_to_club(free_operad({2: ["g"]}, 3))),
        ("cyclic-group-club", operad_to_club(cyclic_group_operad(3))),
        ("unordered-pair-club", sym_operad_to_club(commutative_operad(2))),
        ("swapped-pair-club", sym_operad_to_club(swap_pair_operad())),
    ]
    for name, club in fixtures:
        report = club_check(club)
        suite.record(f"monoid-axioms:{name}", report == [],
                     {"violations": report[:5]})
    # negative control: one corrupted composition entry must fail
    z3 = cyclic_group_operad(3)
    gamma = dict(z3.gamma)
    gamma[("1", ("1",))] = "0"
    from .operads import NsOperad
    bad = operad_to_club(NsOperad(1, z3.levels, "0", gamma))
    report = club_check(bad, stop_early=True)
    suite.record("monoid-axioms:corrupted-control-fails", report != [],
                 {"violations": report[:3]})
    return suite.report()


def _operad_bijection(config):
    suite = _Suite("operad-bijection", config)
    rng = random.Random(config["seed"])
    samples = config["samples"]

    ns_iso_check(associative_operad(4))
    suite.record("composite-collection-correspondence:word-operad", True,
                 {"cap": 4})
    bad_collections = 0
    for _ in range(samples):
        try:
            ns_iso_check(gen.random_collection(rng))
        except Exception:
            bad_collections += 1
    suite.record("composite-collection-correspondence:random", bad_collections == 0,
                 {"samples": samples, "failures": bad_collections})

    bad_roundtrips = []
    pool = [associative_operad(4), free_operad({2: ["g"]}, 4)]
    pool += [gen.random_operad(rng) for _ in range(samples)]
    for idx, op in enumerate(pool):
        club = operad_to_club(op)
        back = club_to_operad(club)
        if (back.gamma != op.gamma or back.unit != op.unit
                or back.levels != op.levels):
            bad_roundtrips.append(idx)
    suite.record("club-table-round-trip", not bad_roundtrips,
                 {"operads": len(pool), "failures": bad_roundtrips})

    surviving = []
    hosts = [free_operad({2: ["g"]}, 3), cyclic_group_operad(3),
             free_operad({2: ["g"], 3: ["t"]}, 3)]
    wanted = 50
    per_host = [wanted - 2 * (wanted // 3), wanted // 3, wanted // 3]
    total = 0
    for host, quota in zip(hosts, per_host):
        mutations = gen.law_breaking_mutations(rng, host, quota)
        for (key, replacement, mutant) in mutations:
            total += 1
            club = operad_to_club(mutant)
            if club_check(club, stop_early=True) == []:
                surviving.append({"host": host.name, "entry": repr(key),
                                  "replacement": replacement})
    suite.record("mutation-kill-rate", total >= wanted and not surviving,
                 {"mutations": total, "surviving": surviving})

    from .operads import symmetric_associative_operad
    res = sym_inclusion(symmetric_associative_operad(3))
    suite.record("symmetric-inclusion-injective", res.injective, {})
    suite.record("symmetric-inclusion-not-surjective",
                 not res.surjective_on_objects and len(res.missing_objects) > 0,
                 {"missing": len(res.missing_objects),
                  "first_missing": res.missing_objects[:1]})
    for name, club in [("unordered-pair-club",
                        sym_operad_to_club(commutative_operad(2))),
                       ("swapped-pair-club",
                        sym_operad_to_club(swap_pair_operad())),
                       ("permutation-splice-club",
                        sym_operad_to_club(symmetric_associative_operad(2)))]:
        report = club_check(club)
        suite.record(f"symmetric-monoid-axioms:{name}", report == [],
                     {"violations": report[:3]})
    return suite.report()


def _sset_laws(config):
    suite = _Suite("sset-laws", config)
    rng = random.Random(config["seed"])
    trunc = config["trunc"]
    samples = config["samples"]

    for name, s in [("interval", standard_simplex(1, trunc)),
                    ("point", standard_simplex(0, trunc)),
                    ("triangle", standard_simplex(2, trunc)),
                    ("triangle-boundary", boundary(2, trunc))]:
        report = unit_law_check(s=s)
        suite.record(f"unit-law-point-values:{name}", report == [],
                     {"violations": report})
        report = unit_law_check(value=s)
        suite.record(f"unit-law-point-base:{name}", report == [],
                     {"violations": report})

    s = standard_simplex(1, trunc)
    t = standard_simplex(1, trunc)
    res = compose(ClubObjectSSet(s, constant_family(s, t)))
    counts = [len(res.sset.nondeg[k]) for k in range(min(3, trunc + 1))]
    ok = counts == [4, 5, 2] and iso_sset(res.sset, product(s, t)) is not None
    suite.record("constant-composite-is-product:squares", ok,
                 {"nondegenerate_counts": counts})
    extra_failures = []
    for idx in range(max(3, samples // 4)):
        obj = gen.random_family(rng, trunc)
        values = {id(v) for v in obj.family.values.values()}
        if len(values) != 1:
            continue
        value = next(iter(obj.family.values.values()))
        r = compose(obj)
        if iso_sset(r.sset, product(obj.base, value)) is None:
            extra_failures.append(idx)
    suite.record("constant-composite-is-product:random", not extra_failures,
                 {"failures": extra_failures})

    assoc_failures = []
    for idx in range(samples):
        tlf = gen.random_two_level(rng, trunc)
        report = associativity_check(tlf)
        if report:
            assoc_failures.append({"sample": idx, "violations": report[:2]})
    suite.record("diagonal-associativity", not assoc_failures,
                 {"samples": samples, "failures": assoc_failures})

    fixture = ClubObjectSSet(one_point(min(2, trunc)),
                             constant_family(one_point(min(2, trunc)),
                                             standard_simplex(1, min(2, trunc))))
    res = compose(fixture)
    pairs = pair_category_sset(fixture)
    delta_functor(res, pairs)
    suite.record("comparison-functor-valid", True, {})
    suite.record("comparison-functor-not-invertible",
                 not delta_is_isomorphism(res, pairs),
                 {"diagonal_objects": len(res.sset.all_simplices(0))})

    nat_samples = []
    for _ in range(max(2, samples // 10)):
        nat_samples.append(identity_club_morphism(gen.random_family(rng, min(2, trunc))))
        nat_samples.append(gen.random_stability_sample(rng, min(2, trunc)))
    nat_report = delta_naturality_check(nat_samples)
    suite.record("comparison-naturality", nat_report == [],
                 {"samples": len(nat_samples), "violations": nat_report[:3]})
    return suite.report()


def _algebra_laws(config):
    suite = _Suite("algebra-laws", config)
    rng = random.Random(config["seed"])
    trunc = min(2, config["trunc"])
    samples = config["samples"]

    x = constant_algebra_object(standard_simplex(2, trunc), ["u", "v"])
    suite.record("collapse-of-constant-over-connected",
                 len(colimit_act(x)) == 2, {})
    from .simpset import disjoint_union
    shape = disjoint_union(one_point(trunc), one_point(trunc))
    x2 = constant_algebra_object(shape, ["u"])
    suite.record("collapse-of-constant-over-two-components",
                 len(colimit_act(x2)) == 2, {})

    from .operads import associative_operad, encode_ns
    from .algebra import act_category
    cat = act_category(encode_ns(associative_operad(2, with_nullary=True)).diagram,
                       discrete_category(["a", "b"]))
    suite.record("acting-category-count", len(cat.objects) == 7,
                 {"objects": len(cat.objects)})

    pts = i_points(constant_algebra_object(one_point(trunc), ["u", "v"]),
                   ("*",), 0)
    suite.record("probe-count-singleton", len(pts) == 2, {})

    sample_list = [gen.random_two_level(rng, trunc, discrete=True)
                   for _ in range(samples)]
    violations = algebra_associativity_check(sample_list)
    suite.record("two-stage-evaluation", not violations,
                 {"samples": samples, "violations": violations[:5]})
    return suite.report()


def _stability(config):
    suite = _Suite("stability", config)
    rng = random.Random(config["seed"])
    trunc = min(2, config["trunc"])
    samples = config["samples"]

    from .simpset import (SimplicialMap, apply_operator, degeneracy_map,
                          disjoint_union, nondeg)
    pt = one_point(3)
    two = disjoint_union(one_point(3), one_point(3))
    collapse = SimplicialMap(two, pt, {"0:pt": nondeg("pt", 0),
                                       "1:pt": nondeg("pt", 0)})
    ok, _ = is_kan_fibration(collapse, 2)
    suite.record("horn-lifting:discrete-over-point", ok, {})

    interval = standard_simplex(1, 3)
    to_point = SimplicialMap(interval, pt, {
        "0": nondeg("pt", 0), "1": nondeg("pt", 0),
        "01": apply_operator(pt, nondeg("pt", 0), degeneracy_map(0, 0))})
    ok, witness = is_kan_fibration(to_point, 2)
    suite.record("horn-lifting:interval-over-point-fails",
                 not ok and witness is not None, {"witness": witness})

    sample_list = [gen.random_stability_sample(rng, trunc)
                   for _ in range(samples)]
    report = sset_stability_check(sample_list)
    suite.record("injective-composites", report == [],
                 {"samples": samples, "violations": report[:5]})
    return suite.report()


SUITES = {
    "monoidal-laws": (_monoidal_laws, {"samples": 100, "trunc": 3}),
    "club-check": (_club_check_suite, {"samples": 1, "trunc": 3}),
    "operad-bijection": (_operad_bijection, {"samples": 20, "trunc": 3}),
    "sset-laws": (_sset_laws, {"samples": 20, "trunc": 3}),
    "algebra-laws": (_algebra_laws, {"samples": 20, "trunc": 2}),
    "stability": (_stability, {"samples": 50, "trunc": 2}),
}


def run_suite(name, seed=0, samples=None, trunc=None):
    """Run a named suite; unknown names raise InputError."""
    from .errors import InputError
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from "
                         f"{sorted(SUITES)}")
    fn, defaults = SUITES[name]
    config = {
        "seed": seed,
        "samples": samples if samples is not None else defaults["samples"],
        "trunc": trunc if trunc is not None else defaults["trunc"],
    }
    return fn(config)
