"""Truncated simplicial sets in Eilenberg-Zilber normal form.

A simplicial set stores only its non-degenerate simplices (per dimension, up
to the truncation level) together with the normal form of every face.  A
k-simplex in general is a pair (eta, base): a surjective monotone map applied
to a non-degenerate simplex.  Operators act by normal-form arithmetic: factor
the composed monotone map into surjection-after-injection, evaluate the
injective part on stored faces, keep the surjective part symbolic.

Operator orientation: a monotone map theta: [m] -> [n] acts on n-simplices
and yields m-simplices; in the category of simplices it is a morphism from x
to theta*x.
"""

from __future__ import annotations

import itertools

from .errors import InputError
from .fincat import FinCategory


# ---------------------------------------------------------------------------
# monotone maps in the simplex category

class MonotoneMap:
    """A weakly increasing map [m] -> [n], stored as its value tuple."""

    __slots__ = ("m", "n", "values")

    def __init__(self, n, values):
        self.values = tuple(values)
        self.m = len(self.values) - 1
        self.n = n
        if self.m < 0:
            raise InputError("monotone maps need a nonempty domain")
        for i, v in enumerate(self.values):
            if not 0 <= v <= n:
                raise InputError(f"value {v} out of range [0..{n}]")
            if i and self.values[i - 1] > v:
                raise InputError(f"values {self.values} are not monotone")

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap)
                and self.n == other.n and self.values == other.values)

    def __hash__(self):
        return hash((self.n, self.values))

    def __repr__(self):
        return f"MonotoneMap({self.n}, {list(self.values)})"

    def is_identity(self):
        return self.m == self.n and all(v == i for i, v in enumerate(self.values))

    def is_injective(self):
        return len(set(self.values)) == len(self.values)

    def is_surjective(self):
        return set(self.values) == set(range(self.n + 1))


def identity_map(n):
    return MonotoneMap(n, range(n + 1))


def face_map(n, i):
    """The injection [n-1] -> [n] skipping i."""
    if not 0 <= i <= n or n < 1:
        raise InputError(f"no face index {i} in dimension {n}")
    return MonotoneMap(n, [v for v in range(n + 1) if v != i])


def degeneracy_map(n, i):
    """The surjection [n+1] -> [n] repeating i."""
    if not 0 <= i <= n:
        raise InputError(f"no degeneracy index {i} in dimension {n}")
    return MonotoneMap(n, sorted(list(range(n + 1)) + [i]))


def compose_maps(g: MonotoneMap, f: MonotoneMap):
    """g∘f for f: [k] -> [m], g: [m] -> [n]."""
    if f.n != g.m:
        raise InputError("monotone maps not composable")
    return MonotoneMap(g.n, [g.values[v] for v in f.values])


def ez_factor(theta: MonotoneMap):
    """Unique factorization theta = delta ∘ sigma with delta injective, sigma surjective."""
    image = sorted(set(theta.values))
    delta = MonotoneMap(theta.n, image)
    pos = {v: i for i, v in enumerate(image)}
    sigma = MonotoneMap(len(image) - 1, [pos[v] for v in theta.values])
    return delta, sigma


def all_monotone_maps(m, n):
    """All monotone [m] -> [n] in lexicographic order of value tuples."""
    return [MonotoneMap(n, c)
            for c in itertools.combinations_with_replacement(range(n + 1), m + 1)]


def surjections(m, j):
    """All surjective monotone [m] ->> [j], lexicographic."""
    if j > m:
        return []
    return [t for t in all_monotone_maps(m, j) if t.is_surjective()]


# ---------------------------------------------------------------------------
# normal forms and simplicial sets

class NormalForm:
    """A simplex written as a surjective operator applied to a non-degenerate one."""

    __slots__ = ("eta", "base")

    def __init__(self, eta: MonotoneMap, base: str):
        if not eta.is_surjective():
            raise InputError("normal forms need a surjective operator part")
        self.eta = eta
        self.base = base

    @property
    def dim(self):
        return self.eta.m

    def is_nondegenerate(self):
        return self.eta.is_identity()

    def __eq__(self, other):
        return (isinstance(other, NormalForm)
                and self.eta == other.eta and self.base == other.base)

    def __hash__(self):
        return hash((self.eta, self.base))

    def __repr__(self):
        return f"NormalForm({self.eta!r}, {self.base!r})"


def nf_id(nf: NormalForm):
    """Readable canonical id: the base for non-degenerate simplices, tagged otherwise."""
    if nf.is_nondegenerate():
        return nf.base
    return nf.base + "@" + ".".join(str(v) for v in nf.eta.values)


def nondeg(base, k):
    return NormalForm(identity_map(k), base)


class SimplicialSet:
    """An N-truncated simplicial set: non-degenerate simplices plus face tables."""

    def __init__(self, trunc, nondeg_by_dim, faces, name=""):
        self.trunc = trunc
        self.nondeg = {k: list(nondeg_by_dim.get(k, [])) for k in range(trunc + 1)}
        self.faces = {s: list(fs) for s, fs in faces.items()}
        self.name = name
        self.dim_of = {}
        for k in range(trunc + 1):
            for s in self.nondeg[k]:
                self.dim_of[s] = k

    def face(self, simplex_id, i):
        return self.faces[simplex_id][i]

    def all_simplices(self, k):
        """Every k-simplex (normal forms), canonical order: by base dim, base, eta."""
        if k > self.trunc:
            raise InputError(f"dimension {k} above truncation {self.trunc}")
        out = []
        for j in range(k, -1, -1):
            for eta in surjections(k, j):
                for base in self.nondeg[j]:
                    out.append(NormalForm(eta, base))
        # put nondegenerate ones (j == k, eta == id) first but keep a total order:
        out.sort(key=lambda nf: (nf.eta.m - (len(set(nf.eta.values)) - 1),
                                 nf.base, nf.eta.values))
        return out

    def simplex_count(self, k):
        return len(self.all_simplices(k))

    def __repr__(self):
        counts = [len(self.nondeg[k]) for k in range(self.trunc + 1)]
        return f"SimplicialSet({self.name!r}, trunc={self.trunc}, nondeg={counts})"


def apply_operator(s: SimplicialSet, x: NormalForm, theta: MonotoneMap):
    """The normal form of theta*(x) for theta: [m] -> [dim x]."""
    if theta.n != x.dim:
        raise InputError(f"operator {theta!r} does not act on dimension {x.dim}")
    if theta.m > s.trunc:
        raise InputError(f"dimension {theta.m} above truncation {s.trunc}")
    kappa = compose_maps(x.eta, theta)
    delta, sigma = ez_factor(kappa)
    z = _apply_injective(s, x.base, delta)
    return NormalForm(compose_maps(z.eta, sigma), z.base)


def _apply_injective(s: SimplicialSet, base: str, delta: MonotoneMap):
    if delta.m == delta.n:
        return nondeg(base, delta.n)
    image = set(delta.values)
    i = max(v for v in range(delta.n + 1) if v not in image)
    f = s.faces[base][i]
    rest = MonotoneMap(delta.n - 1, [v if v < i else v - 1 for v in delta.values])
    return apply_operator(s, f, rest)


def validate_sset(s: SimplicialSet):
    """Face-table well-formedness, simplicial identities, honesty of the skeleton."""
    report = []
    seen = set()
    for k in range(s.trunc + 1):
        for x in s.nondeg[k]:
            if x in seen:
                report.append(f"duplicate simplex id {x!r}")
            seen.add(x)
    for k in range(s.trunc + 1):
        for x in s.nondeg[k]:
            fs = s.faces.get(x)
            if k == 0:
                if fs not in (None, []):
                    report.append(f"vertex {x!r} has faces listed")
                continue
            if fs is None or len(fs) != k + 1:
                report.append(f"simplex {x!r} needs {k + 1} faces")
                continue
            for i, nf in enumerate(fs):
                if nf.base not in s.dim_of:
                    report.append(f"face {i} of {x!r} references unknown {nf.base!r}")
                elif nf.dim != k - 1:
                    report.append(f"face {i} of {x!r} has dimension {nf.dim}")
                elif s.dim_of[nf.base] != nf.eta.n:
                    report.append(f"face {i} of {x!r} has inconsistent normal form")
    if report:
        return report
    for k in range(2, s.trunc + 1):
        for x in s.nondeg[k]:
            for j in range(k + 1):
                for i in range(j):
                    left = apply_operator(s, s.faces[x][j], face_map(k - 1, i))
                    right = apply_operator(s, s.faces[x][i], face_map(k - 1, j - 1))
                    if left != right:
                        report.append(
                            f"simplicial identity d{i} d{j} fails at {x!r}")
    # declared non-degenerate simplices must not be secretly degenerate
    for k in range(1, s.trunc + 1):
        for x in s.nondeg[k]:
            xf = nondeg(x, k)
            for i in range(k):
                op = compose_maps(face_map(k, i), degeneracy_map(k - 1, i))
                if apply_operator(s, xf, op) == xf:
                    report.append(f"simplex {x!r} is degenerate (splits at {i})")
                    break
    return report


# ---------------------------------------------------------------------------
# standard complexes

RESERVED_ID_CHARS = set("|@()")


def _subset_id(vertices):
    return "".join(str(v) for v in vertices)


def _simplex_complex(trunc, subsets, name):
    """Complex whose non-degenerate simplices are vertex subsets (faces by deletion)."""
    nondeg_by_dim = {k: [] for k in range(trunc + 1)}
    faces = {}
    for vs in subsets:
        k = len(vs) - 1
        if k > trunc:
            continue
        sid = _subset_id(vs)
        nondeg_by_dim[k].append(sid)
        if k > 0:
            faces[sid] = [nondeg(_subset_id(vs[:i] + vs[i + 1:]), k - 1)
                          for i in range(k + 1)]
    return SimplicialSet(trunc, nondeg_by_dim, faces, name=name)


def standard_simplex(n, trunc):
    """Delta[n], truncated: non-degenerate k-simplices are (k+1)-subsets of [0..n]."""
    subsets = []
    for size in range(1, n + 2):
        subsets.extend(itertools.combinations(range(n + 1), size))
    return _simplex_complex(trunc, [list(c) for c in subsets], name=f"D{n}")


def one_point(trunc):
    return SimplicialSet(trunc, {0: ["pt"]}, {}, name="pt")


def boundary(n, trunc):
    """The boundary of Delta[n]: every proper nonempty vertex subset."""
    subsets = []
    for size in range(1, n + 1):
        subsets.extend(itertools.combinations(range(n + 1), size))
    return _simplex_complex(trunc, [list(c) for c in subsets], name=f"bdD{n}")


def horn(n, k, trunc):
    """The horn missing the k-th face: drop the top cell and the face opposite k."""
    if not 0 <= k <= n:
        raise InputError(f"no horn index {k} in dimension {n}")
    banned = tuple(v for v in range(n + 1) if v != k)
    subsets = []
    for size in range(1, n + 1):
        for c in itertools.combinations(range(n + 1), size):
            if c != banned:
                subsets.append(list(c))
    return _simplex_complex(trunc, subsets, name=f"L{n};{k}")


def disjoint_union(s: SimplicialSet, t: SimplicialSet):
    if s.trunc != t.trunc:
        raise InputError("disjoint union needs equal truncation levels")

    def tag(prefix, nf):
        return NormalForm(nf.eta, prefix + nf.base)

    nondeg_by_dim = {k: [f"0:{x}" for x in s.nondeg[k]] + [f"1:{x}" for x in t.nondeg[k]]
                     for k in range(s.trunc + 1)}
    faces = {}
    for x, fs in s.faces.items():
        faces[f"0:{x}"] = [tag("0:", nf) for nf in fs]
    for x, fs in t.faces.items():
        faces[f"1:{x}"] = [tag("1:", nf) for nf in fs]
    return SimplicialSet(s.trunc, nondeg_by_dim, faces,
                         name=f"({s.name}+{t.name})")


# ---------------------------------------------------------------------------
# products via joint normalization

def joint_factor(eta1: MonotoneMap, eta2: MonotoneMap):
    """Split a pair of surjections through their common degeneracy.

    Returns (sigma, eta1', eta2') with eta_i = eta_i' ∘ sigma and sigma the
    largest common surjective right factor; (eta1', eta2') share no repeat.
    """
    k = eta1.m
    common = [i for i in range(k)
              if eta1.values[i] == eta1.values[i + 1]
              and eta2.values[i] == eta2.values[i + 1]]
    if not common:
        return identity_map(k), eta1, eta2
    keep = [i for i in range(k + 1) if i not in set(c + 1 for c in common)]
    sigma_vals = []
    pos = -1
    for i in range(k + 1):
        if i in set(keep):
            pos += 1
        sigma_vals.append(pos)
    sigma = MonotoneMap(len(keep) - 1, sigma_vals)
    eta1p = MonotoneMap(eta1.n, [eta1.values[i] for i in keep])
    eta2p = MonotoneMap(eta2.n, [eta2.values[i] for i in keep])
    return sigma, eta1p, eta2p


def _pair_id(x: NormalForm, y: NormalForm):
    return f"({nf_id(x)}*{nf_id(y)})"


def product(s: SimplicialSet, t: SimplicialSet):
    """Dimensionwise product, re-expressed in normal form via joint factorization."""
    if s.trunc != t.trunc:
        raise InputError("product needs equal truncation levels")
    trunc = s.trunc
    nondeg_by_dim = {k: [] for k in range(trunc + 1)}
    faces = {}

    def normalize_pair(x: NormalForm, y: NormalForm):
        sigma, e1, e2 = joint_factor(x.eta, y.eta)
        return sigma, NormalForm(e1, x.base), NormalForm(e2, y.base)

    for k in range(trunc + 1):
        for x in s.all_simplices(k):
            for y in t.all_simplices(k):
                sigma, x0, y0 = normalize_pair(x, y)
                if not sigma.is_identity():
                    continue
                pid = _pair_id(x, y)
                nondeg_by_dim[k].append(pid)
                if k > 0:
                    fs = []
                    for i in range(k + 1):
                        d = face_map(k, i)
                        fx = apply_operator(s, x, d)
                        fy = apply_operator(t, y, d)
                        fsigma, fx0, fy0 = normalize_pair(fx, fy)
                        fs.append(NormalForm(fsigma, _pair_id(fx0, fy0)))
                    faces[pid] = fs
    return SimplicialSet(trunc, nondeg_by_dim, faces,
                         name=f"({s.name}x{t.name})")


# ---------------------------------------------------------------------------
# simplicial maps

class SimplicialMap:
    """Images of non-degenerate simplices; extended to all simplices by normal forms."""

    def __init__(self, src: SimplicialSet, tgt: SimplicialSet, images, name=""):
        self.src = src
        self.tgt = tgt
        self.images = dict(images)   # nondeg id -> NormalForm in tgt
        self.name = name

    def apply(self, x: NormalForm):
        return apply_operator(self.tgt, self.images[x.base], x.eta)

    def __repr__(self):
        return f"SimplicialMap({self.name!r})"


def identity_smap(s: SimplicialSet):
    images = {}
    for k in range(s.trunc + 1):
        for x in s.nondeg[k]:
            images[x] = nondeg(x, k)
    return SimplicialMap(s, s, images, name="id")


def compose_smaps(g: SimplicialMap, f: SimplicialMap):
    images = {x: g.apply(nf) for x, nf in f.images.items()}
    return SimplicialMap(f.src, g.tgt, images)


def smap_equal(f: SimplicialMap, g: SimplicialMap):
    return f.images == g.images


def validate_smap(f: SimplicialMap):
    report = []
    for k in range(f.src.trunc + 1):
        for x in f.src.nondeg[k]:
            img = f.images.get(x)
            if img is None:
                report.append(f"image missing for {x!r}")
            elif img.dim != k:
                report.append(f"image of {x!r} has dimension {img.dim}, wanted {k}")
            elif img.base not in f.tgt.dim_of:
                report.append(f"image of {x!r} references unknown {img.base!r}")
    if report:
        return report
    for k in range(1, f.src.trunc + 1):
        for x in f.src.nondeg[k]:
            for i in range(k + 1):
                via_src = f.apply(f.src.faces[x][i])
                via_tgt = apply_operator(f.tgt, f.images[x], face_map(k, i))
                if via_src != via_tgt:
                    report.append(f"face d{i} not preserved at {x!r}")
    return report


def is_injective(f: SimplicialMap):
    """Levelwise injectivity, decided on the skeleton.

    Equivalent to: injective on non-degenerate simplices in every dimension
    and non-degenerate simplices keep non-degenerate images.
    """
    for k in range(f.src.trunc + 1):
        seen = set()
        for x in f.src.nondeg[k]:
            img = f.images[x]
            if not img.is_nondegenerate():
                return False
            if img in seen:
                return False
            seen.add(img)
    return True


def enumerate_smaps(a: SimplicialSet, b: SimplicialSet):
    """All simplicial maps a -> b, deterministically ordered (small inputs)."""
    order = []
    for k in range(a.trunc + 1):
        order.extend((k, x) for x in a.nondeg[k])
    images = {}
    results = []

    def candidates(k, x):
        cands = b.all_simplices(k)
        if k == 0:
            return cands
        wanted = [images_apply(a.faces[x][i]) for i in range(k + 1)]
        out = []
        for c in cands:
            if all(apply_operator(b, c, face_map(k, i)) == wanted[i]
                   for i in range(k + 1)):
                out.append(c)
        return out

    def images_apply(nf: NormalForm):
        return apply_operator(b, images[nf.base], nf.eta)

    def backtrack(i):
        if i == len(order):
            results.append(SimplicialMap(a, b, dict(images)))
            return
        k, x = order[i]
        for cand in candidates(k, x):
            images[x] = cand
            backtrack(i + 1)
            del images[x]

    backtrack(0)
    return results


def iso_sset(s: SimplicialSet, t: SimplicialSet):
    """First isomorphism s -> t (bijective on non-degenerate simplices), or None."""
    if s.trunc != t.trunc:
        return None
    for k in range(s.trunc + 1):
        if len(s.nondeg[k]) != len(t.nondeg[k]):
            return None
    images = {}
    used = {k: set() for k in range(s.trunc + 1)}
    order = []
    for k in range(s.trunc + 1):
        order.extend((k, x) for x in s.nondeg[k])

    def backtrack(i):
        if i == len(order):
            return True
        k, x = order[i]
        for cand in t.nondeg[k]:
            if cand in used[k]:
                continue
            if k > 0:
                want = [images_apply(s.faces[x][j]) for j in range(k + 1)]
                have = [apply_operator(t, nondeg(cand, k), face_map(k, j))
                        for j in range(k + 1)]
                if want != have:
                    continue
            images[x] = nondeg(cand, k)
            used[k].add(cand)
            if backtrack(i + 1):
                return True
            used[k].discard(cand)
            del images[x]
        return False

    def images_apply(nf: NormalForm):
        return apply_operator(t, images[nf.base], nf.eta)

    if backtrack(0):
        return SimplicialMap(s, t, dict(images), name="iso")
    return None


# ---------------------------------------------------------------------------
# the category of simplices

def _simplex_cat_mor_id(src_id, theta):
    return src_id + "!" + ".".join(str(v) for v in theta.values)


def simplex_category(s: SimplicialSet):
    """Objects: all simplices up to the truncation; morphisms: operators.

    Hom(x, y) is the set of monotone maps theta with theta*(x) = y; the
    operator theta: [m] -> [n] is a morphism from the n-simplex x to the
    m-simplex theta*(x).  Composition is composition of monotone maps in the
    opposite order of application.
    """
    objects = []
    obj_nf = {}
    for k in range(s.trunc + 1):
        for nf in s.all_simplices(k):
            oid = nf_id(nf)
            objects.append(oid)
            obj_nf[oid] = nf
    morphisms = []
    identities = {}
    mor_data = {}
    for oid in objects:
        x = obj_nf[oid]
        for m in range(s.trunc + 1):
            for theta in all_monotone_maps(m, x.dim):
                y = apply_operator(s, x, theta)
                mid = _simplex_cat_mor_id(oid, theta)
                morphisms.append((mid, oid, nf_id(y)))
                mor_data[mid] = (x, theta)
                if theta.is_identity() and m == x.dim:
                    identities[oid] = mid
    comp = {}
    by_src = {}
    for (mid, a, b) in morphisms:
        by_src.setdefault(a, []).append((mid, b))
    for (mid, a, b) in morphisms:
        x, theta = mor_data[mid]
        for (mid2, c) in by_src.get(b, []):
            _, theta2 = mor_data[mid2]
            comp[(mid2, mid)] = _simplex_cat_mor_id(a, compose_maps(theta, theta2))
    cat = FinCategory(objects, morphisms, identities, comp, name=f"S({s.name})")
    cat.simplex_of = obj_nf
    cat.operator_of = {mid: theta for mid, (x, theta) in mor_data.items()}
    return cat


def smap_functor(f: SimplicialMap, src_cat=None, tgt_cat=None):
    """The induced functor between categories of simplices."""
    src_cat = src_cat if src_cat is not None else simplex_category(f.src)
    tgt_cat = tgt_cat if tgt_cat is not None else simplex_category(f.tgt)
    from .fincat import Functor
    omap, mmap = {}, {}
    for oid, nf in src_cat.simplex_of.items():
        omap[oid] = nf_id(f.apply(nf))
    for mid in src_cat.mor_ids:
        theta = src_cat.operator_of[mid]
        omid = _simplex_cat_mor_id(omap[src_cat.src[mid]], theta)
        mmap[mid] = omid
    return Functor(src_cat, tgt_cat, omap, mmap)


# ---------------------------------------------------------------------------
# extensional presentations and normalization

class ExtensionalSSet:
    """A simplicial set given by raw elements per dimension and generator actions."""

    def __init__(self, trunc, elements, face, degen, name=""):
        self.trunc = trunc
        self.elements = {k: list(elements.get(k, [])) for k in range(trunc + 1)}
        self.face = face      # (k, i) -> dict element -> element  (dim k -> k-1)
        self.degen = degen    # (k, i) -> dict element -> element  (dim k -> k+1)
        self.name = name

    def d(self, k, i, e):
        return self.face[(k, i)][e]

    def s(self, k, i, e):
        return self.degen[(k, i)][e]


def _default_id(elt):
    if isinstance(elt, tuple):
        return "|".join(str(p) for p in elt)
    return str(elt)


def normalize_extensional(e: ExtensionalSSet, id_fn=_default_id):
    """Compute the non-degenerate skeleton and face normal forms.

    Returns (SimplicialSet, nf_of) where nf_of maps (dim, element) to the
    normal form of that element in the result.
    """
    nf_of = {}
    nondeg_by_dim = {k: [] for k in range(e.trunc + 1)}
    faces = {}
    for k in range(e.trunc + 1):
        for elt in e.elements[k]:
            if k == 0:
                nf_of[(0, elt)] = nondeg(id_fn(elt), 0)
                nondeg_by_dim[0].append(id_fn(elt))
                continue
            split = None
            for i in range(k):
                if e.s(k - 1, i, e.d(k, i, elt)) == elt:
                    split = i
                    break
            if split is None:
                sid = id_fn(elt)
                nf_of[(k, elt)] = nondeg(sid, k)
                nondeg_by_dim[k].append(sid)
            else:
                below = nf_of[(k - 1, e.d(k, split, elt))]
                nf_of[(k, elt)] = NormalForm(
                    compose_maps(below.eta, degeneracy_map(k - 1, split)),
                    below.base)
        # face tables once the whole dimension is classified
        if k > 0:
            for elt in e.elements[k]:
                nf = nf_of[(k, elt)]
                if nf.is_nondegenerate():
                    faces[nf.base] = [nf_of[(k - 1, e.d(k, i, elt))]
                                      for i in range(k + 1)]
    result = SimplicialSet(e.trunc, nondeg_by_dim, faces, name=e.name)
    return result, nf_of


def validate_extensional(e: ExtensionalSSet):
    """Simplicial identities for the generator actions of a raw presentation."""
    report = []

    def chk(cond, msg):
        if not cond:
            report.append(msg)

    for k in range(e.trunc + 1):
        for x in e.elements[k]:
            # d_i d_j = d_{j-1} d_i  (i < j)
            if k >= 2:
                for j in range(k + 1):
                    for i in range(j):
                        chk(e.d(k - 1, i, e.d(k, j, x)) == e.d(k - 1, j - 1, e.d(k, i, x)),
                            f"face identity d{i}d{j} fails at dim {k}: {x!r}")
            if k + 1 <= e.trunc:
                for j in range(k + 1):
                    for i in range(k + 1):
                        y = e.s(k, j, x)
                        if i < j:
                            chk(e.d(k + 1, i, y) == e.s(k - 1, j - 1, e.d(k, i, x)) if k else True,
                                f"mixed identity d{i}s{j} fails at dim {k}: {x!r}")
                        elif i in (j, j + 1):
                            chk(e.d(k + 1, i, y) == x,
                                f"mixed identity d{i}s{j} fails at dim {k}: {x!r}")
                        elif i > j + 1:
                            chk(e.d(k + 1, i, y) == e.s(k - 1, j, e.d(k, i - 1, x)) if k else True,
                                f"mixed identity d{i}s{j} fails at dim {k}: {x!r}")
            if k + 2 <= e.trunc:
                for j in range(k + 1):
                    for i in range(j + 1):
                        chk(e.s(k + 1, i, e.s(k, j, x)) == e.s(k + 1, j + 1, e.s(k, i, x)),
                            f"degeneracy identity s{i}s{j} fails at dim {k}: {x!r}")
    return report


def extensional_of_sset(s: SimplicialSet):
    """Forget normal forms: list every simplex per dimension with generator actions."""
    elements = {k: [nf_id(nf) for nf in s.all_simplices(k)] for k in range(s.trunc + 1)}
    lookup = {}
    for k in range(s.trunc + 1):
        for nf in s.all_simplices(k):
            lookup[nf_id(nf)] = nf
    face, degen = {}, {}
    for k in range(s.trunc + 1):
        if k > 0:
            for i in range(k + 1):
                face[(k, i)] = {nf_id(nf): nf_id(apply_operator(s, nf, face_map(k, i)))
                                for nf in s.all_simplices(k)}
        if k + 1 <= s.trunc:
            for i in range(k + 1):
                degen[(k, i)] = {nf_id(nf): nf_id(apply_operator(s, nf, degeneracy_map(k, i)))
                                 for nf in s.all_simplices(k)}
    return ExtensionalSSet(s.trunc, elements, face, degen, name=s.name)


# ---------------------------------------------------------------------------
# bisimplicial sets

class BisimplicialSet:
    """Elements graded by bidegree with commuting horizontal and vertical actions."""

    def __init__(self, trunc, elements, h_face, h_degen, v_face, v_degen, name=""):
        self.trunc = trunc
        self.elements = {(m, n): list(elements.get((m, n), []))
                         for m in range(trunc + 1) for n in range(trunc + 1)}
        self.h_face = h_face    # (m, n, i) -> dict, lowers m
        self.h_degen = h_degen  # (m, n, i) -> dict, raises m
        self.v_face = v_face    # (m, n, i) -> dict, lowers n
        self.v_degen = v_degen  # (m, n, i) -> dict, raises n
        self.name = name


def validate_bisimplicial(b: BisimplicialSet):
    """Row/column simplicial identities plus commutation of the two actions."""
    report = []
    t = b.trunc

    def row(m, n):
        elements = {k: [x for x in b.elements[(k, n)]] for k in range(t + 1)}
        face = {(k, i): b.h_face[(k, n, i)] for k in range(1, t + 1) for i in range(k + 1)}
        degen = {(k, i): b.h_degen[(k, n, i)] for k in range(t) for i in range(k + 1)}
        return ExtensionalSSet(t, elements, face, degen, name=f"row{n}")

    def col(m):
        elements = {k: [x for x in b.elements[(m, k)]] for k in range(t + 1)}
        face = {(k, i): b.v_face[(m, k, i)] for k in range(1, t + 1) for i in range(k + 1)}
        degen = {(k, i): b.v_degen[(m, k, i)] for k in range(t) for i in range(k + 1)}
        return ExtensionalSSet(t, elements, face, degen, name=f"col{m}")

    for n in range(t + 1):
        report.extend(f"horizontal at column {n}: {r}" for r in validate_extensional(row(0, n)))
    for m in range(t + 1):
        report.extend(f"vertical at row {m}: {r}" for r in validate_extensional(col(m)))
    if report:
        return report
    # commutation of one horizontal and one vertical generator
    for m in range(t + 1):
        for n in range(t + 1):
            for x in b.elements[(m, n)]:
                hops = []
                if m >= 1:
                    hops += [("hf", i) for i in range(m + 1)]
                if m + 1 <= t:
                    hops += [("hd", i) for i in range(m + 1)]
                vops = []
                if n >= 1:
                    vops += [("vf", j) for j in range(n + 1)]
                if n + 1 <= t:
                    vops += [("vd", j) for j in range(n + 1)]
                for (ho, i) in hops:
                    for (vo, j) in vops:
                        m2 = m - 1 if ho == "hf" else m + 1
                        n2 = n - 1 if vo == "vf" else n + 1
                        h1 = b.h_face[(m, n, i)] if ho == "hf" else b.h_degen[(m, n, i)]
                        v_after = (b.v_face[(m2, n, j)] if vo == "vf"
                                   else b.v_degen[(m2, n, j)])
                        v1 = b.v_face[(m, n, j)] if vo == "vf" else b.v_degen[(m, n, j)]
                        h_after = (b.h_face[(m, n2, i)] if ho == "hf"
                                   else b.h_degen[(m, n2, i)])
                        if v_after[h1[x]] != h_after[v1[x]]:
                            report.append(
                                f"actions do not commute at ({m},{n}) {x!r}")
    return report


def external_product_bisimplicial(s: SimplicialSet, t: SimplicialSet):
    """The bisimplicial set with (m, n)-elements S_m x T_n."""
    if s.trunc != t.trunc:
        raise InputError("external product needs equal truncation levels")
    tr = s.trunc
    s_simp = {m: s.all_simplices(m) for m in range(tr + 1)}
    t_simp = {n: t.all_simplices(n) for n in range(tr + 1)}
    elements = {(m, n): [(nf_id(x), nf_id(y)) for x in s_simp[m] for y in t_simp[n]]
                for m in range(tr + 1) for n in range(tr + 1)}
    s_lookup = {nf_id(x): x for m in range(tr + 1) for x in s_simp[m]}
    t_lookup = {nf_id(y): y for n in range(tr + 1) for y in t_simp[n]}
    h_face, h_degen, v_face, v_degen = {}, {}, {}, {}
    for m in range(tr + 1):
        for n in range(tr + 1):
            for i in range(m + 1):
                if m >= 1:
                    h_face[(m, n, i)] = {
                        (a, bb): (nf_id(apply_operator(s, s_lookup[a], face_map(m, i))), bb)
                        for (a, bb) in elements[(m, n)]}
                if m + 1 <= tr:
                    h_degen[(m, n, i)] = {
                        (a, bb): (nf_id(apply_operator(s, s_lookup[a], degeneracy_map(m, i))), bb)
                        for (a, bb) in elements[(m, n)]}
            for j in range(n + 1):
                if n >= 1:
                    v_face[(m, n, j)] = {
                        (a, bb): (a, nf_id(apply_operator(t, t_lookup[bb], face_map(n, j))))
                        for (a, bb) in elements[(m, n)]}
                if n + 1 <= tr:
                    v_degen[(m, n, j)] = {
                        (a, bb): (a, nf_id(apply_operator(t, t_lookup[bb], degeneracy_map(n, j))))
                        for (a, bb) in elements[(m, n)]}
    return BisimplicialSet(tr, elements, h_face, h_degen, v_face, v_degen,
                           name=f"({s.name}#{t.name})")


def diag(b: BisimplicialSet, id_fn=_default_id):
    """The diagonal simplicial set: equal bidegrees, operators acting twice.

    Returns (SimplicialSet, nf_of) with nf_of keyed by (dim, element).
    """
    tr = b.trunc
    elements = {k: list(b.elements[(k, k)]) for k in range(tr + 1)}
    face, degen = {}, {}
    for k in range(tr + 1):
        if k >= 1:
            for i in range(k + 1):
                hf = b.h_face[(k, k, i)]
                vf = b.v_face[(k - 1, k, i)]
                face[(k, i)] = {x: vf[hf[x]] for x in elements[k]}
        if k + 1 <= tr:
            for i in range(k + 1):
                hd = b.h_degen[(k, k, i)]
                vd = b.v_degen[(k + 1, k, i)]
                degen[(k, i)] = {x: vd[hd[x]] for x in elements[k]}
    ext = ExtensionalSSet(tr, elements, face, degen, name=f"diag{b.name}")
    return normalize_extensional(ext, id_fn=id_fn)


def column_sset(b: BisimplicialSet, m, id_fn=_default_id):
    """The m-th column as a simplicial set in the horizontal direction.

    Elements at level n are the (n, m)-elements; used for the generator-wise
    point complexes of pair objects.
    """
    tr = b.trunc
    elements = {k: list(b.elements[(k, m)]) for k in range(tr + 1)}
    face = {(k, i): b.h_face[(k, m, i)] for k in range(1, tr + 1) for i in range(k + 1)}
    degen = {(k, i): b.h_degen[(k, m, i)] for k in range(tr) for i in range(k + 1)}
    ext = ExtensionalSSet(tr, elements, face, degen, name=f"col{m}{b.name}")
    return normalize_extensional(ext, id_fn=id_fn)


# ---------------------------------------------------------------------------
# Kan fibration checking

def is_kan_fibration(f: SimplicialMap, max_dim):
    """Brute-force horn lifting up to the given dimension.

    For every n <= max_dim, every horn index k and every commuting square
    (horn -> src, simplex -> tgt) search for a diagonal lift.  Returns
    (True, None) or (False, witness) with the first failing square in
    canonical order.
    """
    if max_dim > f.src.trunc - 1:
        raise InputError("horn checking needs max_dim <= trunc - 1")
    src, tgt = f.src, f.tgt
    for n in range(1, max_dim + 1):
        for k in range(n + 1):
            h = horn(n, k, src.trunc)
            dd = standard_simplex(n, src.trunc)
            top = _subset_id(list(range(n + 1)))
            horn_face_ids = [_subset_id([v for v in range(n + 1) if v != i])
                             for i in range(n + 1)]
            for u in enumerate_smaps(h, src):
                # faces of the sought lift forced by u (all i except k)
                forced = {i: u.images[horn_face_ids[i]] for i in range(n + 1) if i != k}
                fu = {i: f.apply(forced[i]) for i in forced}
                for w in tgt.all_simplices(n):
                    if any(apply_operator(tgt, w, face_map(n, i)) != fu[i] for i in fu):
                        continue
                    # the square (u, w) commutes; search a lift
                    lift = None
                    for z in src.all_simplices(n):
                        if f.apply(z) != w:
                            continue
                        if any(apply_operator(src, z, face_map(n, i)) != forced[i]
                               for i in forced):
                            continue
                        lift = z
                        break
                    if lift is None:
                        witness = {
                            "horn": (n, k),
                            "horn_map": {x: nf_id(v) for x, v in sorted(u.images.items())},
                            "simplex_image": nf_id(w),
                        }
                        return False, witness
    return True, None
