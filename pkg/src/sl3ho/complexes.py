"""Bounded chain complexes of q-shifted webs with foam-matrix differentials.

Objects in homological degree t are lists of (qshift, web) pairs; the
differential d_t maps degree t to degree t-1 (so positive crossings occupy
degrees 0 and +1).  Every matrix entry from q^a W to q^b W' is a foam
combination homogeneous of degree b - a.

The simplification loop applies Gauss elimination whenever a matrix entry
is plus or minus an identity foam, and otherwise removes one circle, digon
or square face by the corresponding isomorphism, conjugating neighbouring
differentials with the cap/cup, digon collapse/birth or square
collapse/birth foams glued into the ambient web.
"""

from __future__ import annotations

from .poly import LaurentQ
from .web import (Web, WebError, circle_web, empty_web, parallel_web, h_web,
                  kuperberg_bracket)
from .foam import (Foam, FoamCombo, FoamError, identity_foam, cap_foam,
                   cup_foam, zip_foam, unzip_foam, digon_collapse_foam,
                   digon_birth_foam, square_collapse_foam, square_birth_foam,
                   disjoint_union_foam, self_glue_foam, normalize, stack,
                   stack_combo)


class ComplexError(ValueError):
    pass


class Complex:
    """A bounded complex; mutable during simplification."""

    def __init__(self, boundary, signs, objects, diffs):
        self.boundary = list(boundary)   # edge labels, one per boundary point
        self.signs = list(signs)
        self.objects = {t: list(objs) for t, objs in objects.items() if objs}
        self.diffs = {t: dict(m) for t, m in diffs.items() if m}

    def copy(self):
        return Complex(self.boundary, self.signs, self.objects, self.diffs)

    def degrees(self):
        return sorted(self.objects)

    def object_count(self):
        return sum(len(o) for o in self.objects.values())

    def entry_count(self):
        return sum(len(m) for m in self.diffs.values())

    def __repr__(self):
        degs = self.degrees()
        span = f"[{degs[0]}..{degs[-1]}]" if degs else "[]"
        return (f"Complex(t{span}, {self.object_count()} objects, "
                f"{self.entry_count()} entries, bnd={len(self.boundary)})")

    # -- integrity checks (used by tests and debug mode) ------------------

    def validate(self, check_d2=False):
        # open intermediate tangles carry an arbitrary boundary order, so
        # only closed webs are required to be planar
        for t, objs in self.objects.items():
            for a, w in objs:
                if w.is_closed():
                    w.check_planar()
        for t, mat in self.diffs.items():
            src = self.objects.get(t, [])
            tgt = self.objects.get(t - 1, [])
            for (i, j), combo in mat.items():
                if not (0 <= i < len(tgt) and 0 <= j < len(src)):
                    raise ComplexError("entry indices out of range")
                a, ws = src[j]
                b, wt = tgt[i]
                for f in combo.terms:
                    if f.dom != ws or f.cod != wt:
                        raise ComplexError("entry boundary webs mismatch")
                deg = combo.degree()
                if deg is not None and deg != b - a:
                    raise ComplexError(
                        f"entry degree {deg} != shift difference {b - a}")
        if check_d2:
            for t in list(self.diffs):
                if (t - 1) not in self.diffs:
                    continue
                acc = {}
                for (m, j), f1 in self.diffs[t].items():
                    for (i, m2), f2 in self.diffs[t - 1].items():
                        if m2 != m:
                            continue
                        prod = stack_combo(f1, f2, full=True)
                        key = (i, j)
                        acc[key] = acc.get(key, FoamCombo.zero()) + prod
                for key, combo in acc.items():
                    if normalize(combo, full=True):
                        raise ComplexError(f"d^2 != 0 at t={t}, entry {key}")
        return True

    # -- ordering ----------------------------------------------------------

    def resort(self):
        """Sort object lists by (qshift, web key); permute matrices along."""
        for t in list(self.objects):
            objs = self.objects[t]
            order = sorted(range(len(objs)),
                           key=lambda k: (objs[k][0], objs[k][1].key))
            if order == list(range(len(objs))):
                continue
            perm = {old: new for new, old in enumerate(order)}
            self.objects[t] = [objs[k] for k in order]
            if t in self.diffs:
                self.diffs[t] = {(i, perm[j]): v
                                 for (i, j), v in self.diffs[t].items()}
            if (t + 1) in self.diffs:
                self.diffs[t + 1] = {(perm[i], j): v
                                     for (i, j), v in self.diffs[t + 1].items()}

    # -- graded Euler characteristic ---------------------------------------

    def euler_polynomial(self) -> LaurentQ:
        """Alternating sum of q^shift * bracket(web); closed complexes only."""
        total = LaurentQ.zero()
        for t, objs in self.objects.items():
            for a, w in objs:
                term = kuperberg_bracket(w).shift(a)
                total = total + (term if t % 2 == 0 else -term)
        return total


# -- crossing complexes ------------------------------------------------------


def crossing_complex(sign, labels):
    """The two-term complex of a single crossing.

    ``labels`` are the four edge labels counterclockwise from the incoming
    under-strand.  Positive crossings occupy degrees +1 (H-web at q^-3) and
    0 (oriented smoothing at q^-2) with the unzip differential; negative
    crossings degrees 0 (q^2) and -1 (H-web at q^3) with the zip.
    """
    if sign not in (1, -1):
        raise ComplexError("crossing sign must be +-1")
    if sign == 1:
        hw = unzip_foam(True)
        objects = {1: [(-3, hw.dom)], 0: [(-2, hw.cod)]}
        diffs = {1: {(0, 0): FoamCombo.of(hw)}}
        signs = [1, -1, -1, 1]
    else:
        zf = zip_foam(False)
        objects = {0: [(2, zf.dom)], -1: [(3, zf.cod)]}
        diffs = {0: {(0, 0): FoamCombo.of(zf)}}
        signs = [1, 1, -1, -1]
    return Complex(list(labels), signs, objects, diffs)


def unknot_complex(label=0):
    """Crossingless circle diagram."""
    return Complex([], [], {0: [(0, circle_web())]}, {})


# -- tensor product and gluing ----------------------------------------------


def tensor(c1: Complex, c2: Complex) -> Complex:
    """Side-by-side tensor product with Koszul signs (no identifications)."""
    from .web import disjoint_union
    objects = {}
    index = {}
    for i in sorted(c1.objects):
        for j in sorted(c2.objects):
            k = i + j
            objects.setdefault(k, [])
            for a, (q1, w1) in enumerate(c1.objects[i]):
                for b, (q2, w2) in enumerate(c2.objects[j]):
                    index[(i, a, j, b)] = (k, len(objects[k]))
                    w, _, _ = disjoint_union(w1, w2)
                    objects[k].append((q1 + q2, w))
    diffs = {}

    def add_entry(kt, it, jt, combo):
        diffs.setdefault(kt, {})
        key = (it, jt)
        if key in diffs[kt]:
            diffs[kt][key] = diffs[kt][key] + combo
        else:
            diffs[kt][key] = combo

    for i in sorted(c1.objects):
        for j in sorted(c2.objects):
            for a, (q1, w1) in enumerate(c1.objects[i]):
                for b, (q2, w2) in enumerate(c2.objects[j]):
                    kt, jt = index[(i, a, j, b)]
                    # d1 (x) id
                    for (ii, aa), combo in c1.diffs.get(i, {}).items():
                        if aa != a:
                            continue
                        _, it = index[(i - 1, ii, j, b)]
                        acc = {}
                        for f, cc in combo.terms.items():
                            g = disjoint_union_foam(f, identity_foam(w2))
                            acc[g] = acc.get(g, 0) + cc
                        add_entry(kt, it, jt, FoamCombo(acc))
                    # (-1)^i id (x) d2
                    sgn = -1 if i % 2 else 1
                    for (jj, bb), combo in c2.diffs.get(j, {}).items():
                        if bb != b:
                            continue
                        _, it = index[(i, a, j - 1, jj)]
                        acc = {}
                        for f, cc in combo.terms.items():
                            g = disjoint_union_foam(identity_foam(w1), f)
                            acc[g] = acc.get(g, 0) + cc * sgn
                        add_entry(kt, it, jt, FoamCombo(acc))
    return Complex(list(c1.boundary) + list(c2.boundary),
                   list(c1.signs) + list(c2.signs), objects, diffs)


def glue_boundary_pair(c: Complex, i, j) -> Complex:
    """Identify boundary points i and j across the whole complex."""
    if c.signs[i] + c.signs[j] != 0:
        raise ComplexError("gluing needs opposite orientations")
    objects = {}
    for t, objs in c.objects.items():
        new = []
        for a, w in objs:
            from .web import glue_pair
            w2, _, _ = glue_pair(w, i, j)
            new.append((a, w2))
        objects[t] = new
    diffs = {}
    for t, mat in c.diffs.items():
        newm = {}
        for key, combo in mat.items():
            acc = {}
            for f, cc in combo.terms.items():
                g = self_glue_foam(f, i, j)
                acc[g] = acc.get(g, 0) + cc
            glued = normalize(FoamCombo(acc))
            if glued:
                newm[key] = glued
        diffs[t] = newm
    keep = [k for k in range(len(c.boundary)) if k not in (i, j)]
    return Complex([c.boundary[k] for k in keep],
                   [c.signs[k] for k in keep], objects, diffs)


def glue_shared_labels(c: Complex, skip=()) -> Complex:
    """Repeatedly identify boundary points that carry the same label."""
    while True:
        seen = {}
        pair = None
        for pos, lab in enumerate(c.boundary):
            if lab in skip:
                continue
            if lab in seen:
                pair = (seen[lab], pos)
                break
            seen[lab] = pos
        if pair is None:
            return c
        c = glue_boundary_pair(c, *pair)


# -- simplification ----------------------------------------------------------


def find_gauss_entry(c: Complex):
    """Locate a +-identity entry; smallest matrix first, then row-major."""
    for t in sorted(c.diffs, key=lambda t: (len(c.diffs[t]), t)):
        for (i, j) in sorted(c.diffs[t]):
            eps = c.diffs[t][(i, j)].is_identity_multiple()
            if eps is not None:
                a, ws = c.objects[t][j]
                b, wt = c.objects[t - 1][i]
                if a == b:
                    return (t, i, j, eps)
    return None


def gauss_eliminate(c: Complex, t, i, j, eps) -> None:
    """Remove objects (t, j) and (t-1, i) through an invertible entry."""
    mat = c.diffs.get(t, {})
    ins = {x: combo for (ii, x), combo in mat.items() if ii == i and x != j}
    outs = {y: combo for (y, jj), combo in mat.items() if jj == j and y != i}
    for y, jy in outs.items():
        for x, ix in ins.items():
            corr = stack_combo(ix, jy).scale(-eps)
            key = (y, x)
            if key in mat:
                new = mat[key] + corr
            else:
                new = corr
            if new:
                mat[key] = new
            elif key in mat:
                del mat[key]
    # drop all entries touching the removed objects
    c.diffs[t] = {k: v for k, v in mat.items()
                  if k[0] != i and k[1] != j}
    if (t + 1) in c.diffs:
        c.diffs[t + 1] = {k: v for k, v in c.diffs[t + 1].items()
                          if k[0] != j}
    if (t - 1) in c.diffs:
        c.diffs[t - 1] = {k: v for k, v in c.diffs[t - 1].items()
                          if k[1] != i}
    _drop_object(c, t, j)
    _drop_object(c, t - 1, i)


def _drop_object(c: Complex, t, idx):
    objs = c.objects[t]
    del objs[idx]
    if not objs:
        del c.objects[t]

    def remap_row(mat):
        return {(ii - (1 if ii > idx else 0), jj): v
                for (ii, jj), v in mat.items()}

    def remap_col(mat):
        return {(ii, jj - (1 if jj > idx else 0)): v
                for (ii, jj), v in mat.items()}

    if t in c.diffs:
        c.diffs[t] = remap_col(c.diffs[t])
        if not c.diffs[t]:
            del c.diffs[t]
    if (t + 1) in c.diffs:
        c.diffs[t + 1] = remap_row(c.diffs[t + 1])
        if not c.diffs[t + 1]:
            del c.diffs[t + 1]


def find_face(c: Complex):
    """All reducible faces, keyed for the scheduling rule."""
    best = None
    prio = {"circle": 0, "digon": 1, "square": 2}
    for t in sorted(c.objects):
        for idx, (a, w) in enumerate(c.objects[t]):
            face = w.find_reducible_face()
            if face is None:
                continue
            key = (prio[face[0]], t, idx)
            if best is None or key < best[0]:
                best = (key, t, idx, face)
    return best


def _context_foam(outer_id, local, n_pairs):
    """Glue a local generator beside an identity foam and seal the cuts.

    The outer web carries the cut points as its last n_pairs boundary
    points, matching the local generator's boundary in order.
    """
    f = disjoint_union_foam(outer_id, local)
    m = len(outer_id.dom.signs) - n_pairs
    for k in range(n_pairs):
        f = self_glue_foam(f, m, m + n_pairs - k)
    return f


def deloop(c: Complex, t, idx, face) -> None:
    """Replace object (t, idx) by the shifted sum given by its face."""
    kind, data = face
    a, w = c.objects[t][idx]
    if kind == "circle":
        outer = w.remove_circle()
        oid = identity_foam(outer)
        phis = [(2, FoamCombo.of(disjoint_union_foam(oid, cap_foam(2))).scale(-1)),
                (0, FoamCombo.of(disjoint_union_foam(oid, cap_foam(1))).scale(-1)),
                (-2, FoamCombo.of(disjoint_union_foam(oid, cap_foam(0))).scale(-1))]
        psis = [(2, FoamCombo.of(disjoint_union_foam(oid, cup_foam(0)))),
                (0, FoamCombo.of(disjoint_union_foam(oid, cup_foam(1)))),
                (-2, FoamCombo.of(disjoint_union_foam(oid, cup_foam(2))))]
    elif kind == "digon":
        outer, _ = w.excise_digon(data)
        oid = identity_foam(outer)
        phis = [(1, FoamCombo.of(_context_foam(oid, digon_collapse_foam(1), 2)).scale(-1)),
                (-1, FoamCombo.of(_context_foam(oid, digon_collapse_foam(0), 2)))]
        psis = [(1, FoamCombo.of(_context_foam(oid, digon_birth_foam(0), 2))),
                (-1, FoamCombo.of(_context_foam(oid, digon_birth_foam(1), 2)))]
    else:
        outer, _ = w.excise_square(data)
        oid = identity_foam(outer)
        phis = [(0, FoamCombo.of(_context_foam(oid, square_collapse_foam(0), 4)).scale(-1)),
                (0, FoamCombo.of(_context_foam(oid, square_collapse_foam(1), 4)).scale(-1))]
        psis = [(0, FoamCombo.of(_context_foam(oid, square_birth_foam(0), 4))),
                (0, FoamCombo.of(_context_foam(oid, square_birth_foam(1), 4)))]
    new_objs = []
    for (sh, phi), (sh2, psi) in zip(phis, psis):
        f0 = next(iter(phi.terms))
        g0 = next(iter(psi.terms))
        if f0.dom != w or g0.cod != w or g0.dom != f0.cod:
            raise ComplexError("conjugator does not match the object web")
        new_objs.append((a + sh, f0.cod))
    n_new = len(new_objs)
    objs = c.objects[t]
    base = len(objs) - 1  # after dropping idx, new objects appended at end
    # incoming entries (d at t+1 with target idx)
    if (t + 1) in c.diffs:
        newm = {}
        for (i, j), combo in c.diffs[t + 1].items():
            if i != idx:
                newm[(i - (1 if i > idx else 0), j)] = combo
                continue
            for k, (sh, phi) in enumerate(phis):
                conj = normalize(stack_combo(combo, phi))
                if conj:
                    key = (base + k, j)
                    newm[key] = newm.get(key, FoamCombo.zero()) + conj
        c.diffs[t + 1] = {k: v for k, v in newm.items() if v}
    # outgoing entries (d at t with source idx)
    if t in c.diffs:
        newm = {}
        for (i, j), combo in c.diffs[t].items():
            if j != idx:
                newm[(i, j - (1 if j > idx else 0))] = combo
                continue
            for k, (sh, psi) in enumerate(psis):
                conj = normalize(stack_combo(psi, combo))
                if conj:
                    key = (i, base + k)
                    newm[key] = newm.get(key, FoamCombo.zero()) + conj
        c.diffs[t] = {k: v for k, v in newm.items() if v}
    del objs[idx]
    objs.extend(new_objs)
    for tt in (t, t + 1):
        if tt in c.diffs and not c.diffs[tt]:
            del c.diffs[tt]


def simplify(c: Complex, verbose=0) -> Complex:
    """Exhaust Gauss eliminations, then one delooping step; repeat."""
    while True:
        entry = find_gauss_entry(c)
        if entry is not None:
            gauss_eliminate(c, *entry)
            continue
        hit = find_face(c)
        if hit is None:
            break
        _, t, idx, face = hit
        if verbose >= 2:
            print(f"    deloop {face[0]} at t={t} "
                  f"({c.object_count()} objects)")
        deloop(c, t, idx, face)
    c.resort()
    return c


# -- running gluing plans -----------------------------------------------------


def run_plan(diagram, plan, cut_label=None, verbose=0, debug=False) -> Complex:
    """Assemble and simplify the complex of a diagram along a gluing plan.

    ``cut_label``: for reduced homology, the edge kept open; the result has
    boundary (+-) on that edge instead of being closed.
    """
    skip = (cut_label,) if cut_label is not None else ()

    def leaf(ci):
        sign, labels = diagram.crossings[ci]
        c = crossing_complex(sign, labels)
        c = glue_shared_labels(c, skip=skip)
        return simplify(c)

    def combine(c1, c2):
        c = tensor(c1, c2)
        c = glue_shared_labels(c, skip=skip)
        if debug:
            c.validate(check_d2=True)
        return simplify(c, verbose=verbose)

    if plan.kind == "linear":
        order = plan.order
        if not order:
            c = None
        else:
            c = leaf(order[0])
            for k, ci in enumerate(order[1:], 2):
                if verbose >= 1:
                    print(f"  gluing crossing {k}/{len(order)} "
                          f"(boundary {len(c.boundary)})")
                c = combine(c, leaf(ci))
    else:
        def walk(node):
            if isinstance(node, int):
                return leaf(node)
            left, right = node
            return combine(walk(left), walk(right))
        c = walk(plan.tree)
    if c is None:
        c = Complex([], [], {0: [(0, empty_web())]}, {})
    for _ in range(diagram.free_loops):
        loop = Complex([], [], {0: [(0, circle_web())]}, {})
        c = combine(c, loop)
    # a crossingless marked unknot still needs its interval object
    if cut_label is not None and not c.boundary:
        raise ComplexError("cut edge never appeared in the diagram")
    if debug:
        c.validate(check_d2=True)
    return c
