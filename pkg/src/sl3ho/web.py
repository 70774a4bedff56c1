"""Webs: oriented trivalent graphs up to web diffeomorphism.

A web is stored combinatorially: a sign word for the boundary, a count of
free circles, and for each trivalent vertex the counterclockwise-ordered
triple of incident edges.  Every vertex is a source (all edges outgoing) or
a sink (all incoming).  Two webs are equal iff they have identical canonical
forms; canonical labels are assigned by a deterministic traversal from the
boundary (base point first), closed components sorted by a minimal code.

Endpoint references are ``('b', i)`` for boundary point ``i`` and
``('v', v)`` for vertex ``v``.  Edges are ``(tail, head)`` pairs and are
always oriented from a source side to a sink side.
"""

from __future__ import annotations

from .poly import LaurentQ, QUANTUM2, QUANTUM3


class WebError(ValueError):
    pass


class Web:
    """Immutable canonical web. Build instances via :meth:`Web.build`."""

    __slots__ = ("signs", "circles", "vsign", "rot", "edges", "bnd", "_key")

    def __init__(self, signs, circles, vsign, rot, edges, bnd, _trusted=False):
        if not _trusted:
            raise WebError("use Web.build() so the web gets canonicalized")
        self.signs = signs
        self.circles = circles
        self.vsign = vsign
        self.rot = rot
        self.edges = edges
        self.bnd = bnd
        self._key = (signs, circles, vsign, rot, edges, bnd)

    # -- construction -------------------------------------------------

    @staticmethod
    def build(signs, vsign, rot, edges, bnd, circles=0, validate=True):
        """Canonicalize raw data; returns (web, edge_map, vertex_map)."""
        signs = tuple(int(s) for s in signs)
        vsign = tuple(int(s) for s in vsign)
        rot = tuple(tuple(r) for r in rot)
        edges = tuple((tuple(t), tuple(h)) for t, h in edges)
        bnd = tuple(bnd)
        emap, vmap = _canonical_maps(signs, vsign, rot, edges, bnd)
        nv, ne = len(vsign), len(edges)
        inv_e = [None] * ne
        inv_v = [None] * nv
        for old, new in emap.items():
            inv_e[new] = old
        for old, new in vmap.items():
            inv_v[new] = old

        def mapref(ref):
            return ref if ref[0] == "b" else ("v", vmap[ref[1]])

        new_edges = tuple(
            (mapref(edges[inv_e[e]][0]), mapref(edges[inv_e[e]][1]))
            for e in range(ne)
        )
        new_vsign = tuple(vsign[inv_v[v]] for v in range(nv))
        new_rot = []
        for v in range(nv):
            triple = [emap[e] for e in rot[inv_v[v]]]
            k = triple.index(min(triple))
            new_rot.append(tuple(triple[k:] + triple[:k]))
        new_bnd = tuple(emap[e] for e in bnd)
        w = Web(signs, circles, new_vsign, tuple(new_rot), new_edges, new_bnd,
                _trusted=True)
        if validate:
            w._validate()
        return w, emap, vmap

    def _validate(self):
        m, nv = len(self.signs), len(self.vsign)
        ends = {}
        for e, (t, h) in enumerate(self.edges):
            for ref, role in ((t, 0), (h, 1)):
                ends.setdefault(ref, []).append((e, role))
                if ref[0] == "b" and not (0 <= ref[1] < m):
                    raise WebError("edge endpoint at missing boundary point")
                if ref[0] == "v" and not (0 <= ref[1] < nv):
                    raise WebError("edge endpoint at missing vertex")
        for i in range(m):
            att = ends.get(("b", i), [])
            if len(att) != 1 or att[0][0] != self.bnd[i]:
                raise WebError(f"boundary point {i} incidence broken")
            e, role = att[0]
            # sign +1: strand oriented away from the boundary => tail here
            if (role == 0) != (self.signs[i] == 1):
                raise WebError(f"boundary sign mismatch at point {i}")
        for v in range(nv):
            att = ends.get(("v", v), [])
            if sorted(e for e, _ in att) != sorted(self.rot[v]):
                raise WebError(f"vertex {v} rotation/incidence mismatch")
            if len(set(self.rot[v])) != 3:
                raise WebError(f"vertex {v} is not simply trivalent")
            roles = {role for _, role in att}
            if self.vsign[v] == 1 and roles != {0}:
                raise WebError(f"source vertex {v} has incoming edge")
            if self.vsign[v] == -1 and roles != {1}:
                raise WebError(f"sink vertex {v} has outgoing edge")
        if sum(self.signs) % 3 != 0:
            raise WebError("boundary sign sum is not 0 mod 3")
        # planarity is checked separately (check_planar): intermediate
        # scaffolding in face excision lives in an annulus, not a disk

    def check_planar(self):
        """Genus-0 check per connected component via face tracing."""
        m = len(self.signs)
        comp = _UnionFind()
        for e, (t, h) in enumerate(self.edges):
            comp.union(t, h)
        for i in range(m):
            comp.union(("b", i), ("b", (i + 1) % m))
        verts = {}
        nedges = {}
        for v in range(len(self.vsign)):
            verts.setdefault(comp.find(("v", v)), set()).add(("v", v))
        for i in range(m):
            verts.setdefault(comp.find(("b", i)), set()).add(("b", i))
        for e, (t, h) in enumerate(self.edges):
            r = comp.find(t)
            nedges[r] = nedges.get(r, 0) + 1
        if m:
            r = comp.find(("b", 0))
            nedges[r] = nedges.get(r, 0) + m  # rim edges
        nfaces = {}
        for orbit, _ in self.faces():
            d = orbit[0]
            start = self._dart_start(d)
            r = comp.find(start)
            nfaces[r] = nfaces.get(r, 0) + 1
        for r, vs in verts.items():
            chi = len(vs) - nedges.get(r, 0) + nfaces.get(r, 0)
            if chi != 2:
                raise WebError(f"component is not planar (chi={chi})")

    # -- basic protocol ------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Web) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return (f"Web(signs={self.signs}, circles={self.circles}, "
                f"verts={len(self.vsign)}, edges={len(self.edges)})")

    @property
    def key(self):
        return self._key

    def is_closed(self):
        return not self.signs

    def is_empty(self):
        return not self.signs and not self.edges and self.circles == 0

    def euler(self):
        """chi of the web as a 1-complex, boundary points included."""
        return len(self.vsign) + len(self.signs) - len(self.edges)

    def edge_other_end(self, e, ref):
        t, h = self.edges[e]
        if t == ref:
            return h
        if h == ref:
            return t
        raise WebError("ref is not an endpoint of edge")

    def serialize(self):
        """Debug encoding: sign word, circle count, vertex triples."""
        word = "".join("+" if s == 1 else "-" for s in self.signs)
        triples = []
        for v in range(len(self.vsign)):
            tri = []
            for e in self.rot[v]:
                other = self.edge_other_end(e, ("v", v))
                tri.append(f"b{other[1]}" if other[0] == "b" else f"v{other[1]}")
            kind = "src" if self.vsign[v] == 1 else "snk"
            triples.append(f"{kind}({','.join(tri)})")
        return f"[{word}|o{self.circles}|{' '.join(triples)}]"

    # -- faces ----------------------------------------------------------

    def _dart_start(self, dart):
        kind, i, d = dart
        if kind == "r":
            return ("b", i) if d == 1 else ("b", (i + 1) % len(self.signs))
        t, h = self.edges[i]
        return t if d == 1 else h

    def _dart_end(self, dart):
        kind, i, d = dart
        if kind == "r":
            return ("b", (i + 1) % len(self.signs)) if d == 1 else ("b", i)
        t, h = self.edges[i]
        return h if d == 1 else t

    def _out_darts(self, ref):
        """Outgoing darts at a vertex or boundary point, in ccw order."""
        if ref[0] == "v":
            v = ref[1]
            out = []
            for e in self.rot[v]:
                out.append(("e", e, 1 if self.edges[e][0] == ref else -1))
            return out
        i = ref[1]
        m = len(self.signs)
        e = self.bnd[i]
        ed = ("e", e, 1 if self.edges[e][0] == ref else -1)
        return [("r", i, 1), ed, ("r", (i - 1) % m, -1)]

    def faces(self):
        """Face orbits of the rotation system (rim included for open webs).

        Returns a list of (orbit, touches_rim) pairs; orbits are lists of
        darts ('e'|'r', id, +-1).
        """
        darts = []
        for e in range(len(self.edges)):
            darts.append(("e", e, 1))
            darts.append(("e", e, -1))
        for i in range(len(self.signs)):
            darts.append(("r", i, 1))
            darts.append(("r", i, -1))
        seen = set()
        orbits = []
        for d0 in darts:
            if d0 in seen:
                continue
            orbit = []
            d = d0
            while True:
                orbit.append(d)
                seen.add(d)
                rev = (d[0], d[1], -d[2])
                here = self._dart_end(d)
                out = self._out_darts(here)
                d = out[(out.index(rev) + 1) % len(out)]
                if d == d0:
                    break
            orbits.append((orbit, any(k == "r" for k, _, _ in orbit)))
        return orbits

    def find_reducible_face(self):
        """Locate a circle, digon or square face (in that priority).

        Returns ('circle', None), ('digon', (e1, e2)),
        ('square', (corners, face_edges)) or None.  Square corners are
        listed in face order starting at a sink vertex; face_edges[k]
        joins corners[k-1] and corners[k].
        """
        opts = _reduction_options(self)
        if not opts:
            return None
        prio = {"circle": 0, "digon": 1, "square": 2}
        return min(opts, key=lambda kd: (prio[kd[0]], kd[1] or ()))

    # -- surgery --------------------------------------------------------

    def remove_circle(self):
        if self.circles < 1:
            raise WebError("no circle to remove")
        w = Web(self.signs, self.circles - 1, self.vsign, self.rot,
                self.edges, self.bnd, _trusted=True)
        return w

    def add_circle(self, k=1):
        return Web(self.signs, self.circles + k, self.vsign, self.rot,
                   self.edges, self.bnd, _trusted=True)

    def digon_context(self, pair):
        """Describe a digon face: vertices, parallel edges, outer edges."""
        e1, e2 = pair
        t1, h1 = self.edges[e1]
        t2, h2 = self.edges[e2]
        if (t1, h1) != (t2, h2) or t1[0] != "v" or h1[0] != "v":
            raise WebError("edges do not form a digon")
        u, v = t1[1], h1[1]  # u source, v sink
        (t_u,) = [e for e in self.rot[u] if e not in pair]
        (t_v,) = [e for e in self.rot[v] if e not in pair]
        # membrane labelling: d1 is the edge following the outer edge t_u
        # in the ccw rotation at the source vertex u
        ru = self.rot[u]
        d1 = ru[(ru.index(t_u) + 1) % 3]
        d2 = e2 if d1 == e1 else e1
        return {"u": u, "v": v, "d1": d1, "d2": d2, "t_u": t_u, "t_v": t_v}

    def collapse_digon(self, pair):
        """Apply the digon relation at the web level.

        Returns (web, info) where info records the edge map and the merged
        edge (or the circle created when the digon sat inside a theta).
        """
        ctx = self.digon_context(pair)
        u, v, t_u, t_v = ctx["u"], ctx["v"], ctx["t_u"], ctx["t_v"]
        drop_verts = {u, v}
        drop_edges = set(pair)
        raw_edges = []
        raw_map = {}
        circles = self.circles
        merged = None
        if t_u == t_v:
            # theta component: outer edge closes into a circle
            circles += 1
            drop_edges.add(t_u)
        for e, (t, h) in enumerate(self.edges):
            if e in drop_edges or e in (t_u, t_v):
                continue
            raw_map[e] = len(raw_edges)
            raw_edges.append((t, h))
        if t_u != t_v:
            # glue tail(t_v) -> head(t_u) through the collapsed digon
            tail = self.edges[t_v][0]
            head = self.edges[t_u][1]
            if tail == ("v", u) or tail == ("v", v) or head in (("v", u), ("v", v)):
                raise WebError("digon context is degenerate")
            merged = len(raw_edges)
            raw_map[t_u] = merged
            raw_map[t_v] = merged
            raw_edges.append((tail, head))
        vkeep = [v_ for v_ in range(len(self.vsign)) if v_ not in drop_verts]
        vmap0 = {v_: k for k, v_ in enumerate(vkeep)}

        def mapref(ref):
            return ref if ref[0] == "b" else ("v", vmap0[ref[1]])

        raw_edges = [(mapref(t), mapref(h)) for t, h in raw_edges]
        rot = [tuple(raw_map[e] for e in self.rot[v_]) for v_ in vkeep]
        vsign = [self.vsign[v_] for v_ in vkeep]
        bnd = [raw_map[e] for e in self.bnd]
        w, emap, vmap = Web.build(self.signs, vsign, rot, raw_edges, bnd,
                                  circles)
        edge_map = {e: emap[raw_map[e]] for e in raw_map}
        info = {"edge_map": edge_map,
                "merged": None if merged is None else emap[merged],
                "closed_circle": t_u == t_v}
        return w, info

    def resolve_square(self, square, pairing):
        """Apply one side of the square relation at the web level.

        ``square`` is the (corners, face_edges) pair from
        :meth:`find_reducible_face`; ``pairing`` is 0 (merge corners 0-1 and
        2-3) or 1 (merge corners 1-2 and 3-0).
        """
        corners, fes = square
        legs = []
        for k, c in enumerate(corners):
            (leg,) = [e for e in self.rot[c] if e not in fes]
            legs.append(leg)
        if len(set(legs)) != 4 or set(legs) & set(fes):
            raise WebError("square face with shared legs (digon present)")
        if pairing == 0:
            pairs = [(0, 1), (2, 3)]
        else:
            pairs = [(1, 2), (3, 0)]
        drop_verts = set(corners)
        drop_edges = set(fes)
        raw_edges = []
        raw_map = {}
        circles = self.circles
        joins = []
        for a, b in pairs:
            la, lb = legs[a], legs[b]
            # one corner is a sink (leg points in), the other a source
            if self.vsign[corners[a]] == -1:
                inc, out = la, lb
            else:
                inc, out = lb, la
            if inc == out:
                circles += 1
                drop_edges.add(inc)
                joins.append(None)
            else:
                joins.append((inc, out))
        for e, (t, h) in enumerate(self.edges):
            if e in drop_edges or any(j and e in j for j in joins):
                continue
            raw_map[e] = len(raw_edges)
            raw_edges.append((t, h))
        merged = []
        for j in joins:
            if j is None:
                merged.append(None)
                continue
            inc, out = j
            tail = self.edges[inc][0]
            head = self.edges[out][1]
            if tail[0] == "v" and tail[1] in drop_verts:
                raise WebError("square legs touch removed corners")
            if head[0] == "v" and head[1] in drop_verts:
                raise WebError("square legs touch removed corners")
            eid = len(raw_edges)
            raw_map[inc] = eid
            raw_map[out] = eid
            raw_edges.append((tail, head))
            merged.append(eid)
        vkeep = [v_ for v_ in range(len(self.vsign)) if v_ not in drop_verts]
        vmap0 = {v_: k for k, v_ in enumerate(vkeep)}

        def mapref(ref):
            return ref if ref[0] == "b" else ("v", vmap0[ref[1]])

        raw_edges = [(mapref(t), mapref(h)) for t, h in raw_edges]
        rot = [tuple(raw_map[e] for e in self.rot[v_]) for v_ in vkeep]
        vsign = [self.vsign[v_] for v_ in vkeep]
        bnd = [raw_map[e] for e in self.bnd]
        w, emap, vmap = Web.build(self.signs, vsign, rot, raw_edges, bnd,
                                  circles)
        edge_map = {e: emap[raw_map[e]] for e in raw_map}
        info = {"edge_map": edge_map,
                "merged": [None if x is None else emap[x] for x in merged]}
        return w, info

    def excise_digon(self, pair):
        """Remove a digon face, leaving two cut strands at new boundary
        points m (incoming side, sign -) and m+1 (outgoing side, sign +).

        Regluing :func:`digon_web` into the cut reproduces this web.
        Returns (outer, edge_map).
        """
        ctx = self.digon_context(pair)
        u, v, t_u, t_v = ctx["u"], ctx["v"], ctx["t_u"], ctx["t_v"]
        m = len(self.signs)
        drop_verts = {u, v}
        drop_edges = set(pair)
        raw_edges = []
        raw_map = {}
        for e, (t, h) in enumerate(self.edges):
            if e in drop_edges:
                continue
            if t_u == t_v and e == t_u:
                t, h = ("b", m + 1), ("b", m)
            else:
                if e == t_v:
                    h = ("b", m)
                if e == t_u:
                    t = ("b", m + 1)
            raw_map[e] = len(raw_edges)
            raw_edges.append((t, h))
        return self._finish_excision(drop_verts, raw_edges, raw_map, [-1, 1])

    def excise_square(self, square):
        """Remove a square face, cutting the four legs; new boundary points
        get signs (-,+,-,+) so :func:`square_web` can be reglued."""
        corners, fes = square
        m = len(self.signs)
        legs = []
        for k, c in enumerate(corners):
            (leg,) = [e for e in self.rot[c] if e not in fes]
            legs.append(leg)
        if len(set(legs)) != 4 or set(legs) & set(fes):
            raise WebError("square face with shared legs (digon present)")
        drop_verts = set(corners)
        drop_edges = set(fes)
        cutpt = {}
        for k, c in enumerate(corners):
            cutpt[legs[k]] = (m + k, self.vsign[c])
        raw_edges = []
        raw_map = {}
        for e, (t, h) in enumerate(self.edges):
            if e in drop_edges:
                continue
            if e in cutpt:
                pos, vs = cutpt[e]
                # leg of a sink corner points into the square: cut its head
                if vs == -1:
                    h = ("b", pos)
                else:
                    t = ("b", pos)
                # an edge may be cut at both ends only via two corners,
                # which the shared-leg check above excludes
            raw_map[e] = len(raw_edges)
            raw_edges.append((t, h))
        signs = [-1, 1, -1, 1]
        return self._finish_excision(drop_verts, raw_edges, raw_map, signs)

    def _finish_excision(self, drop_verts, raw_edges, raw_map, new_signs):
        vkeep = [v_ for v_ in range(len(self.vsign)) if v_ not in drop_verts]
        vmap0 = {v_: k for k, v_ in enumerate(vkeep)}

        def mapref(ref):
            return ref if ref[0] == "b" else ("v", vmap0[ref[1]])

        raw_edges = [(mapref(t), mapref(h)) for t, h in raw_edges]
        rot = [tuple(raw_map[e] for e in self.rot[v_]) for v_ in vkeep]
        vsign = [self.vsign[v_] for v_ in vkeep]
        bnd = [raw_map[e] for e in self.bnd]
        m = len(self.signs)
        for k in range(len(new_signs)):
            pos = m + k
            (eid,) = [i for i, (t, h) in enumerate(raw_edges)
                      if t == ("b", pos) or h == ("b", pos)]
            bnd.append(eid)
        signs = list(self.signs) + list(new_signs)
        w, emap, vmap = Web.build(signs, vsign, rot, raw_edges, bnd)
        edge_map = {e: emap[raw_map[e]] for e in raw_map}
        return w, edge_map

    def rotate_base(self, k):
        """Move the base point: boundary point k becomes point 0."""
        m = len(self.signs)
        if m == 0:
            return self
        perm = [(k + i) % m for i in range(m)]
        signs = [self.signs[p] for p in perm]
        bnd = [self.bnd[p] for p in perm]
        inv = {p: i for i, p in enumerate(perm)}

        def mapref(ref):
            return ("b", inv[ref[1]]) if ref[0] == "b" else ref

        edges = [(mapref(t), mapref(h)) for t, h in self.edges]
        w, _, _ = Web.build(signs, self.vsign, self.rot, edges, bnd,
                            self.circles)
        return w


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _canonical_maps(signs, vsign, rot, edges, bnd):
    """Deterministic relabelling maps (old->new) for edges and vertices."""
    emap, vmap = {}, {}

    def see(e):
        if e not in emap:
            emap[e] = len(emap)

    def other(ref, e):
        t, h = edges[e]
        return h if t == ref else t

    def visit(v, entry):
        vmap[v] = len(vmap)
        r = rot[v]
        i = r.index(entry)
        nxt = [r[(i + 1) % 3], r[(i + 2) % 3]]
        for e in nxt:
            see(e)
        for e in nxt:
            far = other(("v", v), e)
            if far[0] == "v" and far[1] not in vmap:
                visit(far[1], e)

    for i in range(len(signs)):
        e = bnd[i]
        see(e)
        far = other(("b", i), e)
        if far[0] == "v" and far[1] not in vmap:
            visit(far[1], e)
    # closed components: canonical start by minimal serialized code
    remaining = [v for v in range(len(vsign)) if v not in vmap]
    comps = []
    seen = set()
    for v0 in remaining:
        if v0 in seen:
            continue
        comp = set()
        stack = [v0]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            for e in rot[v]:
                far = other(("v", v), e)
                if far[0] == "v" and far[1] not in comp:
                    stack.append(far[1])
        seen |= comp
        comps.append(comp)

    def component_code(comp, start, entry):
        lv, le = {}, {}

        def csee(e):
            if e not in le:
                le[e] = len(le)

        def cvisit(v, ent):
            lv[v] = len(lv)
            r = rot[v]
            i = r.index(ent)
            nxt = [r[(i + 1) % 3], r[(i + 2) % 3]]
            for e in nxt:
                csee(e)
            for e in nxt:
                far = other(("v", v), e)
                if far[1] not in lv:
                    cvisit(far[1], e)

        csee(entry)
        cvisit(start, entry)
        inv = sorted(lv, key=lv.get)
        code = []
        for v in inv:
            r = rot[v]
            i = r.index(min(r, key=le.get))
            tri = []
            for k in range(3):
                e = r[(i + k) % 3]
                far = other(("v", v), e)
                tri.append((le[e], lv[far[1]]))
            code.append((vsign[v], tuple(tri)))
        return tuple(code), lv, le

    comp_results = []
    for comp in comps:
        best = None
        for v in sorted(comp):
            for e in rot[v]:
                code, lv, le = component_code(comp, v, e)
                if best is None or code < best[0]:
                    best = (code, lv, le)
        comp_results.append(best)
    comp_results.sort(key=lambda x: x[0])
    for code, lv, le in comp_results:
        ebase = len(emap)
        vbase = len(vmap)
        for v, k in lv.items():
            vmap[v] = vbase + k
        for e, k in le.items():
            emap[e] = ebase + k
    if len(emap) != len(edges) or len(vmap) != len(vsign):
        raise WebError("disconnected edges not reachable in canonicalization")
    return emap, vmap


# -- builders -------------------------------------------------------------


def empty_web():
    w, _, _ = Web.build([], [], [], [], [])
    return w


def circle_web(n=1):
    return empty_web().add_circle(n)


def interval_web():
    """The single strand with boundary '+-'."""
    w, _, _ = Web.build([1, -1], [], [], [(("b", 0), ("b", 1))], [0, 0])
    return w


def digon_web():
    """Digon with boundary '+-': e0 into the sink, two parallel edges."""
    # vertices: 0 = v (sink), 1 = u (source)
    edges = [
        (("b", 0), ("v", 0)),   # e0
        (("v", 1), ("v", 0)),   # d1 (upper)
        (("v", 1), ("v", 0)),   # d2 (lower)
        (("v", 1), ("b", 1)),   # e1
    ]
    rot = [(0, 2, 1), (3, 1, 2)]  # ccw at v: (e0, d2, d1); at u: (e1, d1, d2)
    w, emap, vmap = Web.build([1, -1], [-1, 1], rot, edges, [0, 3])
    return w, emap, vmap


def square_web():
    """Square web with boundary '+-+-'; see resolve conventions."""
    # vertices: 0=w(sink) 1=x(source) 2=y(sink) 3=z(source)
    edges = [
        (("b", 0), ("v", 0)),  # 0: l_w
        (("v", 1), ("b", 1)),  # 1: l_x
        (("b", 2), ("v", 2)),  # 2: l_y
        (("v", 3), ("b", 3)),  # 3: l_z
        (("v", 1), ("v", 0)),  # 4: xw
        (("v", 1), ("v", 2)),  # 5: xy
        (("v", 3), ("v", 2)),  # 6: zy
        (("v", 3), ("v", 0)),  # 7: zw
    ]
    rot = [
        (0, 4, 7),  # w: (l_w, xw, zw)
        (1, 5, 4),  # x: (l_x, xy, xw)
        (2, 6, 5),  # y: (l_y, zy, xy)
        (3, 7, 6),  # z: (l_z, zw, zy)
    ]
    w, emap, vmap = Web.build([1, -1, 1, -1], [-1, 1, -1, 1], rot, edges,
                              [0, 1, 2, 3])
    return w, emap, vmap


def arcs_web(pairing):
    """Two arcs on boundary '+-+-'; pairing 0: (0->1, 2->3); 1: (0->3, 2->1)."""
    if pairing == 0:
        edges = [(("b", 0), ("b", 1)), (("b", 2), ("b", 3))]
        bnd = [0, 0, 1, 1]
    else:
        edges = [(("b", 0), ("b", 3)), (("b", 2), ("b", 1))]
        bnd = [0, 1, 1, 0]
    w, _, _ = Web.build([1, -1, 1, -1], [], [], edges, bnd)
    return w


def parallel_web(positive):
    """Oriented smoothing of a crossing.

    positive: boundary '+--+', arcs 0->1 and 3->2.
    negative: boundary '++--', arcs 0->3 and 1->2.
    """
    if positive:
        signs = [1, -1, -1, 1]
        edges = [(("b", 0), ("b", 1)), (("b", 3), ("b", 2))]
        bnd = [0, 0, 1, 1]
    else:
        signs = [1, 1, -1, -1]
        edges = [(("b", 0), ("b", 3)), (("b", 1), ("b", 2))]
        bnd = [0, 1, 1, 0]
    w, _, _ = Web.build(signs, [], [], edges, bnd)
    return w


def h_web(positive):
    """H-shaped smoothing of a crossing (one source, one sink, middle edge).

    Edge ids before canonicalization: l0, l1, l2, l3 (legs at boundary
    0..3) and m = 4 (middle, source->sink).
    """
    if positive:
        signs = [1, -1, -1, 1]
        # v=0 sink near boundary 0/3; u=1 source near 1/2
        edges = [
            (("b", 0), ("v", 0)),  # l0
            (("v", 1), ("b", 1)),  # l1
            (("v", 1), ("b", 2)),  # l2
            (("b", 3), ("v", 0)),  # l3
            (("v", 1), ("v", 0)),  # m
        ]
        rot = [(0, 4, 3), (1, 2, 4)]  # v: (l0, m, l3); u: (l1, l2, m)
    else:
        signs = [1, 1, -1, -1]
        # v=0 sink near boundary 0/1; u=1 source near 2/3
        edges = [
            (("b", 0), ("v", 0)),  # l0
            (("b", 1), ("v", 0)),  # l1
            (("v", 1), ("b", 2)),  # l2
            (("v", 1), ("b", 3)),  # l3
            (("v", 1), ("v", 0)),  # m
        ]
        rot = [(1, 4, 0), (2, 3, 4)]  # v: (l1, m, l0); u: (l2, l3, m)
    w, emap, vmap = Web.build(signs, [-1, 1], rot, edges, [0, 1, 2, 3])
    return w, emap, vmap


# -- gluing ---------------------------------------------------------------


def disjoint_union(w1, w2):
    """Place w2 after w1; returns (web, maps1, maps2)."""
    m1, nv1, ne1 = len(w1.signs), len(w1.vsign), len(w1.edges)

    def shift_ref(ref):
        return ("b", ref[1] + m1) if ref[0] == "b" else ("v", ref[1] + nv1)

    signs = list(w1.signs) + list(w2.signs)
    vsign = list(w1.vsign) + list(w2.vsign)
    edges = list(w1.edges) + [(shift_ref(t), shift_ref(h)) for t, h in w2.edges]
    rot = list(w1.rot) + [tuple(e + ne1 for e in r) for r in w2.rot]
    bnd = list(w1.bnd) + [e + ne1 for e in w2.bnd]
    w, emap, vmap = Web.build(signs, vsign, rot, edges, bnd,
                              w1.circles + w2.circles)
    maps1 = ({e: emap[e] for e in range(ne1)},
             {v: vmap[v] for v in range(nv1)})
    maps2 = ({e: emap[e + ne1] for e in range(len(w2.edges))},
             {v: vmap[v + nv1] for v in range(len(w2.vsign))})
    return w, maps1, maps2


def glue_pair(w, i, j):
    """Identify boundary points i and j (head to tail).

    Returns (web, edge_map, info); info records a merged edge or a circle
    closure.  Remaining boundary points keep their relative order.
    """
    m = len(w.signs)
    if i == j or not (0 <= i < m and 0 <= j < m):
        raise WebError("bad boundary points")
    if w.signs[i] + w.signs[j] != 0:
        raise WebError("gluing needs opposite boundary signs")
    e_i, e_j = w.bnd[i], w.bnd[j]
    keep = [k for k in range(m) if k not in (i, j)]
    bidx = {k: p for p, k in enumerate(keep)}
    circles = w.circles
    raw_edges = []
    raw_map = {}
    info = {}
    if e_i == e_j:
        circles += 1
        info["closed_circle"] = True
        drop = {e_i}
        merged = None
    else:
        drop = set()
        merged = (e_i, e_j)
    for e, (t, h) in enumerate(w.edges):
        if e in drop or (merged and e in merged):
            continue
        raw_map[e] = len(raw_edges)
        raw_edges.append((t, h))
    if merged:
        # orient: one edge ends (head) at the glued spot, the other starts
        if w.signs[i] == -1:
            e_head, e_tail = e_i, e_j
        else:
            e_head, e_tail = e_j, e_i
        tail = w.edges[e_head][0]
        head = w.edges[e_tail][1]
        eid = len(raw_edges)
        raw_map[e_head] = eid
        raw_map[e_tail] = eid
        raw_edges.append((tail, head))
        info["merged"] = eid

    def mapref(ref):
        if ref[0] == "b":
            return ("b", bidx[ref[1]])
        return ref

    raw_edges = [(mapref(t), mapref(h)) for t, h in raw_edges]
    rot = [tuple(raw_map[e] for e in r) for r in w.rot]
    bnd = [raw_map[w.bnd[k]] for k in keep]
    signs = [w.signs[k] for k in keep]
    w2, emap, vmap = Web.build(signs, w.vsign, rot, raw_edges, bnd, circles)
    edge_map = {e: emap[raw_map[e]] for e in raw_map}
    if "merged" in info:
        info["merged"] = emap[info["merged"]]
    info["bnd_map"] = bidx
    info["vmap"] = vmap
    return w2, edge_map, info


# -- Kuperberg bracket ----------------------------------------------------

_bracket_cache = {}


def kuperberg_bracket(w: Web, _order=None) -> LaurentQ:
    """Evaluate a closed web to its Laurent polynomial.

    ``_order`` optionally picks among reducible faces (index into the list
    of all circle/digon/square reductions) to exercise confluence in tests.
    """
    if w.signs:
        raise WebError("Kuperberg bracket needs a closed web")
    if _order is None and w.key in _bracket_cache:
        return _bracket_cache[w.key]
    result = _bracket(w, _order, 0)
    if _order is None:
        _bracket_cache[w.key] = result
    return result


def _reduction_options(w):
    opts = []
    if w.circles:
        opts.append(("circle", None))
    for orbit, rim in w.faces():
        if rim:
            continue
        if len(orbit) == 2:
            pair = tuple(sorted(d[1] for d in orbit))
            if pair[0] != pair[1]:
                opts.append(("digon", pair))
        elif len(orbit) == 4:
            corners = [w._dart_end(d) for d in orbit]
            if all(c[0] == "v" for c in corners):
                cs = [c[1] for c in corners]
                if len(set(cs)) == 4:
                    es = [d[1] for d in orbit]
                    sinks = [k for k in range(4) if w.vsign[cs[k]] == -1]
                    k = min(sinks, key=lambda k: cs[k])
                    corners = cs[k:] + cs[:k]
                    fes = [es[(k + j) % 4] for j in range(4)]
                    legs = []
                    for c in corners:
                        (leg,) = [e for e in w.rot[c] if e not in fes]
                        legs.append(leg)
                    if len(set(legs)) != 4 or set(legs) & set(fes):
                        # a digon face handles this configuration instead
                        continue
                    corners, fes = _orient_square(w, corners, fes)
                    opts.append(("square", (tuple(corners), tuple(fes))))
    return opts


def _orient_square(w, corners, fes):
    """Fix the rotational sense of a square face.

    The collapse/birth generators expect the ccw rotation at the first
    (sink) corner to read (leg, edge-to-next-corner, edge-to-previous);
    face orbits can arrive in either sense, so reverse when needed.
    """
    c0 = corners[0]
    (leg,) = [e for e in w.rot[c0] if e not in fes]
    r = list(w.rot[c0])
    after_leg = r[(r.index(leg) + 1) % 3]
    if after_leg == fes[1]:
        return corners, fes
    if after_leg != fes[0]:
        raise WebError("square corner rotation does not close up")
    corners = [corners[0], corners[3], corners[2], corners[1]]
    fes = [fes[1], fes[0], fes[3], fes[2]]
    return corners, fes


def _bracket(w, order, depth):
    if w.is_empty():
        return LaurentQ.one()
    opts = _reduction_options(w)
    if not opts:
        raise WebError(f"closed web without reducible face: {w.serialize()}")
    if order is None:
        kind, data = opts[0]
    else:
        kind, data = opts[order[depth % len(order)] % len(opts)]
    if kind == "circle":
        return QUANTUM3 * _bracket(w.remove_circle(), order, depth + 1)
    if kind == "digon":
        w2, _ = w.collapse_digon(data)
        return QUANTUM2 * _bracket(w2, order, depth + 1)
    wa, _ = w.resolve_square(data, 0)
    wb, _ = w.resolve_square(data, 1)
    return _bracket(wa, order, depth + 1) + _bracket(wb, order, depth + 1)
