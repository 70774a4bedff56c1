"""Diagram input: braid words, planar diagram codes, Dowker-Thistlethwaite
codes, and gluing plans (girth heuristics and sub-tangle trees).

A crossing is stored as (sign, (e0, e1, e2, e3)): the four incident edge
labels counterclockwise starting at the incoming under-strand.  Positive
crossings have the over-strand entering at e3, negative at e1.  Edge labels
are arbitrary hashables occurring exactly twice in the whole diagram.
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass, field


class NotationError(ValueError):
    pass


@dataclass(frozen=True)
class Diagram:
    crossings: tuple          # of (sign, (e0, e1, e2, e3))
    free_loops: int = 0       # crossingless unknot components
    marked: int | None = None

    @property
    def n(self):
        return len(self.crossings)

    def edge_multiset(self):
        count = {}
        for _, edges in self.crossings:
            for e in edges:
                count[e] = count.get(e, 0) + 1
        return count

    def components(self):
        """Partition of edges into link components (sorted lists)."""
        succ = {}
        for sign, (e0, e1, e2, e3) in self.crossings:
            succ.setdefault(e0, []).append(e2)   # under-strand: in -> out
            if sign == 1:
                succ.setdefault(e3, []).append(e1)
            else:
                succ.setdefault(e1, []).append(e3)
        comp = {}
        out = []
        for start in sorted(succ):
            if start in comp:
                continue
            cur = start
            cyc = []
            while cur not in comp:
                comp[cur] = len(out)
                cyc.append(cur)
                nxts = succ[cur]
                cur = nxts[0] if len(nxts) == 1 else nxts.pop(0)
            out.append(sorted(cyc))
        return out

    def writhe(self):
        return sum(s for s, _ in self.crossings)

    def validate(self):
        count = self.edge_multiset()
        for e, k in count.items():
            if k != 2:
                raise NotationError(f"edge {e!r} occurs {k} times, not 2")
        self._check_orientations()
        self._check_planar()
        return True

    def _check_orientations(self):
        # each edge has exactly one head slot and one tail slot
        roles = {}
        for sign, (e0, e1, e2, e3) in self.crossings:
            ins = (e0, e3) if sign == 1 else (e0, e1)
            outs = (e2, e1) if sign == 1 else (e2, e3)
            for e in ins:
                roles.setdefault(e, []).append("h")
            for e in outs:
                roles.setdefault(e, []).append("t")
        for e, rr in roles.items():
            if sorted(rr) != ["h", "t"]:
                raise NotationError(f"edge {e!r} orientation inconsistent")

    def _check_planar(self):
        if not self.crossings:
            return
        # rotation system on the 4-valent graph; darts are (ci, slot)
        slots = {}
        for ci, (_, edges) in enumerate(self.crossings):
            for s, e in enumerate(edges):
                slots.setdefault(e, []).append((ci, s))
        mate = {}
        for e, ds in slots.items():
            if len(ds) != 2:
                raise NotationError("edge does not have two ends")
            mate[ds[0]] = ds[1]
            mate[ds[1]] = ds[0]
        seen = set()
        faces = 0
        for d0 in mate:
            if d0 in seen:
                continue
            d = d0
            while True:
                seen.add(d)
                ci, s = mate[d]
                d = (ci, (s + 1) % 4)
                if d == d0:
                    break
            faces += 1
        # connected components of the crossing graph
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e, ds in slots.items():
            a, b = find(ds[0][0]), find(ds[1][0])
            if a != b:
                parent[a] = b
        ncomp = len({find(i) for i in range(self.n)})
        v, ed = self.n, 2 * self.n
        if v - ed + faces != 2 * ncomp:
            raise NotationError("diagram is not planar")

    def mirror(self):
        """Switch all crossings (over <-> under)."""
        flipped = []
        for sign, (e0, e1, e2, e3) in self.crossings:
            # the under-strand becomes the over-strand; new incoming under
            # is the old incoming over
            if sign == 1:
                flipped.append((-1, (e3, e0, e1, e2)))
            else:
                flipped.append((1, (e1, e2, e3, e0)))
        return Diagram(tuple(flipped), self.free_loops, self.marked)

    def to_pd(self):
        """Serialize as a PD-style bracket list (1-based relabelled)."""
        labels = {}
        for comp in self.components():
            for e in comp:
                labels.setdefault(e, len(labels) + 1)
        rows = []
        for sign, edges in self.crossings:
            rows.append([labels[e] for e in edges])
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]"
                              for r in rows) + "]"


# -- braid words ------------------------------------------------------------


def parse_braid(word: str) -> Diagram:
    """Closure of a braid word: a..z positive generators, A..Z negative."""
    if not word:
        raise NotationError("empty braid word")
    gens = []
    for ch in word:
        if not ch.isalpha():
            raise NotationError(f"non-alphabetic character {ch!r}")
        idx = ord(ch.lower()) - ord("a") + 1
        gens.append((idx, 1 if ch.islower() else -1))
    width = max(i for i, _ in gens) + 1
    nextlab = itertools.count(width)
    cur = list(range(width))  # current edge label at strand position
    first = list(range(width))
    crossings = []
    for i, sign in gens:
        a, b = i - 1, i  # 0-based positions
        out_a, out_b = next(nextlab), next(nextlab)
        if sign == 1:
            crossings.append((1, (cur[b], out_b, out_a, cur[a])))
        else:
            crossings.append((-1, (cur[a], cur[b], out_b, out_a)))
        cur[a], cur[b] = out_a, out_b
    # closure: identify the final edge at each position with the initial one
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        if parent[x] != x:
            parent[x] = find(parent[x])
        return parent[x]

    for p in range(width):
        ra, rb = find(cur[p]), find(first[p])
        if ra != rb:
            parent[ra] = rb
    touched = {p for i, _ in gens for p in (i - 1, i)}
    free_loops = sum(1 for p in range(width) if p not in touched)
    out = []
    for sign, edges in crossings:
        out.append((sign, tuple(find(e) for e in edges)))
    d = Diagram(tuple(out), free_loops=free_loops)
    d.validate()
    return d


# -- planar diagram codes ----------------------------------------------------


def parse_pd(text: str) -> Diagram:
    """Parse a PD bracket list; first entry of each quadruple is the
    incoming under-strand, counterclockwise order.

    Over-strand orientations are inferred from label succession along each
    component (labels increase along the strand); leftover ambiguities are
    resolved by global orientation consistency and planarity.
    """
    try:
        data = ast.literal_eval(text)
    except (SyntaxError, ValueError) as exc:
        raise NotationError(f"malformed PD code: {exc}") from None
    if not isinstance(data, (list, tuple)) or not data:
        raise NotationError("PD code must be a nonempty list")
    rows = []
    for row in data:
        if not isinstance(row, (list, tuple)) or len(row) != 4 \
                or not all(isinstance(x, int) for x in row):
            raise NotationError("each PD entry must be four integers")
        rows.append(tuple(row))
    count = {}
    for row in rows:
        for e in row:
            count[e] = count.get(e, 0) + 1
    bad = [e for e, k in count.items() if k != 2]
    if bad:
        raise NotationError(f"edge labels {bad} do not occur exactly twice")

    comps = _pd_components(rows)
    succ = {}
    for comp in comps:
        cs = sorted(comp)
        for k, e in enumerate(cs):
            succ[e] = None
        # the successor of a label is the next label in the component
        # (labels run consecutively along each strand, wrapping at the max)
        sset = set(cs)
        for e in cs:
            succ[e] = e + 1 if e + 1 in sset else min(cs)

    # choose the over-direction at each crossing: d->b (positive) or b->d
    choices = []
    for a, b, c, d in rows:
        opts = []
        if b == succ.get(d):
            opts.append(1)   # over runs d -> b: positive crossing
        if d == succ.get(b):
            opts.append(-1)  # over runs b -> d: negative crossing
        if not opts:
            opts = [1, -1]
        choices.append(opts)
    last_err = None
    for combo in itertools.product(*choices):
        crossings = tuple((s, row) for s, row in zip(combo, rows))
        diag = Diagram(crossings)
        try:
            diag.validate()
            return diag
        except NotationError as exc:
            last_err = exc
    raise NotationError(f"inconsistent PD code: {last_err}")


def _pd_components(rows):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        if parent[x] != x:
            parent[x] = find(parent[x])
        return parent[x]

    for a, b, c, d in rows:
        for x, y in ((a, c), (b, d)):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    groups = {}
    for a, b, c, d in rows:
        for e in (a, b, c, d):
            groups.setdefault(find(e), set()).add(e)
    return list(groups.values())


# -- Dowker-Thistlethwaite codes ---------------------------------------------


def parse_dt(text: str) -> Diagram:
    """Parse a DT code for a knot, e.g. "[4,6,8,2]".

    Odd visit 2i-1 pairs with even |a_i|; a positive entry means the even
    passage is the over-pass.  The planar embedding is recovered by trying
    the two local writhes per crossing and keeping a genus-0 rotation
    system; codes describing reducible kinks (cyclically adjacent pairs)
    or non-realizable pairings are rejected.
    """
    try:
        data = ast.literal_eval(text)
    except (SyntaxError, ValueError) as exc:
        raise NotationError(f"malformed DT code: {exc}") from None
    if isinstance(data, int):
        data = [data]
    if not isinstance(data, (list, tuple)) or not data \
            or not all(isinstance(x, int) for x in data):
        raise NotationError("DT code must be a list of even integers")
    n = len(data)
    evens = [abs(x) for x in data]
    if sorted(evens) != list(range(2, 2 * n + 1, 2)):
        raise NotationError("DT code must contain each even 2..2n once")
    pairs = [(2 * i + 1, abs(x), x > 0) for i, x in enumerate(data)]
    total = 2 * n
    for o, e, _ in pairs:
        if (o - e) % total in (1, total - 1):
            raise NotationError("DT code has an adjacent pairing "
                                "(reduced diagrams only)")
    # visit v (1-based) happens at crossing cr[v]; edge v runs v -> v+1
    cr = {}
    for ci, (o, e, _) in enumerate(pairs):
        cr[o] = ci
        cr[e] = ci

    def edge(v):
        return ((v - 1) % total) + 1

    passages = []  # per crossing: (under_in, under_out, over_in, over_out)
    for ci, (o, e, even_over) in enumerate(pairs):
        odd_io = (edge(o - 1), edge(o))
        even_io = (edge(e - 1), edge(e))
        if even_over:
            under, over = odd_io, even_io
        else:
            under, over = even_io, odd_io
        passages.append((under[0], under[1], over[0], over[1]))

    for combo in itertools.product((1, -1), repeat=n):
        crossings = []
        for (ui, uo, oi, oo), s in zip(passages, combo):
            if s == 1:
                crossings.append((1, (ui, oo, uo, oi)))
            else:
                crossings.append((-1, (ui, oi, uo, oo)))
        diag = Diagram(tuple(crossings))
        try:
            diag.validate()
            return diag
        except NotationError:
            continue
    raise NotationError("DT code is not realizable as a planar diagram")


# -- pretzel diagrams ---------------------------------------------------------


def pretzel_diagram(*twists) -> Diagram:
    """Standard pretzel diagram with vertical twist regions.

    Positive parameters give right-handed vertical twists.  The (5,-3,2)
    convention is calibrated so that P(5,-3,2) is the knot with normalized
    s3 invariant 1.
    """
    if len(twists) < 2 or any(t == 0 for t in twists):
        raise NotationError("need nonzero twist parameters")
    nb = len(twists)
    nextlab = itertools.count(0)
    raw = []   # (cyclic edge 4-tuple, over_diag)
    left_top, right_top, left_bot, right_bot = [], [], [], []
    for p in twists:
        k = abs(p)
        l = [next(nextlab) for _ in range(k + 1)]
        r = [next(nextlab) for _ in range(k + 1)]
        for i in range(k):
            # corners ccw from NW: (l[i], l[i+1], r[i+1], r[i])
            tup = (l[i], l[i + 1], r[i + 1], r[i])
            over = 1 if p > 0 else 0   # which diagonal (slots 0-2 or 1-3)
            raw.append((tup, over))
        left_top.append(l[0])
        right_top.append(r[0])
        left_bot.append(l[k])
        right_bot.append(r[k])
    ident = {}

    def unify(a, b):
        ident[a] = b

    for j in range(nb - 1):
        unify(right_top[j], left_top[j + 1])
        unify(right_bot[j], left_bot[j + 1])
    unify(right_top[nb - 1], left_top[0])
    unify(right_bot[nb - 1], left_bot[0])

    def res(e):
        while e in ident:
            e = ident[e]
        return e

    raw = [(tuple(res(e) for e in tup), over) for tup, over in raw]
    return diagram_from_raw(raw)


def diagram_from_raw(raw) -> Diagram:
    """Orient a raw unoriented diagram and fix crossing conventions.

    ``raw``: list of (ccw edge 4-tuple, over_diag) with over_diag 0 when
    the strand in slots (0, 2) passes over, 1 for slots (1, 3).
    """
    incident = {}
    for ci, (tup, over) in enumerate(raw):
        for s, e in enumerate(tup):
            incident.setdefault(e, []).append((ci, s))
    for e, ds in incident.items():
        if len(ds) != 2:
            raise NotationError(f"edge {e!r} does not have two ends")
    # orient components: assign each edge a direction as (tail_end)
    tails = {}
    for e in sorted(incident):
        if e in tails:
            continue
        # start a new component: orient e from its first listed end
        frontier = [(e, incident[e][0])]
        while frontier:
            ee, tail_end = frontier.pop()
            if ee in tails:
                if tails[ee] != tail_end:
                    raise NotationError("orientation trace inconsistent")
                continue
            tails[ee] = tail_end
            ends = incident[ee]
            head_end = ends[1] if ends[0] == tail_end else ends[0]
            ci, s = head_end
            out_slot = (s + 2) % 4
            out_edge = raw[ci][0][out_slot]
            frontier.append((out_edge, (ci, out_slot)))
    crossings = []
    for ci, (tup, over) in enumerate(raw):
        # a slot is incoming if the edge's head is here
        ins = []
        for s in range(4):
            e = tup[s]
            ends = incident[e]
            head = ends[1] if tails[e] == ends[0] else ends[0]
            if head == (ci, s):
                ins.append(s)
        under_slots = (1, 3) if over == 0 else (0, 2)
        b0 = [s for s in ins if s in under_slots]
        if len(b0) != 1:
            raise NotationError("could not orient crossing")
        b0 = b0[0]
        rot = tuple(tup[(b0 + k) % 4] for k in range(4))
        over_in = (b0 + 3) % 4 in ins
        crossings.append((1 if over_in else -1, rot))
    d = Diagram(tuple(crossings))
    d.validate()
    return d


# -- gluing plans --------------------------------------------------------------


@dataclass
class GluingPlan:
    kind: str                 # "linear" or "tree"
    order: list | None = None # crossing indices, for linear plans
    tree: object = None       # nested tuples of crossing indices
    girth: int = 0

    def describe(self):
        if self.kind == "linear":
            return f"linear plan, girth {self.girth}"
        return f"tree plan, girth {self.girth}"


def _boundary_size(diagram, subset):
    count = {}
    for ci in subset:
        for e in diagram.crossings[ci][1]:
            count[e] = count.get(e, 0) + 1
    return sum(1 for v in count.values() if v == 1)


def plan_gluing(diagram: Diagram, use_tree=False, optimise=True) -> GluingPlan:
    """Pick a gluing order (or sub-tangle tree) of small girth."""
    n = diagram.n
    if n == 0:
        return GluingPlan("linear", order=[], girth=0)
    if not optimise:
        order = list(range(n))
        girth = max(_boundary_size(diagram, order[:k + 1]) for k in range(n))
        return GluingPlan("linear", order=order, girth=girth)
    if use_tree:
        return _plan_tree(diagram)
    if n <= 12:
        return _plan_linear_exact(diagram)
    return _plan_linear_greedy(diagram)


def _edges_of(diagram, ci):
    return set(diagram.crossings[ci][1])


def _plan_linear_greedy(diagram: Diagram) -> GluingPlan:
    n = diagram.n
    best_order = None
    best_girth = None
    for start in range(min(n, 8)):
        order = [start]
        chosen = {start}
        girth = _boundary_size(diagram, order)
        while len(order) < n:
            cand = []
            cur_edges = set()
            count = {}
            for ci in order:
                for e in diagram.crossings[ci][1]:
                    count[e] = count.get(e, 0) + 1
            bd_edges = {e for e, v in count.items() if v == 1}
            for ci in range(n):
                if ci in chosen:
                    continue
                touches = bool(_edges_of(diagram, ci) & bd_edges)
                size = _boundary_size(diagram, order + [ci])
                cand.append((not touches, size, ci))
            cand.sort()
            _, size, ci = cand[0]
            order.append(ci)
            chosen.add(ci)
            girth = max(girth, size)
        if best_girth is None or girth < best_girth:
            best_girth, best_order = girth, order
    return GluingPlan("linear", order=best_order, girth=best_girth)


def _plan_linear_exact(diagram: Diagram) -> GluingPlan:
    """Subset DP minimizing the maximal intermediate boundary."""
    n = diagram.n
    edges = [tuple(diagram.crossings[ci][1]) for ci in range(n)]
    bd_cache = {}

    def bd(mask):
        if mask in bd_cache:
            return bd_cache[mask]
        count = {}
        for ci in range(n):
            if mask >> ci & 1:
                for e in edges[ci]:
                    count[e] = count.get(e, 0) + 1
        v = sum(1 for x in count.values() if x == 1)
        bd_cache[mask] = v
        return v

    full = (1 << n) - 1
    dp = {0: (0, None)}
    masks = sorted(range(1, full + 1), key=lambda m: bin(m).count("1"))
    for mask in masks:
        here = bd(mask)
        best = None
        for ci in range(n):
            if not (mask >> ci & 1):
                continue
            prev = dp[mask ^ (1 << ci)][0]
            cand = max(prev, here)
            if best is None or cand < best[0]:
                best = (cand, ci)
        dp[mask] = best
    order = []
    mask = full
    while mask:
        ci = dp[mask][1]
        order.append(ci)
        mask ^= 1 << ci
    order.reverse()
    return GluingPlan("linear", order=order, girth=dp[full][0])


def _plan_tree(diagram: Diagram) -> GluingPlan:
    n = diagram.n
    if n <= 10:
        return _plan_tree_exact(diagram)
    return _plan_tree_greedy(diagram)


def _plan_tree_exact(diagram: Diagram) -> GluingPlan:
    n = diagram.n
    edges = [tuple(diagram.crossings[ci][1]) for ci in range(n)]

    def bd(mask):
        count = {}
        for ci in range(n):
            if mask >> ci & 1:
                for e in edges[ci]:
                    count[e] = count.get(e, 0) + 1
        return sum(1 for x in count.values() if x == 1)

    full = (1 << n) - 1
    dp = {}
    tree = {}
    masks = sorted(range(1, full + 1), key=lambda m: bin(m).count("1"))
    for mask in masks:
        here = bd(mask)
        if bin(mask).count("1") == 1:
            dp[mask] = here
            tree[mask] = mask.bit_length() - 1
            continue
        best = None
        sub = (mask - 1) & mask
        while sub:
            other = mask ^ sub
            if sub < other:
                cand = max(here, dp[sub], dp[other])
                if best is None or cand < best[0]:
                    best = (cand, sub)
            sub = (sub - 1) & mask
        dp[mask] = best[0]
        tree[mask] = best[1]

    def build(mask):
        if bin(mask).count("1") == 1:
            return mask.bit_length() - 1
        sub = tree[mask]
        return (build(sub), build(mask ^ sub))

    return GluingPlan("tree", tree=build(full), girth=dp[full])


def _plan_tree_greedy(diagram: Diagram) -> GluingPlan:
    n = diagram.n
    clusters = [(frozenset([ci]), ci) for ci in range(n)]
    girth = max(_boundary_size(diagram, [ci]) for ci in range(n))
    while len(clusters) > 1:
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                merged = clusters[i][0] | clusters[j][0]
                size = _boundary_size(diagram, merged)
                if best is None or size < best[0]:
                    best = (size, i, j)
        size, i, j = best
        girth = max(girth, size)
        node = (clusters[i][1], clusters[j][1])
        merged = clusters[i][0] | clusters[j][0]
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append((merged, node))
    return GluingPlan("tree", tree=clusters[0][1], girth=girth)
