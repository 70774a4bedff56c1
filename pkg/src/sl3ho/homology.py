"""Integral and rational homology of terminal complexes.

A fully simplified closed complex has only empty webs; identifying the
empty foam with 1 turns each q-degree into a chain complex of free abelian
groups, whose homology is computed with the Smith normal form.  The
reduced variant quotients the interval-web endomorphisms by sending the
dotless identity to 1 and dotted identities to 0.

Conventions: differentials lower the homological degree t by one.  Free
ranks are reported at their degree; a torsion class arising from the
invariant factors of d: C_t -> C_{t-1} is reported at degree t, matching
the reference output format.
"""

from __future__ import annotations

from .poly import LaurentQ, BiPoly
from .foam import FoamError
from .web import interval_web


class HomologyError(ValueError):
    pass


# -- integer matrices ---------------------------------------------------------


def smith_normal_form(rows):
    """Invariant factors (d1 | d2 | ...) and rank of an integer matrix.

    Fraction-free elimination with minimal-absolute-value pivoting; entries
    are arbitrary-precision Python integers.  Returns (diagonal, rank) with
    all diagonal entries positive and each dividing the next.
    """
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return [], 0
    nr, nc = len(m), len(m[0])
    diag = []
    top = 0
    while True:
        pivot = None
        for i in range(top, nr):
            for j in range(top, nc):
                if m[i][j] and (pivot is None
                                or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[top], m[pi] = m[pi], m[top]
        for row in m:
            row[top], row[pj] = row[pj], row[top]
        p = m[top][top]
        dirty = False
        for i in range(top + 1, nr):
            if m[i][top]:
                q = m[i][top] // p
                for j in range(top, nc):
                    m[i][j] -= q * m[top][j]
                if m[i][top]:
                    dirty = True
        for j in range(top + 1, nc):
            if m[top][j]:
                q = m[top][j] // p
                for i in range(top, nr):
                    m[i][j] -= q * m[i][top]
                if m[top][j]:
                    dirty = True
        if dirty:
            continue
        # ensure divisibility of the remaining block
        bad = None
        for i in range(top + 1, nr):
            for j in range(top + 1, nc):
                if m[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for j in range(top, nc):
                m[top][j] += m[bad][j]
            continue
        diag.append(abs(p))
        top += 1
        if top >= nr or top >= nc:
            break
    return diag, len(diag)


def matrix_rank(rows):
    return smith_normal_form(rows)[1]


# -- homology tables ----------------------------------------------------------


class HomologyTable:
    """Free ranks and torsion, indexed by (t, q)."""

    def __init__(self):
        self.free = {}      # (t, q) -> rank
        self.torsion = {}   # (t, q) -> list of invariant factors > 1

    def add_free(self, t, q, rank):
        if rank:
            self.free[(t, q)] = self.free.get((t, q), 0) + rank

    def add_torsion(self, t, q, factor):
        if factor > 1:
            self.torsion.setdefault((t, q), []).append(factor)

    def poincare(self) -> BiPoly:
        return BiPoly({k: v for k, v in self.free.items()})

    def total_rank(self):
        return sum(self.free.values())

    def torsion_primes(self):
        primes = set()
        for factors in self.torsion.values():
            for f in factors:
                primes.update(_prime_factors(f))
        return sorted(primes)

    def torsion_poly(self, p) -> BiPoly:
        """Number of p-power cyclic summands per (t, q)."""
        coeffs = {}
        for (t, q), factors in self.torsion.items():
            n = sum(1 for f in factors if f % p == 0)
            if n:
                coeffs[(t, q)] = n
        return BiPoly(coeffs)

    def has_torsion(self):
        return bool(self.torsion)

    def __eq__(self, other):
        return (isinstance(other, HomologyTable)
                and self.free == other.free
                and {k: sorted(v) for k, v in self.torsion.items()}
                == {k: sorted(v) for k, v in other.torsion.items()})

    def dualize(self):
        """Mirror image of the table.

        Free ranks map by (t, q) -> (-t, q^-1); torsion classes carry the
        universal-coefficient degree shift and map by (t, q) -> (1-t, q^-1).
        """
        out = HomologyTable()
        for (t, q), r in self.free.items():
            out.free[(-t, -q)] = r
        for (t, q), fs in self.torsion.items():
            out.torsion[(1 - t, -q)] = list(fs)
        return out

    def rational_self_dual(self):
        return self.free == self.dualize().free

    def torsion_self_dual(self, p):
        mine = self.torsion_poly(p)
        return mine == BiPoly({(1 - t, -q): v
                               for (t, q), v in mine.coeffs.items()})

    def is_self_dual(self):
        if not self.rational_self_dual():
            return False
        return all(self.torsion_self_dual(p) for p in self.torsion_primes())


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


# -- extracting integer complexes from terminal foam complexes ----------------


def _terminal_matrices(c, kind):
    """Per-q chain data of a terminal complex.

    ``kind`` 'closed': all webs empty, entries are multiples of the empty
    foam.  'reduced': all webs are intervals, entries are combinations of
    dotted identities and the quotient keeps the dotless coefficient.

    Returns (dims, mats): dims[q][t] = list of object positions, and
    mats[q][t] = integer matrix of d: C_t -> C_{t-1} in those bases.
    """
    def is_interval(w):
        # either base-point rotation of the single strand
        return (len(w.signs) == 2 and not w.vsign and w.circles == 0
                and len(w.edges) == 1)

    positions = {}
    for t, objs in c.objects.items():
        for idx, (a, w) in enumerate(objs):
            if kind == "closed":
                if not w.is_empty():
                    raise HomologyError("complex is not terminal (nonempty web)")
            else:
                if not is_interval(w):
                    raise HomologyError("complex is not an interval complex")
            positions.setdefault(a, {}).setdefault(t, []).append(idx)

    def entry_int(combo):
        if kind == "closed":
            return combo.empty_coefficient()
        total = 0
        for f, coeff in combo.terms.items():
            if not is_interval(f.dom) or len(f.facets) != 1:
                raise HomologyError("entry is not an interval endomorphism")
            g, dots, cycles = f.facets[0]
            if g or len(cycles) != 1:
                raise HomologyError("entry is not a dotted identity")
            if dots == 0:
                total += coeff
        return total

    mats = {}
    for q, per_t in positions.items():
        mats[q] = {}
        for t, cols in per_t.items():
            rows = per_t.get(t - 1) if (t - 1) in per_t else None
            mat = c.diffs.get(t, {})
            if rows is None:
                continue
            col_of = {idx: k for k, idx in enumerate(cols)}
            row_of = {idx: k for k, idx in enumerate(rows)}
            block = [[0] * len(cols) for _ in rows]
            for (i, j), combo in mat.items():
                if j in col_of and i in row_of:
                    block[row_of[i]][col_of[j]] = entry_int(combo)
            mats[q][t] = block
    return positions, mats


def reduced_homology(diagram, ring="integers", component=0,
                     use_tree=False) -> HomologyTable:
    """Reduced homology of a diagram with a marked component.

    The diagram is cut open at an edge of the marked component, leaving a
    two-point boundary; the terminal interval complex is quotiented by
    sending the dotless identity to 1 and dotted identities to 0.
    """
    from .notation import plan_gluing
    from .complexes import run_plan
    comps = diagram.components()
    if not (0 <= component < len(comps)):
        raise HomologyError(f"no component {component} "
                            f"(diagram has {len(comps)})")
    cut = comps[component][0]
    plan = plan_gluing(diagram, use_tree=use_tree)
    c = run_plan(diagram, plan, cut_label=cut)
    return homology_of(c, ring=ring, reduced=True)


def duality_report(table: HomologyTable):
    """Self-duality verdicts under (t, q) -> (-t, q^-1), per layer."""
    out = {"rational": table.rational_self_dual()}
    for p in table.torsion_primes():
        out[f"{p}-torsion"] = table.torsion_self_dual(p)
    out["self_dual"] = table.is_self_dual()
    return out


def homology_of(c, ring="integers", reduced=False) -> HomologyTable:
    """Homology table of a terminal complex, per (t, q)-degree."""
    kind = "reduced" if reduced else "closed"
    positions, mats = _terminal_matrices(c, kind)
    table = HomologyTable()
    for q, per_t in positions.items():
        ranks = {}
        factors = {}
        for t, block in mats.get(q, {}).items():
            diag, rank = smith_normal_form(block)
            ranks[t] = rank
            factors[t] = [x for x in diag if x > 1]
        for t, idxs in per_t.items():
            dim = len(idxs)
            out_rank = ranks.get(t, 0)
            in_rank = ranks.get(t + 1, 0)
            table.add_free(t, q, dim - out_rank - in_rank)
        if ring == "integers":
            for t, fs in factors.items():
                for f in fs:
                    table.add_torsion(t, q, f)
    return table
