"""Decategorified invariants: the state-sum polynomial and the s3
concordance invariant extracted from a Poincare polynomial.

The state sum expands every crossing into its two web resolutions with
weights q^-2 / -q^-3 (positive) and q^2 / -q^3 (negative) and evaluates
the resulting closed webs; it serves as the graded-Euler-characteristic
oracle for the homology pipeline.

The s3 extraction searches for decompositions

    P(t, q) = q^c (q^-2 + 1 + q^2) + sum_k zeta_k(t, q) (1 + t q^(+-6k))

with non-negative zeta_k.  Both pairing directions are searched; the
worked ambiguity example and torus-knot output pin one direction each, an
artefact of mirror conventions.  The printed invariant is the raw center
c; the normalized invariant -c/2 agrees with the Rasmussen-type
normalization on the trefoil.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .poly import LaurentQ, BiPoly, QUANTUM3
from .web import Web, parallel_web, h_web, disjoint_union, glue_pair, \
    circle_web, kuperberg_bracket, empty_web
from .notation import Diagram


class InvariantError(ValueError):
    pass


# -- state sum ----------------------------------------------------------------


def sl3_polynomial(diagram: Diagram, max_crossings=12) -> LaurentQ:
    """Kuperberg state sum of a closed diagram (oracle; 2^n states)."""
    n = diagram.n
    if n > max_crossings:
        raise InvariantError(
            f"state sum capped at {max_crossings} crossings (got {n})")
    total = LaurentQ.zero()
    for mask in range(1 << n):
        weight = LaurentQ.one()
        parts = []
        for ci, (sign, labels) in enumerate(diagram.crossings):
            use_h = bool(mask >> ci & 1)
            if sign == 1:
                w = LaurentQ.monomial(-3, -1) if use_h \
                    else LaurentQ.monomial(-2, 1)
                local = h_web(True)[0] if use_h else parallel_web(True)
            else:
                w = LaurentQ.monomial(3, -1) if use_h \
                    else LaurentQ.monomial(2, 1)
                local = h_web(False)[0] if use_h else parallel_web(False)
            weight = weight * w
            parts.append(local)
        closed = _glue_resolution(parts, diagram)
        closed = closed.add_circle(diagram.free_loops)
        total = total + weight * kuperberg_bracket(closed)
    return total


def _glue_resolution(parts, diagram):
    if not parts:
        return circle_web(0)
    web = parts[0]
    boundary = list(diagram.crossings[0][1])
    for ci in range(1, len(parts)):
        web, m1, m2 = disjoint_union(web, parts[ci])
        boundary = boundary + list(diagram.crossings[ci][1])
        while True:
            pair = None
            seen = {}
            for pos, lab in enumerate(boundary):
                if lab in seen:
                    pair = (seen[lab], pos)
                    break
                seen[lab] = pos
            if pair is None:
                break
            i, j = pair
            web, _, _ = glue_pair(web, i, j)
            boundary = [x for k, x in enumerate(boundary) if k not in (i, j)]
    # a one-crossing diagram may still carry its own repeated labels
    while True:
        pair = None
        seen = {}
        for pos, lab in enumerate(boundary):
            if lab in seen:
                pair = (seen[lab], pos)
                break
            seen[lab] = pos
        if pair is None:
            break
        i, j = pair
        web, _, _ = glue_pair(web, i, j)
        boundary = [x for k, x in enumerate(boundary) if k not in (i, j)]
    if boundary:
        raise InvariantError("resolution did not close up")
    return web


# -- s3 extraction -------------------------------------------------------------


@dataclass
class Decomposition:
    center: int                      # q-center c of the surviving triple
    direction: int                   # +6 or -6: q-step of a k=1 pair block
    zetas: dict = field(default_factory=dict)  # k -> BiPoly

    @property
    def s3_raw(self):
        return self.center

    @property
    def s3_normalized(self):
        return -self.center // 2

    def max_k(self):
        return max([k for k, z in self.zetas.items() if z], default=0)

    def second_page(self):
        return self.max_k() <= 1


@dataclass
class S3Report:
    candidates: list
    preferred: Decomposition | None
    raw_value: int | None
    normalized_value: int | None

    @property
    def unique(self):
        return len({d.center for d in self.candidates}) == 1

    def possible_raw_values(self):
        return sorted({d.center for d in self.candidates})


def extract_s3(kr3: BiPoly) -> S3Report:
    """All decompositions of a knot Poincare polynomial; see module doc."""
    if any(v < 0 for v in kr3.coeffs.values()):
        raise InvariantError("Poincare polynomial has negative coefficients")
    if not kr3.coeffs:
        raise InvariantError("empty polynomial")
    t0 = kr3.q_slice(0)
    candidates = []
    seen = set()
    for c in sorted(t0.coeffs):
        triple = {c - 2: 1, c: 1, c + 2: 1}
        rest = dict(kr3.coeffs)
        ok = True
        for q, v in triple.items():
            key = (0, q)
            if rest.get(key, 0) < v:
                ok = False
                break
            rest[key] -= v
            if not rest[key]:
                del rest[key]
        if not ok:
            continue
        for direction in (-6, 6):
            for zetas in _peel(rest, direction, {}):
                dec = Decomposition(c, direction,
                                    {k: BiPoly(z) for k, z in zetas.items()})
                sig = (c, direction,
                       tuple(sorted((k, tuple(sorted(z.items())))
                                    for k, z in zetas.items())))
                if sig not in seen:
                    seen.add(sig)
                    candidates.append(dec)
    if not candidates:
        raise InvariantError("no surviving-triple decomposition exists "
                             "(not a knot polynomial?)")
    second = [d for d in candidates if d.second_page()]
    preferred = None
    if len({d.center for d in second}) == 1 and second:
        preferred = second[0]
    chosen = preferred if preferred is not None else (
        candidates[0] if len({d.center for d in candidates}) == 1 else None)
    raw = chosen.center if chosen is not None else None
    return S3Report(candidates, preferred, raw,
                    None if raw is None else -raw // 2)


def _peel(rest, direction, _memo, _depth=0):
    """Yield pair-block decompositions of ``rest`` (dict (t,q) -> mult)."""
    if not rest:
        yield {}
        return
    if _depth > 200:
        raise InvariantError("s3 peeling recursion too deep")
    key = min(rest)  # lexicographically smallest (t, q): a lower member
    t, q = key
    kmax = 12
    for k in range(1, kmax + 1):
        partner = (t + 1, q + direction * k)
        if rest.get(partner, 0) < 1:
            continue
        nxt = dict(rest)
        for kk in (key, partner):
            nxt[kk] -= 1
            if not nxt[kk]:
                del nxt[kk]
        for zetas in _peel(nxt, direction, _memo, _depth + 1):
            out = {kk: dict(z) for kk, z in zetas.items()}
            out.setdefault(k, {})
            out[k][key] = out[k].get(key, 0) + 1
            yield out


def s3_of_diagram(diagram: Diagram, homology_table) -> S3Report:
    """Extract s3 from the (already computed) homology of a knot diagram."""
    ncomp = len(diagram.components()) + diagram.free_loops
    if ncomp != 1:
        raise InvariantError("s3 is defined for knots (one component)")
    return extract_s3(homology_table.poincare())
