import pytest

from sl3ho.notation import parse_braid, plan_gluing, pretzel_diagram
from sl3ho.complexes import run_plan
from sl3ho.homology import homology_of

_cache = {}


def braid_homology(word, tree=False, optimise=True, reduced=False, comp=0):
    """Cached homology tables for braid closures (the suite reuses these)."""
    key = (word, tree, optimise, reduced, comp)
    if key not in _cache:
        d = parse_braid(word)
        cut = None
        if reduced:
            cut = d.components()[comp][0]
        plan = plan_gluing(d, use_tree=tree, optimise=optimise)
        c = run_plan(d, plan, cut_label=cut)
        _cache[key] = homology_of(c, reduced=reduced)
    return _cache[key]


def pretzel_homology(*twists):
    key = ("pretzel",) + twists
    if key not in _cache:
        d = pretzel_diagram(*twists)
        c = run_plan(d, plan_gluing(d))
        _cache[key] = homology_of(c)
    return _cache[key]


@pytest.fixture(scope="session")
def torus43():
    return braid_homology("abababab")
