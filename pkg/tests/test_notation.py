import pytest

from sl3ho.notation import (Diagram, NotationError, parse_braid, parse_pd,
                            parse_dt, pretzel_diagram, plan_gluing,
                            diagram_from_raw)


def test_braid_basicos():
    d = parse_braid("aBaB")
    assert d.n == 4
    assert sorted(s for s, _ in d.crossings) == [-1, -1, 1, 1]
    assert len(d.components()) == 1

    d1 = parse_braid("a")
    assert d1.n == 1
    assert len(d1.components()) == 1

    d8 = parse_braid("abababab")
    assert d8.n == 8
    assert len(d8.components()) == 1
    assert d8.writhe() == 8

    hopf = parse_braid("aa")
    assert len(hopf.components()) == 2


def test_braid_errors():
    with pytest.raises(NotationError):
        parse_braid("")
    with pytest.raises(NotationError):
        parse_braid("a1b")
    with pytest.raises(NotationError):
        parse_braid("a b")


def test_braid_free_strands_become_loops():
    # generator c on its own leaves strands 1 and 2 as free unknots
    d = parse_braid("c")
    assert d.free_loops == 2


def test_pd_figure_eight():
    d = parse_pd("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]")
    assert d.n == 4
    assert sorted(s for s, _ in d.crossings) == [-1, -1, 1, 1]
    assert len(d.components()) == 1


def test_pd_degenerate_kink_is_accepted_as_unknot():
    # the inference rule resolves [[1,2,2,1]] to a one-crossing unknot
    d = parse_pd("[[1,2,2,1]]")
    assert d.n == 1
    assert len(d.components()) == 1


def test_pd_errors():
    with pytest.raises(NotationError):
        parse_pd("[[1,2,3]]")
    with pytest.raises(NotationError):
        parse_pd("[")
    with pytest.raises(NotationError):
        parse_pd("[[1,2,3,4],[5,6,7,8]]")  # labels not paired


def test_pd_roundtrip():
    for word in ["aaa", "aBaB", "abababab"]:
        d = parse_braid(word)
        d2 = parse_pd(d.to_pd())
        assert d2.n == d.n
        assert sorted(s for s, _ in d2.crossings) == \
            sorted(s for s, _ in d.crossings)
        assert len(d2.components()) == len(d.components())


def test_dt_codes():
    fig8 = parse_dt("[4,6,8,2]")
    assert fig8.n == 4
    assert abs(fig8.writhe()) == 0  # amphichiral diagram balances signs
    tre = parse_dt("[4,6,2]")
    assert tre.n == 3
    assert abs(tre.writhe()) == 3
    with pytest.raises(NotationError):
        parse_dt("[2]")
    with pytest.raises(NotationError):
        parse_dt("[4,6]")
    with pytest.raises(NotationError):
        parse_dt("[3,5]")


def test_mirror():
    d = parse_braid("aaa")
    m = d.mirror()
    assert sorted(s for s, _ in m.crossings) == [-1, -1, -1]
    m.validate()


def test_pretzel_structure():
    d = pretzel_diagram(5, -3, 2)
    assert d.n == 10
    assert len(d.components()) == 1
    d2 = pretzel_diagram(3, -3, 2)   # (odd, odd, even) with |a|=|b| is a link
    assert d2.n == 8


def test_plan_girths():
    t43 = parse_braid("abababab")
    lin = plan_gluing(t43)
    assert lin.girth == 6
    fig8 = parse_braid("aBaB")
    tree = plan_gluing(fig8, use_tree=True)
    assert tree.girth == 4
    pz = pretzel_diagram(5, -3, 2)
    assert plan_gluing(pz).girth == 6
    assert plan_gluing(pz, use_tree=True).girth == 4


def test_tree_girth_never_worse():
    for make in [lambda: parse_braid("aaa"), lambda: parse_braid("aBaB"),
                 lambda: parse_braid("abababab"),
                 lambda: pretzel_diagram(3, -5, 2)]:
        d = make()
        lin = plan_gluing(d)
        tre = plan_gluing(d, use_tree=True)
        assert tre.girth <= lin.girth


def test_plan_without_optimisation_uses_input_order():
    d = parse_braid("abababab")
    plan = plan_gluing(d, optimise=False)
    assert plan.order == list(range(8))


def test_plan_boundaries_even():
    d = parse_braid("aBaB")
    plan = plan_gluing(d)
    from sl3ho.notation import _boundary_size
    for k in range(1, d.n + 1):
        assert _boundary_size(d, plan.order[:k]) % 2 == 0


def test_validate_rejects_bad_edges():
    with pytest.raises(NotationError):
        Diagram(((1, (0, 1, 2, 3)),)).validate()
