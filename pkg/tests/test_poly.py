from sl3ho.poly import LaurentQ, BiPoly, QUANTUM2, QUANTUM3, format_tq, parse_tq


def test_laurent_arithmetic():
    p = LaurentQ({-1: 1, 1: 1})
    assert p * p == LaurentQ({-2: 1, 0: 2, 2: 1})
    assert p - p == LaurentQ.zero()
    assert (p * 0) == LaurentQ.zero()
    assert p.shift(3) == LaurentQ({2: 1, 4: 1})
    assert QUANTUM3.mirror() == QUANTUM3
    assert QUANTUM2.is_palindromic()


def test_bipoly_dualize_and_eval():
    p = BiPoly({(0, -2): 1, (2, -6): 3})
    assert p.dualize() == BiPoly({(0, 2): 1, (-2, 6): 3})
    assert p.at_t(-1) == LaurentQ({-2: 1, -6: 3})
    assert p.total() == 4
    assert p.q_slice(2) == LaurentQ({-6: 3})


def test_format_roundtrip():
    p = BiPoly({(0, -14): 1, (0, -12): 1, (4, -18): 2, (1, 12): 1,
                (6, -22): 1})
    assert parse_tq(format_tq(p)) == p


def test_parse_session_style():
    text = ("(q^-14 + q^-12 + q^-10) + t^2(q^-16 + q^-14) + "
            "t^4(q^-20 + 2q^-18 + q^-16) + t^6(q^-22)")
    p = parse_tq(text)
    assert p.coeffs[(4, -18)] == 2
    assert p.coeffs[(0, -10)] == 1
    assert p.total() == 10
    assert parse_tq("1+q^2+q^4+q^6+tq^12") == BiPoly(
        {(0, 0): 1, (0, 2): 1, (0, 4): 1, (0, 6): 1, (1, 12): 1})
