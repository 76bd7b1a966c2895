from fractions import Fraction as F

import pytest

from hypvol.verify import (
    generic_kernel_value,
    verify_c1,
    verify_d3_decomposition,
    verify_do_norbury,
    verify_generic_kernels,
    verify_kdv_integral,
    verify_kdv_printed,
    verify_sign,
    verify_symmetry,
    verify_vanishing,
    verify_vp2,
)


def test_do_norbury_small():
    for g, n in [(0, 3), (0, 4), (1, 1), (1, 2)]:
        report = verify_do_norbury(g, n)
        assert report.verdict == "holds", (g, n, report.residual_text())
    # n = 0 form: P_{g,1}(1) = 0 with an empty right-hand sum
    assert verify_do_norbury(2, 0).verdict == "holds"


def test_kdv_integral():
    assert verify_kdv_integral(0, 4).verdict == "holds"
    assert verify_kdv_integral(0, 5).verdict == "holds"
    assert verify_kdv_integral(1, 2).verdict == "holds"
    excluded = verify_kdv_integral(1, 1)
    assert excluded.verdict == "excluded"
    assert excluded.residual_text() == "1/24*a1^3"


def test_kdv_printed_diagnostic():
    report = verify_kdv_printed(0, 4)
    assert report.verdict == "diagnostic"
    # a1^3 + 2 a1 + a1 sum a_i^2 - 2 a1 sum a_i
    res = report.residual
    point = {"a1": F(1, 3), "a2": F(1, 5), "a3": F(1, 7), "a4": F(1, 2)}
    s2 = sum(v * v for k, v in point.items() if k != "a1")
    s1 = sum(v for k, v in point.items() if k != "a1")
    a1 = point["a1"]
    assert res.eval(point) == a1 ** 3 + 2 * a1 + a1 * s2 - 2 * a1 * s1

    report5 = verify_kdv_printed(0, 5)
    val = report5.residual.eval({"a1": F(1, 2), "a2": 0, "a3": 0, "a4": 0, "a5": 0})
    assert val == F(-111, 128)


def test_vp2():
    r = verify_vp2(0, 3, [[0, 0, 0], [F(1, 8), F(1, 4), F(3, 8)]])
    assert r.verdict == "holds"
    r = verify_vp2(1, 1, [[F(1, 4)], [F(3, 8)]])
    assert r.verdict == "holds"
    with pytest.raises(ValueError):
        verify_vp2(0, 3, [[F(3, 4), 0, 0]])


def test_vanishing():
    assert verify_vanishing(0, 4, [[0, 0, 0], [F(1, 8), F(1, 4), F(3, 8)]]).verdict == "holds"
    report = verify_vanishing(1, 1, [[]])
    assert report.verdict == "excluded"
    assert report.residual == F(-1, 16)


def test_sign_and_symmetry():
    assert verify_sign(0, 4, 25, seed=3).verdict == "holds"
    assert verify_symmetry(0, 4, 15, seed=3).verdict == "holds"


def test_c1():
    assert verify_c1(0, 4, [[0, 0, 0], [F(1, 8), F(1, 4), F(3, 8)]]).verdict == "holds"
    assert verify_c1(1, 1, [[]]).verdict == "excluded"


def test_d3_decomposition_diagnostic():
    r = verify_d3_decomposition(0, 3, [([0, 0, 0], F(3, 2)),
                                       ([0, 0, 0], F(1, 2))])
    assert r.verdict == "diagnostic"
    assert r.residual == 0


def test_generic_kernel_pointwise():
    # single-edge graph family at (0,4): 3 (u-1)^+ at zero head
    val = generic_kernel_value(0, 4, [0, 0, 0], F(3, 2), 3)
    assert val == F(3, 2)
    assert generic_kernel_value(0, 4, [0, 0, 0], F(1, 2), 3) == 0


def test_generic_kernels_match():
    r = verify_generic_kernels(1, 2, [((F(1, 4), F(3, 8)), F(3, 2)),
                                      ((F(1, 4), F(3, 8)), F(27, 16))])
    assert r.verdict == "holds", r.residual_text()
    r = verify_generic_kernels(0, 4, [((F(3, 8), F(3, 8), F(3, 8), F(3, 8)),
                                       F(31, 16))])
    assert r.verdict == "holds", r.residual_text()


def test_report_json_roundtrip():
    report = verify_do_norbury(0, 3)
    data = report.to_json()
    assert data["identity"] == "do_norbury"
    assert data["verdict"] == "holds"
    assert isinstance(data["runtime_ms"], int)
