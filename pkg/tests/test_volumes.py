from fractions import Fraction as F

import pytest

from hypvol.exactmath import MultiPoly, PiecewisePoly
from hypvol.mirzakhani import mirzakhani_value, partial_profile
from hypvol.volumes import (
    DomainError,
    canonicalize,
    d3_kernel,
    d4_kernel,
    fig1_table,
    profile0,
    profile_by_interpolation,
    t_max,
    v_eval,
    v_profile,
    vol_eval,
    vp1_factor,
    wall_candidates,
)

T = MultiPoly.var("t")


def test_canonicalize():
    assert canonicalize([0, F(3, 4), 0]).coords == (0, 0, F(3, 4))
    with pytest.raises(DomainError):
        canonicalize([F(3, 5), F(3, 5)])
    assert canonicalize([F(1, 2), F(1, 2)]).coords == (F(1, 2), F(1, 2))
    with pytest.raises(DomainError):
        canonicalize([0, F(9, 4)])
    with pytest.raises(DomainError):
        canonicalize([F(-1, 2), 0])


def test_t_max():
    assert t_max(0, 4, [0, 0, 0]) == 2
    assert t_max(0, 4, [F(1, 8), 0, 0]) == F(15, 8)
    assert t_max(1, 2, [F(1, 4)]) == F(7, 4)
    assert t_max(1, 1, []) == 2
    assert t_max(2, 1, []) == 2


def test_d3_kernel_03():
    # ambient (0,4), zero head: 3 (u-1)^+ on [0,2]
    k = d3_kernel(0, 3, [0, 0, 0])
    assert k.eval(F(1, 2)) == 0
    assert k.eval(F(3, 2)) == F(3, 2)
    assert k.eval(2) == 3
    expected = PiecewisePoly([0, 1, 2], [MultiPoly.zero(("t",)), 3 * T - 3])
    assert k == expected


def test_d4_kernel_trivial_cases():
    assert d4_kernel(0, 3, [0, 0, 0]) == PiecewisePoly.zero(0, 2)
    # ambient (1,2): no stable valence-4 graph exists, kernel is 0 up to t_max
    k = d4_kernel(1, 1, [F(1, 4)])
    assert k == PiecewisePoly.zero(0, F(7, 4))


def test_profile_04_zero_head():
    prof = profile0(0, 4, [0, 0, 0])
    piece1 = T * T * F(1, 2) - F(1, 2)
    piece2 = piece1 - F(3, 2) * (T - 1) ** 2
    assert prof == PiecewisePoly([0, 1, 2], [piece1, piece2])
    assert prof.eval(1) == 0 and prof.eval(2) == 0
    assert prof.is_c1()[0]


def test_profile_04_v1_constant():
    vp = v_profile(0, 4, [0, 0, 0], ell=1)
    assert vp.profile == PiecewisePoly.from_const(1, 0, 2)


def test_profile_11():
    prof = profile0(1, 1, [])
    assert prof == PiecewisePoly.single((T * T - 1) * F(1, 48), 0, 2)
    assert prof.eval(1) == 0
    assert prof.eval(2) == F(3, 48)


def test_profile_04_small_head():
    # head (1/8, 0, 0): t_max = 15/8, vanishing there, C^1 inside
    head = [F(1, 8), 0, 0]
    prof = profile0(0, 4, head)
    assert prof.hi == F(15, 8)
    assert prof.eval(F(7, 8)) == mirzakhani_value(0, 4, head + [F(7, 8)])
    assert prof.eval(F(15, 8)) == 0
    assert prof.is_c1()[0]


def test_profile_12_hand_values():
    # ambient (1,2), head (1/4): derived by hand from the recursion
    head = [F(1, 4)]
    prof = profile0(1, 2, head)
    assert prof.hi == F(7, 4)
    # small chamber agrees with P_{1,2}
    assert prof.eval(F(1, 2)) == mirzakhani_value(1, 2, [F(1, 4), F(1, 2)])
    assert prof.eval(1) == 0
    assert prof.eval(F(7, 4)) == 0
    assert prof.is_c1()[0]


def test_profile_05_zero_head():
    prof = profile0(0, 5, [0] * 4)
    p = partial_profile(0, 5, [0] * 4)
    assert prof.eval(F(1, 2)) == p.eval({"t": F(1, 2)})
    # on [1,2]: P - (5/8)(t-1)^4 + (t-1)^2
    for x in [F(5, 4), F(3, 2), F(7, 4), F(2)]:
        expected = p.eval({"t": x}) - F(5, 8) * (x - 1) ** 4 + (x - 1) ** 2
        assert prof.eval(x) == expected
    assert prof.eval(1) == 0 and prof.eval(2) == 0
    assert prof.is_c1()[0]


def test_v_eval_spec_examples():
    assert v_eval(0, [0, 0, 0, F(1, 2)]) == F(3, 8)
    assert v_eval(0, [0, 0, 0, F(3, 2)]) == F(-1, 4)
    assert v_eval(0, [0, 0, F(3, 2)]) == 0          # V_{0,3} zero extension
    assert v_eval(0, [0, 0, F(1, 2)]) == 1
    assert v_eval(1, [2]) == F(-1, 16)
    assert v_eval(0, [F(1, 8), F(1, 4), F(3, 8), 1]) == 0
    assert v_eval(0, [0, 0, 0, 1]) == 0
    assert v_eval(0, [0, 0, 0, 2]) == 0


def test_v_eval_v05_value():
    assert v_eval(0, [0, 0, 0, 0, F(3, 2)]) == F(-7, 32)


def test_small_chamber_matches_mirzakhani():
    # V = (-1)^{g-1+n} P whenever t + max(head) <= 1
    cases = [
        (0, [F(1, 8), F(1, 4), F(1, 8), F(1, 2)]),
        (0, [F(1, 4), F(1, 4), F(1, 4), F(1, 4), F(1, 2)]),
        (1, [F(1, 4), F(3, 4)]),
        (1, [F(1, 2)]),
        (2, [F(3, 4)]),
    ]
    for g, vec in cases:
        n = len(vec)
        sign = (-1) ** (g - 1 + n)
        assert v_eval(g, vec) == sign * mirzakhani_value(g, n, vec), (g, vec)


def test_symmetry_small_chamber():
    # evaluate with different slots last: all agree inside Delta^{<=1}
    vec = [F(1, 8), F(1, 4), F(3, 8), F(5, 16)]
    base = v_eval(0, vec)
    for i in range(4):
        rotated = vec[:i] + vec[i + 1:] + [vec[i]]
        assert v_eval(0, rotated) == base


def test_vanishing_with_heads():
    heads = {
        (0, 4): [[0, 0, 0], [F(1, 8), 0, 0], [F(1, 8), F(1, 4), F(3, 8)]],
        (0, 5): [[0] * 4, [F(1, 8), F(1, 4), F(3, 8), F(1, 2)]],
        (1, 2): [[0], [F(1, 4)], [F(1, 2)]],
        (1, 3): [[0, 0], [F(1, 4), F(3, 8)]],
        (2, 1): [[]],
    }
    for (g, n), hlist in heads.items():
        for head in hlist:
            if sum(head) + 1 <= 2 * g - 2 + n:
                assert v_eval(g, list(head) + [1]) == 0, (g, n, head, 1)
            if sum(head) + 2 <= 2 * g - 2 + n:
                assert v_eval(g, list(head) + [2]) == 0, (g, n, head, 2)


def test_c1_profiles():
    for g, n, head in [(0, 4, [F(1, 8), F(1, 4), F(3, 8)]),
                       (0, 5, [F(1, 8), F(1, 4), F(3, 8), F(1, 2)]),
                       (1, 2, [F(3, 8)]),
                       (1, 3, [F(1, 4), F(3, 8)]),
                       (2, 1, [])]:
        ok, report = profile0(g, n, head).is_c1()
        assert ok, (g, n, head, report)


def test_vol_eval():
    v = vol_eval(0, [0, 0, 0, F(1, 2)])
    assert v.coeff == F(3, 8) and v.pi_power == 0
    assert abs(v.as_float() - 0.375) < 1e-15
    # L'Hopital limit at t -> 1
    lim = vol_eval(0, [0, 0, 0, 1])
    assert lim.pi_power == -1 and lim.coeff == 1
    assert abs(lim.as_float() - 1 / 3.141592653589793) < 1e-12
    with pytest.raises(DomainError):
        vol_eval(1, [2])  # V_{1,1}(2) != 0: no finite limit


def test_sign_law_samples():
    import random
    rng = random.Random(7)
    checked = 0
    while checked < 60:
        g = rng.choice([0, 0, 1])
        n = rng.choice([4, 5]) if g == 0 else rng.choice([2, 3])
        head = [F(rng.randrange(0, 8), 16) for _ in range(n - 1)]
        last = F(rng.randrange(1, 32), 16)
        vec = head + [last]
        if sum(vec) >= 2 * g - 2 + n:
            continue
        if any(x == int(x) for x in vec):
            continue
        value = v_eval(g, vec)
        sign = 1
        for x in vec:
            if x > 0:
                import math
                sign *= 1 if math.sin(math.pi * float(x)) > 0 else -1
        assert value * sign >= 0, (g, vec)
        checked += 1


def test_vp1_factor_matches_pointwise():
    # factor value == v_eval route for y <= 1
    f = vp1_factor(0, (F(1, 4), F(3, 8)))
    for y in [F(1, 8), F(3, 8), F(5, 8), F(7, 8)]:
        vec = canonicalize([F(1, 4), F(3, 8), y])
        sign = 1  # V^0_{0,3} is the indicator itself
        from hypvol.volumes import v0_value
        assert f.eval(y) == v0_value(0, vec), y
    g = vp1_factor(1, (F(1, 4),))
    from hypvol.volumes import v0_value
    for y in [F(1, 8), F(1, 2), F(3, 4), F(15, 16)]:
        assert g.eval(y) == v0_value(1, canonicalize([F(1, 4), y])), y


def test_wall_candidates():
    walls = wall_candidates(1, 2, [F(1, 4)])
    assert F(3, 4) in walls and F(7, 4) in walls
    walls04 = wall_candidates(0, 4, [0, 0, 0])
    assert walls04 == [F(1), F(2)]
    # true breakpoints are contained in the candidate set
    for g, n, head in [(0, 4, [F(1, 8), 0, 0]), (1, 2, [F(1, 4)]),
                       (0, 5, [F(1, 8), F(1, 4), F(3, 8), F(1, 2)])]:
        prof = profile0(g, n, head).simplify()
        cand = set(wall_candidates(g, n, head)) | {F(0)}
        assert set(prof.breakpoints) <= cand, (g, n, head)


def test_profile_by_interpolation_cross_check():
    for g, n, head in [(0, 4, [F(1, 8), 0, 0]),
                       (1, 2, [F(1, 4)]),
                       (0, 5, [F(1, 8), F(1, 4), F(3, 8), F(1, 2)])]:
        assert profile_by_interpolation(g, n, head) == profile0(g, n, head)


def test_v_profile_levels():
    vp = v_profile(0, 4, [0, 0, 0], ell=2)
    assert vp.profile == PiecewisePoly.zero(0, 2)
    with pytest.raises(DomainError):
        v_profile(0, 4, [F(3, 4), 0, 0])


def test_fig1_table():
    rows = fig1_table(4, 8)
    by_x = {row[0]: row for row in rows}
    assert by_x[F(1)][1] == 0
    assert by_x[F(2)][1] == 0
    assert by_x[F(1, 2)][1] == F(3, 8)
    assert by_x[F(3, 2)][1] == F(-1, 4)
    assert by_x[F(3, 2)][3] > 0  # normalized value stays positive
    rows3 = fig1_table(3, 4)
    assert [r[1] for r in rows3] == [1, 1, 1, 0, 0]
