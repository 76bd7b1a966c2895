from fractions import Fraction as F

import pytest

from hypvol.intersections import (
    CacheFormatError,
    IntersectionTable,
    UnstableError,
    dimension,
    genus0_closed_form,
    is_stable,
    kappa_psi_number,
    psi_number,
)


def multisets(total, parts):
    """Sorted exponent multisets of given size and sum."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in multisets(total - first, parts - 1):
            if rest[0] <= first:
                yield (first,) + rest


def all_cached_indices(max_dim):
    for g in range(0, 4):
        for n in range(1, max_dim - 3 * g + 3 + 1):
            if not is_stable(g, n):
                continue
            D = dimension(g, n)
            if D > max_dim or D < 0:
                continue
            for d in multisets(D, n):
                yield g, d


def test_base_constants():
    assert psi_number(0, (0, 0, 0)) == 1
    assert psi_number(1, (1,)) == F(1, 24)


def test_selection_rule_zero():
    assert psi_number(1, (0, 1)) == 0
    assert psi_number(2, (1,)) == 0


def test_unstable_rejected():
    with pytest.raises(UnstableError):
        psi_number(0, (0, 0))
    with pytest.raises(UnstableError):
        kappa_psi_number(0, (0,), 1)


def test_genus0_closed_form_oracle():
    # independent oracle: (n-3)!/prod d_i!
    assert psi_number(0, (2, 0, 0, 0, 0)) == 1
    for n in range(3, 10):
        for d in multisets(n - 3, n):
            assert psi_number(0, d) == genus0_closed_form(d), (n, d)


def test_published_values_higher_genus():
    # frozen from published Witten-Kontsevich tables
    assert psi_number(1, (0, 2)) == F(1, 24)
    assert psi_number(1, (1, 1)) == F(1, 24)
    assert psi_number(1, (2, 1, 0)) == F(1, 12)
    assert psi_number(1, (1, 1, 1)) == F(1, 12)
    assert psi_number(2, (4,)) == F(1, 1152)
    assert psi_number(2, (5, 0)) == F(1, 1152)
    assert psi_number(2, (4, 1)) == F(1, 384)
    assert psi_number(2, (3, 2)) == F(29, 5760)
    assert psi_number(3, (7,)) == F(1, 82944)
    assert psi_number(3, (7, 1)) == F(5, 82944)
    assert psi_number(3, (6, 2)) == F(77, 414720)
    assert psi_number(3, (5, 3)) == F(503, 1451520)
    assert psi_number(3, (4, 4)) == F(607, 1451520)


def test_string_and_dilaton_on_cached_range():
    for g, d in all_cached_indices(9):
        if 0 in d and is_stable(g, len(d) - 1):
            rest = list(d)
            rest.remove(0)
            lhs = psi_number(g, d)
            rhs = sum((psi_number(g, tuple(sorted(rest[:j] + [e - 1] + rest[j + 1:],
                                                  reverse=True)))
                       for j, e in enumerate(rest) if e >= 1), F(0))
            assert lhs == rhs, (g, d)
        if 1 in d and len(d) >= 2:
            rest = list(d)
            rest.remove(1)
            if is_stable(g, len(rest)):
                assert psi_number(g, d) == (2 * g - 2 + len(d) - 1) * psi_number(g, rest)


def test_kappa_spec_examples():
    assert kappa_psi_number(1, (0,), 1) == F(1, 24)
    assert kappa_psi_number(0, (0, 0, 0, 0), 1) == 1
    assert kappa_psi_number(0, (0, 0, 0, 0, 0), 2) == 5
    # m = 0 delegates to the psi table
    assert kappa_psi_number(1, (1,), 0) == psi_number(1, (1,))


def test_kappa_values_used_by_mirzakhani():
    # cross-checked by the Do-Norbury identity downstream
    assert kappa_psi_number(0, (0, 0, 0, 0, 0), 1) == 0  # off-dimension
    assert kappa_psi_number(0, (1, 0, 0, 0, 0), 1) == 3
    assert kappa_psi_number(1, (0, 0), 2) == F(1, 8)
    assert kappa_psi_number(1, (1, 0), 1) == F(1, 12)


def test_kappa_selection_rule():
    # nonzero only at sum(d) + m = 3g - 3 + n
    assert kappa_psi_number(1, (0,), 2) == 0
    assert kappa_psi_number(0, (0, 0, 0, 0), 3) == 0


def test_cache_roundtrip(tmp_path):
    table = IntersectionTable()
    table.psi(1, (1,))
    table.kappa_psi(0, (0, 0, 0, 0), 1)
    path = tmp_path / "cache.txt"
    table.store(path)
    assert not table.dirty
    fresh = IntersectionTable()
    fresh.load(path)
    assert fresh.stats()["psi_entries"] == table.stats()["psi_entries"]
    assert fresh.psi(1, (1,)) == F(1, 24)
    # store-then-load identity on bytes
    fresh.store(tmp_path / "cache2.txt")
    assert (tmp_path / "cache.txt").read_text() == (tmp_path / "cache2.txt").read_text()


def test_cache_errors(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("wkcache v1\n")
    table = IntersectionTable()
    table.load(empty)
    assert table.stats()["psi_entries"] == 0

    bad_header = tmp_path / "bad.txt"
    bad_header.write_text("something else\n")
    with pytest.raises(CacheFormatError):
        IntersectionTable().load(bad_header)

    corrupt = tmp_path / "corrupt.txt"
    corrupt.write_text("wkcache v1\npsi 1 x 1/24\n")
    with pytest.raises(CacheFormatError) as err:
        IntersectionTable().load(corrupt)
    assert ":2:" in str(err.value)
