import logging
from math import comb

import pytest

from areawalk.enumerator import (
    AreaHistogram,
    EnumerationConfig,
    Mode,
    ResourceLimitError,
    area_distribution,
    closed_area_histogram,
    endpoint_count,
    estimate_memory,
    full_series_counts,
    parse_threads,
    self_test,
    verify,
)
from areawalk.series import Strategy
from areawalk.tables import ReferenceColumn, histogram_columns, reference_columns
from areawalk.walks import OracleLimitError, brute_force_distribution

BIG = EnumerationConfig(mode=Mode.BIGINT)
MOD = EnumerationConfig(mode=Mode.MODULAR)
ALL_CONFIGS = [
    EnumerationConfig(strategy=s, mode=m) for s in Strategy for m in Mode
]


@pytest.mark.parametrize("cfg", ALL_CONFIGS, ids=lambda c: f"{c.mode.value}-{c.strategy.value}")
def test_closed_n16(cfg):
    h = closed_area_histogram(16, cfg)
    assert (h[0], h[5], h[16], h[17]) == (33820044, 2289760, 16, 0)
    assert h.total() == comb(16, 8) ** 2 == 165636900


def test_closed_small():
    assert closed_area_histogram(2).counts == {0: 4}
    h = closed_area_histogram(32)
    assert h[0] == 35816909974343308 and h[64] == 32 and h[65] == 0


def test_odd_closed_is_empty(caplog):
    with caplog.at_level(logging.WARNING):
        h = closed_area_histogram(7)
    assert not h and h.rows() == []
    assert "no closed walks for odd n" in caplog.text


def test_area_distribution_examples():
    assert area_distribution(4, 1, 1).counts == {-1: 2, 0: 10, 1: 10, 2: 2}
    assert not area_distribution(3, 0, 0)
    oracle = brute_force_distribution(6, (2, 0))
    assert area_distribution(6, 2, 0).counts == {s: c for (_, _, s), c in oracle.items()}
    assert area_distribution(0, 0, 0).counts == {0: 1}
    assert not area_distribution(4, 5, 0)


@pytest.mark.parametrize("endpoint", [(0, 0), (1, 0), (3, -2), (-5, 4), (10, 1)])
def test_modes_agree_off_origin(endpoint):
    for n in (11, 12):
        a = area_distribution(n, *endpoint, BIG)
        b = area_distribution(n, *endpoint, MOD)
        c = area_distribution(n, *endpoint, EnumerationConfig(strategy="binary"))
        assert a.counts == b.counts == c.counts


def test_endpoint_count():
    assert endpoint_count(16, 0, 0) == 12870**2 == 165636900
    assert endpoint_count(3, 0, 0) == 0
    assert endpoint_count(2, 1, 1) == 2
    assert endpoint_count(4, 5, 0) == 0


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 14, 16, 20, 24, 32, 48])
def test_closed_histogram_shape(n):
    h = closed_area_histogram(n)
    assert h.is_symmetric()
    assert h.is_unimodal()
    assert h.peak() == 0
    assert h.total() == comb(n, n // 2) ** 2
    top = (n // 4) ** 2
    assert all(abs(s) <= n * n // 16 for s in h.counts)
    if n % 4 == 0:
        assert h[top] > 0 and h[top + 1] == 0
        assert h[top] == n


def test_histogram_rows():
    h = AreaHistogram(4, (1, 1), {-1: 2, 0: 10, 1: 10, 2: 2})
    assert h.rows() == [(0, 10), (1, 10), (2, 2)]
    assert h.rows(signed=True)[0] == (-1, 2)
    assert not h.is_symmetric()
    assert AreaHistogram(2, (0, 0), {-2: 1, 0: 1, 2: 1}).is_unimodal() is False


def test_full_series_modes_agree():
    for n in range(0, 9):
        assert full_series_counts(n, MOD) == full_series_counts(n, BIG) == brute_force_distribution(n)


def test_verify_reports():
    r = verify(2)
    assert r.ok and r.monomials_compared == 13
    assert "13 monomials compared" in r.summary()
    for n in (1, 5, 8):
        assert verify(n, BIG).ok
        assert verify(n, EnumerationConfig(strategy="binary")).ok
    with pytest.raises(OracleLimitError):
        verify(15)


def test_verify_flags_mismatch(monkeypatch):
    import areawalk.enumerator as en

    real = en.full_series_counts

    def broken(n, cfg):
        out = real(n, cfg)
        out[(0, 0, 0)] += 1
        return out

    monkeypatch.setattr(en, "full_series_counts", broken)
    r = verify(4)
    assert not r.ok
    assert r.mismatches[0][0] == (0, 0, 0)
    assert any("4^4" in msg for msg in r.failed_checks)


def test_reference_tables_shape():
    cols = reference_columns()
    assert [len(c) for c in cols] == [17, 33, 33, 33, 51]
    assert sum(len(c) for c in cols if not c.extended) == 83
    full = histogram_columns()
    assert all(len(rows) == 51 for rows in full.values())
    assert full[16][17:] == tuple((s, 0) for s in range(17, 51))
    assert dict(cols[2].rows)[0] == 165545300328587457946733114483378060


def test_self_test_base_tier():
    r = self_test()
    assert r.ok and r.checked == 83


def test_self_test_detects_tampering():
    cols = [c for c in reference_columns() if c.n == 16]
    rows = list(cols[0].rows)
    rows[3] = (3, rows[3][1] + 1)
    r = self_test(columns=[ReferenceColumn("tampered n=16", 16, tuple(rows))])
    assert not r.ok
    assert r.failures == [("tampered n=16", 3, "10127745", "10127744")]
    assert "s=3" in r.summary()


def test_resource_refusal():
    tiny = EnumerationConfig(memory_limit=1024)
    with pytest.raises(ResourceLimitError):
        closed_area_histogram(64, tiny)
    assert estimate_memory(128, 0, 0, EnumerationConfig()) < EnumerationConfig().memory_limit
    big_threads = EnumerationConfig(threads=9)
    assert estimate_memory(128, 0, 0, big_threads) == 9 * estimate_memory(128, 0, 0, EnumerationConfig())


def test_threads_do_not_change_results():
    one = closed_area_histogram(48, EnumerationConfig(threads=1))
    many = closed_area_histogram(48, EnumerationConfig(threads=4))
    assert one == many


def test_checkpoints_written_and_resumed(tmp_path, monkeypatch):
    cfg = EnumerationConfig(checkpoint_dir=tmp_path)
    first = closed_area_histogram(20, cfg)
    files = sorted(tmp_path.iterdir())
    assert len(files) == len(first.basis)
    assert files[0].read_text().startswith("# n=20 p=")

    import areawalk.dense as dense

    def fail(*args):
        raise AssertionError("should have resumed from checkpoint")

    monkeypatch.setattr(dense, "area_profile_mod", fail)
    assert closed_area_histogram(20, cfg) == first


def test_config_validation():
    with pytest.raises(ValueError):
        EnumerationConfig(oracle_cap=21)
    with pytest.raises(ValueError):
        EnumerationConfig(threads=0)
    assert parse_threads("max") >= 1
    with pytest.raises(ValueError):
        parse_threads("0")
