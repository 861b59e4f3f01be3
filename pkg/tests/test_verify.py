import time

import pytest

from hardycs import verify


@pytest.mark.slow
def test_full_verify_passes_within_budget():
    t = time.perf_counter()
    res = verify.run_all()
    elapsed = time.perf_counter() - t
    assert res.ok, [c.name for c in res.checks if not c.passed]
    assert elapsed < 60
    assert "within tolerance" in res.info[0]


def test_no_check_names_duplicated():
    res = verify.run_all(grid=[0.5, 0.4j])
    names = [c.name for c in res.checks]
    assert len(names) == len(set(names))


def test_merge_keeps_worst():
    from hardycs.obstruction import Check

    a = verify.PointResult(0.1, (Check("x[1]", 1e-12, 1e-9, True),), 0.0)
    b = verify.PointResult(0.2, (Check("x[2]", 1e-3, 1e-9, False),), 0.0)
    (m,) = verify._merge([a, b])
    assert m.name == "x" and not m.passed and m.delta == 1e-3
