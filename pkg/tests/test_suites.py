import pytest

from tsppsd.suites import SUITES, run_suite


@pytest.mark.parametrize(
    "name,n_max",
    [
        ("paths", 6),
        ("moment", 6),
        ("certificates", 6),
        ("spectra", 7),
        ("bounds", 6),
        ("zero-one", None),
    ],
)
def test_each_suite_passes_at_desk_scale(name, n_max):
    checks = run_suite(name, n_max)
    assert checks, name
    failures = [c for c in checks if c["status"] != "pass"]
    assert not failures, failures[:3]
    ids = [c["id"] for c in checks]
    assert ids == sorted(ids)


def test_suite_results_are_seed_stable():
    a = run_suite("zero-one", seed=7)
    b = run_suite("zero-one", seed=7)
    assert a == b


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("everything")
    assert "all" in SUITES
