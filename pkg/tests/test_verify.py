"""Unit tests for the identity-suite runner."""

import pytest

import ginprod.combinatorics
import ginprod.moment_engine
from ginprod.verify import PROFILES, run_verify


class TestRunVerify:
    def test_quick_profile_is_green(self):
        report = run_verify("quick")
        assert report.ok
        assert report.checks > 1000
        assert [s.name for s in report.suites] == [
            "cross_formula",
            "beta_bounds",
            "stirling",
            "dominance",
            "asymptotic",
        ]
        assert all(s.checks > 0 for s in report.suites)

    def test_report_serializes(self):
        report = run_verify("quick")
        doc = report.as_dict()
        assert doc["profile"] == "quick"
        assert doc["ok"] is True
        assert len(doc["suites"]) == 5

    def test_unknown_profile_rejected(self):
        with pytest.raises(ValueError):
            run_verify("exhaustive")
        assert PROFILES == ("quick", "full")


class TestFaultInjection:
    def test_corrupted_stirling_route_is_caught(self, monkeypatch):
        # Corrupt one value of the alternating-sum route; the route-
        # agreement suite must localize it.
        real = ginprod.combinatorics.stirling2_alternating

        def corrupted(n, k):
            value = real(n, k)
            return value + 1 if (n, k) == (7, 3) else value

        monkeypatch.setattr(ginprod.combinatorics, "stirling2_alternating", corrupted)
        report = run_verify("quick")
        assert not report.ok
        stirling = next(s for s in report.suites if s.name == "stirling")
        assert any(f.point == (7, 3) for f in stirling.failures)

    def test_corrupted_moment_engine_is_caught(self, monkeypatch):
        real = ginprod.moment_engine.moment_falling_sum

        def corrupted(query):
            value = real(query)
            if (query.m, query.n, query.k) == (1, 5, 2):
                return ginprod.moment_engine.MomentValue(
                    value=value.value + 1, scaled=value.scaled
                )
            return value

        monkeypatch.setattr(ginprod.moment_engine, "moment_falling_sum", corrupted)
        report = run_verify("quick")
        assert not report.ok
        cross = next(s for s in report.suites if s.name == "cross_formula")
        assert any(f.point == (1, 5, 2) for f in cross.failures)
