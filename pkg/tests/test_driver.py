import math
from dataclasses import replace

import pytest

from translab import (
    ConfigError,
    DomainError,
    SweepConfig,
    SweepRecord,
    fit_slope,
    holder_lower_bound,
    parse_config,
    read_csv,
    sweep,
    write_csv,
)

BASE = SweepConfig(alpha=1.0, lam=1.0, d=1, m=1, p=0, j_min=6, j_max=16)


class TestSweep:
    def test_identity_band_steps(self):
        records = sweep(BASE)
        assert len(records) == 11
        by_j = {round(-math.log2(r.eps)): r for r in records}
        for j in range(6, 11):
            assert by_j[j].n0 == 1 and by_j[j].certified_lb == 2 and by_j[j].paper_lb == 2
        for j in range(11, 17):
            assert by_j[j].n0 == 2 and by_j[j].certified_lb == 18 and by_j[j].paper_lb == 16

    def test_record_invariants(self):
        records = sweep(replace(BASE, adversary=True, j_max=10))
        for r in records:
            if r.n0 >= 1:
                assert r.theory_lb <= r.certified_lb
            if r.adversary_ub is not None:
                assert r.certified_lb <= r.adversary_ub

    def test_empty_range(self, tmp_path):
        records = sweep(replace(BASE, j_min=7, j_max=6))
        assert records == []
        path = tmp_path / "empty.csv"
        write_csv(records, path)
        assert path.read_text().splitlines() == [
            "eps,n0,certified_lb,paper_lb,theory_lb,adversary_ub,theory_ub,wall_ms"
        ]
        assert read_csv(path) == []

    def test_theory_lb_matches_closed_form(self):
        records = sweep(replace(BASE, alpha=0.5, j_min=6, j_max=12))
        for r in records:
            want = holder_lower_bound(1.0, 0.5, r.eps, 1, 0, 2.0)
            assert r.theory_lb == pytest.approx(want, rel=1e-10)

    def test_determinism_apart_from_wall_ms(self, tmp_path):
        cfg = replace(BASE, j_max=10, adversary=True)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(sweep(cfg), p1)
        write_csv(sweep(cfg), p2)

        def strip_wall(path):
            return ["," .join(line.split(",")[:-1]) for line in path.read_text().splitlines()]

        assert strip_wall(p1) == strip_wall(p2)

    def test_identity_chart_matches_flat_sweep(self):
        from translab import identity_chart

        flat = sweep(replace(BASE, j_max=9))
        through = sweep(replace(BASE, j_max=9), chart=identity_chart(1))
        strip = lambda rs: [replace(r, wall_ms=0) for r in rs]
        assert strip(flat) == strip(through)

    def test_chart_with_adversary_rejected(self):
        from translab import identity_chart

        with pytest.raises(ConfigError, match="flat-model"):
            sweep(replace(BASE, adversary=True, j_max=7), chart=identity_chart(1))


class TestCSV:
    def test_round_trip(self, tmp_path):
        records = sweep(replace(BASE, adversary=True, j_max=9))
        path = tmp_path / "out.csv"
        write_csv(records, path)
        assert read_csv(path) == records

    def test_absent_adversary_column(self, tmp_path):
        records = sweep(replace(BASE, j_max=7))
        path = tmp_path / "out.csv"
        write_csv(records, path)
        lines = path.read_text().splitlines()
        assert lines[1].split(",")[5] == ""
        assert read_csv(path)[0].adversary_ub is None

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("nope\n")
        with pytest.raises(ConfigError):
            read_csv(path)


class TestConfig:
    def test_parse_and_defaults(self):
        cfg = parse_config(
            "alpha = 1.0\nlambda = 2.0\nd = 1\nm = 1\np = 0\nj_min = 6\nj_max = 8\n"
        )
        assert cfg.lam == 2.0
        assert cfg.adversary is False and cfg.C == 1.0 and cfg.cw == 1.0

    def test_comments_and_blanks(self):
        cfg = parse_config(
            "# sweep setup\nalpha=1\nlambda=1\n\nd=1\nm=1\np=0\nj_min=6\nj_max=6\nadversary=true\nC=0.5\n"
        )
        assert cfg.adversary is True and cfg.C == 0.5

    def test_unknown_key_is_error(self):
        with pytest.raises(ConfigError, match="unknown key 'bogus'"):
            parse_config("alpha=1\nbogus=2\n")

    def test_missing_keys_named(self):
        with pytest.raises(ConfigError, match="missing keys"):
            parse_config("alpha=1\n")

    def test_field_validation_messages(self):
        with pytest.raises(ConfigError, match="alpha"):
            SweepConfig(alpha=2.0, lam=1.0, d=1, m=1, p=0, j_min=6, j_max=8).validate()
        with pytest.raises(ConfigError, match="lambda"):
            SweepConfig(alpha=1.0, lam=0.0, d=1, m=1, p=0, j_min=6, j_max=8).validate()
        with pytest.raises(ConfigError, match="d >= m - p >= 1"):
            SweepConfig(alpha=1.0, lam=1.0, d=1, m=3, p=0, j_min=6, j_max=8).validate()
        with pytest.raises(ConfigError, match="adversary"):
            SweepConfig(alpha=1.0, lam=1.0, d=2, m=2, p=0, j_min=6, j_max=8, adversary=True).validate()

    def test_bad_value_reported_with_line(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config("alpha=abc\n")


class TestFitSlope:
    def test_upper_curve_slope_is_exact(self):
        records = sweep(replace(BASE, j_max=20))
        assert fit_slope(records, "theory_ub") == pytest.approx(-1.0, abs=1e-9)

    def test_lower_curve_slope_is_shallower(self):
        # frozen from the fit on computed envelope values over j = 6..20
        records = sweep(replace(BASE, j_max=20))
        slope = fit_slope(records, "theory_lb")
        assert slope == pytest.approx(-0.4034511217282089, abs=1e-9)
        assert slope > -1.0 + 0.05

    def test_constant_column(self):
        rows = [
            SweepRecord(2.0**-j, 1, 2, 2, 1.0, None, 5.0, 0) for j in range(6, 10)
        ]
        assert fit_slope(rows, "theory_ub") == pytest.approx(0.0, abs=1e-12)

    def test_insufficient_rows(self):
        rows = [SweepRecord(0.5, 1, 2, 2, 1.0, None, 5.0, 0)] * 2
        with pytest.raises(DomainError):
            fit_slope(rows, "theory_ub")

    def test_skips_missing_values(self):
        rows = [
            SweepRecord(2.0**-j, 1, 2, 2, 1.0, None if j % 2 else 2**j, 5.0, 0)
            for j in range(6, 14)
        ]
        assert fit_slope(rows, "adversary_ub") == pytest.approx(-1.0, abs=1e-9)
