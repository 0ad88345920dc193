"""CLI: config loading, subcommands, export schemas, exit codes."""

import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from robinstrip import load_config, read_wavefunction
from robinstrip.cli import main
from robinstrip.errors import ConfigError
from robinstrip.outputs import CSV_HEADER

BASE_YAML = """\
well:
  alpha0: 20.0
  alpha1: 5.0
  a: 0.3
  d: 1.0
matching:
  N: 16
"""


@pytest.fixture
def base_cfg(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(BASE_YAML + f"output:\n  dir: {tmp_path / 'out'}\n")
    return path


class TestConfigLoading:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text(
            "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\n"
            "matching: {N: 24, scan_points: 300, tol: 1.0e-11}\n"
            "sweep: {parameter: alpha_pair, values: [[50, 3], [70, 2]]}\n"
            "oracle: {L: 6.0, refinements: 2, closure: neumann}\n"
            "output: {dir: results, formats: [csv, svg]}\n"
        )
        cfg = load_config(str(path))
        assert cfg.well.alpha0 == 20.0
        assert cfg.matching.N == 24
        assert cfg.sweep.values == ((50.0, 3.0), (70.0, 2.0))
        assert cfg.oracle.closure == "neumann"
        assert cfg.output.formats == ("csv", "svg")

    @pytest.mark.parametrize("text", [
        "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\nextra: {}\n",
        "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1, radius: 2}\n",
        "matching: {N: 16}\n",                                    # no well
        "well: {alpha0: -1, alpha1: 5, a: 0.3, d: 1}\n",
        "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\nmatching: {N: 1}\n",
        "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\nsweep: {parameter: b}\n",
        "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\noutput: {formats: [png]}\n",
        "[1, 2, 3]\n",
    ])
    def test_rejects_bad_configs(self, tmp_path, text):
        path = tmp_path / "bad.yaml"
        path.write_text(text)
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/nonexistent/run.yaml")

    def test_yaml11_exponent_literals(self, tmp_path):
        # YAML 1.1 parses 1e-5 as a string; numeric fields must accept it
        path = tmp_path / "c.yaml"
        path.write_text("well: {alpha0: 1e5, alpha1: 1e-5, a: 0.3, d: 1}\n")
        cfg = load_config(str(path))
        assert cfg.well.alpha0 == 1e5
        assert cfg.well.alpha1 == 1e-5

    @pytest.mark.parametrize("text", [
        "well: {alpha0: twenty, alpha1: 5, a: 0.3, d: 1}\n",
        "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\nmatching: {N: 16.5}\n",
        "well: {alpha0: true, alpha1: 5, a: 0.3, d: 1}\n",
    ])
    def test_rejects_non_numeric_fields(self, tmp_path, text):
        path = tmp_path / "bad.yaml"
        path.write_text(text)
        with pytest.raises(ConfigError):
            load_config(str(path))


class TestSpectrum:
    def test_csv_schema_and_content(self, base_cfg, tmp_path, capsys):
        assert main(["spectrum", "--config", str(base_cfg)]) == 0
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 2
        fields = lines[1].split(",")
        assert len(fields) == 9
        assert fields[1] == "symmetric"
        assert fields[2] == "1"
        lam = float(fields[3])
        assert float(fields[0]) == 0.3                     # sweep value a/d
        assert float(fields[4]) == lam * (1.0 / np.pi) ** 2
        assert float(fields[6]) < lam < float(fields[7])   # bracket columns
        csv_path = tmp_path / "out" / "spectrum.csv"
        assert csv_path.read_text().split("\n")[0] == CSV_HEADER

    def test_byte_stable(self, base_cfg, tmp_path, capsys):
        main(["spectrum", "--config", str(base_cfg)])
        first = (tmp_path / "out" / "spectrum.csv").read_bytes()
        main(["spectrum", "--config", str(base_cfg)])
        assert (tmp_path / "out" / "spectrum.csv").read_bytes() == first
        assert b"\r" not in first

    def test_no_well_flags_is_config_error(self, capsys):
        assert main(["spectrum", "--alpha0", "20"]) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_constant_profile_zero_rows(self, tmp_path, capsys):
        code = main(["spectrum", "--alpha0", "20", "--alpha1", "20", "--a", "0.3",
                     "--d", "1", "--N", "8", "--out-dir", str(tmp_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert out.strip() == CSV_HEADER


class TestSweep:
    def test_a_family_with_all_formats(self, tmp_path, capsys):
        cfg = tmp_path / "run.yaml"
        cfg.write_text(
            "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\n"
            "matching: {N: 12}\n"
            "sweep: {parameter: a, values: [1.2, 0.4, 0.8]}\n"   # unsorted on purpose
            f"output: {{dir: {tmp_path / 'out'}, formats: [csv, json, svg]}}\n"
        )
        assert main(["sweep", "--config", str(cfg)]) == 0
        csv_lines = (tmp_path / "out" / "sweep_a.csv").read_text().strip().split("\n")
        assert csv_lines[0] == CSV_HEADER
        rows = [line.split(",") for line in csv_lines[1:]]
        sweep_vals = [float(r[0]) for r in rows]
        assert sweep_vals == sorted(sweep_vals)
        for r in rows:
            assert float(r[6]) <= float(r[3]) <= float(r[7])
        data = json.loads((tmp_path / "out" / "sweep_a.json").read_text())
        assert len(data) == len(rows)
        assert data[0]["sector"] in ("symmetric", "antisymmetric")
        svg = ET.parse(tmp_path / "out" / "sweep_a.svg").getroot()
        assert svg.tag.endswith("svg")
        # branches with >= 2 sweep points are polylines, singletons are circles
        from collections import Counter
        counts = Counter(r[2] for r in rows)
        polylines = [e for e in svg.iter() if e.tag.endswith("polyline")]
        circles = [e for e in svg.iter() if e.tag.endswith("circle")]
        assert len(polylines) == sum(1 for c in counts.values() if c >= 2)
        assert len(circles) == sum(1 for c in counts.values() if c == 1)

    def test_empty_sweep(self, tmp_path, capsys):
        cfg = tmp_path / "run.yaml"
        cfg.write_text(
            "well: {alpha0: 20, alpha1: 5, a: 0.3, d: 1}\n"
            "sweep: {parameter: a, values: []}\n"
            f"output: {{dir: {tmp_path / 'out'}}}\n"
        )
        assert main(["sweep", "--config", str(cfg)]) == 0
        lines = (tmp_path / "out" / "sweep_a.csv").read_text().strip().split("\n")
        assert lines == [CSV_HEADER]

    def test_sweep_without_spec_is_config_error(self, base_cfg, capsys):
        assert main(["sweep", "--config", str(base_cfg)]) == 2


class TestWavefunction:
    def test_export_normalized_and_symmetric(self, base_cfg, tmp_path, capsys):
        code = main(["wavefunction", "--config", str(base_cfg),
                     "--nx", "81", "--ny", "33", "--xmax", "3.0"])
        assert code == 0
        x, y, vals, lam, parity = read_wavefunction(
            str(tmp_path / "out" / "wavefunction_1.txt"))
        assert parity == "symmetric"
        assert vals.shape == (81, 33)
        assert np.allclose(vals, vals[::-1, :], atol=1e-12)
        nrm = np.sqrt(np.trapezoid(np.trapezoid(vals**2, y, axis=1), x))
        assert nrm == pytest.approx(1.0, abs=1e-9)
        assert 5.2 < lam < 8.2

    def test_missing_ordinal_is_numerical_failure(self, base_cfg, capsys):
        assert main(["wavefunction", "--config", str(base_cfg), "--ordinal", "7"]) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestOracleCommand:
    def test_comparison_table(self, tmp_path, capsys):
        code = main(["oracle", "--alpha0", "20", "--alpha1", "5", "--a", "0.3",
                     "--d", "1", "--N", "12", "--out-dir", str(tmp_path),
                     "--L", "4", "--refinements", "2"])
        assert code == 0
        lines = (tmp_path / "oracle_compare.csv").read_text().strip().split("\n")
        assert lines[0] == "index,lambda_matching,lambda_oracle,abs_diff"
        assert len(lines) == 2
        _, lam_m, lam_o, diff = lines[1].split(",")
        assert abs(float(lam_m) - float(lam_o)) == pytest.approx(float(diff))
        assert float(diff) < 0.05


class TestExistenceCommand:
    def test_report_file(self, tmp_path, capsys):
        code = main(["existence", "--alpha0", "20", "--alpha1", "5", "--a", "0.3",
                     "--d", "1", "--n-max", "48", "--out-dir", str(tmp_path)])
        assert code == 0
        assert "certified" in capsys.readouterr().out
        data = json.loads((tmp_path / "existence.json").read_text())
        assert data["well_hypothesis"] is True
        assert data["first_negative_n"] == 40
        assert len(data["q_values"]) == 48

    def test_inverted_well_reports_no_claim(self, tmp_path, capsys):
        code = main(["existence", "--alpha0", "5", "--alpha1", "20", "--a", "0.3",
                     "--d", "1", "--n-max", "4", "--out-dir", str(tmp_path)])
        assert code == 0
        assert "no claim" in capsys.readouterr().out
