import pytest
import yaml
from click.testing import CliRunner

from refined_euler.cli import cli

pytestmark = pytest.mark.integration


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner, instances_dir):
    def _invoke(*args, env=None):
        resolved = [str(instances_dir / a) if a.endswith(".yaml") and "/" not in a else a for a in args]
        return runner.invoke(cli, resolved, env=env)

    return _invoke


class TestValidate:
    def test_valid(self, invoke):
        result = invoke("validate", "qz_degree3.yaml")
        assert result.exit_code == 0
        assert "valid" in result.output

    def test_invalid(self, invoke):
        result = invoke("validate", "missing_tau.yaml")
        assert result.exit_code == 1
        assert "tau-missing" in result.output

    def test_parse_error(self, invoke, tmp_path):
        broken = tmp_path / "broken.yaml"
        broken.write_text("complex:\n  terms:\n    - free_rnk: 1\n")
        result = invoke("validate", str(broken))
        assert result.exit_code == 1
        assert "Parsing failed" in result.output
        assert "line 3" in result.output

    def test_missing_file(self, invoke, tmp_path):
        assert invoke("validate", str(tmp_path / "nope.yaml")).exit_code == 2


class TestInvariants:
    def test_chi(self, invoke):
        result = invoke("chi", "qz_degree3.yaml")
        assert result.exit_code == 0
        assert result.output.strip() == "1"

    def test_chi_l(self, invoke):
        result = invoke("chi-l", "z_plus_qz_degree3.yaml", "--primes", "2,3,5")
        assert result.exit_code == 0
        assert result.output.splitlines() == ["2: 0", "3: 0", "5: 0"]

    def test_chi_l_default_primes(self, invoke):
        result = invoke("chi-l", "q_onto_qz.yaml", env={"NPC_DEFAULT_PRIMES": "[11]"})
        assert result.exit_code == 0
        assert result.output.splitlines() == ["11: 1"]

    def test_chi_l_rejects_composite(self, invoke):
        result = invoke("chi-l", "qz_degree3.yaml", "--primes", "6")
        assert result.exit_code == 1

    def test_chi_l_bad_prime_list(self, invoke):
        assert invoke("chi-l", "qz_degree3.yaml", "--primes", "2,x").exit_code == 2

    def test_chi_on_invalid_instance(self, invoke):
        result = invoke("chi", "missing_tau.yaml")
        assert result.exit_code == 1
        assert "Euler characteristic failed" in result.output

    def test_bit_cap(self, invoke):
        result = invoke("chi", "times_three.yaml", env={"NPC_MAX_BITS": "1"})
        assert result.exit_code == 2


class TestChiRel:
    def test_value(self, invoke):
        result = invoke("chi-rel", "z_plus_qz_degree3.yaml", "--lambda", "lambda_three.yaml")
        assert result.exit_code == 0
        assert result.output.strip() == "3/1"

    def test_lambda_is_required(self, invoke):
        assert invoke("chi-rel", "z_plus_qz_degree3.yaml").exit_code == 2

    def test_wrong_size(self, invoke, tmp_path):
        lam = tmp_path / "lam.yaml"
        lam.write_text("lambda: [[1, 0], [0, 1]]\n")
        result = invoke("chi-rel", "z_plus_qz_degree3.yaml", "--lambda", str(lam))
        assert result.exit_code == 1
        assert "Refined Euler characteristic failed" in result.output


class TestReport:
    def test_writes_report(self, invoke, tmp_path):
        out = tmp_path / "report.yaml"
        result = invoke(
            "report", "z_plus_qz_degree3.yaml", "-o", str(out), "--lambda", "lambda_three.yaml", "--primes", "2,3"
        )
        assert result.exit_code == 0
        report = yaml.safe_load(out.read_text())
        assert report["chi"] == 0
        assert report["chi_rel"]["value"] == "3/1"
        assert report["chi_rel"]["alternates_agree"]
        assert "timings" not in report

    def test_timing(self, invoke, tmp_path):
        out = tmp_path / "report.yaml"
        assert invoke("report", "times_three.yaml", "-o", str(out), "--timing").exit_code == 0
        assert "timings" in yaml.safe_load(out.read_text())

    def test_invalid_instance_still_writes(self, invoke, tmp_path):
        out = tmp_path / "report.yaml"
        result = invoke("report", "missing_tau.yaml", "-o", str(out))
        assert result.exit_code == 1
        assert yaml.safe_load(out.read_text())["validation"]["valid"] is False


class TestCheck:
    def test_single_suite(self, invoke):
        result = invoke("check", "--suite", "relk", "--cases", "5", "--seed", "3", "--no-progress")
        assert result.exit_code == 0
        assert "30/30 pass" in result.output

    def test_single_property_at_large_bounds(self, invoke):
        args = ["--suite", "linalg", "--property", "snf", "--entry", "50", "--matrix", "8", "--cases", "3"]
        result = invoke("check", *args, "--no-progress")
        assert result.exit_code == 0
        assert "3/3 pass" in result.output

    def test_property_needs_a_suite(self, invoke):
        assert invoke("check", "--property", "snf", "--cases", "1").exit_code == 2

    def test_unknown_property(self, invoke):
        assert invoke("check", "--suite", "linalg", "--property", "nope", "--no-progress").exit_code == 2

    def test_bounds_are_limited(self, invoke):
        assert invoke("check", "--suite", "linalg", "--entry", "51").exit_code == 2

    def test_unknown_suite(self, invoke):
        assert invoke("check", "--suite", "nope").exit_code == 2

    def test_cases_must_be_positive(self, invoke):
        assert invoke("check", "--cases", "0").exit_code == 2
