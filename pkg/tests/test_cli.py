import json
import math

import numpy as np

from orbent import cli, fock, stateio
from orbent.sampling import random_state

from conftest import state_from_weights

LN2 = math.log(2.0)


def run(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def singlet_file(tmp_path):
    basis = fock.build_symmetry_basis("number")
    path = tmp_path / "singlet.json"
    stateio.save_state(path, fock.pure_state(basis.vector(fock.SINGLET)))
    return str(path)


class TestFormulaCommand:
    def test_singlet_value(self, tmp_path, capsys):
        code, out, _ = run(["formula", singlet_file(tmp_path)], capsys)
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["value_nats"] - LN2) < 1e-12
        assert payload["variant"] == "number-ssr-singlet"
        assert payload["units"] == "nats"
        assert payload["r"] == 0.0 and payload["t"] == 1.0
        assert abs(sum(payload["q_star"]) - 1.0) < 1e-9
        expected_keys = {"value_nats", "variant", "p", "q_star", "r", "t",
                         "r_prime", "t_prime"}
        assert expected_keys <= set(payload)
        assert len(payload["p"]) == 16

    def test_product_state_is_zero(self, tmp_path, capsys):
        path = tmp_path / "product.json"
        stateio.save_state(path, fock.TwoOrbitalState(np.diag(np.eye(16)[5])))
        code, out, _ = run(["formula", str(path)], capsys)
        assert code == 0
        assert json.loads(out)["value_nats"] == 0.0

    def test_bits_conversion(self, tmp_path, capsys):
        code, out, _ = run(["formula", singlet_file(tmp_path), "--bits"], capsys)
        payload = json.loads(out)
        assert abs(payload["value_bits"] - 1.0) < 1e-10
        assert payload["units"] == "bits"

    def test_insufficient_symmetry_exit_code(self, tmp_path, capsys):
        rng = np.random.default_rng(3)
        path = tmp_path / "generic.json"
        stateio.save_state(path, random_state(rng))
        code, _, err = run(["formula", str(path)], capsys)
        assert code == cli.EXIT_INSUFFICIENT_SYMMETRY
        assert "oracle" in err

    def test_degenerate_sector_exit_code(self, tmp_path, capsys):
        weights = np.zeros(16)
        weights[fock.SINGLET] = 0.55
        weights[fock.TRIPLET_ZERO] = 0.05
        weights[fock.TRIPLET_UP] = 0.12
        weights[fock.VACUUM] = 1.0 - weights.sum()
        path = tmp_path / "degenerate.json"
        stateio.save_state(path, state_from_weights(weights))
        code, _, err = run(["formula", str(path)], capsys)
        assert code == cli.EXIT_DEGENERATE_SECTOR
        assert "oracle" in err

    def test_missing_file(self, capsys):
        code, _, err = run(["formula", "no-such-file.json"], capsys)
        assert code == cli.EXIT_USAGE

    def test_twirl_coherence_flag(self, tmp_path, capsys):
        basis = fock.build_symmetry_basis("number")
        weights = np.zeros(16)
        weights[[fock.SINGLET, fock.TRIPLET_ZERO]] = 0.5, 0.1
        weights[[fock.TRIPLET_UP, fock.TRIPLET_DOWN]] = 0.05, 0.05
        weights[fock.VACUUM] = 1.0 - weights.sum()
        v = basis.vectors
        m = (v * weights) @ v.conj().T
        m += 0.05 * (np.outer(v[:, fock.SINGLET], v[:, fock.TRIPLET_ZERO])
                     + np.outer(v[:, fock.TRIPLET_ZERO], v[:, fock.SINGLET]))
        path = tmp_path / "coherent.json"
        stateio.save_state(path, fock.TwoOrbitalState(m))
        code, _, _ = run(["formula", str(path)], capsys)
        assert code == cli.EXIT_INSUFFICIENT_SYMMETRY
        code, out, _ = run(["formula", str(path), "--twirl-coherence"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["coherence_twirled"] is True
        assert payload["value_nats"] > 0.0


class TestInspectCommand:
    def test_report_fields(self, tmp_path, capsys):
        code, out, _ = run(["inspect", singlet_file(tmp_path)], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["symmetries"]["total_spin"]["ok"] is True
        assert len(payload["weights"]) == 16


class TestOracleVerifyCommand:
    def test_random_batch(self, capsys):
        code, out, _ = run(["oracle-verify", "--n", "50", "--seed", "7"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["max_abs_delta"] <= 1e-6
        for variant in ("singlet", "general", "parity"):
            assert payload[variant]["n"] == 50

    def test_threshold_failure_exit(self, capsys):
        code, out, _ = run(
            ["oracle-verify", "--n", "5", "--seed", "7", "--threshold", "1e-300"], capsys
        )
        assert code == cli.EXIT_FAILURE

    def test_file_mode_with_degenerate_sector(self, tmp_path, capsys):
        weights = np.zeros(16)
        weights[fock.SINGLET] = 0.55
        weights[fock.TRIPLET_ZERO] = 0.05
        weights[fock.TRIPLET_UP] = 0.12
        weights[fock.VACUUM] = 1.0 - weights.sum()
        path = tmp_path / "degenerate.json"
        stateio.save_state(path, state_from_weights(weights))
        code, out, _ = run(["oracle-verify", str(path)], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["formula_value_nats"] is None
        assert "formula_unavailable" in payload
        assert payload["oracle_value_nats"] > 0.0

    def test_file_mode_agreement(self, tmp_path, capsys):
        code, out, _ = run(["oracle-verify", singlet_file(tmp_path)], capsys)
        payload = json.loads(out)
        assert payload["abs_delta"] < 1e-12


class TestScanCommands:
    def test_free_fermion_scan_format(self, capsys):
        code, out, _ = run(
            ["free-fermion-scan", "--eta-grid", "0.5", "--l-max", "3"], capsys
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("# config:")
        assert lines[1] == "eta,l,E_nats"
        rows = [line.split(",") for line in lines[2:]]
        assert len(rows) == 3
        assert float(rows[1][2]) == 0.0  # l = 2 at half filling

    def test_lmin_grid(self, capsys):
        code, out, _ = run(["lmin", "--eta-grid", "0.1:0.9:9"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 2 + 9
        first = lines[2].split(",")
        assert first[0] == "0.1" and first[1] == "5"

    def test_ehm_scan(self, capsys):
        code, out, _ = run(
            ["ehm-scan", "--L", "4", "--U", "4", "--V", "0:1:2", "--pivot", "2"], capsys
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[1] == "U,V,E_strong_nats,E_weak_nats,delta"
        assert len(lines) == 2 + 2

    def test_byte_identical_reruns(self, capsys):
        args = ["oracle-verify", "--n", "20", "--seed", "11"]
        _, first, _ = run(args, capsys)
        _, second, _ = run(args, capsys)
        assert first == second


class TestDimerCommand:
    def test_values(self, capsys):
        code, out, _ = run(["dimer", "--U", "0"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["energy"] - (-2.0)) < 1e-10
        assert abs(payload["energy_analytic"] - (-2.0)) < 1e-12
        assert abs(payload["entanglement_number_rule_nats"] - 0.5 * LN2) < 1e-10
        assert payload["entanglement_parity_rule_nats"] >= payload["entanglement_number_rule_nats"]


class TestSeniorityCommand:
    def test_total(self, tmp_path, capsys):
        basis = fock.build_symmetry_basis("number")
        singlet_path = tmp_path / "a.json"
        stateio.save_state(singlet_path, fock.pure_state(basis.vector(fock.SINGLET)))
        trivial_path = tmp_path / "b.json"
        stateio.save_state(trivial_path, fock.TwoOrbitalState(np.diag(np.eye(16)[0])))
        code, out, _ = run(["seniority", str(singlet_path), str(trivial_path)], capsys)
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["total_nats"] - LN2) < 1e-10
        assert payload["partial"] is False

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "out.json"
        code, out, _ = run(["dimer", "--U", "1", "-o", str(target)], capsys)
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["version"]
