import csv
import io
import json
import math

import numpy as np
import pytest

from nmcband.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_spectrum_table(capsys):
    code, out = run_cli(
        ["spectrum", "--alpha", "0.5", "--radius", "1.0", "--k-max", "16"], capsys
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["k", "mu_k_closed", "mu_k_quadrature", "rel_dev"]
    assert len(rows) == 17
    mus = [float(r[1]) for r in rows]
    assert mus[0] < 0.0
    assert all(a < b for a, b in zip(mus, mus[1:]))
    assert all(float(r[3]) < 1e-8 for r in rows)


def test_csv_cells_roundtrip_doubles(capsys):
    code, out = run_cli(
        ["spectrum", "--alpha", "0.5", "--radius", "1.0", "--k-max", "3"], capsys
    )
    _, rows = parse_csv(out)
    for row in rows:
        for cell in row[1:]:
            x = float(cell)
            assert format(x, ".17g") == cell


def test_radii_table(capsys):
    code, out = run_cli(["radii", "--alpha", "0.5", "--m", "10"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 10
    products = [int(r[0]) * float(r[1]) for r in rows]
    assert max(products) - min(products) < 1e-12
    assert all(abs(float(r[2])) < 1e-9 for r in rows)


def test_radii_sqrt_scaling(capsys):
    _, out_a = run_cli(["radii", "--alpha", "0.98", "--m", "1"], capsys)
    _, out_b = run_cli(["radii", "--alpha", "0.995", "--m", "1"], capsys)
    r_a = float(parse_csv(out_a)[1][0][1])
    r_b = float(parse_csv(out_b)[1][0][1])
    ratio = (r_a / r_b) / math.sqrt((1 - 0.98) / (1 - 0.995))
    assert abs(ratio - 1.0) < 0.1


def test_invalid_input_exit_code(capsys):
    code, _ = run_cli(["spectrum", "--alpha", "1.5", "--radius", "1.0"], capsys)
    assert code == 2
    code, _ = run_cli(["spectrum", "--alpha", "0.5", "--radius", "-1.0"], capsys)
    assert code == 2


def test_deterministic_output(capsys):
    argv = ["radii", "--alpha", "0.3", "--m", "4"]
    _, out1 = run_cli(argv, capsys)
    _, out2 = run_cli(argv, capsys)
    assert out1 == out2


def test_json_format(capsys):
    code, out = run_cli(
        ["radii", "--alpha", "0.5", "--m", "3", "--format", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 3
    assert set(payload[0]) == {"m", "R_m", "mu_m_at_Rm"}


def test_branch_json_document(capsys, tmp_path):
    out_path = tmp_path / "branch.json"
    code = main(
        [
            "branch",
            "--alpha",
            "0.6",
            "--m",
            "2",
            "--a-max",
            "0.006",
            "--steps",
            "2",
            "--modes",
            "8",
            "--out",
            str(out_path),
        ]
    )
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["m"] == 2
    gammas = {}
    for pt in doc["points"]:
        assert pt["residual_inf"] < 1e-8
        assert pt["nmc_flatness"] < 1e-5
        gammas[round(pt["a"], 12)] = pt["gamma"]
        # pi-periodic branch: odd cosine coefficients stay off
        odd = np.asarray(pt["coeffs"])[1::2]
        assert np.max(np.abs(odd)) < 1e-8
    for a, g in gammas.items():
        assert g == pytest.approx(gammas[round(-a, 12)], abs=1e-8)
    assert "symmetry_check" in doc


def test_stability_sweep_table(capsys):
    code, out = run_cli(
        [
            "stability-sweep",
            "--alpha-min",
            "0.2",
            "--alpha-max",
            "0.8",
            "--points",
            "3",
        ],
        capsys,
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == [
        "alpha",
        "R1",
        "sigma_integral",
        "sigma_specfun",
        "sigma_scaled",
        "verdict",
        "status",
    ]
    for row in rows:
        assert row[5] == "unstable"
        s_int, s_spec = float(row[2]), float(row[3])
        assert abs(s_int - s_spec) / abs(s_spec) < 1e-6
        assert float(row[4]) == pytest.approx(
            (1.0 - float(row[0])) ** 2 * s_spec, rel=1e-12
        )


def test_stability_sweep_bad_grid(capsys):
    code, _ = run_cli(
        ["stability-sweep", "--alpha-min", "0.9", "--alpha-max", "0.2", "--points", "2"],
        capsys,
    )
    assert code == 2


def test_rayleigh_table(capsys):
    code, out = run_cli(
        [
            "rayleigh",
            "--alpha",
            "0.6",
            "--m",
            "2",
            "--a-max",
            "0.006",
            "--steps",
            "1",
            "--modes",
            "10",
        ],
        capsys,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 2
    assert all(float(r[3]) < 0.0 for r in rows)


def test_oracle_suite(capsys):
    code, out = run_cli(["oracle-suite"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert all(r[4] == "pass" for r in rows)
