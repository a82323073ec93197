import math
import os
import subprocess

import pytest

import gaussfit as gf

TRUTH = gf.GaussianParams(1.0, 5.0, 0.2)


def close(p, q, tol):
    return (
        abs(p.amplitude - q.amplitude) <= tol
        and abs(p.peak_position - q.peak_position) <= tol
        and abs(p.width - q.width) <= tol
    )


def test_version():
    assert gf.__version__


def test_coefficient_round_trip():
    q = gf.params_to_coeffs(TRUTH)
    assert q.a == pytest.approx(-312.5)
    assert q.b == pytest.approx(125.0)
    assert q.c == pytest.approx(-12.5)
    assert close(gf.coeffs_to_params(q), TRUTH, 1e-12)
    x = 5.13
    assert math.log(gf.eval_gaussian(TRUTH, x)) == pytest.approx(q.a + q.b * x + q.c * x * x)


def test_noiseless_fits_recover_truth():
    x, y = gf.synthesize(TRUTH, 4.0, 6.0, 10.0)
    assert len(x) == 21
    assert close(gf.fit_caruana(x, y).params, TRUTH, 1e-6)
    assert close(gf.fit_guo(x, y).params, TRUTH, 1e-6)
    for mode in (gf.WeightMode.Exact, gf.WeightMode.CdfApprox):
        fit = gf.fit_probability(x, y, 0.1, mode)
        assert fit.method == gf.Method.Probability
        assert fit.weight_mode == mode
        assert close(fit.params, TRUTH, 1e-6)


def test_linear_mode_matches_guo_on_noisy_data():
    x, y = gf.synthesize(TRUTH, 0.0, 10.0, 10.0)
    noisy = gf.add_white_noise(x, y, 0.1, 11)
    xs, ys = gf.select_samples(x, noisy, 0.2)
    guo = gf.fit_guo(xs, ys).params
    linear = gf.fit_probability(xs, ys, 0.1, gf.WeightMode.Linear).params
    assert close(guo, linear, 1e-10)


def test_weights():
    assert gf.std_normal_cdf(2.0) == pytest.approx(0.97724986805182079, abs=1e-15)
    peak = gf.confidence_weight(1.0, 0.1, 0.2, gf.WeightMode.CdfApprox)
    assert peak == pytest.approx(2 * gf.std_normal_cdf(2.0) - 1, abs=1e-15)
    assert gf.confidence_weight(-0.5, 0.1, 0.2, gf.WeightMode.Exact) == 0.0


def test_errors_map_to_python_exceptions():
    with pytest.raises(gf.NonNegativeCurvature):
        gf.fit_caruana([0.0, 1.0, 2.0], [2.0, 1.0, 2.0])
    with pytest.raises(gf.InsufficientSamples):
        gf.fit_guo([0.0, 1.0, 2.0], [1.0, 2.0, -1.0])
    with pytest.raises(gf.FitError):
        gf.fit_caruana([0.0, 1.0, 2.0], [2.0, 1.0, 2.0])
    with pytest.raises(gf.Error):
        gf.select_samples([0.0, 1.0], [0.1, 0.2], 1.0)
    assert issubclass(gf.ConfigError, gf.Error)


def test_iterative_and_studies():
    x, y = gf.synthesize(TRUTH, 4.0, 6.0, 10.0)
    it = gf.fit_iterative(x, y, 0.1)
    assert it.converged
    assert it.iterations <= 2
    assert len(it.trace) == it.iterations

    rows = gf.run_monte_carlo(trials=20, seed=3, snr_levels_db=[20.0])
    assert len(rows) == 4 * 3
    assert {r["method"] for r in rows} == {"caruana", "guo", "prob-exact", "prob-approx"}
    assert rows == gf.run_monte_carlo(trials=20, seed=3, snr_levels_db=[20.0])

    study = gf.run_convergence_study([1, 2])
    assert [s["seed"] for s in study] == [1, 2]
    assert all(s["converged"] for s in study)


@pytest.mark.skipif("GAUSSFIT_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_round_trip(tmp_path):
    cli = os.environ["GAUSSFIT_CLI"]
    data = tmp_path / "clean.csv"
    subprocess.run([cli, "simulate", "--from", "4", "--to", "6", "--out", str(data)], check=True)
    done = subprocess.run(
        [cli, "fit", str(data), "--method", "caruana"], check=True, capture_output=True, text=True
    )
    fields = dict(line.split("=", 1) for line in done.stdout.splitlines())
    assert float(fields["x_p"]) == pytest.approx(5.0, abs=1e-6)
    missing = subprocess.run([cli, "fit", str(data), "--method", "prob"], capture_output=True)
    assert missing.returncode == 4
