import math

import pytest

import singlab


def test_polynomial_eval_and_grad():
    f = singlab.Polynomial.parse("x1^2 + x2^4")
    assert f.num_vars() == 2
    assert f([0.5, 0.5]) == pytest.approx(0.25 + 0.0625)
    gx, gy = f.grad([0.5, 0.5])
    assert gx == pytest.approx(1.0)
    assert gy == pytest.approx(4 * 0.5**3)


def test_integrate_verdicts():
    f = singlab.Polynomial.parse("x1*x2")
    conv = singlab.integrate_grad_log(f, 0.9, samples=50000)
    div = singlab.integrate_grad_log(f, 1.1, samples=50000)
    assert conv["kind"] == "CONVERGENT"
    assert div["kind"] == "DIVERGENT"
    assert conv["value"] > 0


def test_abs_log_value_1d():
    f = singlab.Polynomial.parse("x1")
    out = singlab.integrate_abs_log(f, 1.0, samples=100000)
    assert out["kind"] == "CONVERGENT"
    # int_{-1}^{1} |log|x|| dx = 2
    assert out["value"] == pytest.approx(2.0, rel=0.05)


def test_radial_ray_diverges():
    f = singlab.Polynomial.parse("x1^2 + x2^2")
    w = [1 / math.sqrt(2), 1 / math.sqrt(2)]
    assert singlab.radial_blowup(f, w)["kind"] == "DIVERGENT"


def test_zero_sample_on_circle():
    f = singlab.Polynomial.parse("x1^2 + x2^2 - 0.25")
    pts = singlab.sample_zero_set(f, count=200)
    assert len(pts) >= 20
    for x, y in pts[:50]:
        assert math.hypot(x, y) == pytest.approx(0.5, abs=1e-4)


def test_determinism():
    f = singlab.Polynomial.parse("x1^2 + x2^4")
    a = singlab.integrate_grad_log(f, 1.0, samples=50000, threads=1)
    b = singlab.integrate_grad_log(f, 1.0, samples=50000, threads=4)
    assert a == b
