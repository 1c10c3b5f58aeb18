import math

import numpy as np
import pytest

import peskin2d as pk


def test_chain_is_unity_at_origin():
    rep = pk.constants(0.0, 0.0, 0.0)
    for i in range(1, 18):
        assert rep.C[i] == pytest.approx(1.0, abs=1e-12), f"C{i}"
    for i in range(1, 6):
        assert rep.D[i] == pytest.approx(1.0, abs=1e-12), f"D{i}"


def test_first_links_closed_form():
    # C1 = 1/sqrt(1 - x^2/2), C8 = sqrt(1 + x^2/2)
    x = 0.1
    rep = pk.constants(x, 0.0, 0.0)
    assert rep.C[1] == pytest.approx(1.0 / math.sqrt(1 - x * x / 2), rel=1e-14)
    assert rep.C[8] == pytest.approx(math.sqrt(1 + x * x / 2), rel=1e-14)


def test_monotone_in_x():
    xs = np.linspace(0.0, 2e-3, 40)
    prev = None
    for x in xs:
        d5 = pk.constants(float(x), 0.3, 0.2).D[5]
        if prev is not None:
            assert d5 >= prev
        prev = d5


def test_out_of_regime_names_the_guard():
    with pytest.raises(pk.OutOfRegimeError) as e1:
        pk.constants(1.5, 0.0, 0.0)   # C1 blows up at x = sqrt(2)
    assert e1.value.constant_name == "C1"
    with pytest.raises(pk.OutOfRegimeError) as e2:
        pk.constants(0.5, 0.0, 0.0)   # geometric factor in C2 exceeds 1 first
    assert e2.value.constant_name == "C2"
    with pytest.raises(pk.OutOfRegimeError) as e3:
        pk.constants(5e-3, 0.97, 0.0)  # contrast-heavy guard
    assert e3.value.constant_name == "C17"


def test_margin_frozen_value():
    # script C at (x, a_mu, nu_m) = (5e-4, 0, 0), a_e = 1
    val = pk.margin(5e-4, 0.0, 0.0, a_e=1.0)
    assert val == pytest.approx(0.5209787083495983, rel=1e-12)


def test_margin_needs_elastic_scale_with_weight():
    rep = pk.constants(1e-4, 0.0, nu_m=0.1)  # no a_e given
    assert rep.script_C is None
    rep2 = pk.constants(1e-4, 0.0, nu_m=0.1, a_e=1.0)
    assert rep2.script_C is not None


def test_threshold_lower_bound_at_zero():
    assert pk.threshold_lower_bound(0.0) == pytest.approx(
        1.0 / (676 * math.sqrt(2.0)), rel=1e-14)


def test_threshold_frozen_values():
    expected = {
        -0.95: 6.556172e-6,
        -0.5: 9.764994e-5,
        0.0: 1.041390e-3,
        0.5: 3.642645e-5,
        0.95: 2.058782e-7,
    }
    for a_mu, want in expected.items():
        out = pk.k_threshold(a_mu)
        assert out["k"] == pytest.approx(want, rel=1e-5)
        assert abs(out["residual"]) <= 1e-9
        # the root of the margin always sits below the closed-form bound,
        # because that bound solves the same equation with D5 frozen at 0
        # while D5 is strictly increasing
        assert out["k"] < out["lower_bound"]


def test_threshold_vanishes_toward_extreme_contrast():
    ks = [pk.k_threshold(a)["k"] for a in (0.0, 0.5, 0.9, 0.95)]
    assert all(ks[i] > ks[i + 1] for i in range(len(ks) - 1))


def test_flat_dict_keys():
    d = pk.constants(1e-4, 0.2, 0.0, a_e=1.0).as_flat_dict()
    for i in range(1, 18):
        assert f"C{i}" in d
    for i in range(1, 6):
        assert f"D{i}" in d
    assert "script_C" in d and "tilde_C" in d
    assert d["tilde_C"] == pytest.approx(
        d["D5"] / ((1 - 0.2) * d["script_C"]), rel=1e-12)


# --------------------------------------------------------- energy certificate


class _FakeRecord:
    def __init__(self, t, n11, n21, cx=None, cy=None):
        self.t = np.asarray(t, float)
        self.norm_f11 = np.asarray(n11, float)
        self.norm_f21 = np.asarray(n21, float)
        self.center_x = np.zeros_like(self.t) if cx is None else np.asarray(cx)
        self.center_y = np.zeros_like(self.t) if cy is None else np.asarray(cy)


def test_certificate_accepts_true_decay():
    params = pk.PhysicsParams.from_contrast(0.0, 1.0)
    x0 = 5e-4
    sc = pk.margin(x0, 0.0, 0.0, a_e=1.0)
    rate = 0.25 * 1.0 * sc
    t = np.linspace(0, 10, 2001)
    n11 = x0 * np.exp(-rate * t)
    rec = _FakeRecord(t, n11, n11)  # weighted norm below plain norm: fine
    cert = pk.energy_certificate(rec, params, x0=x0)
    # margins measure excess over the bound; pass means <= slack
    assert cert.ok
    assert cert.balance_margin <= 0.01
    assert cert.decay_margin <= 0.01


def test_certificate_rejects_growth():
    params = pk.PhysicsParams.from_contrast(0.0, 1.0)
    x0 = 5e-4
    t = np.linspace(0, 5, 501)
    n11 = x0 * np.exp(+0.05 * t)  # growing: must fail both checks
    rec = _FakeRecord(t, n11, n11)
    cert = pk.energy_certificate(rec, params, x0=x0)
    assert not cert.ok
    assert cert.decay_margin > 0.01


def test_certificate_lines_are_printable():
    params = pk.PhysicsParams.from_contrast(0.0, 1.0)
    t = np.linspace(0, 1, 11)
    rec = _FakeRecord(t, np.full(11, 1e-4), np.full(11, 1e-4))
    cert = pk.energy_certificate(rec, params, x0=2e-4)
    txt = "\n".join(cert.lines())
    assert "balance" in txt and "decay" in txt
