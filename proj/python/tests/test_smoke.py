import json

import numpy as np
import pytest

import nftpy


def test_signal_roundtrip():
    q = np.linspace(0, 1, 11) + 0.5j
    s = nftpy.Signal(-1.0, 1.0, q)
    assert s.n == 10
    assert np.allclose(s.samples, q)
    assert s.t[0] == -1.0 and s.t[-1] == 1.0


def test_soliton_spectrum():
    s = nftpy.generate("sech", 1.0, -15.0, 15.0, 2048)
    spec = nftpy.continuous_spectrum(s, "layer-peeling", -5.0, 5.0, 201)
    assert np.max(np.abs(spec["qhat"])) < 1e-3
    r = nftpy.find_eigenvalues(s)
    lams = [e["lambda"] for e in r["eigenvalues"]]
    assert len(lams) == 1
    assert abs(lams[0] - 0.5j) < 1e-3
    assert r["complete"]


def test_scattering_matches_closed_form():
    s = nftpy.generate("sech", 1.0, -30.0, 30.0, 4096)
    a = nftpy.scattering(s, 0.3, "rk4")["a"]
    assert abs(a - nftpy.sy_a(1.0, 0.3)) < 1e-6


def test_matrix_and_rect_oracle():
    s = nftpy.generate("sech", 2.7, -16.0, 16.0, 1024)
    lams = sorted(nftpy.matrix_eigenvalues(s, "spectral"), key=lambda z: z.imag)
    assert np.allclose([z.imag for z in lams], [0.2, 1.2, 2.2], atol=1e-2)
    assert abs(nftpy.rect_discrete(2.0, -1.0, 1.0)[0] - 1.5713j) < 1e-3


def test_propagation_keeps_soliton_shape():
    s = nftpy.generate("sech", 1.0, -15.0, 15.0, 1024)
    out, leakage = nftpy.ssf_propagate(s, 0.5, 500)
    assert leakage < 1e-6
    assert np.max(np.abs(np.abs(out.samples) - np.abs(s.samples))) < 1e-3


def test_cli_entry_point(tmp_path):
    code, out, err = nftpy.run_cli(["gen", "--pulse", "gaussian", "--n", "64"])
    assert code == 0, err
    assert out.splitlines()[0] == "t,re,im"
    assert len(out.splitlines()) == 66
    code, _, _ = nftpy.run_cli(["gen", "--pulse", "nope"])
    assert code == 2
    rep = tmp_path / "r.json"
    code, _, err = nftpy.run_cli(["eig", "--pulse", "sech", "--amp", "1.4", "--window", "12", "--n", "256",
                                  "--report", str(rep), "--deterministic"])
    assert code == 0, err
    report = json.loads(rep.read_text())
    assert list(report) == ["command", "config", "residuals", "eigenvalues", "timing_ms", "seed"]
    assert report["timing_ms"] == 0


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        nftpy.generate("sech", 1.0, 1.0, -1.0, 16)
