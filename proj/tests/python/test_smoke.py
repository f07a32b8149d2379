import crsegre


def test_series_arithmetic():
    a = crsegre.Series("1 + w1", ["w1", "zeta1"], 4)
    b = crsegre.Series("1 - w1", ["w1", "zeta1"], 4)
    assert str(a * b) == "1 - w1^2"
    inv = crsegre.Series("1 - w1", ["w1", "zeta1"], 3).invert_unit()
    assert str(inv) == "1 + w1 + w1^2"


def test_manifold_and_map():
    hq = crsegre.GenericManifold(1, 1, 8, ["w1*zeta1"])
    assert hq.verify_reality()
    assert hq.verify_normal()
    ident = crsegre.FormalMap.identity(hq)
    assert ident.maps_into()

    rep = crsegre.classify_manifold(hq)
    assert rep["s_solvable"] == "true"
    assert rep["kappa0"] == 1
    assert rep["s_finite"] == "true"
    assert rep["s_nondeg"] == "true"
    assert rep["audit"]


def test_graph_derivation():
    m = crsegre.theta_from_graph(1, 1, ["w1*zeta1"], 8)
    assert m.theta_bar() == ["2*w1*zeta1"]


def test_segre_type():
    hq = crsegre.GenericManifold(1, 1, 8, ["w1*zeta1"])
    st = crsegre.segre_type(hq)
    assert st["conclusive"]
    assert st["mu"] == 3
    assert st["minimal"]

    flat = crsegre.GenericManifold(1, 1, 8, ["0"])
    st2 = crsegre.segre_type(flat)
    assert not st2["minimal"]


def test_cli_dispatch_on_corpus():
    text = crsegre.corpus_text()
    code, report = crsegre.run_command("classify-map", text, ["embed_quartic"])
    assert code == 0
    assert "s_finite=true" in report
    assert "s_nondeg=false-up-to(4)" in report

    code2, report2 = crsegre.run_command("segre-type", text, ["hq"])
    assert code2 == 0
    assert "mu=3" in report2
    assert "multitype=1,1,1" in report2

    # determinism
    assert crsegre.run_command("classify-map", text, ["embed_quartic"]) == (code, report)


def test_exit_codes_and_errors():
    text = crsegre.corpus_text()
    code, report = crsegre.run_command("classify-map", text, ["no_such_map"])
    assert code == 2
    assert report.startswith("error=parse")

    code2, _ = crsegre.run_command("propagate", text, ["embed_quartic"])
    assert code2 == 3

    import pytest

    with pytest.raises(crsegre.SeriesArithmeticError):
        crsegre.theta_from_graph(1, 1, ["i*w1*zeta1"], 8)  # violates reality


def test_classify_embedding_family():
    text = crsegre.corpus_text()
    code, report = crsegre.run_command("classify-map", text, ["embed_a1"])
    assert code == 0
    assert "s_solvable=true" in report
    assert "kappa0=2" in report
