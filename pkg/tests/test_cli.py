import json

import pytest

from kgraphwave import CylinderFn, fixture_path, load_kgraph, normal_form
from kgraphwave.cli import main

LED = str(fixture_path("ledrappier"))
L3 = str(fixture_path("lambda3"))


def run_cli(capsys, *argv, expect_exit=None):
    if expect_exit is None:
        code = main(list(argv))
        captured = capsys.readouterr()
        assert code == 0
        return captured.out, captured.err
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    captured = capsys.readouterr()
    assert exc.value.code == expect_exit
    return captured.out, captured.err


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


class TestCommands:
    def test_validate(self, capsys):
        out, _ = run_cli(capsys, "validate", LED)
        (rec,) = records(out)
        assert rec == {
            "ok": True, "k": 2, "vertices": 4,
            "edges_per_color": {"1": 8, "2": 8}, "squares": 16,
            "cube_condition": "n/a (k<3)", "strongly_connected": True,
        }

    def test_pf(self, capsys):
        out, _ = run_cli(capsys, "pf", LED, "--hausdorff")
        (rec,) = records(out)
        assert rec["rho"] == [2.0, 2.0]
        assert rec["x_lambda"] == {"v1": 0.25, "v2": 0.25, "v3": 0.25, "v4": 0.25}
        assert rec["hausdorff_dimension"] == 0.5

    def test_measure_exact(self, capsys):
        out, _ = run_cli(capsys, "measure", L3, "--exact",
                         "--path", "e", "--path", "e,f1", "--path", "@v")
        recs = records(out)
        assert [r["measure"] for r in recs] == ["1", "1/2", "1"]

    def test_ck_check(self, capsys):
        out, _ = run_cli(capsys, "ck-check", L3, "--level", "2,2")
        recs = records(out)
        assert [r["relation"] for r in recs] == ["CK1", "CK2", "CK3", "CK4"]
        assert all(r["max_deviation"] < 1e-12 for r in recs)

    def test_wavelet_family_lists_reference_wavelet(self, capsys):
        out, _ = run_cli(capsys, "wavelets", LED, "--shape", "1,2", "--list-family")
        recs = records(out)
        assert sum(1 for r in recs if r["kind"] == "wavelet") == 28
        first = next(r for r in recs if r["kind"] == "wavelet" and r["vertex"] == "v1")
        assert first["terms"] == [
            {"path": ["a", "c", "c"], "coeff": 4.0},
            {"path": ["a", "c", "e"], "coeff": -4.0}]

    def test_wavelet_analyze_synthesize_round_trip(self, capsys, tmp_path):
        graph = load_kgraph(open(L3).read())
        fn = CylinderFn.indicator(normal_form(graph, ["e", "f1"]))
        fn_file = tmp_path / "fn.jsonl"
        fn_file.write_text("".join(json.dumps(r) + "\n" for r in fn.to_records()))
        out, _ = run_cli(capsys, "wavelets", L3, "--shape", "1,1",
                         "--depth", "1", "--analyze", str(fn_file))
        coeffs = records(out)
        assert [c["coeff"] for c in coeffs] == [0.5, 0.5]
        coeff_file = tmp_path / "coeffs.jsonl"
        coeff_file.write_text("".join(json.dumps(c) + "\n" for c in coeffs))
        out, _ = run_cli(capsys, "wavelets", L3, "--shape", "1,1",
                         "--depth", "1", "--synthesize", str(coeff_file))
        back = CylinderFn.from_records(graph, records(out))
        from kgraphwave import cylinder_fns_equal

        assert cylinder_fns_equal(back, fn, tol=1e-12)

    def test_markov(self, capsys):
        out, _ = run_cli(capsys, "markov", "--alphabet", "2",
                         "--weights", "1/2,1/2", "--depth", "1")
        recs = records(out)
        assert len(recs) == 4

    def test_traffic_with_prefs_file(self, capsys, tmp_path):
        prefs = tmp_path / "prefs.jsonl"
        prefs.write_text("\n".join(json.dumps(r) for r in [
            {"vertex": "v1", "path": "a,c,c"},
            {"vertex": "v2", "path": "a,c,e"},
            {"vertex": "v3", "path": "a,e,j"},
            {"vertex": "v4", "path": "a,e,h"},
        ]))
        out, _ = run_cli(capsys, "traffic", LED, "--prefs", str(prefs))
        recs = records(out)
        wavelets = [r for r in recs if r["kind"] == "wavelet"]
        assert [w["values"] for w in wavelets][:2] == [
            [4.0, -4.0, 0.0, 0.0], [0.0, 0.0, 4.0, -4.0]]
        assert recs[-1] == {"kind": "summary", "complete": True}

    def test_laplacian(self, capsys):
        out, _ = run_cli(capsys, "laplacian", LED)
        recs = records(out)
        assert recs[-1]["matrix"] == [
            [4, -2, -1, -1], [-2, 8, -3, -3], [-1, -3, 6, -2], [-1, -3, -2, 6]]

    def test_spectral_eig_and_csv(self, capsys):
        out, _ = run_cli(capsys, "spectral", LED, "--eig")
        recs = records(out)
        got = [r["eigenvalue"] for r in recs]
        assert got == pytest.approx([0.0, 5.17, 8.0, 10.83], abs=0.01)
        assert recs[3]["eigenvector"] == pytest.approx(
            [0.15, -0.85, 0.35, 0.35], abs=0.01)
        out, _ = run_cli(capsys, "spectral", LED, "--eig", "--csv")
        lines = out.splitlines()
        assert lines[0] == "eigenvalue"
        assert len(lines) == 5

    def test_spectral_reconstruct(self, capsys, tmp_path):
        sig = tmp_path / "sig.json"
        sig.write_text("[1.0, 1.0, 1.0, 1.0]")
        out, _ = run_cli(capsys, "spectral", LED, "--reconstruct", str(sig))
        recs = records(out)
        assert all(abs(r["value"]) < 1e-10 for r in recs)

    def test_spectral_gft(self, capsys, tmp_path):
        sig = tmp_path / "sig.json"
        sig.write_text("[1.0, 1.0, 1.0, 1.0]")
        out, _ = run_cli(capsys, "spectral", LED, "--gft", str(sig))
        recs = records(out)
        assert recs[0]["coefficient"] == pytest.approx(2.0, abs=1e-12)
        assert all(abs(r["coefficient"]) < 1e-12 for r in recs[1:])

    def test_spectral_wavelet_and_localize(self, capsys):
        out, _ = run_cli(capsys, "spectral", LED, "--wavelet",
                         "--t", "0.3", "--n", "v2")
        recs = records(out)
        assert [r["m"] for r in recs] == ["v1", "v2", "v3", "v4"]
        assert all(r["value"] != 0.0 for r in recs)
        out, _ = run_cli(capsys, "spectral", LED, "--localize",
                         "--n", "v1", "--m", "v3", "--tlist", "0.5,0.25,0.125")
        recs = records(out)
        assert len(recs) == 4 and "slope" in recs[-1]

    def test_wavelets_basis_and_compare(self, capsys):
        out, _ = run_cli(capsys, "wavelets", L3, "--shape", "1,1", "--depth", "2")
        recs = records(out)
        assert len(recs) == 4
        assert {r["kind"] for r in recs} == {"scaling", "wavelet"}
        out, _ = run_cli(capsys, "wavelets", L3, "--shape", "1,1", "--compare", "2")
        (rec,) = records(out)
        assert set(rec) == {"equal", "principal_angles",
                            "dim_multiscale", "dim_single_scale"}

    def test_measure_embed(self, capsys):
        out, _ = run_cli(capsys, "measure", LED, "--exact", "--embed",
                         "--path", "a,c,c")
        (rec,) = records(out)
        assert rec["interval"] == ["0", "1/256"]

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.jsonl"
        run_cli(capsys, "pf", LED, "--out", str(target))
        assert json.loads(target.read_text())["rho"] == [2.0, 2.0]

    def test_graph_flag_form(self, capsys):
        positional, _ = run_cli(capsys, "pf", LED)
        flagged, _ = run_cli(capsys, "pf", "--graph", LED)
        assert positional == flagged
        _, errtext = run_cli(capsys, "pf", LED, "--graph", LED, expect_exit=1)
        assert json.loads(errtext)["error"] == "usage"
        _, errtext = run_cli(capsys, "pf", expect_exit=1)
        assert json.loads(errtext)["error"] == "usage"


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("pf", LED),
        ("wavelets", LED, "--shape", "1,2", "--list-family"),
        ("spectral", LED, "--eig"),
        ("traffic", LED),
        ("laplacian", L3),
    ])
    def test_identical_bytes(self, capsys, argv):
        first, _ = run_cli(capsys, *argv)
        second, _ = run_cli(capsys, *argv)
        assert first == second


class TestErrorChannel:
    def test_usage_error(self, capsys):
        _, errtext = run_cli(capsys, "pf", expect_exit=1)
        assert json.loads(errtext.splitlines()[-1])["error"] == "usage"

    def test_spectral_without_mode(self, capsys):
        _, errtext = run_cli(capsys, "spectral", LED, expect_exit=1)
        assert json.loads(errtext.splitlines()[-1])["error"] == "usage"

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.kg"
        bad.write_text("{broken")
        _, errtext = run_cli(capsys, "validate", str(bad), expect_exit=2)
        assert json.loads(errtext)["error"] == "parse"

    def test_missing_file(self, capsys):
        _, errtext = run_cli(capsys, "validate", "/nope/missing.kg", expect_exit=2)
        assert json.loads(errtext)["error"] == "parse"

    def test_validation_error(self, capsys, tmp_path):
        doc = json.loads(open(L3).read())
        doc["squares"] = doc["squares"][:1]
        broken = tmp_path / "broken.kg"
        broken.write_text(json.dumps(doc))
        _, errtext = run_cli(capsys, "validate", str(broken), expect_exit=3)
        rec = json.loads(errtext)
        assert rec["error"] == "validation"
        assert rec["reason"] == "missing_square"

    def test_pf_on_disconnected_graph(self, capsys):
        _, errtext = run_cli(capsys, "pf", str(fixture_path("lambda1-sphere")),
                             expect_exit=3)
        assert json.loads(errtext)["error"] == "validation"

    def test_numeric_error(self, capsys, tmp_path):
        sig = tmp_path / "sig.json"
        sig.write_text("[1.0, 0.0, 0.0, -1.0]")
        _, errtext = run_cli(capsys, "spectral", LED, "--reconstruct", str(sig),
                             "--tgrid", "0.001,0.1,10", expect_exit=4)
        assert json.loads(errtext)["error"] == "numeric"


class TestRoundTrips:
    def test_family_records_reparse(self, capsys):
        out, _ = run_cli(capsys, "wavelets", LED, "--shape", "1,2", "--list-family")
        graph = load_kgraph(open(LED).read())
        for rec in records(out):
            fn = CylinderFn.from_records(graph, rec["terms"])
            assert fn.to_records() == rec["terms"]

    def test_graph_document_reparse(self):
        graph = load_kgraph(open(LED).read())
        assert load_kgraph(json.dumps(graph.to_document())).to_document() \
            == graph.to_document()
