import json
from importlib import resources

import jsonschema
import pytest

from morphauto import iso_equivalent, parse_morphism, prefix_equal
from morphauto.cli import main
from morphauto.constructions import representation_from_spec


def morph(corpus_path, name):
    return str(corpus_path / f"{name}.morph")


@pytest.fixture(scope="session")
def schema():
    return json.loads(
        (resources.files("morphauto") / "report_schema.json").read_text(encoding="utf-8")
    )


class TestAnalyzeCommand:
    def test_lysenok_summary(self, corpus_path, capsys):
        assert main(["analyze", morph(corpus_path, "lysenok")]) == 0
        out = capsys.readouterr().out
        assert "Automatic(2)" in out and "2-block morphism" in out

    def test_istrail_summary(self, corpus_path, capsys):
        assert main(["analyze", morph(corpus_path, "istrail")]) == 0
        out = capsys.readouterr().out
        assert "Automatic(2) via left-eigenvector criterion, q=2" in out

    def test_grig_aca_aba_summary(self, corpus_path, capsys):
        assert main(["analyze", morph(corpus_path, "grig_aca_aba")]) == 0
        out = capsys.readouterr().out
        assert "NotAutomatic" in out and "charpoly x^4 - 2*x^3 - 2*x^2 - x + 2" in out

    def test_json_reports_validate(self, corpus_path, capsys, schema):
        for name in ("lysenok", "grig_aca_aba", "benli", "a285249"):
            assert main(["analyze", morph(corpus_path, name), "--json"]) == 0
            report = json.loads(capsys.readouterr().out)
            jsonschema.validate(report, schema)

    def test_every_corpus_report_validates(self, corpus_path, capsys, schema):
        for path in sorted(corpus_path.glob("*.morph")):
            assert main(["analyze", str(path), "--json", "--depth", "1000"]) == 0
            jsonschema.validate(json.loads(capsys.readouterr().out), schema)

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.morph"
        bad.write_text("letters: a\na -> b\n", encoding="utf-8")
        assert main(["analyze", str(bad)]) == 2
        assert "undeclared letter" in capsys.readouterr().err

    def test_non_prolongable_spec_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.morph"
        bad.write_text("letters: 0 1\n0 -> 10\n1 -> 0101\nseed: 0\n", encoding="utf-8")
        assert main(["analyze", str(bad)]) == 2
        assert "prolongable" in capsys.readouterr().err

    def test_missing_file_exit_code(self, capsys):
        assert main(["analyze", "/nonexistent/nowhere.morph"]) == 2


class TestUniformize:
    def test_istrail_minimized_round_trip(self, corpus_path, capsys, tmp_path, berstel, istrail):
        out_path = tmp_path / "istrail_uniform.morph"
        assert main(["uniformize", morph(corpus_path, "istrail"), "--minimize", "-o", str(out_path)]) == 0
        emitted = parse_morphism(out_path.read_text(encoding="utf-8"))
        assert emitted.morphism.uniform_length == 2
        assert len(emitted.morphism.alphabet) == 4
        rep = representation_from_spec(emitted)
        assert iso_equivalent(rep, representation_from_spec(berstel)) is not None
        assert prefix_equal(emitted, istrail, 10_000)

    def test_already_uniform_input(self, corpus_path, capsys, tmp_path, thue_morse):
        out_path = tmp_path / "tm_uniform.morph"
        assert main(["uniformize", morph(corpus_path, "thue_morse"), "--minimize", "-o", str(out_path)]) == 0
        emitted = parse_morphism(out_path.read_text(encoding="utf-8"))
        rep = representation_from_spec(emitted)
        assert iso_equivalent(rep, representation_from_spec(thue_morse)) is not None

    def test_criterion_failure_exit_4(self, corpus_path, capsys):
        assert main(["uniformize", morph(corpus_path, "lysenok")]) == 4
        assert "eigenvector" in capsys.readouterr().err


class TestOtherCommands:
    def test_blocks(self, corpus_path, capsys):
        assert main(["blocks", morph(corpus_path, "lysenok"), "-k", "2"]) == 0
        out = capsys.readouterr().out
        assert "uniform length 2" in out and "ac" in out

    def test_blocks_failure(self, corpus_path, capsys):
        assert main(["blocks", morph(corpus_path, "fib_bc"), "-k", "2"]) == 1
        assert "not a multiple" in capsys.readouterr().err

    def test_generate(self, corpus_path, capsys):
        assert main(["generate", morph(corpus_path, "fibonacci"), "-n", "10"]) == 0
        assert capsys.readouterr().out.strip() == "0100101001"

    def test_compare(self, corpus_path, capsys):
        assert main([
            "compare", morph(corpus_path, "lysenok"), morph(corpus_path, "lysenok_psi"), "-n", "10000",
        ]) == 0
        assert "equal" in capsys.readouterr().out

    def test_compare_differs(self, corpus_path, capsys):
        assert main([
            "compare", morph(corpus_path, "thue_morse"), morph(corpus_path, "period_doubling"), "-n", "100",
        ]) == 1
        assert "differ at position" in capsys.readouterr().out

    def test_cup(self, corpus_path, capsys):
        assert main(["cup", morph(corpus_path, "tm_cube"), "--pair-pos", "3", "--split", "1"]) == 0
        out = capsys.readouterr().out
        assert "lambda = 8" in out and "0'" in out

    def test_cup_emits_reingestible_spec(self, corpus_path, capsys, thue_morse):
        assert main(["cup", morph(corpus_path, "tm_cube"), "--pair-pos", "3", "--split", "5"]) == 0
        out = capsys.readouterr().out
        spec_text = "\n".join(line for line in out.splitlines() if "eigenvector check" not in line)
        emitted = parse_morphism(spec_text)
        assert prefix_equal(emitted, thue_morse, 5000)

    def test_complexity_csv(self, corpus_path, capsys):
        assert main([
            "complexity", morph(corpus_path, "fib_bc"), "--nmax", "5", "-N", "1000", "--csv",
        ]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n,p"
        assert lines[1:] == ["1,2", "2,3", "3,4", "4,5", "5,6"]


class TestCorpusCommand:
    def test_full_corpus_passes_at_default_depth(self, capsys):
        # default depth 10^4 exercises the certificate-replay invariant on
        # every automatic entry
        assert main(["corpus", "--run"]) == 0
        out = capsys.readouterr().out
        assert "all 35 corpus entries match" in out

    def test_listing(self, capsys):
        assert main(["corpus"]) == 0
        assert "lysenok" in capsys.readouterr().out

    def test_corrupted_expectation_fails_with_diff(self, tmp_path, corpus_path, capsys):
        (tmp_path / "lysenok.morph").write_text(
            (corpus_path / "lysenok.morph").read_text(encoding="utf-8"), encoding="utf-8"
        )
        (tmp_path / "lysenok.expected.json").write_text(
            json.dumps({"verdict": "not_automatic"}), encoding="utf-8"
        )
        assert main(["corpus", "--run", "--dir", str(tmp_path)]) == 1
        out = capsys.readouterr().out
        assert "FAIL lysenok" in out and "automatic != expected not_automatic" in out

    def test_empty_corpus_warns(self, tmp_path, capsys):
        assert main(["corpus", "--run", "--dir", str(tmp_path)]) == 0
        assert "warning" in capsys.readouterr().out


class TestRoundTrip:
    def test_every_emitted_certificate_reverifies(self, corpus_path, tmp_path):
        # uniformize each eigenvector-criterion entry, re-parse, re-verify
        for name in ("istrail", "anagram7", "a285249", "a284878", "a285159"):
            spec = parse_morphism((corpus_path / f"{name}.morph").read_text(encoding="utf-8"))
            out_path = tmp_path / f"{name}_uniform.morph"
            assert main(["uniformize", str(corpus_path / f"{name}.morph"), "--minimize", "-o", str(out_path)]) == 0
            emitted = parse_morphism(out_path.read_text(encoding="utf-8"))
            assert emitted.morphism.uniform_length is not None
            assert prefix_equal(emitted, spec, 5000)
