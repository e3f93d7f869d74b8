import io
import json

import pytest

from chainc.cli import run
from chainc.config import EXIT_CAP_EXCEEDED, EXIT_DIAGNOSTICS, EXIT_IO, EXIT_OK, EXIT_USAGE, JSON_ROOT_KEY
from conftest import GOLDEN


@pytest.fixture
def sample_path(samples_dir):
    return lambda name: str(samples_dir / name)


@pytest.fixture
def stdin(monkeypatch):
    def feed(text):
        monkeypatch.setattr("sys.stdin", io.StringIO(text))
    return feed


def test_parse_prints_canonical_form(sample_path, capsys):
    assert run(["parse", sample_path("bng-nat.sfc")]) == EXIT_OK
    assert capsys.readouterr().out == "service { BNG , NAT }\n"


def test_parse_ast_dump(sample_path, capsys):
    assert run(["parse", "--ast", "--symmetric", sample_path("split-http-filter.sfc")]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("ServiceSpec(direction=symmetric)\n")
    assert "Split splitter=BNG" in out


def test_parse_error_exit_code(tmp_path, capsys):
    source = tmp_path / "bad.sfc"
    source.write_text("service { BNG , }", encoding="utf-8")
    assert run(["parse", str(source)]) == EXIT_DIAGNOSTICS
    err = capsys.readouterr().err
    assert "E_PARSE:" in err
    assert err.rstrip().endswith("@ 1:17")


def test_validate_valid_spec(sample_path):
    assert run(["-q", "validate", sample_path("mobile.sfc")]) == EXIT_OK


def test_validate_invalid_spec(tmp_path, capsys):
    source = tmp_path / "dup.sfc"
    source.write_text("service { best-binding { A , A } }", encoding="utf-8")
    assert run(["validate", str(source)]) == EXIT_DIAGNOSTICS
    assert "E_DUP_FUNCTION: " in capsys.readouterr().err


def test_validate_instance_document(tmp_path, capsys):
    document = tmp_path / "spec.json"
    document.write_text(json.dumps({JSON_ROOT_KEY: {"starting-component": "c0"}}), encoding="utf-8")
    assert run(["validate", str(document)]) == EXIT_DIAGNOSTICS
    assert "E_SCHEMA" in capsys.readouterr().err


def test_bad_flag_is_a_usage_error(sample_path):
    assert run(["parse", "--bogus", sample_path("bng-nat.sfc")]) == EXIT_USAGE
    assert run([]) == EXIT_USAGE
    assert run(["expand", sample_path("bb.sfc"), "--mode", "fastest"]) == EXIT_USAGE
    assert run(["expand", sample_path("bb.sfc"), "--pref", "BNG"]) == EXIT_USAGE


def test_missing_file_is_an_io_error(tmp_path):
    assert run(["validate", str(tmp_path / "missing.sfc")]) == EXIT_IO
    assert run(["parse", str(tmp_path / "missing.sfc")]) == EXIT_IO


def test_cap_exceeded(sample_path, tmp_path, capsys):
    out = tmp_path / "best.dot"
    assert run(["expand", sample_path("huge.sfc"), "--mode", "enumerate", "--cap", "10"]) == EXIT_CAP_EXCEEDED
    assert "24" in capsys.readouterr().err
    assert run(["expand", sample_path("huge.sfc"), "--mode", "select", "--cap", "10", "-o", str(out)]) == EXIT_CAP_EXCEEDED
    assert not out.exists()


def test_count_only(sample_path, capsys):
    assert run(["expand", sample_path("bb.sfc"), "--mode", "enumerate", "--count-only"]) == EXIT_OK
    assert capsys.readouterr().out == "2\n"


def test_expand_prints_stats_lines(sample_path, capsys):
    assert run(["expand", sample_path("bng-nat.sfc")]) == EXIT_OK
    assert capsys.readouterr().out == "nodes=2 edges=1 entries=1 exits=1 flexgroups=0\n"


def test_expand_enumerate_out_dir(sample_path, tmp_path, capsys):
    out_dir = tmp_path / "graphs"
    assert run(["-q", "expand", sample_path("bb.sfc"), "--mode", "enumerate", "--out-dir", str(out_dir)]) == EXIT_OK
    assert sorted(p.name for p in out_dir.iterdir()) == ["g0000.dot", "g0001.dot"]
    assert '"c0/k0/BNG" -> "c0/k0/NAT"' in (out_dir / "g0000.dot").read_text(encoding="utf-8")
    assert len(capsys.readouterr().out.splitlines()) == 2


def test_expand_enumerate_refuses_single_output(sample_path, tmp_path):
    assert run(["expand", sample_path("bb.sfc"), "--mode", "enumerate", "-o", str(tmp_path / "x.dot")]) == EXIT_USAGE


def test_expand_select_with_preferences(sample_path, tmp_path):
    out = tmp_path / "best.dot"
    args = ["expand", sample_path("bb.sfc"), "--mode", "select", "--cost", "adjacency-pref",
            "--pref", "NAT:BNG", "-o", str(out)]
    assert run(args) == EXIT_OK
    assert '"c0/k0/NAT" -> "c0/k0/BNG"' in out.read_text(encoding="utf-8")


def test_dot_command(sample_path, capsys):
    assert run(["dot", sample_path("split-http-filter.sfc")]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('digraph "forwarding-graph" {')
    assert "shape=diamond" in out


def test_dangling_pass_warning_is_printed(tmp_path, capsys):
    source = tmp_path / "tail.sfc"
    source.write_text("service { split { BNG ; HTTP-Filter ; pass } }", encoding="utf-8")
    assert run(["dot", str(source)]) == EXIT_OK
    assert "W_DANGLING_PASS" in capsys.readouterr().err


@pytest.mark.parametrize("filename,canonical", sorted(GOLDEN.items()))
@pytest.mark.parametrize("fmt", ["json", "xml"])
def test_convert_pipeline_is_idempotent(sample_path, stdin, capsys, filename, canonical, fmt):
    assert run(["convert", sample_path(filename), "--to", fmt]) == EXIT_OK
    document = capsys.readouterr().out
    stdin(document)
    assert run(["convert", "-", "--format", fmt, "--to", "dsl"]) == EXIT_OK
    assert capsys.readouterr().out == canonical + "\n"


def test_stdin_requires_format(stdin):
    stdin("service { A }")
    assert run(["convert", "-", "--to", "json"]) == EXIT_USAGE


def test_stdin_dsl(stdin, capsys):
    stdin("service{A,B}")
    assert run(["parse", "-"]) == EXIT_OK
    assert capsys.readouterr().out == "service { A , B }\n"


def test_convert_writes_file(sample_path, tmp_path):
    out = tmp_path / "mobile.xml"
    assert run(["-q", "convert", sample_path("mobile.sfc"), "--to", "xml", "-o", str(out)]) == EXIT_OK
    assert out.read_text(encoding="utf-8").startswith("<?xml")


def test_convert_failure_writes_nothing(tmp_path):
    source = tmp_path / "dup.sfc"
    source.write_text("service { best-binding { A , A } }", encoding="utf-8")
    out = tmp_path / "dup.json"
    assert run(["convert", str(source), "--to", "json", "-o", str(out)]) == EXIT_DIAGNOSTICS
    assert not out.exists()


def test_unknown_extension(tmp_path):
    source = tmp_path / "spec.txt"
    source.write_text("service { A }", encoding="utf-8")
    assert run(["validate", str(source)]) == EXIT_USAGE
    assert run(["-q", "validate", str(source), "--format", "dsl"]) == EXIT_OK


# ============================================================================
# Catalog
# ============================================================================

def test_catalog_workflow(sample_path, tmp_path, capsys):
    store = str(tmp_path / "store")
    assert run(["catalog", "--store", store, "add", "bng-nat", sample_path("bng-nat.sfc")]) == EXIT_OK
    assert run(["catalog", "--store", store, "add", "bng-nat", sample_path("bng-nat.sfc")]) == EXIT_DIAGNOSTICS
    capsys.readouterr()

    assert run(["catalog", "--store", store, "list"]) == EXIT_OK
    assert capsys.readouterr().out == "bng-nat\tcomponents=1 compositions=2 start=c0\n"

    assert run(["catalog", "--store", store, "get", "bng-nat", "--to", "dsl"]) == EXIT_OK
    assert capsys.readouterr().out == "service { BNG , NAT }\n"

    assert run(["catalog", "--store", store, "get", "nope"]) == EXIT_DIAGNOSTICS
    assert "E_NOT_FOUND" in capsys.readouterr().err


def test_catalog_links_in_expand(sample_path, tmp_path, monkeypatch, capsys):
    store = tmp_path / "store"
    monkeypatch.setenv("CHAINC_CATALOG", str(store))
    assert run(["-q", "catalog", "add", "bng-nat", sample_path("bng-nat.sfc")]) == EXIT_OK
    assert run(["expand", sample_path("catalog-user.sfc"), "--store", str(store)]) == EXIT_OK
    assert capsys.readouterr().out == "nodes=3 edges=2 entries=1 exits=1 flexgroups=0\n"

    assert run(["catalog", "resolve", sample_path("catalog-user.sfc"), "--to", "dsl"]) == EXIT_OK
    assert capsys.readouterr().out == "service { PGW , link(bng-nat.c0) }\ncomponent bng-nat.c0 { BNG , NAT }\n"


def test_unresolved_link_without_store(sample_path, monkeypatch, capsys):
    monkeypatch.delenv("CHAINC_CATALOG", raising=False)
    assert run(["expand", sample_path("catalog-user.sfc")]) == EXIT_DIAGNOSTICS
    assert "E_UNRESOLVED_REF" in capsys.readouterr().err


def test_catalog_needs_a_store(monkeypatch):
    monkeypatch.delenv("CHAINC_CATALOG", raising=False)
    assert run(["catalog", "list"]) == EXIT_USAGE


def test_catalog_tag_marks_endpoints(tmp_path, capsys):
    store = str(tmp_path / "store")
    source = tmp_path / "sap.sfc"
    source.write_text("service { SAP1 , FW }", encoding="utf-8")
    assert run(["catalog", "--store", store, "tag", "SAP1", "--kind", "endpoint"]) == EXIT_OK
    assert run(["dot", str(source), "--store", store]) == EXIT_OK
    assert "shape=ellipse" in capsys.readouterr().out
    assert run(["validate", str(source), "--store", store]) == EXIT_OK
    assert "W_UNKNOWN_FUNCTION" in capsys.readouterr().err
