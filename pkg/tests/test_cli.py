import csv
import io
import json
import os
import subprocess
import sys

import pytest

from acterwilliger.catalog import CATALOG_SPECS, SpecError
from acterwilliger.cli import RunConfig, load_spec, main
from acterwilliger.linalg import RatMatrix


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(args, capsys):
    code, out, err = run(args, capsys)
    return code, json.loads(out) if out else None


class TestScheme:
    def test_three2_q8(self, capsys):
        code, out = run_json(["scheme", '{"family":"three2_q8"}'], capsys)
        assert code == 0 and out["ac"] and out["triples"] == 44
        assert out["class_sizes"] == [1, 8, 9, 18, 18, 18]

    def test_perm_subgroup(self, capsys):
        spec = '{"family":"perm","generators":[[1,2,0,3],[1,0,2,3]]}'
        code, out = run_json(["scheme", spec, "--emit", "tensor", "--deep-verify"], capsys)
        assert code == 0 and out["order"] == 6
        assert all(out["axioms"].values())
        assert sum(1 for _ in out["tensor"]) == out["triples"]

    def test_trivial(self, capsys):
        code, out = run_json(["scheme", '{"family":"cyclic","n":1}'], capsys)
        assert code == 0 and out["d"] == 0 and out["ac"]

    def test_witness_for_s4(self, capsys):
        code, out = run_json(["scheme", '{"family":"symmetric","n":4}'], capsys)
        assert code == 0 and out["ac"] is False
        h, i, js = out["ac_witness"]
        assert h != i and len(js) != 1


class TestTwa:
    def test_frobenius(self, capsys):
        code, out = run_json(["twa", '{"family":"frobenius_field","p":2,"r":2}'], capsys)
        assert code == 0 and out["dim_T"] == 19 and out["dim_Z"] == 4

    def test_abelian(self, capsys):
        code, out = run_json(["twa", '{"family":"abelian","orders":[3,3]}'], capsys)
        assert code == 0 and (out["dim_T"], out["dim_Z"]) == (81, 1)

    def test_heisenberg(self, capsys):
        code, out = run_json(["twa", '{"family":"heisenberg","p":3}'], capsys)
        assert code == 0 and out["ac"]
        assert out["dim_T"] == out["dim_T0"] == 137

    def test_idempotents_inline(self, capsys):
        code, out = run_json(["twa", '{"family":"frobenius_field","p":3,"r":1}',
                              "--emit", "idempotents"], capsys)
        assert code == 0
        mats = out["idempotents"]
        assert len(mats) == len(out["components"])
        assert all(isinstance(x, str) for m in mats for row in m for x in row)
        assert not any("." in x for m in mats for row in m for x in row)

    @pytest.mark.parametrize("flag", ["--dump-dir", "--dump-matrices"])
    def test_dump_csv(self, capsys, tmp_path, flag):
        code, out = run_json(["twa", '{"family":"frobenius_field","p":3,"r":1}',
                              "--emit", "matrices", flag, str(tmp_path)], capsys)
        assert code == 0
        files = out["t_basis_files"]
        assert len(files) == out["dim_T"] == 11
        text = (tmp_path / files[0]).read_text()
        assert RatMatrix.from_csv(text).rows == 6

    def test_idempotent_dump_round_trip(self, capsys, tmp_path):
        code, out = run_json(["twa", '{"family":"frobenius_field","p":2,"r":2}',
                              "--emit", "idempotents", "--dump-dir", str(tmp_path)], capsys)
        mats = [RatMatrix.from_csv((tmp_path / f).read_text()) for f in out["idempotent_files"]]
        total = mats[0]
        for m in mats[1:]:
            total = total + m
        assert total == RatMatrix.identity(12)

    def test_resource_limit(self, capsys):
        code, out, err = run(["twa", '{"family":"frobenius_field","p":2,"r":2}',
                              "--max-entries", "1000"], capsys)
        assert code == 3 and out == "" and "resource limit" in err


class TestClassify:
    def test_s4(self, capsys):
        code, out = run_json(["classify", '{"family":"symmetric","n":4}'], capsys)
        assert code == 0
        assert (out["predicted"], out["measured"], out["consistent"]) == (False, False, True)

    def test_d8_deep(self, capsys):
        code, out = run_json(["classify", '{"family":"d8"}', "--deep-verify"], capsys)
        assert code == 0
        assert out["verdict"]["is_camina_p_group"] and out["verdict"]["camina_class"] == 2
        assert all(v for v in out["camina_pair_conditions"].values())
        assert out["camina_structure"]["class_shapes"]


class TestErrors:
    def test_bad_json(self, capsys):
        code, out, err = run(["scheme", "{not json"], capsys)
        assert code == 2 and err.startswith("error:")

    def test_unknown_family(self, capsys):
        assert run(["scheme", '{"family":"nope"}'], capsys)[0] == 2

    def test_max_order(self, capsys):
        assert run(["scheme", '{"family":"cyclic","n":50}', "--max-order", "10"], capsys)[0] == 3

    def test_usage(self, capsys):
        assert run(["frobnicate"], capsys)[0] == 2
        assert run(["scheme", "{}", "--emit", "matrices"], capsys)[0] == 2
        assert run(["batch"], capsys)[0] == 2
        assert run(["batch", "--catalog", "--jobs", "0"], capsys)[0] == 2

    def test_run_config_invariants(self):
        with pytest.raises(SpecError):
            RunConfig(group_spec={}, max_order=0)
        with pytest.raises(SpecError):
            RunConfig(group_spec={}, emit="")


def test_load_spec_from_file(tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"family": "q8"}')
    assert load_spec(str(p)) == {"family": "q8"}
    assert load_spec('{"family": "q8"}') == {"family": "q8"}


def test_output_file_and_determinism(capsys, tmp_path):
    spec = '{"family":"frobenius_field","p":3,"r":1}'
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["twa", spec, "--emit", "idempotents", "--out", str(a)]) == 0
    assert main(["twa", spec, "--emit", "idempotents", "--out", str(b)]) == 0
    assert capsys.readouterr().out == ""
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")


class TestBatch:
    SPECS = [{"family": "symmetric", "n": 4}, {"family": "q8", "name": "quat"},
             {"family": "cyclic", "n": 0}, {"family": "frobenius_field", "p": 3, "r": 1},
             {"family": "dihedral", "n": 5}]

    def rows(self, text):
        return list(csv.DictReader(io.StringIO(text)))

    def test_rows_and_errors(self, capsys, tmp_path):
        f = tmp_path / "specs.json"
        f.write_text(json.dumps(self.SPECS))
        code, out, _ = run(["batch", str(f)], capsys)
        rows = self.rows(out)
        assert [r["index"] for r in rows] == ["0", "1", "2", "3", "4"]
        assert rows[1]["name"] == "quat"
        assert rows[2]["error"] and not rows[2]["order"]
        assert all(r["consistent"] == "True" for k, r in enumerate(rows) if k != 2)
        assert code == 3

    def test_jobs_preserve_order(self, capsys, tmp_path):
        f = tmp_path / "specs.json"
        f.write_text(json.dumps(self.SPECS))
        serial = run(["batch", str(f)], capsys)[1]
        parallel = run(["batch", str(f), "--jobs", "3"], capsys)[1]
        assert serial == parallel

    def test_name_mapping_input(self, capsys, tmp_path):
        f = tmp_path / "specs.json"
        f.write_text(json.dumps({"a": {"family": "d8"}, "b": {"family": "cyclic", "n": 4}}))
        code, out, _ = run(["batch", str(f)], capsys)
        assert code == 0 and [r["name"] for r in self.rows(out)] == ["a", "b"]

    def test_catalog(self, capsys):
        code, out, _ = run(["batch", "--catalog", "--jobs", "2"], capsys)
        rows = self.rows(out)
        assert code == 0 and len(rows) == len(CATALOG_SPECS)
        assert all(r["consistent"] == "True" and r["error"] == "" for r in rows)

    def test_malformed_entry_aborts(self, capsys, tmp_path):
        f = tmp_path / "specs.json"
        f.write_text(json.dumps([{"family": "d8"}, 5]))
        assert run(["batch", str(f)], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "acterwilliger", "scheme", '{"family":"q8"}'],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["order"] == 8
