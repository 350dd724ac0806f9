from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgpreduce.cli import InputError, load_bundle, main, read_alist, save_bundle, write_alist
from hgpreduce.codes import named_code
from hgpreduce.gf2 import BitMatrix


def run(*argv) -> int:
    return main([str(a) for a in argv])


def alist_text_oracle(dense) -> str:
    """Independent writer for the alist layout."""
    dense = np.asarray(dense)
    m, n = dense.shape
    cols = [np.flatnonzero(dense[:, j]) + 1 for j in range(n)]
    rows = [np.flatnonzero(dense[i]) + 1 for i in range(m)]
    mc = max((len(c) for c in cols), default=0)
    mr = max((len(r) for r in rows), default=0)
    out = [f"{n} {m}", f"{mc} {mr}", " ".join(str(len(c)) for c in cols), " ".join(str(len(r)) for r in rows)]
    out += [" ".join(map(str, list(c) + [0] * (mc - len(c)))) for c in cols]
    out += [" ".join(map(str, list(r) + [0] * (mr - len(r)))) for r in rows]
    return "\n".join(out) + "\n"


@pytest.fixture
def classical(tmp_path):
    def make(name: str) -> Path:
        out = tmp_path / name
        assert run("gen-classical", "named", "--name", name, "--out", out) == 0
        return out / "h.alist"

    return make


class TestAlist:
    @settings(max_examples=40)
    @given(st.integers(1, 8), st.integers(1, 10), st.integers(0, 10**6))
    def test_round_trip_and_layout(self, tmp_path_factory, m, n, seed):
        dense = np.random.default_rng(seed).integers(0, 2, size=(m, n)).astype(np.uint8)
        path = tmp_path_factory.mktemp("alist") / "h.alist"
        write_alist(BitMatrix.from_dense(dense), path)
        assert path.read_text() == alist_text_oracle(dense)
        assert np.array_equal(read_alist(path).to_dense(), dense)

    @pytest.mark.parametrize("name", ["k33", "heawood", "qc5", "random-35", "seven-check"])
    def test_corpus_round_trip(self, tmp_path, name):
        h = named_code(name).h
        write_alist(h, tmp_path / "h.alist")
        assert read_alist(tmp_path / "h.alist") == h

    @pytest.mark.parametrize(
        "text",
        ["", "3 2\n", "2 1\n1 2\n1 1\n2\n1\n1\n1 2\n1 2\n", "2 1\n1 2\n1 1\n2\n1\n9\n1 2\n", "a b c d\n"],
    )
    def test_malformed(self, tmp_path, text):
        p = tmp_path / "bad.alist"
        p.write_text(text)
        with pytest.raises(InputError):
            read_alist(p)


class TestBundle:
    def test_round_trip(self, tmp_path, k33):
        save_bundle(k33.reduced, tmp_path / "b")
        code, manifest = load_bundle(tmp_path / "b")
        assert code.hx == k33.reduced.hx and code.hz == k33.reduced.hz
        assert code.logical_x == k33.reduced.logical_x
        assert code.x_labels == k33.reduced.x_labels
        assert set(manifest) >= {"name", "n", "k", "d_x", "d_z", "layout", "coloring", "schedule", "plan_hash", "provenance"}
        assert manifest["layout"]["kept"] == list(k33.reduced.layout.originals)

    def test_missing(self, tmp_path):
        with pytest.raises(InputError):
            load_bundle(tmp_path / "nowhere")


class TestPipeline:
    def test_k33_end_to_end(self, tmp_path, classical, capsys):
        h = classical("k33")
        assert run("build-hgp", "--h1", h, "--h2", h, "--out", tmp_path / "q") == 0
        assert run("color", "--code", tmp_path / "q") == 0
        assert run("plan", "--code", tmp_path / "q", "--out", tmp_path / "plan.json") == 0
        assert "removes 25" in capsys.readouterr().out
        assert run("reduce", "--code", tmp_path / "q", "--plan", tmp_path / "plan.json", "--out", tmp_path / "r") == 0
        assert "106 → 81 qubits, 16 logicals, d=4" in capsys.readouterr().out
        report = json.loads((tmp_path / "r" / "weight_report.json").read_text())
        assert (report["n2q"], report["reduced_n2q"]) == (420, 345)
        assert run("verify", "--before", tmp_path / "q", "--after", tmp_path / "r", "--out", tmp_path / "v.json") == 0
        assert json.loads((tmp_path / "v.json").read_text())["ok"]
        assert run("schedule", "--code", tmp_path / "r", "--split", "--out", tmp_path / "s.json") == 0
        assert run("hooks", "--code", tmp_path / "r", "--schedule", tmp_path / "s.json", "--out", tmp_path / "h.json") == 0
        hooks = json.loads((tmp_path / "h.json").read_text())
        assert hooks["X"]["max_lines"] == hooks["Z"]["max_lines"] == 1
        assert run("--seed", 3, "schedule", "--code", tmp_path / "r", "--random", "--out", tmp_path / "rs.json") == 0
        assert run("export", "--code", tmp_path / "r", "--format", "json", "--out", tmp_path / "r.json") == 0
        assert json.loads((tmp_path / "r.json").read_text())["n"] == 81
        assert run("export", "--code", tmp_path / "r", "--format", "alist", "--out", tmp_path / "ex") == 0
        assert read_alist(tmp_path / "ex" / "hx.alist") == load_bundle(tmp_path / "r")[0].hx

    def test_heawood_reduce_message(self, tmp_path, classical, capsys):
        h = classical("heawood")
        run("build-hgp", "--h1", h, "--h2", h, "--out", tmp_path / "q")
        run("plan", "--code", tmp_path / "q", "--out", tmp_path / "p.json")
        capsys.readouterr()
        assert run("reduce", "--code", tmp_path / "q", "--plan", tmp_path / "p.json", "--out", tmp_path / "r") == 0
        assert "610 → 441 qubits, 64 logicals, d=6 (certified-upper)" in capsys.readouterr().out

    def test_plan_fixture(self, tmp_path, classical, capsys):
        run("build-hgp", "--h1", classical("k4"), "--h2", classical("seven-check"), "--out", tmp_path / "q")
        capsys.readouterr()
        assert run("plan", "--code", tmp_path / "q") == 0
        assert "removes 18" in capsys.readouterr().out

    def test_fold_symmetric_plan(self, tmp_path, classical, capsys):
        h = classical("k33")
        run("build-hgp", "--h1", h, "--h2", h, "--out", tmp_path / "q")
        assert run("plan", "--code", tmp_path / "q", "--fold-symmetric", "--out", tmp_path / "p.json") == 0
        assert json.loads((tmp_path / "p.json").read_text())["fold_symmetric"]

    def test_chainmap(self, tmp_path, classical, capsys):
        h1, h2 = classical("tiny-d2-x3"), classical("rep3-x3")
        assert run("chainmap", "augment", "--h1", h1, "--h2", h2, "--rows", "0,3", "--out", tmp_path / "a") == 0
        assert "9 → 6 logicals; squares commute" in capsys.readouterr().out
        assert run("chainmap", "puncture", "--h1", h1, "--h2", h2, "--bits", "0", "--out", tmp_path / "p") == 0
        doc = json.loads((tmp_path / "p" / "manifest.json").read_text())
        assert all(doc["checks"].values())

    def test_simulate(self, tmp_path, classical):
        h = classical("k33")
        run("build-hgp", "--h1", h, "--h2", h, "--out", tmp_path / "q")
        run("plan", "--code", tmp_path / "q", "--out", tmp_path / "p.json")
        run("reduce", "--code", tmp_path / "q", "--plan", tmp_path / "p.json", "--out", tmp_path / "r")
        out = tmp_path / "sim.csv"
        assert run("simulate", "--code", tmp_path / "r", "--p", "0", "0.01", "--shots", 200, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "p,shots,failures,bler,ci_low,ci_high,code,schedule"
        assert lines[1].startswith("0.0,200,0,0.0")
        assert json.loads(out.with_suffix(".json").read_text())["rounds"] == 5


class TestExitCodes:
    def test_usage_error(self):
        assert run("plan") == 2

    def test_missing_file(self, tmp_path):
        assert run("plan", "--code", tmp_path / "absent") == 2

    def test_unknown_name(self, tmp_path):
        assert run("gen-classical", "named", "--name", "nope", "--out", tmp_path) == 2

    def test_plan_for_other_code(self, tmp_path, classical):
        h, r = classical("k33"), classical("rep3")
        run("build-hgp", "--h1", h, "--h2", h, "--out", tmp_path / "a")
        run("build-hgp", "--h1", r, "--h2", r, "--out", tmp_path / "b")
        run("plan", "--code", tmp_path / "b", "--out", tmp_path / "p.json")
        assert run("reduce", "--code", tmp_path / "a", "--plan", tmp_path / "p.json", "--out", tmp_path / "r") == 2

    def test_verification_failure_still_writes(self, tmp_path, classical):
        h = classical("k33")
        run("build-hgp", "--h1", h, "--h2", h, "--out", tmp_path / "q")
        run("plan", "--code", tmp_path / "q", "--out", tmp_path / "p.json")
        run("reduce", "--code", tmp_path / "q", "--plan", tmp_path / "p.json", "--out", tmp_path / "r")
        manifest = tmp_path / "r" / "manifest.json"
        doc = json.loads(manifest.read_text())
        doc["d_x"] = doc["d_z"] = 5  # overclaim: a weight-4 logical exists
        manifest.write_text(json.dumps(doc))
        assert run("verify", "--before", tmp_path / "q", "--after", tmp_path / "r", "--out", tmp_path / "v.json") == 3
        assert not json.loads((tmp_path / "v.json").read_text())["ok"]


class TestDeterminism:
    def test_byte_identical(self, tmp_path, classical):
        outs = []
        for tag in ("one", "two"):
            root = tmp_path / tag
            assert run("--seed", 11, "gen-classical", "random", "--n", 12, "--out", root / "c") == 0
            h = root / "c" / "h.alist"
            run("build-hgp", "--h1", h, "--h2", h, "--out", root / "q")
            run("plan", "--code", root / "q", "--out", root / "p.json")
            run("reduce", "--code", root / "q", "--plan", root / "p.json", "--out", root / "r")
            run("--seed", 11, "schedule", "--code", root / "r", "--random", "--out", root / "s.json")
            outs.append({p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()})
        assert outs[0] == outs[1] and len(outs[0]) > 10
