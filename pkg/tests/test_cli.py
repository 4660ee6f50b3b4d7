import csv
import json
import re
import subprocess
import sys

import numpy as np
import pytest

from conftest import DATA, google
from reduced_google import io
from reduced_google.cli import main
from reduced_google.interaction import top_friends
from reduced_google.ranking import cheirank, local_indices, pagerank
from reduced_google.reduced import reduce

F40 = [
    "--edges", str(DATA / "fixture40_edges.txt"),
    "--labels", str(DATA / "fixture40_labels.tsv"),
    "--subset", str(DATA / "fixture40_subset.txt"),
]
F30 = ["--edges", str(DATA / "fixture30_edges.txt"), "--subset", str(DATA / "fixture30_subset.txt")]


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_rank_two_cycle(tmp_path):
    (tmp_path / "e.txt").write_text("0 1\n1 0\n")
    assert main(["rank", "--edges", str(tmp_path / "e.txt"), "-o", str(tmp_path / "out")]) == 0
    for name in ("pagerank.csv", "cheirank.csv"):
        rows = read_csv(tmp_path / "out" / name)
        assert [float(r["probability"]) for r in rows] == pytest.approx([0.5, 0.5], abs=1e-15)
        assert [r["global_rank"] for r in rows] == ["1", "2"]


def test_rank_full_subset_gives_permutations(tmp_path):
    args = F40[:4] + ["--subset", str(DATA / "fixture40_all.txt"), "-o", str(tmp_path)]
    assert main(["rank"] + args) == 0
    rows = read_csv(tmp_path / "local_indices.csv")
    assert sorted(int(r["K"]) for r in rows) == list(range(1, 41))
    assert sorted(int(r["K_star"]) for r in rows) == list(range(1, 41))
    front = read_csv(tmp_path / "nondominated.csv")
    assert 1 <= len(front) < 40


def run_pipeline(out):
    assert main(["reduce"] + F40 + ["--config", str(DATA / "fixture40.conf"), "-o", str(out)]) == 0
    assert main(["friends"] + F40 + ["--config", str(DATA / "fixture40.conf"),
                                     "--groups", str(DATA / "fixture40_groups.tsv"), "-o", str(out)]) == 0
    return sorted(p.name for p in out.iterdir())


def test_pipeline_is_byte_identical(tmp_path):
    a = run_pipeline(tmp_path / "a")
    b = run_pipeline(tmp_path / "b")
    assert a == b and len(a) == 10
    for name in a:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_reduce_outputs(tmp_path):
    assert main(["reduce"] + F40 + ["-o", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert sum(summary["weights"].values()) == pytest.approx(1.0, abs=1e-12)
    assert summary["residuals"]["reduced_pagerank"] <= 1e-8
    assert 0 < summary["lambda_c"] < 1
    labels, gr = io.read_matrix_csv(tmp_path / "gr.csv")
    assert labels == summary["subset"]
    np.testing.assert_allclose(gr.sum(axis=0), 1.0, atol=1e-10)
    _, grr = io.read_matrix_csv(tmp_path / "grr.csv")
    _, gpr = io.read_matrix_csv(tmp_path / "gpr.csv")
    _, gqr = io.read_matrix_csv(tmp_path / "gqr.csv")
    np.testing.assert_allclose(grr + gpr + gqr, gr, atol=1e-15)


def test_matrix_csv_round_trip_is_exact(tmp_path):
    m = np.random.default_rng(0).random((3, 3)) / 7
    io.write_matrix_csv(tmp_path / "m.csv", m, ["a", "b", "c"])
    labels, back = io.read_matrix_csv(tmp_path / "m.csv")
    assert labels == ["a", "b", "c"]
    np.testing.assert_array_equal(back, m)


def test_reduce_then_oracle_cross_check(tmp_path, capsys):
    assert main(["reduce"] + F30 + ["-o", str(tmp_path / "red")]) == 0
    code = main(["oracle"] + F30 + ["--decomposition", str(tmp_path / "red"), "--surfer-steps", "200000",
                                    "-o", str(tmp_path / "orc")])
    assert code == 0, capsys.readouterr().out
    report = json.loads((tmp_path / "orc" / "oracle_report.json").read_text())
    assert report["passed"]
    names = {c["name"] for c in report["checks"]}
    assert {"file_gr_vs_dense_inverse", "deflated_vs_dense_inverse", "surfer_max_deviation_in_std_errors"} <= names


def test_oracle_flags_corrupted_graph(tmp_path):
    assert main(["reduce"] + F30 + ["-o", str(tmp_path / "red")]) == 0
    edges = (DATA / "fixture30_edges.txt").read_text().splitlines()
    data = [i for i, line in enumerate(edges) if line.strip() and not line.startswith("#")]
    src, tgt = edges[data[0]].split()
    edges[data[0]] = f"{src} {(int(tgt) + 1) % 30 if int(tgt) + 1 != int(src) else (int(tgt) + 2) % 30}"
    (tmp_path / "bad.txt").write_text("\n".join(edges) + "\n")
    args = ["--edges", str(tmp_path / "bad.txt"), "--subset", str(DATA / "fixture30_subset.txt")]
    code = main(["oracle"] + args + ["--decomposition", str(tmp_path / "red"), "--surfer-steps", "100000",
                                     "-o", str(tmp_path / "orc")])
    assert code == 6
    report = json.loads((tmp_path / "orc" / "oracle_report.json").read_text())
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert failed == ["file_gr_vs_dense_inverse"]


def test_oracle_size_cap(tmp_path):
    big = tmp_path / "big.txt"
    big.write_text("".join(f"{i} {(i + 1) % 600}\n" for i in range(600)))
    assert main(["oracle", "--edges", str(big), "-o", str(tmp_path)]) == 7


def test_friends_matches_library(fixture40, tmp_path):
    g, subset = fixture40
    assert main(["friends"] + F40 + ["--seeds", "n00,n05", "-k", "3", "-o", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "gr_friends.csv")
    op = google(g)
    d = reduce(op, subset)
    order = local_indices(pagerank(op), cheirank(g), subset).K
    labels = list(subset.labels)
    expect = []
    for seed in ("n00", "n05"):
        j = labels.index(seed)
        expect += [(seed, labels[i], v) for i, v in top_friends(d.G_R, j, 3, order)]
    assert [(r["seed"], r["member"]) for r in rows] == [(s, m) for s, m, _ in expect]
    np.testing.assert_allclose([float(r["value"]) for r in rows], [v for *_, v in expect], rtol=0, atol=1e-15)


def test_friends_from_saved_decomposition(tmp_path):
    assert main(["reduce"] + F40 + ["-o", str(tmp_path / "red")]) == 0
    common = F40 + ["--seeds", "n01", "--source", "gqrnd", "--mode", "followers"]
    assert main(["friends"] + common + ["-o", str(tmp_path / "a")]) == 0
    assert main(["friends"] + common + ["--decomposition", str(tmp_path / "red"), "-o", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "gqrnd_followers.csv").read_text() == (tmp_path / "b" / "gqrnd_followers.csv").read_text()


DOT_EDGE = re.compile(r'^\s*"[^"]+" -> "[^"]+" \[[^\]]*\];$')
DOT_NODE = re.compile(r'^\s*"[^"]+" \[[^\]]*\];$')


def test_dot_output_is_well_formed(tmp_path):
    run_pipeline(tmp_path)
    lines = (tmp_path / "gr_friends.dot").read_text().splitlines()
    assert lines[0].startswith("digraph ") and lines[0].endswith("{")
    assert lines[-1] == "}"
    body = [line for line in lines[1:-1] if "->" in line or line.strip().startswith('"')]
    assert all(DOT_EDGE.match(line) or DOT_NODE.match(line) for line in body)
    edges = [line for line in body if "->" in line]
    assert any("style=bold" in line for line in edges)
    assert any("color=red" in line for line in edges)
    data = json.loads((tmp_path / "gr_friends.json").read_text())
    assert len(data["edges"]) == len(edges)


def test_dot_colors_follow_groups(tmp_path):
    run_pipeline(tmp_path)
    dot = (tmp_path / "gr_friends.dot").read_text()
    groups, colors = io.parse_groups((DATA / "fixture40_groups.tsv").read_text())
    for label in ("n00", "n05"):
        line = next(l for l in dot.splitlines() if l.strip().startswith(f'"{label}" ['))
        assert f"fillcolor={colors[groups[label]]}" in line.replace('"', "")


def test_missing_group_warns(tmp_path, caplog):
    (tmp_path / "groups.tsv").write_text("n00\tOC\n")
    with caplog.at_level("WARNING"):
        code = main(["friends"] + F40 + ["--seeds", "n00", "--groups", str(tmp_path / "groups.tsv"),
                                         "-o", str(tmp_path)])
    assert code == 0
    assert any("group" in r.getMessage() for r in caplog.records)


def test_config_precedence(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("alpha = 0.5\nseries_tol = 1e-11\n")
    assert main(["reduce"] + F40 + ["--config", str(conf), "--alpha", "0.7", "-o", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["config"]["alpha"] == 0.7
    assert summary["config"]["series_tol"] == 1e-11
    assert summary["config"]["deflation_tol"] == 1e-12
    assert summary["config_file"] == {"alpha": "0.5", "series_tol": "1e-11"}


@pytest.mark.parametrize(
    "argv, code",
    [
        (["friends"] + F40 + ["--seeds", "nope"], 3),
        (["friends"] + F40 + ["--seeds", "n04"], 3),
        (["friends"] + F40, 3),
        (["friends"] + F40 + ["--seeds", "n00", "-k", "16"], 2),
        (["reduce"] + F40 + ["--alpha", "1.5"], 2),
        (["reduce", "--edges", "/nonexistent/edges.txt", "--subset", "x"], 3),
        (["reduce", "--edges", str(DATA / "fixture40_edges.txt")], 3),
        (["reduce"] + F40[:4] + ["--subset", str(DATA / "fixture40_all.txt")], 2),
        (["reduce"] + F40 + ["--pagerank-max-iter", "2"], 4),
    ],
)
def test_exit_codes(argv, code, tmp_path):
    assert main(argv + ["-o", str(tmp_path)]) == code


def test_unknown_config_key(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("alpah = 0.5\n")
    assert main(["reduce"] + F40 + ["--config", str(conf), "-o", str(tmp_path)]) == 3


def test_usage_error_from_argparse():
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2


def test_module_entry_point(tmp_path):
    (tmp_path / "e.txt").write_text("0 1\n1 0\n")
    proc = subprocess.run([sys.executable, "-m", "reduced_google", "rank", "--edges", str(tmp_path / "e.txt"),
                           "-o", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "pagerank.csv").exists()
