import csv
import json

import numpy as np

from lpldpc import emit_alist, generate_regular, parse_alist
from lpldpc.cli import main

from oracles import var_regular_graph


def write_graph(tmp_path, g, name="g.alist"):
    path = tmp_path / name
    path.write_text(emit_alist(g))
    return str(path)


def write_llr(tmp_path, values, name="llr.txt"):
    path = tmp_path / name
    path.write_text("\n".join(repr(float(v)) for v in values) + "\n")
    return str(path)


def test_gen_writes_parseable_alist(tmp_path, capsys):
    out = tmp_path / "gen.alist"
    code = main(["gen", "--n", "12", "--dv", "3", "--dc", "4",
                 "--seed", "5", "--out", str(out)])
    assert code == 0
    g = parse_alist(out.read_text())
    assert g.regular_degrees() == (3, 4)
    assert g == generate_regular(12, 3, 4, seed=5)
    assert "wrote" in capsys.readouterr().out


def test_gen_reports_divisibility_error(tmp_path, capsys):
    code = main(["gen", "--n", "10", "--dv", "3", "--dc", "4",
                 "--seed", "1", "--out", str(tmp_path / "x.alist")])
    assert code == 1
    assert "divisible" in capsys.readouterr().err


def test_decode_noiseless(tmp_path, capsys):
    g = generate_regular(8, 3, 4, seed=2)
    gp = write_graph(tmp_path, g)
    lp = write_llr(tmp_path, np.ones(8))
    assert main(["decode", "--graph", gp, "--llr", lp]) == 0
    out = capsys.readouterr().out
    assert "status integral" in out
    assert "codeword 00000000" in out
    assert "objective 8.0" in out


def test_decode_with_map_and_comma_file(tmp_path, capsys):
    g = generate_regular(8, 3, 4, seed=2)
    gp = write_graph(tmp_path, g)
    path = tmp_path / "llr.csv"
    path.write_text(",".join(["2.5"] * 8))
    assert main(["decode", "--graph", gp, "--llr", str(path),
                 "--map", "threshold:1.0"]) == 0
    assert "status integral" in capsys.readouterr().out


def test_decode_length_mismatch(tmp_path, capsys):
    g = generate_regular(8, 3, 4, seed=2)
    gp = write_graph(tmp_path, g)
    lp = write_llr(tmp_path, np.ones(5))
    assert main(["decode", "--graph", gp, "--llr", lp]) == 1
    assert "error" in capsys.readouterr().err


def test_decode_bad_map(tmp_path, capsys):
    g = generate_regular(8, 3, 4, seed=2)
    gp = write_graph(tmp_path, g)
    lp = write_llr(tmp_path, np.ones(8))
    assert main(["decode", "--graph", gp, "--llr", lp, "--map", "clip:2"]) == 1


def test_pseudo_prints_completion(tmp_path, capsys):
    g = generate_regular(16, 3, 4, seed=0)
    gp = write_graph(tmp_path, g)
    assert main(["pseudo", "--graph", gp, "--root", "0"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("omega ")
    assert "alpha_max" in out and "pseudoweight" in out and "bound" in out


def test_witness_full_report(tmp_path, capsys):
    g = var_regular_graph(10, 25, 130, seed=1)
    gp = write_graph(tmp_path, g)
    lam = np.ones(10)
    lam[3] = -0.4
    lp = write_llr(tmp_path, lam)
    assert main(["witness", "--graph", gp, "--llr", lp]) == 0
    out = capsys.readouterr().out
    assert "s_star" in out
    assert "U 3" in out
    assert "kappa_interval" in out
    assert "matching" in out


def test_witness_small_degree_graph_omits_params(tmp_path, capsys):
    g = generate_regular(8, 3, 4, seed=2)
    gp = write_graph(tmp_path, g)
    lp = write_llr(tmp_path, np.ones(8))
    assert main(["witness", "--graph", gp, "--llr", lp]) == 0
    out = capsys.readouterr().out
    assert "s_star" in out
    assert "proof parameters n/a" in out


def test_expand_ok_and_violation(tmp_path, capsys):
    g = generate_regular(12, 3, 4, seed=1)
    gp = write_graph(tmp_path, g)
    assert main(["expand", "--graph", gp, "--smax", "1", "--beta", "3"]) == 0
    assert capsys.readouterr().out.startswith("ok")
    assert main(["expand", "--graph", gp, "--smax", "2", "--beta", "3"]) == 0
    # beta = d_v can fail at pairs; either verdict prints something sensible
    assert capsys.readouterr().out.strip()


def test_sim_wer_end_to_end(tmp_path, capsys):
    cfg = {
        "graph": {"n": 8, "dv": 3, "dc": 4, "seed": 2},
        "maps": ["trivial", "quantize2:1"],
        "sigma2": [0.2, 0.6],
        "trials": 10,
        "seed": 4,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "results.csv"
    assert main(["sim", "wer", "--config", str(cfg_path), "--out", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert {r["map"] for r in rows} == {"trivial", "quantize2:1"}
    for r in rows:
        assert int(r["mismatch"]) + int(r["fractional"]) + int(r["tie"]) == int(r["failures"])
    assert "wrote" in capsys.readouterr().out


def test_sim_pseudo_scan_end_to_end(tmp_path):
    cfg = {
        "seed": 5,
        "trials": 1,
        "scan": {"n_values": [16], "dv": 3, "dc": 4, "graphs_per_n": 1, "roots_per_graph": 2},
        "out": str(tmp_path / "scan.csv"),
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert main(["sim", "pseudo-scan", "--config", str(cfg_path)]) == 0
    with open(cfg["out"], newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert all(float(r["pseudoweight"]) <= float(r["bound"]) for r in rows)


def test_sim_missing_out_is_error(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "graph": {"n": 8, "dv": 3, "dc": 4, "seed": 2},
        "maps": ["trivial"], "sigma2": [0.5], "trials": 2, "seed": 0,
    }))
    assert main(["sim", "wer", "--config", str(cfg_path)]) == 1
    assert "out" in capsys.readouterr().err


def test_sim_bad_config_reports_error(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"maps": ["trivial"], "sigma2": [0.5],
                                    "trials": 0, "seed": 0}))
    assert main(["sim", "wer", "--config", str(cfg_path)]) == 1
    assert "error" in capsys.readouterr().err
