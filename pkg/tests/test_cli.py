import json

import pytest

from coarsekit import io
from coarsekit.cli import Report, main, run
from coarsekit.constructions import window_cover
from coarsekit.graphs import FiniteGroup, cycle_graph, graph_metric, petersen_graph
from coarsekit.instances import closed_ball_cover, line_space
from coarsekit.measures import ProbabilityMeasure
from coarsekit.metric import Cover
from coarsekit.pou import PartitionOfUnity, PropertyAWitness


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("instances")
    paths = {}

    def put(name, data):
        paths[name] = str(d / f"{name}.json")
        io.write_json(paths[name], data)

    c6 = cycle_graph(6)
    put("c6", io.graph_to_json(c6))
    put("c4", io.graph_to_json(cycle_graph(4)))
    put("petersen", io.graph_to_json(petersen_graph()))
    C24 = graph_metric(cycle_graph(24))
    put("c24", io.graph_to_json(cycle_graph(24)))
    put("arcs24", io.cover_to_json(window_cover(C24, range(24), 16)))
    put("arcs24_short", io.cover_to_json(window_cover(C24, range(24), 4)))
    C4 = graph_metric(cycle_graph(4))
    put("c4cover", io.cover_to_json(Cover.from_sets(C4, [{0, 1}, {2, 3}])))
    L4 = line_space([0, 1, 2, 3])
    put("line4", io.space_to_json(L4))
    put("singletons", io.cover_to_json(Cover.from_sets(L4, [{i} for i in range(4)])))
    put("whole4", io.cover_to_json(Cover.from_sets(L4, [range(4)])))
    put("halfpou", io.pou_to_json(PartitionOfUnity(line_space([0]), [{"a": 0.5, "b": 0.5}])))
    put("point", io.space_to_json(line_space([0])))
    put("z12", io.group_to_json(FiniteGroup.cyclic(12, [1, 11])))
    put("z2", io.group_to_json(FiniteGroup.cyclic(2)))
    C12 = graph_metric(cycle_graph(12))
    put("c12", io.graph_to_json(cycle_graph(12)))
    put("arcs12", io.cover_to_json(window_cover(C12, range(12), 4)))
    put("uniform12", io.measure_to_json(ProbabilityMeasure.uniform(C12)))
    C60 = graph_metric(cycle_graph(60))
    put("c60", io.graph_to_json(cycle_graph(60)))
    put("arcs60", io.cover_to_json(window_cover(C60, range(0, 60, 2), 12)))
    put("uniform60", io.measure_to_json(ProbabilityMeasure.uniform(C60)))
    P80 = graph_metric(cycle_graph(80))
    put("c80", io.graph_to_json(cycle_graph(80)))
    from coarsekit.pou import barycentric_from_cover

    put("smooth80", io.pou_to_json(barycentric_from_cover(closed_ball_cover(P80, 10))))
    far = line_space([0, 10, 20])
    put("far3", io.space_to_json(far))
    put("wit3", io.witness_to_json(PropertyAWitness(tuple(frozenset({(x, 1)}) for x in range(3)), 1.0)))
    bad = [[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 5], [3, 2, 1, 0]]
    put("asym", {"n": 4, "dist": bad})
    put("badschema", {"n": 2, "dist": [[0, "x"], [1, 0]]})
    put("six", io.space_to_json(line_space(range(6))))
    put("missing5", {"elements": [{"label": "a", "points": [0, 1, 2, 3, 4]}]})
    return paths


GOLDEN = [
    ("cheeger --graph {c6}", 0, "h = 2/3, A = [0,1,2]"),
    ("cheeger --graph {petersen}", 0, "h = "),
    ("girth --graph {petersen}", 0, "girth = 5"),
    ("girth --graph {c6}", 0, "girth = 6"),
    ("expander --graph {petersen} --k 3 --eps 0.5", 0, "expander: True"),
    ("expander --graph {c6} --k 2 --eps 1", 1, "fails"),
    ("halo --graph {c6} --max-size 2 --c 1", 0, "min |halo(A)|/|A| = 1"),
    ("halo --graph {c6} --max-size 3 --c 1", 1, "fails"),
    ("girth-halo --graph {petersen} --M 1", 0, "holds"),
    ("expander-light --graph {c6} --graph {petersen} --max-size 2 --c 1", 0, "n=10"),
    ("amenability --space {line4} --cover {singletons} --r 1 --s 2 --eps 0.5", 1, "min ratio = 1/3"),
    ("amenability --space {line4} --cover {whole4} --r 1 --s 2 --eps 0.5", 0, "min ratio = 1"),
    ("amenability --space {line4} --cover {whole4} --r 1 --s 2", 0, "min ratio = 1"),
    ("double-count --graph {c4} --cover {c4cover}", 0, "lhs = 4, rhs = 4"),
    ("levin --space {line4} --r 1", 0, "coboundedness = 1"),
    ("levin --space {line4} --r 1 --S 0", 1, "points [1, 2, 3]"),
    ("round --space {point} --pou {halfpou} --n 1 --m 3", 0, "0.333333"),
    ("round --space {point} --pou {halfpou} --n 1 --m 3 --eps 0.5", 2, "m = 3"),
    ("cover-to-pou --graph {c24} --cover {arcs24} --r 2 --mu 0.25", 0, "lebesgue"),
    ("cover-to-pou --graph {c24} --cover {arcs24_short} --r 2 --mu 0.25", 1, "4r"),
    ("ratio-bound --space {line4} --cover {whole4} --s 1", 0, "min ratio 1"),
    ("property-a --graph {c80} --pou {smooth80} --R 1.5 --eps 0.5", 0, "witness with S"),
    ("property-a --space {far3} --witness {wit3} --eps 0.5", 0, "Lipschitz"),
    ("folner --group {z12} --F 0,1,2,3", 0, "max_gen_ratio = 1/2"),
    ("product-group --group {z2} --n 6 --M 1", 0, "127 subsets"),
    ("product-group --group {z2} --n 5 --M 1", 1, "3M + 2"),
    ("ula-scan --graph {c12} --measure {uniform12} --cover {arcs12} --R 2 --eps 0.6", 0, "element 0"),
    ("ula-scan --graph {c12} --measure {uniform12} --cover {arcs12} --R 2 --eps 0.4", 1, "2/3"),
    ("msp --graph {c60} --measure {uniform60} --cover {arcs60} --R 2 --S 11 --c 0.3 --eps 0.5", 0, "R-disjoint"),
    ("net --space {line4} --r 2", 0, "net = [0, 2]"),
    ("gen petersen", 0, '"n": 10'),
    ("cheeger --graph {asym}", 2, "error"),
    ("girth", 2, ""),
    ("nosuchcommand", 2, ""),
    ("cheeger --graph /nonexistent.json", 2, "no such file"),
    ("--tol 0 net --space {line4} --r 2", 2, "--tol"),
]


@pytest.mark.parametrize("line,code,expect", GOLDEN, ids=[g[0].split()[0] + f"-{i}" for i, g in enumerate(GOLDEN)])
def test_golden(files, line, code, expect):
    argv = line.format(**files).split()
    report, got, out = run(argv)
    assert got == code, out
    assert expect in out


@pytest.mark.parametrize("line,code,expect", [g for g in GOLDEN if g[1] != 2])
def test_json_round_trip(files, line, code, expect):
    argv = ["--format", "json", *line.format(**files).split()]
    report, got, out = run(argv)
    back = Report.from_json(out)
    assert back.status == report.status
    assert back.exit_code == got == code
    assert json.loads(back.to_json()) == json.loads(out)


def test_schema_error_points_at_entry(files):
    _, code, out = run(["net", "--space", files["badschema"], "--r", "1"])
    assert code == 2
    assert "/dist/0/1" in out


def test_asymmetry_named(files):
    _, code, out = run(["net", "--space", files["asym"], "--r", "1"])
    assert code == 2 and "(2,3)" in out


def test_missing_cover_point(files):
    _, code, out = run(["amenability", "--space", files["six"], "--cover", files["missing5"], "--r", "1", "--s", "2"])
    assert code == 2 and "missing [5]" in out


def test_gen_writes_cycle(tmp_path, capsys):
    out = tmp_path / "c6.json"
    assert main(["gen", "cycle", "--size", "6", "--out", str(out)]) == 0
    assert main(["cheeger", "--graph", str(out)]) == 0
    assert "h = 2/3, A = [0,1,2]" in capsys.readouterr().out


def test_gen_space_is_graph_metric(tmp_path):
    out = tmp_path / "q3.json"
    run(["gen", "hypercube", "--size", "3", "--as-space", "--out", str(out)])
    X = io.parse_instance(out, "space")
    assert X.diameter() == 3


def test_seed_is_deterministic(files):
    argv = ["--seed", "3", "halo", "--graph", files["petersen"], "--max-size", "9", "--samples", "200"]
    assert run(argv)[2] == run(argv)[2]


def test_tolerance_restored(files):
    from coarsekit import config

    run(["--tol", "1e-3", "net", "--space", files["line4"], "--r", "2"])
    assert config.get_tol() == config.DEFAULT_TOL
