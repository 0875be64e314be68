
import fixtures as fx
from freevol import filling as fl
from freevol.splittings import MarkedPair
from freevol.words import CyclicWord, parse_word, render_word

B2 = fx.B2
B3 = fx.B3
P = fx.w3


def classes(basis, texts):
    return [CyclicWord.of(parse_word(t, basis)) for t in texts]


def test_whitehead_graph_edges():
    # Cyclic word ab: adjacencies a.b and b.a give edges {a^-1, b}, {b^-1, a}.
    graph = fl.whitehead_graph(classes(B2, ["ab"]), 2)
    assert len(graph.edges) == 2
    assert not graph.is_connected()


def test_minimize_single_letter_is_stable():
    minimized, total, log = fl.whitehead_minimize(classes(B3, ["a"]), 3)
    assert total == 1
    assert log == []
    assert [render_word(c.letters, B3) for c in minimized] == ["a"]


def test_minimize_commutator_rank2():
    minimized, total, _log = fl.whitehead_minimize(classes(B2, ["abAB"]), 2)
    assert total == 4  # the commutator class is already minimal


def test_commutator_fills_rank2():
    ok, evidence = fl.cut_vertex_check(classes(B2, ["abAB"]), 2)
    assert ok
    assert evidence["criterion"] == fl.WHITEHEAD_CRITERION
    assert evidence["connected"] is True
    assert evidence["cut_vertex"] is None


def test_two_letters_in_rank3_do_not_fill():
    ok, evidence = fl.cut_vertex_check(classes(B3, ["a", "b"]), 3)
    assert not ok
    assert evidence["connected"] is False


def test_check_f2_on_pulled_back_pair():
    pair = fx.pair_with_sixth_power()
    ok, evidence = fl.check_f2(pair)
    assert ok
    assert all(
        all(rank == 0 for rank in item["component_ranks"])
        for item in evidence["pullbacks"]
    )


def test_check_f2_fails_on_identical_pair():
    base = fx.amalgam_over_c()
    certificate = fl.check_filling(MarkedPair(base, base))
    assert certificate.f2 is False
    assert certificate.fills is False
    assert certificate.verdict == "not_filling"


def test_check_f3_witness_on_pulled_back_pair():
    pair = fx.pair_with_sixth_power()
    ok, evidence = fl.check_f3(pair)
    assert not ok
    assert evidence["minimized_classes"] == ["c", "b"]


def test_unknown_verdict_when_only_f3_fails():
    certificate = fl.check_filling(fx.pair_with_sixth_power())
    assert certificate.f2 is True
    assert certificate.f3 is False
    assert certificate.fills is None
    assert certificate.verdict == "unknown"
    assert certificate.witness == ("c", "b")
    payload = certificate.to_json()
    assert payload["schema"] == "freevol/1"


def test_filling_pair_certified():
    for pair in (fx.certified_filling_pair(), fx.mirror_filling_pair()):
        certificate = fl.check_filling(pair)
        assert certificate.fills is True
        assert certificate.verdict == "fills"


def test_check_f1_for_discharges_witness_subgroup():
    pair = fx.pair_with_sixth_power()
    ok, evidence = fl.check_f1_for(pair, [P("c"), P("cababbc")])
    assert ok
    assert evidence == {"vol_1": 3, "vol_2": 2}
