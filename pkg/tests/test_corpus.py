import random
import time

from matchkast.compound import format_cpdmap
from matchkast.corpus import gen_corpus, load_entry, random_lattice_patch, random_map, write_corpus
from matchkast.graph import same_graph
from matchkast.oracle import oracle_count


def test_sizes_and_kinds(corpus):
    kinds = [e.kind for e in corpus]
    assert kinds.count("graph") == 500 and kinds.count("compound") == 60 and kinds.count("symmetric") == 40
    names = [e.name for e in corpus]
    assert len(set(names)) == len(names)


def test_budget_respected(corpus_graphs):
    assert all(len(e.obj.vertices) <= 14 for e in corpus_graphs)


def test_every_check_is_exercised(corpus_compounds, corpus_symmetric):
    assert any(e.obj.leaves for e in corpus_compounds)
    assert any(e.obj.leaves for e in corpus_symmetric)
    assert any(not e.obj.leaves and e.obj.w for e in corpus_symmetric)


def test_weights_mix(corpus_graphs):
    has_var = sum(1 for e in corpus_graphs if any(not e.obj.weight(x).is_constant() for x in e.obj.edges))
    has_neg = sum(1 for e in corpus_graphs
                  if any(e.obj.weight(x).is_constant() and e.obj.weight(x).constant_value() < 0 for x in e.obj.edges))
    assert has_var > 20 and has_neg > 20


def test_deterministic():
    a = gen_corpus(seed=7, graphs=30, compounds=5, symmetric=5)
    b = gen_corpus(seed=7, graphs=30, compounds=5, symmetric=5)
    assert [e.files for e in a] == [e.files for e in b]
    c = gen_corpus(seed=8, graphs=30, compounds=5, symmetric=5)
    assert [e.files for e in a] != [e.files for e in c]


def test_write_and_load(tmp_path):
    entries = gen_corpus(seed=2, graphs=5, compounds=3, symmetric=3)
    write_corpus(entries, tmp_path)
    for ent in entries:
        back = load_entry(tmp_path / ent.name)
        assert back.kind == ent.kind
        if ent.kind == "graph":
            assert same_graph(back.obj, ent.obj)
        elif ent.kind == "compound":
            assert same_graph(back.obj.graph, ent.obj.graph)
            assert format_cpdmap(back.obj) == format_cpdmap(ent.obj)
        else:
            assert same_graph(back.obj.graph, ent.obj.graph)


def test_budget_12_oracle_is_fast():
    entries = gen_corpus(seed=1, budget=12, graphs=60, compounds=6, symmetric=6)
    for ent in entries:
        g = ent.obj if ent.kind == "graph" else ent.obj.graph
        assert len(g.vertices) <= 12 or ent.kind != "graph"
        t = time.perf_counter()
        oracle_count(g)
        assert time.perf_counter() - t < 1.0


def test_generators_sizes():
    rng = random.Random(0)
    for n in range(2, 15):
        assert len(random_map(rng, n).vertices) == n
        assert len(random_lattice_patch(rng, n).vertices) <= n
