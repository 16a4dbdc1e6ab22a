import json

import numpy as np
import pytest

import damteval as dt


def test_cosine_and_matrix():
    assert dt.cosine_similarity([1, 0, 0, 0], [0.6, 0.8, 0, 0]) == pytest.approx(0.6, abs=1e-15)
    ref = dt.SegmentEmbedding(["x", "y"], np.array([[1, 0], [0, 1]]))
    hyp = dt.SegmentEmbedding(["z"], np.array([[0.6, 0.8]]))
    np.testing.assert_allclose(dt.similarity_matrix(ref, hyp), [[0.6], [0.8]], atol=1e-7)


def test_greedy_match_and_degenerate():
    m = dt.greedy_match(np.array([[0.8, 0.2], [0.1, 0.6]]))
    assert (m.recall, m.precision) == pytest.approx((0.7, 0.7))
    empty = dt.greedy_match(np.zeros((2, 0)))
    assert (empty.recall, empty.precision, empty.f) == (0.0, 0.0, 0.0)


def test_difficulty_and_da_scores():
    ref = dt.SegmentEmbedding(["a", "b"], np.eye(2))
    d = dt.compute_difficulty(ref, [ref, ref])
    assert d.weights == [0.0, 0.0]
    s = dt.da_scores(ref, ref, d)
    assert (s.da_recall, s.da_precision, s.da_f) == (0.0, 0.0, 0.0)
    unit = dt.DifficultyMap(["a", "b"], [1.0, 1.0])
    hyp = dt.SegmentEmbedding(["c"], np.array([[1.0, 1.0]]))
    s = dt.da_scores(ref, hyp, unit)
    assert s.da_recall == pytest.approx(s.raw.recall, abs=1e-12)
    assert s.da_precision == pytest.approx(s.raw.precision, abs=1e-12)


def test_errors_carry_codes():
    with pytest.raises(dt.DamtevalError) as e:
        dt.SegmentEmbedding(["a"], np.zeros((1, 3)))
    assert dt.error_code(e.value) == "DegenerateEmbedding"
    with pytest.raises(dt.DamtevalError) as e:
        dt.pearson([1, 1, 1], [1, 2, 3])
    assert dt.error_code(e.value) == "UndefinedCorrelation"


def test_statistics():
    assert dt.pearson([1, 2, 3, 4], [1, 3, 2, 4]) == 0.8
    assert dt.spearman([1, 2, 3, 4], [1, 3, 2, 4]) == 0.8
    assert dt.kendall([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(4 / 6)
    human = {f"s{i:02d}": float(i) for i in range(22)}
    assert len(dt.top_k_select(human, fraction=0.3)) == 6
    sweep = dt.top_k_sweep(human, human, 2, 5)
    assert [p["tau"] for p in sweep] == [1.0] * 4


def test_rank_report_table2(fixtures):
    d = fixtures / "wmt19_ende_top6"
    rows = [l.split("\t") for l in (d / "scores.tsv").read_text().splitlines()]
    header, body = rows[0], rows[1:]
    human = {k: float(v) for k, v in (l.split("\t") for l in (d / "human.tsv").read_text().splitlines())}
    cols = {m: {r[0]: float(r[i]) for r in body} for i, m in enumerate(header) if i}
    assert dt.rank_report(cols["DA-BERTScore"], human)["sum_abs_delta"] == 4
    assert dt.rank_report(cols["TER"], human, lower_is_better=True)["sum_abs_delta"] == 14


def test_bleu():
    assert dt.corpus_bleu(["a b c d e"], ["a b c d e"]) == pytest.approx(1.0)
    assert dt.corpus_bleu(["a b c e"], ["a b c d"]) == 0.0


def test_score_corpus_matches_oracle(toy):
    expected = json.loads((toy["dir"] / "expected.json").read_text())
    got = dt.score_corpus(str(toy["refs"]), toy["hyps"], str(toy["ref_emb"]), toy["sys_embs"], threads=4)
    for sys in expected["systems"]:
        g = got[sys["system"]]
        for key in ("precision", "recall", "f", "da_precision", "da_recall", "da_f"):
            assert g[key] == pytest.approx(sys[key], abs=1e-9)
