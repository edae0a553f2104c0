import numpy as np
import pytest
from scipy import stats

from corpus import Corpus
from errors import ConfigError, InstanceMismatchError
from evaluation import (
    CurvePoint,
    SemiSupervisedCurve,
    compare_systems,
    default_role_mapping,
    gold_label_frequencies,
    purity_collocation,
    read_labels,
    score_labels,
    select_supervised_sentences,
    semi_supervised_curve,
    stratified_shuffling,
    supervised_baseline,
    syntactic_baseline,
    write_labels,
)
from generator import SyntheticConfig, generate_corpus
from inference import SamplerConfig
from roles import Hyperparams, primary, secondary


def _clustering(labels, predicate="give"):
    return {predicate: {f"i{n}": label for n, label in enumerate(labels)}}


def test_perfect_clustering():
    gold = _clustering(["A0", "A0", "A1", "A1"])
    report = purity_collocation(_clustering(["x", "x", "y", "y"]), gold)
    assert (report.pu, report.co, report.f1) == (1.0, 1.0, 1.0)
    assert report.instances == 4


def test_single_cluster():
    gold = _clustering(["A0", "A0", "A1"])
    report = purity_collocation(_clustering(["x", "x", "x"]), gold)
    assert report.pu == pytest.approx(2 / 3)
    assert report.co == pytest.approx(1.0)
    assert report.f1 == pytest.approx(0.8)


def test_micro_average_weights_by_instances():
    gold = {**_clustering(["A0", "A0", "A1"], "give"), **_clustering(["A0"], "take")}
    induced = {**_clustering(["x", "x", "x"], "give"), **_clustering(["z"], "take")}
    report = purity_collocation(induced, gold)
    assert report.per_predicate["give"].pu == pytest.approx(2 / 3)
    assert report.per_predicate["take"].pu == 1.0
    assert report.pu == pytest.approx(3 / 4)
    assert report.co == pytest.approx(1.0)


def test_scores_ignore_cluster_names():
    rng = np.random.default_rng(0)
    for _ in range(50):
        gold_labels = [f"A{v}" for v in rng.integers(0, 4, size=30)]
        induced_labels = [f"c{v}" for v in rng.integers(0, 5, size=30)]
        renamed = {f"c{v}": f"k{p}" for v, p in zip(range(5), rng.permutation(5))}
        gold = _clustering(gold_labels)
        first = purity_collocation(_clustering(induced_labels), gold)
        second = purity_collocation(_clustering([renamed[l] for l in induced_labels]), gold)
        assert (first.pu, first.co) == (second.pu, second.co)


def test_purity_and_collocation_are_dual():
    rng = np.random.default_rng(1)
    a = [f"a{v}" for v in rng.integers(0, 3, size=40)]
    b = [f"b{v}" for v in rng.integers(0, 6, size=40)]
    forward = purity_collocation(_clustering(a), _clustering(b))
    backward = purity_collocation(_clustering(b), _clustering(a))
    assert forward.pu == pytest.approx(backward.co)
    assert forward.co == pytest.approx(backward.pu)


def test_mismatched_instances():
    with pytest.raises(InstanceMismatchError) as info:
        purity_collocation(_clustering(["x", "y"]), _clustering(["A0", "A1", "A2"]))
    assert "give/i2" in info.value.offending


def test_score_labels_skips_excluded_and_unlabeled(make_frame):
    frame = make_frame([("SBJ", "he", "PRP"), ("OBJ", "it", "PRP"), ("ADV", "now", "RB")],
                       gold=["A0", "V", None])
    report = score_labels([frame], {"en:0:2": ("P1", "S1", "S2")})
    assert report.instances == 1
    with pytest.raises(InstanceMismatchError):
        score_labels([frame], {})


def _deprel_frames(make_frame, deprels, predicate="give"):
    return [
        make_frame([(deprel, "w", "p")], frame_id=f"en:{n}:2", sentence_id=n, predicate=predicate)
        for n, deprel in enumerate(deprels)
    ]


def test_syntactic_baseline_ranks_by_frequency(make_frame):
    frames = _deprel_frames(make_frame, ["SBJ", "SBJ", "SBJ", "OBJ", "OBJ", "TMP"])
    labels = syntactic_baseline(frames, 2)
    assert [labels[f.frame_id][0] for f in frames] == ["c1", "c1", "c1", "c2", "c2", "c2"]

    labels = syntactic_baseline(frames, 3)
    assert [labels[f.frame_id][0] for f in frames] == ["c1", "c1", "c1", "c2", "c2", "c3"]


def test_syntactic_baseline_breaks_ties_by_name(make_frame):
    frames = _deprel_frames(make_frame, ["OBJ", "NMOD", "OBJ", "NMOD", "SBJ"])
    labels = syntactic_baseline(frames, 2)
    # NMOD and OBJ are tied; NMOD sorts first
    assert [labels[f.frame_id][0] for f in frames] == ["c2", "c1", "c2", "c1", "c2"]


def test_syntactic_baseline_single_cluster(make_frame):
    frames = _deprel_frames(make_frame, ["SBJ", "OBJ"])
    assert set(syntactic_baseline(frames, 1).values()) == {("c1",)}
    with pytest.raises(ConfigError):
        syntactic_baseline(frames, 0)


def test_default_role_mapping():
    frequencies = {"A0": 50, "A1": 80, "AM-TMP": 20, "A2": 30, "AM-LOC": 10}
    mapping = default_role_mapping(frequencies, 5, 2)
    assert mapping.to_dict() == {
        "A0": "P1", "A1": "P2", "A2": "S1", "AM-TMP": "S2", "AM-LOC": "S3",
    }

    overflow = default_role_mapping(frequencies, 4, 2)
    assert overflow.get("A2") == secondary(1)
    assert overflow.get("AM-TMP") == secondary(2)
    assert overflow.get("AM-LOC") == secondary(2)

    with pytest.raises(ConfigError):
        default_role_mapping(frequencies, 5, 1)
    assert default_role_mapping({"A0": 3, "A2": 1}, 5, 1).get("A0") == primary(1)


def test_identical_systems_are_not_different():
    gold = {p: {f"i{n}": f"A{n % 3}" for n in range(12)} for p in ("give", "take", "make")}
    system = {p: {i: f"c{n % 2}" for n, i in enumerate(sorted(gold[p]))} for p in gold}
    assert stratified_shuffling(system, system, gold, iterations=999, seed=0) == 1.0


def test_perfect_system_beats_random():
    rng = np.random.default_rng(4)
    predicates = [f"p{k}" for k in range(20)]
    gold = {p: {f"i{n}": f"A{rng.integers(4)}" for n in range(30)} for p in predicates}
    perfect = {p: dict(gold[p]) for p in predicates}
    noise = {p: {i: f"c{rng.integers(4)}" for i in gold[p]} for p in predicates}
    assert stratified_shuffling(perfect, noise, gold, iterations=999, seed=0) < 0.05


def test_shuffling_is_seeded():
    rng = np.random.default_rng(5)
    gold = {f"p{k}": {f"i{n}": f"A{rng.integers(3)}" for n in range(10)} for k in range(6)}
    a = {p: {i: f"c{rng.integers(3)}" for i in gold[p]} for p in gold}
    b = {p: {i: f"c{rng.integers(3)}" for i in gold[p]} for p in gold}
    assert stratified_shuffling(a, b, gold, 500, seed=3) == stratified_shuffling(a, b, gold, 500, seed=3)


def test_shuffles_are_counted_across_batches(monkeypatch):
    import evaluation

    monkeypatch.setattr(evaluation, "SHUFFLE_CHUNK", 7)
    gold = {p: {f"i{n}": f"A{n % 3}" for n in range(12)} for p in ("give", "take", "make")}
    system = {p: {i: f"c{n % 2}" for n, i in enumerate(sorted(gold[p]))} for p in gold}
    # every one of the 999 shuffles ties the observed difference of zero
    assert stratified_shuffling(system, system, gold, iterations=999, seed=0) == 1.0
    assert stratified_shuffling(system, system, gold, iterations=5, seed=0) == 1.0


def test_compare_systems(make_frame):
    frames = [
        make_frame([("SBJ", "x", "N"), ("OBJ", "y", "N")], gold=["A0", "A1"],
                   frame_id=f"en:{n}:2", sentence_id=n, predicate=f"v{n}")
        for n in range(20)
    ]
    gold_like = {f.frame_id: ("P1", "P2") for f in frames}
    collapsed = {f.frame_id: ("S1", "S1") for f in frames}
    result = compare_systems(frames, gold_like, collapsed, "gold vs collapsed", iterations=499, seed=1)
    assert result.comparison == "gold vs collapsed"
    assert 0 < result.p_value < 0.05
    assert result.significant


@pytest.mark.slow
def test_null_p_values_are_uniform():
    rng = np.random.default_rng(11)
    p_values = []
    for trial in range(200):
        gold = {f"p{k}": {f"i{n}": f"A{rng.integers(3)}" for n in range(20)} for k in range(12)}
        a = {p: {i: f"c{rng.integers(3)}" for i in gold[p]} for p in gold}
        b = {p: {i: f"c{rng.integers(3)}" for i in gold[p]} for p in gold}
        p_values.append(stratified_shuffling(a, b, gold, iterations=999, seed=trial))
    assert stats.kstest(p_values, "uniform").pvalue > 0.001


def _labeled_frames(make_frame, count=12):
    frames = []
    for n in range(count):
        frames.append(make_frame(
            [("SBJ", "he", "PRP"), ("OBJ", "it", "NN")], gold=["A0", "A1"],
            frame_id=f"en:{n}:2", sentence_id=n, predicate="give",
        ))
    return frames


def test_supervised_baseline_without_labels_is_syntactic(make_frame):
    frames = _labeled_frames(make_frame)
    mapping = default_role_mapping({"A0": 1, "A1": 1}, 4, 2)
    assert supervised_baseline([], frames, mapping, 4, 2) == syntactic_baseline(frames, 4)


def test_supervised_baseline_with_every_label(make_frame):
    frames = _labeled_frames(make_frame)
    mapping = default_role_mapping({"A0": 1, "A1": 1}, 4, 2)
    labels = supervised_baseline(frames, frames, mapping, 4, 2, Hyperparams(), seed=2, decode_iterations=20)
    assert score_labels(frames, labels).f1 == pytest.approx(1.0)


def test_supervised_baseline_uses_syntax_for_unseen_predicates(make_frame):
    labeled = _labeled_frames(make_frame, 4)
    unseen = [make_frame([("SBJ", "he", "PRP")], gold=["A0"], frame_id="en:9:2", sentence_id=9, predicate="sing")]
    mapping = default_role_mapping({"A0": 1, "A1": 1}, 4, 2)
    labels = supervised_baseline(labeled, unseen, mapping, 4, 2, decode_iterations=5)
    assert labels == syntactic_baseline(unseen, 4)


def test_select_supervised_sentences(make_frame):
    frames = _labeled_frames(make_frame, 20)
    chosen = select_supervised_sentences(frames, 0.25, seed=3)
    assert len(chosen) == 5
    assert chosen == select_supervised_sentences(frames, 0.25, seed=3)
    assert chosen <= {("en", n) for n in range(20)}
    assert select_supervised_sentences(frames, 0.0, seed=3) == set()
    with pytest.raises(ConfigError):
        select_supervised_sentences(frames, 1.5, seed=3)


def test_crossover_is_first_fraction_reaching_the_model():
    curve = SemiSupervisedCurve(0.7, [
        CurvePoint(0.5, 0.9, 0.8),
        CurvePoint(0.05, 0.7, 0.5),
        CurvePoint(0.25, 0.75, 0.72),
    ])
    assert curve.crossover == 0.25
    assert SemiSupervisedCurve(0.9, [CurvePoint(0.1, 0.9, 0.5)]).crossover is None
    assert curve.to_dict()["crossover"] == 0.25


def test_crossover_compares_on_the_same_frames():
    # the all-frames unsupervised score is never reached, the matched one is
    curve = SemiSupervisedCurve(0.9, [
        CurvePoint(0.1, 0.8, 0.6, unsupervised_f1=0.65),
        CurvePoint(0.2, 0.85, 0.7, unsupervised_f1=0.68),
    ])
    assert curve.crossover == 0.2
    assert curve.to_dict()["points"][0]["unsupervised_f1"] == 0.65


def test_labels_file_round_trip(tmp_path):
    path = tmp_path / "labels.json"
    write_labels(str(path), {"en:1:2": ["P1", None], "en:0:2": ("S1",)})
    assert read_labels(str(path)) == {"en:0:2": ("S1",), "en:1:2": ("P1", None)}


def test_tiny_curve(make_frame):
    corpus = Corpus(("en",), {"en": tuple(_labeled_frames(make_frame, 8))}, ())
    config = SamplerConfig(iterations=2, burn_in=0, seed=1, num_roles=4, num_primary=2, decode_iterations=5)
    curve = semi_supervised_curve(corpus, [0.25, 1.0], config, repetitions=2)
    # with every sentence labeled nothing is left to score
    assert [p.fraction for p in curve.points] == [0.25]
    assert len(curve.points[0].model_f1_runs) == 2
    assert len(curve.points[0].unsupervised_f1_runs) == 2
    assert 0.0 <= curve.points[0].unsupervised_f1 <= 1.0
    assert 0.0 <= curve.unsupervised_f1 <= 1.0


@pytest.mark.slow
def test_supervised_baseline_crosses_over_early():
    synthetic = generate_corpus(SyntheticConfig(num_frames=300, seed=23))
    corpus = synthetic.corpus
    config = SamplerConfig(iterations=60, burn_in=20, seed=2, num_roles=8, num_primary=2, decode_iterations=30)
    curve = semi_supervised_curve(corpus, [0.01, 0.05, 0.1, 0.25, 0.5], config, repetitions=2)
    assert curve.crossover is not None
    assert curve.crossover <= 0.25


@pytest.mark.slow
def test_supervised_baseline_beats_syntactic_at_ten_percent():
    frames = generate_corpus(SyntheticConfig(num_frames=400, seed=31)).corpus.frames()
    chosen = select_supervised_sentences(frames, 0.1, seed=5)
    labeled = [f for f in frames if (f.language, f.sentence_id) in chosen]
    unlabeled = [f for f in frames if (f.language, f.sentence_id) not in chosen]
    mapping = default_role_mapping(gold_label_frequencies(frames), 6, 2, primary_labels=("P1", "P2"))

    supervised = supervised_baseline(labeled, unlabeled, mapping, 6, 2, Hyperparams(), seed=5,
                                     decode_iterations=30)
    supervised_f1 = score_labels(unlabeled, supervised).f1
    assert supervised_f1 > score_labels(unlabeled, syntactic_baseline(unlabeled, 6)).f1
