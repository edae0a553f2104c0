import math
from collections import Counter

import numpy as np
import pytest

from errors import ConfigError
from generator import (
    AlignParams,
    ArgumentPolicy,
    SyntheticConfig,
    SyntheticParams,
    generate_corpus,
    generate_frame,
    generate_pair,
)
from model_core import CountTables, FeatureVocabulary, FrameAssignment, PointEstimates
from roles import END, PRED, START, Hyperparams, RoleInventory, primary, secondary


@pytest.mark.parametrize("changes", [
    {"num_roles": 2, "num_primary": 2},
    {"link_rate": 1.5},
    {"num_frames": 0},
    {"predicates": ()},
    {"min_arguments": 4, "max_arguments": 2},
    {"bilingual": True, "languages": ("en", "de", "fr")},
])
def test_bad_synthetic_config(changes):
    with pytest.raises(ConfigError):
        SyntheticConfig(**changes)


def test_config_from_dict():
    config = SyntheticConfig.from_dict({"num_frames": 10, "predicates": ["run"]})
    assert config.predicates == ("run",)
    assert SyntheticConfig.from_dict(config.to_dict()) == config
    with pytest.raises(ConfigError):
        SyntheticConfig.from_dict({"frames": 10})


def test_argument_policy():
    policy = ArgumentPolicy(1, 3)
    assert not policy.accepts(0)
    assert policy.accepts(3)
    assert not policy.accepts(4)
    assert ArgumentPolicy().accepts(40)


def test_monolingual_corpus():
    synthetic = generate_corpus(SyntheticConfig())
    frames = synthetic.corpus.frames("en")
    assert len(frames) == 100
    assert synthetic.corpus.parallel_pairs == ()

    gold = synthetic.gold_labels()
    assert set(gold) == {frame.frame_id for frame in frames}
    for frame in frames:
        assert 1 <= len(frame.arguments) <= 6
        assert list(frame.gold_labels) == gold[frame.frame_id]
        assert frame.frame_id == f"en:{frame.sentence_id}:{frame.predicate_position}"

    assert synthetic.params_to_dict()["kind"] == "generator_params"


def test_generation_is_deterministic():
    config = SyntheticConfig(num_frames=30, bilingual=True, seed=5)
    first, second = generate_corpus(config), generate_corpus(config)
    assert first.corpus == second.corpus
    assert first.gold_labels() == second.gold_labels()
    assert generate_corpus(SyntheticConfig(num_frames=30, bilingual=True, seed=6)).corpus != first.corpus


def test_link_rate():
    config = SyntheticConfig(num_frames=400, bilingual=True, link_rate=0.3, seed=11)
    corpus = generate_corpus(config).corpus

    lengths = {}
    for language in corpus.languages:
        for frame in corpus.frames(language):
            lengths.setdefault(frame.sentence_id, {})[language] = len(frame.arguments)
    trials = sum(min(by_language.values()) for by_language in lengths.values())
    links = sum(len(pair.links) for pair in corpus.parallel_pairs)

    sigma = math.sqrt(trials * 0.3 * 0.7)
    assert abs(links - 0.3 * trials) < 4 * sigma


def test_bilingual_gold_covers_both_languages():
    synthetic = generate_corpus(SyntheticConfig(num_frames=40, bilingual=True, link_rate=0.8, seed=3))
    corpus = synthetic.corpus
    assert corpus.languages == ("en", "de")
    assert corpus.parallel_pairs
    gold = synthetic.gold_labels()
    for frame in corpus.frames():
        assert list(frame.gold_labels) == gold[frame.frame_id]
    for pair in corpus.parallel_pairs:
        assert pair.frame_b.predicate == f"{pair.frame_a.predicate}_de"
        assert pair.frame_a.sentence_id == pair.frame_b.sentence_id
        assert all(i == j for i, j in pair.links)


def test_forced_structure():
    inventory = RoleInventory(3, 1)
    params = SyntheticParams(inventory, [["d"], ["w"], ["p"]])
    params.set_order("give", "active", {(START, primary(1), PRED, END): 1.0})
    params.set_stop(1.0)

    frame, assignment = generate_frame(params, "give", "active", np.random.default_rng(0), sentence_id=4)
    assert frame.frame_id == "en:4:2"
    assert assignment.roles == (primary(1),)
    assert frame.arguments[0].head_token == 1
    assert frame.arguments[0].features == ("d", "w", "p")


def test_forced_secondary_roles():
    inventory = RoleInventory(3, 1)
    params = SyntheticParams(inventory, [["d"], ["w"], ["p"]])
    params.set_order("give", "active", {(START, PRED, END): 1.0})
    params.set_sr("give", (START, PRED), {secondary(2): 1.0})
    params.stop[("give", (START, PRED), 0)] = 0.0
    params.stop[("give", (START, PRED), 1)] = 1.0
    params.stop[("give", (PRED, END), 0)] = 1.0

    frame, assignment = generate_frame(params, "give", "active", np.random.default_rng(0))
    assert assignment.roles == (secondary(2),)
    assert frame.predicate_position == 2


def test_feature_frequencies_follow_the_parameters():
    inventory = RoleInventory(3, 1)
    params = SyntheticParams(inventory, [["d0", "d1", "d2"], ["w0", "w1"], ["p0", "p1", "p2", "p3"]])
    params.set_order("give", "active", {(START, primary(1), PRED, END): 1.0})
    params.set_stop(1.0)
    params.stop[("give", (PRED, END), 0)] = 0.0
    params.stop[("give", (PRED, END), 1)] = 1.0
    params.set_sr("give", (PRED, END), {secondary(1): 1.0})
    deprels = {primary(1): [0.7, 0.2, 0.1], secondary(1): [0.1, 0.3, 0.6]}
    for role, probs in deprels.items():
        params.feature[("give", role, 0)] = np.array(probs)

    rng = np.random.default_rng(8)
    draws = 10000
    observed = {role: Counter() for role in deprels}
    for _ in range(draws):
        frame, assignment = generate_frame(params, "give", "active", rng)
        assert assignment.roles == (primary(1), secondary(1))
        for argument, role in zip(frame.arguments, assignment.roles):
            observed[role][argument.features[0]] += 1
            assert argument.features[1] in ("w0", "w1")

    for role, probs in deprels.items():
        for value, p in zip(["d0", "d1", "d2"], probs):
            sigma = math.sqrt(draws * p * (1 - p))
            assert abs(observed[role][value] - draws * p) <= 3 * sigma


def test_unsatisfiable_argument_range():
    params = SyntheticParams(RoleInventory(3, 1), [["d"], ["w"], ["p"]], stop_prob=1.0)
    params.set_order("give", "active", {(START, PRED, END): 1.0})
    with pytest.raises(ConfigError):
        generate_frame(params, "give", "active", np.random.default_rng(0), ArgumentPolicy(1, 3))


def test_generation_from_point_estimates(make_frame, small_inventory):
    frames = [
        make_frame([("SBJ", "he", "PRP"), ("OBJ", "it", "PRP")]),
        make_frame([("SBJ", "she", "PRP")], frame_id="en:1:2", sentence_id=1),
    ]
    vocabulary = FeatureVocabulary.from_frames(frames)
    tables = CountTables(small_inventory, vocabulary, Hyperparams())
    tables.add_assignment(FrameAssignment(frames[0], (primary(1), secondary(1))))
    tables.add_assignment(FrameAssignment(frames[1], (primary(1),)))
    params = PointEstimates(tables)

    rng = np.random.default_rng(8)
    for n in range(20):
        frame, assignment = generate_frame(params, "give", "active", rng, ArgumentPolicy(0, 5), sentence_id=n)
        assert len(frame.arguments) <= 5
        for argument in frame.arguments:
            for t, value in enumerate(argument.features):
                assert value in vocabulary.values(t)
        assert all(small_inventory.contains(role) for role in assignment.roles)


def _forced_single_primary(predicate):
    params = SyntheticParams(RoleInventory(3, 1), [["d"], ["w"], ["p"]])
    params.set_order(predicate, "active", {(START, primary(1), PRED, END): 1.0})
    params.set_stop(1.0)
    return params


def test_linked_pair_redraws_second_role():
    inventory = RoleInventory(3, 1)
    align = AlignParams(inventory, noise=0.0, correspondence={primary(1): secondary(1)})
    frame_a, frame_b, links, assignment_a, assignment_b = generate_pair(
        _forced_single_primary("give"), _forced_single_primary("geben"), align, "give", "geben",
        np.random.default_rng(0), link_rate=1.0, sentence_id=7,
    )
    assert (frame_a.language, frame_b.language) == ("en", "de")
    assert frame_b.frame_id == "de:7:2"
    assert links == ((0, 0),)
    assert assignment_a.roles == (primary(1),)
    assert assignment_b.roles == (secondary(1),)
    assert len(align.tables[("give", "geben")]) == 1


def test_unlinked_pair_keeps_second_role():
    align = AlignParams(RoleInventory(3, 1), noise=0.0, correspondence={primary(1): secondary(1)})
    _, _, links, _, assignment_b = generate_pair(
        _forced_single_primary("give"), _forced_single_primary("geben"), align, "give", "geben",
        np.random.default_rng(0), link_rate=0.0,
    )
    assert links == ()
    assert assignment_b.roles == (primary(1),)
    assert align.tables == {}


def test_link_tables_follow_crp_seating():
    inventory = RoleInventory(3, 1)
    align = AlignParams(inventory, alpha_crp=1.0)
    uniform = np.full(len(align.labels), 1.0 / len(align.labels))
    align.add_table(("give", "geben"), uniform, uniform, size=3)
    align.add_table(("give", "geben"), align.peaked(primary(1)), align.peaked(primary(1)), size=1)

    rng = np.random.default_rng(21)
    draws = 10000
    # the language-1 role plays no part in seating
    counts = np.bincount([align.draw_table(("give", "geben"), primary(1), rng, seat=False) for _ in range(draws)],
                         minlength=3)
    for count, expected in zip(counts, (3 / 5, 1 / 5, 1 / 5)):
        sigma = math.sqrt(draws * expected * (1 - expected))
        assert abs(count - draws * expected) < 3 * sigma


def test_sequential_seating_matches_crp():
    # second link of a fresh restaurant joins the first table with probability 1 / (1 + alpha)
    alpha, runs, joined = 2.0, 4000, 0
    rng = np.random.default_rng(3)
    for _ in range(runs):
        align = AlignParams(RoleInventory(3, 1), alpha_crp=alpha)
        align.draw_table(("give", "geben"), None, rng)
        joined += align.draw_table(("give", "geben"), None, rng) == 0
    expected = 1 / (1 + alpha)
    assert abs(joined - runs * expected) < 3 * math.sqrt(runs * expected * (1 - expected))


def test_degenerate_table_fixes_both_aligned_roles():
    inventory = RoleInventory(4, 1)
    align = AlignParams(inventory, allow_new_tables=False)
    first = np.zeros(len(align.labels))
    second = np.zeros(len(align.labels))
    first[align.labels.index(secondary(3))] = 1.0
    second[align.labels.index(secondary(1))] = 1.0
    align.add_table(("give", "geben"), first, second)

    params_a = SyntheticParams(inventory, [["d"], ["w"], ["p"]])
    params_a.set_order("give", "active", {(START, primary(1), PRED, END): 1.0})
    params_a.set_stop(1.0)
    params_b = SyntheticParams(inventory, [["d"], ["w"], ["p"]])
    params_b.set_order("geben", "active", {(START, primary(1), PRED, END): 1.0})
    params_b.set_stop(1.0)

    rng = np.random.default_rng(4)
    for n in range(50):
        _, _, links, assignment_a, assignment_b = generate_pair(
            params_a, params_b, align, "give", "geben", rng, link_rate=1.0, sentence_id=n,
        )
        assert links == ((0, 0),)
        assert (assignment_a.roles, assignment_b.roles) == ((secondary(3),), (secondary(1),))
    assert len(align.tables[("give", "geben")]) == 1


def test_seating_without_tables_or_new_tables_fails():
    align = AlignParams(RoleInventory(3, 1), allow_new_tables=False)
    with pytest.raises(ConfigError):
        align.draw_table(("give", "geben"), None, np.random.default_rng(0))
