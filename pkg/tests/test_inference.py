import itertools
import json
import math
from collections import Counter

import numpy as np
import pytest

from corpus import Corpus
from crosslingual import NEW_TABLE, CrosslingualState
from errors import ConfigError, DataError
from evaluation import score_labels, syntactic_baseline
from generator import SyntheticConfig, generate_corpus
from inference import (
    BILINGUAL,
    MONO,
    TRANSFER,
    SamplerConfig,
    assignments_to_labels,
    build_clamps,
    count_conservation_check,
    decode,
    gibbs_step_clv,
    gibbs_step_role_coupled,
    gibbs_step_role_mono,
    init_assignments,
    initial_roles,
    load_model,
    load_run_config,
    parse_clamps,
    role_candidates,
    run_chain,
    save_model,
    train,
)
from model_core import (
    CountTables,
    FeatureVocabulary,
    FrameAssignment,
    enumerate_assignments,
    frame_log_joint,
    marginal_prob,
)
from roles import Hyperparams, RoleInventory, RoleLabel, primary, secondary
from settings import Settings


def _tiny_corpus(make_frame):
    frames = (
        make_frame([("SBJ", "he", "PRP"), ("OBJ", "it", "PRP")], gold=["A0", "A1"]),
        make_frame([("SBJ", "she", "PRP"), ("OBJ", "it", "NN")], gold=["A0", "A1"],
                   frame_id="en:1:2", sentence_id=1),
        make_frame([("OBJ", "it", "PRP")], gold=["A1"], frame_id="en:2:2", sentence_id=2,
                   predicate="take"),
    )
    return Corpus(("en",), {"en": frames}, ())


def _quick(**values):
    settings = dict(iterations=5, burn_in=2, seed=3, num_roles=4, num_primary=2, decode_iterations=10)
    settings.update(values)
    return SamplerConfig(**settings)


@pytest.mark.parametrize("values", [
    {"regime": "joint"},
    {"iterations": 0},
    {"iterations": 5, "burn_in": 5},
    {"chains": 0},
    {"regime": TRANSFER},
    {"num_roles": 2, "num_primary": 2},
    {"seed": -1},
    {"workers": 0},
])
def test_bad_sampler_config(values):
    with pytest.raises(ConfigError):
        SamplerConfig(**values)


def test_sampler_config_from_dict():
    config = SamplerConfig.from_dict({"N": "8", "K": 1, "iterations": "20"}, {"burn_in": 5})
    assert (config.num_roles, config.num_primary, config.iterations, config.burn_in) == (8, 1, 20, 5)
    with pytest.raises(ConfigError):
        SamplerConfig.from_dict({"sweeps": 10})
    with pytest.raises(ConfigError):
        SamplerConfig.from_dict({"iterations": "many"})


def test_run_config_over_settings(tmp_path):
    settings = Settings(str(tmp_path / "settings.json"))
    path = tmp_path / "run.json"
    path.write_text(json.dumps({
        "iterations": 50, "burn_in": 10, "N": 5,
        "hyperparameters": {"alpha_crp": 2.0},
        "clamp_source": "gold.json",
    }), encoding="utf-8")
    config, hp, clamp_source = load_run_config(str(path), settings)
    assert config.iterations == 50
    assert config.num_roles == 5
    assert config.seed == 13
    assert hp.alpha_crp == 2.0
    assert hp.alpha_feat == (0.1, 0.1, 0.1)
    assert clamp_source == "gold.json"

    with pytest.raises(ConfigError):
        load_run_config(str(tmp_path / "missing.json"), settings)


def test_invariant_checking_follows_settings(tmp_path, make_frame, monkeypatch):
    import inference

    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"sampler": {"check_invariants": True}}), encoding="utf-8")
    config, hp, _ = load_run_config(None, Settings(str(path)))
    assert config.check_invariants

    run_file = tmp_path / "run.json"
    run_file.write_text(json.dumps({"check_invariants": False}), encoding="utf-8")
    assert not load_run_config(str(run_file), Settings(str(path)))[0].check_invariants

    checks = []
    monkeypatch.setattr(inference, "count_conservation_check", lambda state: checks.append(state))
    train(_tiny_corpus(make_frame), config.with_overrides(iterations=3, burn_in=1, num_roles=4, num_primary=2), hp)
    # once after initialization, then after every sweep
    assert len(checks) == 4


def test_parse_clamps_errors(make_frame):
    corpus = _tiny_corpus(make_frame)
    inventory = RoleInventory(4, 2)
    assert parse_clamps(corpus, {"en:0:2": ("P1", None)}, inventory) == {"en:0:2": (primary(1), None)}
    with pytest.raises(DataError):
        parse_clamps(corpus, {"en:9:9": ("P1",)}, inventory)
    with pytest.raises(DataError):
        parse_clamps(corpus, {"en:0:2": ("P1",)}, inventory)
    with pytest.raises(DataError):
        parse_clamps(corpus, {"en:0:2": ("P3", None)}, inventory)
    with pytest.raises(DataError):
        parse_clamps(corpus, {"en:0:2": ("A0", None)}, inventory)


def test_build_clamps_leaves_repeated_primary_free(make_frame):
    frame = make_frame([("SBJ", "he", "PRP"), ("OBJ", "it", "PRP"), ("TMP", "now", "RB")],
                       gold=["A0", "A0", None])
    clamps = build_clamps([frame], {"A0": primary(1)})
    assert clamps == {"en:0:2": ("P1", None, None)}
    assert build_clamps([make_frame([("SBJ", "he", "PRP")])], {"A0": primary(1)}) == {}


def test_role_candidates_exclude_used_primaries(make_frame):
    frame = make_frame([("SBJ", "he", "PRP"), ("OBJ", "it", "PRP")])
    assignment = FrameAssignment(frame, (primary(1), secondary(1)))
    candidates = role_candidates(assignment, 1, RoleInventory(4, 2))
    assert candidates == [primary(2), secondary(1), secondary(2)]


def test_initial_roles_keep_clamps(make_frame, rng):
    frame = make_frame([("SBJ", "he", "PRP"), ("OBJ", "it", "PRP"), ("TMP", "now", "RB")])
    inventory = RoleInventory(4, 2)
    for _ in range(20):
        assignment = initial_roles(frame, inventory, rng, (None, primary(2), None))
        assert assignment.roles[1] == primary(2)
        assert primary(2) not in (assignment.roles[0], assignment.roles[2])
    with pytest.raises(DataError):
        initial_roles(frame, inventory, rng, (primary(1), primary(1), None))


def test_single_argument_initialisation_is_uniform(make_frame):
    corpus = Corpus(("en",), {"en": (make_frame([("SBJ", "he", "PRP")]),)}, ())
    config = _quick(num_roles=3, num_primary=1)
    rng = np.random.default_rng(5)
    counts = Counter(init_assignments(corpus, config, rng).assignments["en:0:2"].roles[0] for _ in range(3000))
    assert set(counts) == {primary(1), secondary(1), secondary(2)}
    assert all(abs(n - 1000) < 150 for n in counts.values())

    clamps = parse_clamps(corpus, {"en:0:2": ["S2"]}, config.inventory)
    state = init_assignments(corpus, config, rng, clamps=clamps)
    assert state.assignments["en:0:2"].roles == (secondary(2),)


def test_initialisation_seats_every_link():
    corpus = generate_corpus(SyntheticConfig(num_frames=10, bilingual=True, link_rate=0.8, seed=2)).corpus
    state = init_assignments(corpus, _quick(regime=BILINGUAL), np.random.default_rng(0))
    count_conservation_check(state)
    assert set(state.assignments) == {frame.frame_id for frame in corpus.frames()}
    assert state.crosslingual.num_links() == sum(len(pair.links) for pair in corpus.parallel_pairs)


def test_mono_step_draws_only_allowed_roles(make_frame, small_inventory, hyperparams, rng):
    frame = make_frame([("SBJ", "he", "PRP"), ("OBJ", "it", "PRP")])
    tables = CountTables(small_inventory, FeatureVocabulary.from_frames([frame]), hyperparams)
    assignment = FrameAssignment(frame, (primary(1), secondary(1)))
    drawn = Counter(gibbs_step_role_mono(1, assignment, tables, hyperparams, rng) for _ in range(300))
    assert primary(1) not in drawn
    assert set(drawn) == {secondary(1), secondary(2)}


def test_mono_step_prefers_the_role_that_saw_the_feature(make_frame, hyperparams, rng):
    inventory = RoleInventory(2, 0)
    seen = make_frame([("f", "f", "f")])
    other = make_frame([("g", "g", "g")], frame_id="en:1:2", sentence_id=1)
    tables = CountTables(inventory, FeatureVocabulary.from_frames([seen, other]), hyperparams)
    for _ in range(100):
        tables.add_assignment(FrameAssignment(seen, (secondary(1),)))

    query = FrameAssignment(make_frame([("f", "f", "f")], frame_id="en:2:2", sentence_id=2), (secondary(2),))
    drawn = Counter(gibbs_step_role_mono(0, query, tables, hyperparams, rng) for _ in range(2000))
    assert set(drawn) <= {secondary(1), secondary(2)}
    assert drawn[secondary(1)] / 2000 > 0.9


@pytest.mark.slow
def test_mono_step_matches_exact_conditional(make_frame, hyperparams):
    inventory = RoleInventory(3, 1)
    frame = make_frame([("SBJ", "he", "PRP")])
    context = make_frame([("SBJ", "he", "NN"), ("OBJ", "it", "PRP")], frame_id="en:1:2", sentence_id=1)
    tables = CountTables(inventory, FeatureVocabulary.from_frames([frame, context]), hyperparams)
    tables.add_assignment(FrameAssignment(context, (primary(1), secondary(2))))

    total = marginal_prob(frame, tables)
    exact = {
        assignment.roles[0]: math.exp(frame_log_joint(assignment, tables)) / total
        for assignment in enumerate_assignments(frame, inventory)
    }
    rng = np.random.default_rng(7)
    start = FrameAssignment(frame, (secondary(1),))
    draws = 50000
    drawn = Counter(gibbs_step_role_mono(0, start, tables, hyperparams, rng) for _ in range(draws))
    distance = 0.5 * sum(abs(drawn[role] / draws - p) for role, p in exact.items())
    assert distance <= 0.01


def test_coupled_step_follows_the_link_table(make_frame, hyperparams, rng):
    inventory = RoleInventory(3, 1)
    frame = make_frame([("SBJ", "he", "PRP")])
    tables = CountTables(inventory, FeatureVocabulary.from_frames([frame]), hyperparams)
    crosslingual = CrosslingualState(inventory, hyperparams)
    pair_key = ("en:give", "de:geben")
    agreeing = {"en": primary(1), "de": primary(1)}
    table = crosslingual.seat(pair_key, (0, 0), NEW_TABLE, agreeing)
    for link in range(1, 30):
        crosslingual.seat(pair_key, (link, 0), table, agreeing)
    crosslingual.seat(pair_key, (99, 0), table, agreeing)
    crosslingual.remove_role(pair_key, (99, 0), "en", primary(1))

    links = [(pair_key, (99, 0), "en")]
    assignment = FrameAssignment(frame, (secondary(1),))
    drawn = Counter(
        gibbs_step_role_coupled(0, assignment, tables, crosslingual, links, hyperparams, rng)
        for _ in range(200)
    )
    assert drawn[primary(1)] >= 150


def test_clv_step(hyperparams, rng):
    inventory = RoleInventory(3, 1)
    crosslingual = CrosslingualState(inventory, hyperparams)
    pair_key = ("en:give", "de:geben")
    roles = {"en": primary(1), "de": secondary(1)}
    assert gibbs_step_clv(pair_key, roles, crosslingual, rng) is NEW_TABLE

    table = crosslingual.seat(pair_key, (0, 0), NEW_TABLE, roles)
    drawn = {gibbs_step_clv(pair_key, roles, crosslingual, rng) for _ in range(200)}
    assert drawn <= {table, NEW_TABLE}
    assert table in drawn
    assert crosslingual.num_links() == 1


@pytest.mark.slow
def test_clv_step_matches_seating_formula():
    inventory = RoleInventory(3, 1)
    hp = Hyperparams(alpha_crp=1.0, alpha_align=0.5)
    crosslingual = CrosslingualState(inventory, hp)
    pair_key = ("en:give", "de:geben")
    layout = [((primary(1), secondary(1)), 3), ((primary(1), secondary(2)), 2), ((secondary(2), secondary(1)), 1)]
    counts = []
    link = 0
    for (en, de), size in layout:
        table = NEW_TABLE
        for _ in range(size):
            table = crosslingual.seat(pair_key, (link, 0), table, {"en": en, "de": de})
            link += 1
        counts.append((table, en, de, size))

    query = {"en": primary(1), "de": secondary(1)}

    def predictive(matches, size):
        return (size * matches + hp.alpha_align) / (size + hp.alpha_align * inventory.num_roles)

    expected = {
        table: size * predictive(en == query["en"], size) * predictive(de == query["de"], size)
        for table, en, de, size in counts
    }
    expected[NEW_TABLE] = hp.alpha_crp / inventory.num_roles ** 2
    norm = sum(expected.values())

    rng = np.random.default_rng(3)
    draws = 50000
    drawn = Counter(gibbs_step_clv(pair_key, query, crosslingual, rng) for _ in range(draws))
    distance = 0.5 * sum(abs(drawn[table] / draws - weight / norm) for table, weight in expected.items())
    assert distance <= 0.01
    assert crosslingual.num_links() == 6


def test_repeated_primary_clamp_is_rejected(make_frame):
    corpus = _tiny_corpus(make_frame)
    with pytest.raises(DataError):
        train(corpus, _quick(), clamps={"en:0:2": ("P1", "P1")})


def test_empty_corpus_is_rejected():
    with pytest.raises(DataError):
        train(Corpus(("en",), {"en": ()}, ()), _quick())


def test_bilingual_regime_needs_pairs(make_frame):
    with pytest.raises(ConfigError):
        train(_tiny_corpus(make_frame), _quick(regime=BILINGUAL))
    with pytest.raises(ConfigError):
        train(_tiny_corpus(make_frame), _quick(regime=TRANSFER, source_language="en"))


def test_monolingual_training_keeps_invariants():
    corpus = generate_corpus(SyntheticConfig(num_frames=20, seed=2)).corpus
    model = train(corpus, _quick(iterations=6, num_roles=6, check_invariants=True))

    assert set(model.training_labels) == {frame.frame_id for frame in corpus.frames()}
    assert [r["sweep"] for r in model.trajectory] == [1, 2, 3, 4, 5, 6]
    assert [r["phase"] for r in model.trajectory].count("burn_in") == 2
    assert all(r["num_tables"] == 0 for r in model.trajectory)
    assert model.crosslingual is None
    model.tables.verify()


def test_bilingual_training_keeps_invariants():
    corpus = generate_corpus(SyntheticConfig(num_frames=20, bilingual=True, link_rate=0.8, seed=2)).corpus
    assert corpus.parallel_pairs
    model = train(corpus, _quick(iterations=6, num_roles=6, regime=BILINGUAL, check_invariants=True))

    links = sum(len(pair.links) for pair in corpus.parallel_pairs)
    assert model.crosslingual.num_links() == links
    assert 1 <= model.trajectory[-1]["num_tables"] <= links
    model.crosslingual.check()


def test_interleaved_updates_conserve_counts():
    corpus = generate_corpus(SyntheticConfig(num_frames=12, bilingual=True, link_rate=0.6, seed=6)).corpus
    config = _quick(regime=BILINGUAL, num_roles=5, num_primary=2)
    rng = np.random.default_rng(17)
    state = init_assignments(corpus, config, rng)
    count_conservation_check(state)
    links = [(p, l) for p, pair in enumerate(state.pairs) for l in range(len(pair.links))]
    assert links

    for _ in range(400):
        move = rng.integers(3)
        if move == 0:
            state.resample_frame(state.frames[rng.integers(len(state.frames))], rng)
        elif move == 1:
            state.resample_link(*links[rng.integers(len(links))], rng)
        else:
            # take a frame out and put it back unchanged
            frame = state.frames[rng.integers(len(state.frames))]
            state.tables.remove_assignment(state.assignments[frame.frame_id])
            state.tables.add_assignment(state.assignments[frame.frame_id])
        count_conservation_check(state)

    recount = CountTables(state.inventory, state.tables.vocabulary, state.hp)
    for assignment in state.assignments.values():
        recount.add_assignment(assignment)
    assert recount.log_evidence() == pytest.approx(state.tables.log_evidence())


def test_clamped_labels_survive_sampling(make_frame):
    corpus = _tiny_corpus(make_frame)
    config = _quick(iterations=10, check_invariants=True, clamps={"en:1:2": (None, "S2")})
    model = train(corpus, config, clamps={"en:0:2": ("P2", None)})
    assert model.training_labels["en:0:2"][0] == "P2"
    assert model.training_labels["en:1:2"][1] == "S2"
    assert model.provenance["clamped_positions"] == 2


def test_training_is_deterministic():
    corpus = generate_corpus(SyntheticConfig(num_frames=15, bilingual=True, link_rate=0.6, seed=4)).corpus
    config = _quick(iterations=4, num_roles=6, regime=BILINGUAL, seed=21)
    first, second = train(corpus, config), train(corpus, config)
    assert first.to_dict() == second.to_dict()
    assert first.trajectory == second.trajectory


def test_multiple_chains_pick_the_best():
    corpus = generate_corpus(SyntheticConfig(num_frames=15, seed=4)).corpus
    model = train(corpus, _quick(iterations=4, num_roles=6, chains=2))
    finals = {r["chain"]: r["log_joint"] for r in model.trajectory if r["sweep"] == 4}
    assert set(finals) == {0, 1}
    assert model.provenance["selected_chain"] == max(finals, key=lambda c: (finals[c], -c))


def test_run_chain_reports_every_sweep(make_frame):
    corpus = _tiny_corpus(make_frame)
    config = _quick(iterations=7, record_every=3)
    vocabulary = FeatureVocabulary.from_frames(corpus.frames())
    seen = []
    result = run_chain(corpus, config, Hyperparams(), vocabulary, chain=1,
                       on_sweep=lambda state, sweep: seen.append(sweep))
    assert seen == list(range(1, 8))
    assert [r["sweep"] for r in result.trajectory] == [3, 6, 7]
    assert result.seed == config.seed + 1
    assert result.final_log_joint == pytest.approx(result.state.tables.log_evidence())


def test_decoding_does_not_depend_on_workers():
    synthetic = generate_corpus(SyntheticConfig(num_frames=30, seed=9))
    corpus = synthetic.corpus
    model = train(corpus, _quick(iterations=5, num_roles=6))
    frames = corpus.frames()
    single = decode(frames, model, _quick(num_roles=6, workers=1))
    threaded = decode(frames, model, _quick(num_roles=6, workers=3))
    assert assignments_to_labels(single) == assignments_to_labels(threaded)


def test_decoding_unseen_predicates(make_frame):
    corpus = _tiny_corpus(make_frame)
    model = train(corpus, _quick())
    unseen = make_frame([("SBJ", "they", "PRP"), ("OBJ", "it", "PRP")], frame_id="en:7:2",
                        sentence_id=7, predicate="sing")
    decoded = decode([unseen], model, _quick())
    roles = decoded["en:7:2"].roles
    assert len(roles) == 2
    assert all(model.inventory.contains(role) for role in roles)


def test_decoding_respects_clamps(make_frame):
    corpus = _tiny_corpus(make_frame)
    model = train(corpus, _quick())
    frame = corpus.frames()[0]
    decoded = decode([frame], model, _quick(), {frame.frame_id: (secondary(2), None)})
    assert decoded[frame.frame_id].roles[0] == secondary(2)


def test_model_file_round_trip(make_frame, tmp_path):
    corpus = generate_corpus(SyntheticConfig(num_frames=10, bilingual=True, link_rate=0.7, seed=1)).corpus
    model = train(corpus, _quick(iterations=3, num_roles=6, regime=BILINGUAL))
    path = tmp_path / "model.json"
    save_model(model, str(path))

    loaded = load_model(str(path))
    assert loaded.to_dict() == model.to_dict()
    assert loaded.point_estimates().is_seen("en:give")

    data = json.loads(path.read_text(encoding="utf-8"))
    del data["counts"]
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(DataError):
        load_model(str(path))

    path.write_text(json.dumps({"format_version": 2, "kind": "model"}), encoding="utf-8")
    with pytest.raises(DataError):
        load_model(str(path))


def test_transfer_clamps_source_language():
    synthetic = generate_corpus(SyntheticConfig(num_frames=40, bilingual=True, link_rate=0.3, seed=1))
    corpus = synthetic.corpus
    source_frames = corpus.monolingual_frames["en"]
    assert source_frames and corpus.parallel_pairs

    config = _quick(iterations=3, num_roles=6, regime=TRANSFER, source_language="en", check_invariants=True)
    model = train(corpus, config)
    assert model.provenance["clamped_positions"] == sum(len(f.arguments) for f in source_frames)


def _exact_posterior(frames, inventory, vocabulary, hp):
    states = list(itertools.product(*[
        [tuple(str(r) for r in a.roles) for a in enumerate_assignments(frame, inventory)] for frame in frames
    ]))
    log_weights = []
    for state in states:
        tables = CountTables(inventory, vocabulary, hp)
        for frame, labels in zip(frames, state):
            tables.add_assignment(FrameAssignment(frame, tuple(RoleLabel.parse(l) for l in labels)))
        log_weights.append(tables.log_evidence())
    log_weights = np.array(log_weights)
    weights = np.exp(log_weights - log_weights.max())
    return dict(zip(states, weights / weights.sum()))


@pytest.mark.slow
def test_sampler_matches_exact_posterior(make_frame):
    frames = (
        make_frame([("a", "a", "a")], frame_id="en:0:2"),
        make_frame([("a", "b", "a"), ("b", "b", "b")], frame_id="en:1:2", sentence_id=1),
    )
    corpus = Corpus(("en",), {"en": frames}, ())
    hp = Hyperparams(alpha_feat=(0.5, 0.5, 0.5))
    config = SamplerConfig(iterations=200000, burn_in=2000, seed=5, num_roles=3, num_primary=1,
                           record_every=1000)
    vocabulary = FeatureVocabulary.from_frames(frames)
    exact = _exact_posterior(frames, config.inventory, vocabulary, hp)

    visits = Counter()

    def record(state, sweep):
        if sweep > config.burn_in:
            labels = state.labels()
            visits[tuple(labels[frame.frame_id] for frame in frames)] += 1

    run_chain(corpus, config, hp, vocabulary, on_sweep=record)
    total = sum(visits.values())
    distance = 0.5 * sum(abs(visits[s] / total - p) for s, p in exact.items())
    assert distance < 0.02


@pytest.mark.slow
def test_recovers_synthetic_roles():
    synthetic = generate_corpus(SyntheticConfig(num_frames=300, seed=17))
    corpus = synthetic.corpus
    config = SamplerConfig(iterations=150, burn_in=50, seed=1, num_roles=6, num_primary=2)
    model = train(corpus, config, Hyperparams())

    frames = corpus.frames()
    induced = score_labels(frames, model.training_labels).f1
    baseline = score_labels(frames, syntactic_baseline(frames, 6)).f1
    assert induced >= 0.8
    assert induced > baseline
    assert not math.isnan(induced)


@pytest.mark.slow
def test_recovers_and_decodes_synthetic_roles():
    synthetic = generate_corpus(SyntheticConfig(num_frames=2400, num_roles=6, num_primary=2, seed=29))
    frames = synthetic.corpus.frames()
    training, held_out = frames[:2000], frames[2000:]
    corpus = Corpus(("en",), {"en": tuple(training)}, ())
    config = SamplerConfig(iterations=100, burn_in=40, seed=4, num_roles=6, num_primary=2, decode_iterations=50)
    model = train(corpus, config, Hyperparams())

    induced = score_labels(training, model.training_labels).f1
    decoded = score_labels(held_out, assignments_to_labels(decode(held_out, model, config))).f1
    assert induced >= 0.85
    assert decoded >= 0.85
    assert induced > score_labels(training, syntactic_baseline(training, 6)).f1
    assert decoded > score_labels(held_out, syntactic_baseline(held_out, 6)).f1


@pytest.mark.slow
def test_crosslingual_coupling_helps_the_weaker_language():
    wins = 0
    for seed in range(10):
        synthetic = generate_corpus(SyntheticConfig(
            num_frames=200, bilingual=True, link_rate=0.3, second_peakiness=0.3, seed=seed,
        ))
        corpus = synthetic.corpus
        german = corpus.frames("de")
        scores = {}
        for regime in (MONO, BILINGUAL):
            config = SamplerConfig(iterations=80, burn_in=30, seed=seed, num_roles=6, num_primary=2, regime=regime)
            model = train(corpus, config, Hyperparams())
            scores[regime] = score_labels(german, model.training_labels).f1
        if scores[BILINGUAL] > scores[MONO]:
            wins += 1
    assert wins >= 8
