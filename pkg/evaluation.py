"""
Clustering evaluation (purity, collocation, F1), baselines, gold-role
mapping, stratified shuffling and the semi-supervised learning curve
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np
from sklearn.metrics.cluster import contingency_matrix

from corpus import Corpus, Frame, read_json, write_json
from errors import ConfigError, DataError, InstanceMismatchError
from roles import Hyperparams, RoleLabel, primary, secondary

logger = logging.getLogger(__name__)

DEFAULT_EXCLUDED = ("V",)
DEFAULT_PRIMARY_GOLD = ("A0", "A1")
LABELS_FORMAT_VERSION = 1
SHUFFLE_CHUNK = 500  # shuffles drawn per batch

# predicate -> instance id -> label
Clustering = Mapping[str, Mapping[str, str]]


@dataclass
class PredicateScore:
    pu: float
    co: float
    f1: float
    instances: int


@dataclass
class SignificanceResult:
    comparison: str
    p_value: float
    iterations: int
    seed: int
    significant: bool


@dataclass
class EvalReport:
    per_predicate: Dict[str, PredicateScore]
    pu: float
    co: float
    f1: float
    instances: int
    significance: List[SignificanceResult] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "format_version": 1,
            "kind": "eval_report",
            "micro": {"pu": self.pu, "co": self.co, "f1": self.f1, "instances": self.instances},
            "per_predicate": {
                predicate: {"pu": s.pu, "co": s.co, "f1": s.f1, "instances": s.instances}
                for predicate, s in sorted(self.per_predicate.items())
            },
            "significance": [
                {"comparison": r.comparison, "p_value": r.p_value, "iterations": r.iterations,
                 "seed": r.seed, "significant": r.significant}
                for r in self.significance
            ],
        }


@dataclass
class RoleMapping:
    """Gold label -> induced role; injective on primary roles"""
    labels: Dict[str, RoleLabel]

    def __post_init__(self):
        primaries = [role for role in self.labels.values() if role.kind != "S"]
        if len(set(primaries)) != len(primaries):
            raise ConfigError("Role mapping sends two gold labels to the same primary role")

    def get(self, gold: str) -> Optional[RoleLabel]:
        return self.labels.get(gold)

    def to_dict(self) -> Dict[str, str]:
        return {gold: str(role) for gold, role in sorted(self.labels.items())}


def harmonic_mean(a: float, b: float) -> float:
    return 2 * a * b / (a + b) if a + b > 0 else 0.0


def _overlap_sums(induced: Sequence[str], gold: Sequence[str]) -> Tuple[int, int]:
    """(sum over clusters of the best gold overlap, sum over gold roles of the best cluster overlap)"""
    cm = contingency_matrix(gold, induced)
    return int(cm.max(axis=0).sum()), int(cm.max(axis=1).sum())


def _aligned_instances(predicate: str, clusters: Mapping[str, str], gold: Mapping[str, str],
                       offending: List[str]) -> List[str]:
    missing = sorted(set(clusters) ^ set(gold))
    offending.extend(f"{predicate}/{instance}" for instance in missing)
    return sorted(set(clusters) & set(gold))


def _check_instances(systems: Sequence[Clustering], gold: Clustering) -> None:
    offending: List[str] = []
    for system in systems:
        for predicate in sorted(set(system) | set(gold)):
            _aligned_instances(predicate, system.get(predicate, {}), gold.get(predicate, {}), offending)
    if offending:
        raise InstanceMismatchError(
            f"Induced and gold labels cover different instances ({len(offending)} mismatches)",
            offending,
        )


def purity_collocation(clusters: Clustering, gold: Clustering) -> EvalReport:
    """Per-predicate PU/CO/F1 and their instance-weighted micro averages"""
    _check_instances([clusters], gold)
    per_predicate = {}
    pu_sum = co_sum = total = 0
    for predicate in sorted(gold):
        instances = sorted(gold[predicate])
        if not instances:
            continue
        induced = [clusters[predicate][i] for i in instances]
        truth = [gold[predicate][i] for i in instances]
        pu_n, co_n = _overlap_sums(induced, truth)
        n = len(instances)
        pu, co = pu_n / n, co_n / n
        per_predicate[predicate] = PredicateScore(pu, co, harmonic_mean(pu, co), n)
        pu_sum += pu_n
        co_sum += co_n
        total += n
    if total == 0:
        raise DataError("No scorable instances")
    pu, co = pu_sum / total, co_sum / total
    return EvalReport(per_predicate, pu, co, harmonic_mean(pu, co), total)


def predicate_of(frame: Frame) -> str:
    return f"{frame.language}:{frame.predicate}"


def clusterings_from_frames(frames: Sequence[Frame], predicted: Mapping[str, Sequence[Optional[str]]],
                            excluded: Iterable[str] = DEFAULT_EXCLUDED) -> Tuple[Dict, Dict]:
    """Per-predicate induced and gold clusterings over arguments with a scorable gold label"""
    excluded = set(excluded)
    induced: Dict[str, Dict[str, str]] = {}
    gold: Dict[str, Dict[str, str]] = {}
    offending = []
    for frame in frames:
        labels = predicted.get(frame.frame_id)
        if labels is None or len(labels) != len(frame.arguments):
            offending.append(frame.frame_id)
            continue
        predicate = predicate_of(frame)
        for index, (argument, label) in enumerate(zip(frame.arguments, labels)):
            if argument.gold_role is None or argument.gold_role in excluded:
                continue
            if label is None:
                offending.append(f"{frame.frame_id}#{index}")
                continue
            instance = f"{frame.frame_id}#{index}"
            induced.setdefault(predicate, {})[instance] = str(label)
            gold.setdefault(predicate, {})[instance] = argument.gold_role
    if offending:
        raise InstanceMismatchError("Predicted labels do not cover the gold instances", offending)
    return induced, gold


def score_labels(frames: Sequence[Frame], predicted: Mapping[str, Sequence[Optional[str]]],
                 excluded: Iterable[str] = DEFAULT_EXCLUDED) -> EvalReport:
    induced, gold = clusterings_from_frames(frames, predicted, excluded)
    return purity_collocation(induced, gold)


def gold_label_frequencies(frames: Sequence[Frame], excluded: Iterable[str] = DEFAULT_EXCLUDED) -> Counter:
    excluded = set(excluded)
    return Counter(
        argument.gold_role
        for frame in frames
        for argument in frame.arguments
        if argument.gold_role is not None and argument.gold_role not in excluded
    )


def syntactic_baseline(frames: Sequence[Frame], num_clusters: int) -> Dict[str, Tuple[str, ...]]:
    """The N-1 most frequent dependency relations get a cluster each, the rest share cluster N"""
    if num_clusters < 1:
        raise ConfigError(f"Number of clusters must be >= 1, got {num_clusters}")
    frequencies = Counter(argument.features[0] for frame in frames for argument in frame.arguments)
    ranked = sorted(frequencies, key=lambda deprel: (-frequencies[deprel], deprel))
    clusters = {deprel: f"c{rank}" for rank, deprel in enumerate(ranked[:num_clusters - 1], 1)}
    rest = f"c{num_clusters}"
    return {
        frame.frame_id: tuple(clusters.get(argument.features[0], rest) for argument in frame.arguments)
        for frame in frames
    }


def default_role_mapping(frequencies: Mapping[str, int], num_roles: int, num_primary: int,
                         primary_labels: Sequence[str] = DEFAULT_PRIMARY_GOLD) -> RoleMapping:
    """A0 -> P1, A1 -> P2, the rest -> S1.. by decreasing frequency; overflow shares the last SR"""
    labels: Dict[str, RoleLabel] = {}
    for index, gold in enumerate(primary_labels, 1):
        if gold not in frequencies:
            continue
        if index > num_primary:
            raise ConfigError(f"Gold label {gold} needs primary role P{index} but K={num_primary}")
        labels[gold] = primary(index)
    residual = sorted(
        (gold for gold in frequencies if gold not in labels),
        key=lambda gold: (-frequencies[gold], gold),
    )
    num_secondary = num_roles - num_primary
    for rank, gold in enumerate(residual, 1):
        labels[gold] = secondary(min(rank, num_secondary))
    if len(residual) > num_secondary:
        logger.info(f"{len(residual) - num_secondary} gold labels collapsed into S{num_secondary}")
    return RoleMapping(labels)


def supervised_baseline(labeled: Sequence[Frame], unlabeled: Sequence[Frame], mapping: RoleMapping,
                        num_roles: int, num_primary: int, hp: Optional[Hyperparams] = None,
                        seed: int = 13, decode_iterations: int = 100) -> Dict[str, Tuple[str, ...]]:
    """Seen predicates decoded with parameters from their mapped gold labels, unseen ones by the syntactic baseline"""
    from inference import SamplerConfig, assignments_to_labels, build_clamps, decode, train

    baseline = syntactic_baseline(unlabeled, num_roles)
    clamps = build_clamps(labeled, mapping.labels)
    if not clamps:
        return baseline

    labeled_frames = [f for f in labeled if f.frame_id in clamps]
    languages = tuple(sorted({f.language for f in labeled_frames}))
    corpus = Corpus(
        languages,
        {lang: tuple(f for f in labeled_frames if f.language == lang) for lang in languages},
        (),
    )
    config = SamplerConfig(iterations=1, burn_in=0, seed=seed, num_roles=num_roles,
                           num_primary=num_primary, decode_iterations=decode_iterations)
    model = train(corpus, config, hp, clamps)

    seen = {predicate_of(f) for f in labeled_frames}
    to_decode = [f for f in unlabeled if predicate_of(f) in seen]
    decoded = assignments_to_labels(decode(to_decode, model, config))
    logger.info(f"Supervised baseline: {len(to_decode)} frames of seen predicates, "
                f"{len(unlabeled) - len(to_decode)} by the syntactic baseline")
    return {frame.frame_id: decoded.get(frame.frame_id, baseline[frame.frame_id]) for frame in unlabeled}


def _significance_arrays(system: Clustering, gold: Clustering,
                         predicates: Sequence[str]) -> Tuple[np.ndarray, np.ndarray]:
    pu = np.zeros(len(predicates))
    co = np.zeros(len(predicates))
    for k, predicate in enumerate(predicates):
        instances = sorted(gold[predicate])
        pu[k], co[k] = _overlap_sums([system[predicate][i] for i in instances],
                                     [gold[predicate][i] for i in instances])
    return pu, co


def _micro_f1(pu_sums: np.ndarray, co_sums: np.ndarray, total: int) -> np.ndarray:
    pu = pu_sums / total
    co = co_sums / total
    with np.errstate(invalid="ignore", divide="ignore"):
        f1 = np.where(pu + co > 0, 2 * pu * co / (pu + co), 0.0)
    return f1


def stratified_shuffling(labels_a: Clustering, labels_b: Clustering, gold: Clustering,
                         iterations: int = 10000, seed: int = 0) -> float:
    """Two-sided p-value of the micro F1 difference, swapping whole predicates between systems"""
    _check_instances([labels_a, labels_b], gold)
    predicates = [p for p in sorted(gold) if gold[p]]
    total = sum(len(gold[p]) for p in predicates)
    if total == 0:
        raise DataError("No scorable instances")
    pu_a, co_a = _significance_arrays(labels_a, gold, predicates)
    pu_b, co_b = _significance_arrays(labels_b, gold, predicates)

    observed = abs(_micro_f1(pu_a.sum(), co_a.sum(), total) - _micro_f1(pu_b.sum(), co_b.sum(), total))

    rng = np.random.default_rng(seed)
    count = 0
    for start in range(0, iterations, SHUFFLE_CHUNK):
        swap = rng.random((min(SHUFFLE_CHUNK, iterations - start), len(predicates))) < 0.5
        shuffled_pu_a = np.where(swap, pu_b, pu_a).sum(axis=1)
        shuffled_co_a = np.where(swap, co_b, co_a).sum(axis=1)
        shuffled_pu_b = np.where(swap, pu_a, pu_b).sum(axis=1)
        shuffled_co_b = np.where(swap, co_a, co_b).sum(axis=1)
        differences = np.abs(
            _micro_f1(shuffled_pu_a, shuffled_co_a, total) - _micro_f1(shuffled_pu_b, shuffled_co_b, total)
        )
        count += int((differences >= observed - 1e-12).sum())
    return (count + 1) / (iterations + 1)


def compare_systems(frames: Sequence[Frame], labels_a: Mapping, labels_b: Mapping, comparison: str,
                    iterations: int = 10000, seed: int = 0, level: float = 0.05,
                    excluded: Iterable[str] = DEFAULT_EXCLUDED) -> SignificanceResult:
    induced_a, gold = clusterings_from_frames(frames, labels_a, excluded)
    induced_b, _ = clusterings_from_frames(frames, labels_b, excluded)
    p_value = stratified_shuffling(induced_a, induced_b, gold, iterations, seed)
    logger.info(f"Significance {comparison}: p={p_value:.4f} (seed {seed}, {iterations} shuffles)")
    return SignificanceResult(comparison, p_value, iterations, seed, p_value < level)


def select_supervised_sentences(frames: Sequence[Frame], fraction: float, seed: int) -> Set[Tuple[str, int]]:
    """Uniform sample of (language, sentence id) without replacement"""
    if not 0.0 <= fraction <= 1.0:
        raise ConfigError(f"Labeled fraction must lie in [0, 1], got {fraction}")
    sentences = sorted({(frame.language, frame.sentence_id) for frame in frames})
    size = int(round(fraction * len(sentences)))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(sentences), size=size, replace=False) if size else []
    return {sentences[i] for i in chosen}


@dataclass
class CurvePoint:
    fraction: float
    model_f1: float
    baseline_f1: float
    model_f1_runs: List[float] = field(default_factory=list)
    baseline_f1_runs: List[float] = field(default_factory=list)
    # unsupervised model scored on the same unlabeled frames
    unsupervised_f1: Optional[float] = None
    unsupervised_f1_runs: List[float] = field(default_factory=list)


@dataclass
class SemiSupervisedCurve:
    unsupervised_f1: float
    points: List[CurvePoint]

    @property
    def crossover(self) -> Optional[float]:
        return find_crossover(self)

    def to_dict(self) -> Dict:
        return {
            "format_version": 1,
            "kind": "semi_supervised_curve",
            "unsupervised_f1": self.unsupervised_f1,
            "crossover": self.crossover,
            "points": [
                {"fraction": p.fraction, "model_f1": p.model_f1, "baseline_f1": p.baseline_f1,
                 "model_f1_runs": p.model_f1_runs, "baseline_f1_runs": p.baseline_f1_runs,
                 "unsupervised_f1": p.unsupervised_f1, "unsupervised_f1_runs": p.unsupervised_f1_runs}
                for p in self.points
            ],
        }


def find_crossover(curve: SemiSupervisedCurve) -> Optional[float]:
    """Smallest labeled fraction where the supervised baseline reaches the unsupervised model on the same frames"""
    for point in sorted(curve.points, key=lambda p: p.fraction):
        reference = curve.unsupervised_f1 if point.unsupervised_f1 is None else point.unsupervised_f1
        if point.baseline_f1 >= reference:
            return point.fraction
    return None


def semi_supervised_curve(corpus: Corpus, fractions: Sequence[float], config, hp: Optional[Hyperparams] = None,
                          repetitions: int = 10, excluded: Iterable[str] = DEFAULT_EXCLUDED) -> SemiSupervisedCurve:
    """
    For each labeled fraction: sample sentences (seed + repetition), train
    with their mapped gold labels clamped and score the model, the
    supervised baseline and the unsupervised model on the remaining frames.
    Scores are means over repetitions; the curve-level unsupervised F1
    covers every frame.
    """
    from inference import MONO, build_clamps, train

    config = config.with_overrides(regime=MONO, clamps={})
    frames = corpus.frames()
    mapping = default_role_mapping(gold_label_frequencies(frames, excluded), config.num_roles, config.num_primary)

    unsupervised = train(corpus, config, hp)
    unsupervised_f1 = score_labels(frames, unsupervised.training_labels, excluded).f1
    logger.info(f"Unsupervised F1 {unsupervised_f1:.4f}")

    points = []
    for fraction in fractions:
        model_runs, baseline_runs, unsupervised_runs = [], [], []
        for repetition in range(repetitions):
            seed = config.seed + repetition
            chosen = select_supervised_sentences(frames, fraction, seed)
            labeled = [f for f in frames if (f.language, f.sentence_id) in chosen]
            unlabeled = [f for f in frames if (f.language, f.sentence_id) not in chosen]
            if not unlabeled:
                continue
            model = train(corpus, config.with_overrides(seed=seed), hp, build_clamps(labeled, mapping.labels))
            model_runs.append(score_labels(unlabeled, model.training_labels, excluded).f1)
            baseline = supervised_baseline(labeled, unlabeled, mapping, config.num_roles, config.num_primary,
                                           hp, seed, config.decode_iterations)
            baseline_runs.append(score_labels(unlabeled, baseline, excluded).f1)
            unsupervised_runs.append(score_labels(unlabeled, unsupervised.training_labels, excluded).f1)
        if not model_runs:
            continue
        points.append(CurvePoint(fraction, float(np.mean(model_runs)), float(np.mean(baseline_runs)),
                                 model_runs, baseline_runs, float(np.mean(unsupervised_runs)), unsupervised_runs))
        logger.info(f"Fraction {fraction:.2f}: model F1 {points[-1].model_f1:.4f}, "
                    f"supervised baseline F1 {points[-1].baseline_f1:.4f}, "
                    f"unsupervised F1 {points[-1].unsupervised_f1:.4f}")
    return SemiSupervisedCurve(unsupervised_f1, points)


def write_labels(path: str, labels: Mapping[str, Sequence[Optional[str]]], kind: str = "labels"):
    write_json(path, {
        "format_version": LABELS_FORMAT_VERSION,
        "kind": kind,
        "labels": {frame_id: list(values) for frame_id, values in sorted(labels.items())},
    })


def read_labels(path: str) -> Dict[str, Tuple[Optional[str], ...]]:
    data = read_json(path)
    if not isinstance(data, dict) or data.get("format_version") != LABELS_FORMAT_VERSION or "labels" not in data:
        raise DataError(f"{path}: not a version {LABELS_FORMAT_VERSION} labels file")
    return {frame_id: tuple(values) for frame_id, values in data["labels"].items()}
