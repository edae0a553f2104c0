"""
Forward samplers for the generative story and synthetic corpus builder
"""

import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from corpus import AlignedFramePair, ArgumentMention, Corpus, Frame, Voice
from errors import ConfigError
from model_core import FrameAssignment, sample_index
from roles import (
    FEATURE_NAMES,
    NUM_FEATURES,
    PRED,
    SECONDARY_KIND,
    Interval,
    Ordering,
    RoleInventory,
    RoleLabel,
    interval_key,
    intervals,
    ordering_key,
)

logger = logging.getLogger(__name__)

FEATURE_PREFIXES = ("dep", "w", "pos")
MAX_STRUCTURE_ATTEMPTS = 1000


@dataclass(frozen=True)
class ArgumentPolicy:
    """Accepted argument-count range; structures outside it are redrawn"""
    min_arguments: int = 0
    max_arguments: Optional[int] = None

    def accepts(self, count: int) -> bool:
        if count < self.min_arguments:
            return False
        return self.max_arguments is None or count <= self.max_arguments


@dataclass(frozen=True)
class SyntheticConfig:
    num_roles: int = 6
    num_primary: int = 2
    predicates: Tuple[str, ...] = ("give", "take", "make", "say")
    num_frames: int = 100
    feature_vocab_sizes: Tuple[int, ...] = (4, 30, 8)
    peakiness: float = 0.9
    order_concentration: float = 0.5
    sr_concentration: float = 0.5
    stop_prob: float = 0.6
    passive_rate: float = 0.2
    min_arguments: int = 1
    max_arguments: int = 6
    seed: int = 0
    bilingual: bool = False
    languages: Tuple[str, ...] = ("en", "de")
    link_rate: float = 0.3
    second_peakiness: Optional[float] = None
    alpha_crp: float = 1.0
    align_noise: float = 0.05

    def __post_init__(self):
        RoleInventory(self.num_roles, self.num_primary)
        if not self.predicates:
            raise ConfigError("Synthetic config needs at least one predicate")
        if self.num_frames < 1:
            raise ConfigError("num_frames must be >= 1")
        if len(self.feature_vocab_sizes) != NUM_FEATURES or min(self.feature_vocab_sizes) < 1:
            raise ConfigError(f"feature_vocab_sizes needs {NUM_FEATURES} positive sizes")
        for name in ("peakiness", "stop_prob", "passive_rate", "link_rate", "align_noise"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.second_peakiness is not None and not 0.0 <= self.second_peakiness <= 1.0:
            raise ConfigError(f"second_peakiness must lie in [0, 1], got {self.second_peakiness}")
        for name in ("order_concentration", "sr_concentration", "alpha_crp"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.min_arguments < 0 or self.max_arguments < self.min_arguments:
            raise ConfigError("Argument range must satisfy 0 <= min_arguments <= max_arguments")
        if self.bilingual and len(self.languages) != 2:
            raise ConfigError("Bilingual synthetic corpora need exactly two languages")

    @property
    def inventory(self) -> RoleInventory:
        return RoleInventory(self.num_roles, self.num_primary)

    @property
    def argument_policy(self) -> ArgumentPolicy:
        return ArgumentPolicy(self.min_arguments, self.max_arguments)

    def to_dict(self) -> Dict:
        data = asdict(self)
        for name in ("predicates", "feature_vocab_sizes", "languages"):
            data[name] = list(data[name])
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "SyntheticConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown synthetic config keys: {', '.join(sorted(unknown))}")
        values = dict(data)
        for name in ("predicates", "feature_vocab_sizes", "languages"):
            if name in values:
                values[name] = tuple(values[name])
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(f"Invalid synthetic config: {e}") from None


def feature_pool(feature_type: int, size: int, language: str = "") -> List[str]:
    prefix = FEATURE_PREFIXES[feature_type]
    return [f"{language}{prefix}{i}" for i in range(size)]


class SyntheticParams:
    """
    Explicit per-predicate distributions for forward sampling.

    Exposes the same distribution methods as model_core.PointEstimates so
    generate_frame runs from either.
    """

    def __init__(self, inventory: RoleInventory, pools: Sequence[Sequence[str]], stop_prob: float = 0.6):
        self.inventory = inventory
        self.pools = [list(pool) for pool in pools]
        self.default_stop = stop_prob
        self.order: Dict[Tuple[str, str], np.ndarray] = {}
        self.sr: Dict[Tuple[str, Interval], np.ndarray] = {}
        self.stop: Dict[Tuple[str, Interval, int], float] = {}
        self.feature: Dict[Tuple[str, RoleLabel, int], np.ndarray] = {}

    @classmethod
    def draw(cls, config: SyntheticConfig, predicates: Sequence[str], rng: np.random.Generator,
             peakiness: Optional[float] = None, language: str = "") -> "SyntheticParams":
        inventory = config.inventory
        pools = [feature_pool(t, size, language) for t, size in enumerate(config.feature_vocab_sizes)]
        params = cls(inventory, pools, config.stop_prob)
        peak = config.peakiness if peakiness is None else peakiness
        orderings = inventory.orderings
        all_intervals = sorted({i for o in orderings for i in intervals(o)}, key=interval_key)
        labels = inventory.labels

        for predicate in predicates:
            for voice in (Voice.ACTIVE.value, Voice.PASSIVE.value):
                params.order[(predicate, voice)] = rng.dirichlet(
                    np.full(len(orderings), config.order_concentration)
                )
            for interval in all_intervals:
                params.sr[(predicate, interval)] = rng.dirichlet(
                    np.full(inventory.num_secondary, config.sr_concentration)
                )
            for t, pool in enumerate(pools):
                homes = rng.permutation(len(pool))
                for k, role in enumerate(labels):
                    home = np.zeros(len(pool))
                    home[homes[k % len(pool)]] = 1.0
                    background = rng.dirichlet(np.ones(len(pool)))
                    params.feature[(predicate, role, t)] = peak * home + (1.0 - peak) * background
        return params

    def qualify(self, language: str, predicate: str) -> str:
        return predicate

    def set_order(self, predicate: str, voice: str, distribution: Dict[Ordering, float]):
        orderings = self.inventory.orderings
        self.order[(predicate, voice)] = np.array([distribution.get(o, 0.0) for o in orderings])

    def set_sr(self, predicate: str, interval: Interval, distribution: Dict[RoleLabel, float]):
        labels = self.inventory.secondaries
        self.sr[(predicate, interval)] = np.array([distribution.get(s, 0.0) for s in labels])

    def set_stop(self, probability: float):
        self.default_stop = probability
        self.stop.clear()

    def order_distribution(self, predicate: str, voice: str) -> Tuple[List[Ordering], np.ndarray]:
        orderings = list(self.inventory.orderings)
        probs = self.order.get((predicate, voice))
        if probs is None:
            probs = np.full(len(orderings), 1.0 / len(orderings))
        return orderings, probs

    def sr_distribution(self, predicate: str, interval: Interval) -> Tuple[List[RoleLabel], np.ndarray]:
        labels = list(self.inventory.secondaries)
        probs = self.sr.get((predicate, interval))
        if probs is None:
            probs = np.full(len(labels), 1.0 / len(labels))
        return labels, probs

    def stop_prob(self, predicate: str, interval: Interval, adjacent: int) -> float:
        return self.stop.get((predicate, interval, adjacent), self.default_stop)

    def feature_distribution(self, predicate: str, role: RoleLabel,
                             feature_type: int) -> Tuple[List[str], np.ndarray]:
        pool = self.pools[feature_type]
        probs = self.feature.get((predicate, role, feature_type))
        if probs is None:
            probs = np.full(len(pool), 1.0 / len(pool))
        return pool, probs

    def to_dict(self) -> Dict:
        return {
            "inventory": self.inventory.to_dict(),
            "pools": self.pools,
            "default_stop": self.default_stop,
            "order": [
                {"predicate": p, "voice": v,
                 "probs": {ordering_key(o): float(x) for o, x in zip(self.inventory.orderings, probs)}}
                for (p, v), probs in sorted(self.order.items())
            ],
            "sr": [
                {"predicate": p, "interval": interval_key(i),
                 "probs": {str(s): float(x) for s, x in zip(self.inventory.secondaries, probs)}}
                for (p, i), probs in sorted(self.sr.items(), key=lambda kv: (kv[0][0], interval_key(kv[0][1])))
            ],
            "feature": [
                {"predicate": p, "role": str(r), "type": FEATURE_NAMES[t],
                 "probs": {value: float(x) for value, x in zip(self.pools[t], probs)}}
                for (p, r, t), probs in sorted(self.feature.items(), key=lambda kv: (kv[0][0], str(kv[0][1]), kv[0][2]))
            ],
        }


def sample_structure(params, predicate: str, voice: str, rng: np.random.Generator,
                     policy: Optional[ArgumentPolicy] = None) -> Tuple[RoleLabel, ...]:
    """Ordering, then SRs per interval via stop/continue draws; returns the full role sequence"""
    policy = policy or ArgumentPolicy()
    for _ in range(MAX_STRUCTURE_ATTEMPTS):
        orderings, probs = params.order_distribution(predicate, voice)
        ordering = orderings[sample_index(rng, probs)]
        sequence = [ordering[0]]
        for interval in intervals(ordering):
            adjacent = 0
            while rng.random() >= params.stop_prob(predicate, interval, adjacent):
                labels, sr_probs = params.sr_distribution(predicate, interval)
                sequence.append(labels[sample_index(rng, sr_probs)])
                adjacent = 1
                if policy.max_arguments is not None and len(sequence) > policy.max_arguments + 3:
                    break
            sequence.append(interval[1])
        if policy.accepts(len(sequence) - 3):
            return tuple(sequence)
    raise ConfigError(
        f"Could not draw a frame for {predicate} within the argument range "
        f"[{policy.min_arguments}, {policy.max_arguments}]"
    )


def draw_features(params, predicate: str, role: RoleLabel, rng: np.random.Generator) -> Tuple[str, ...]:
    values = []
    for t in range(NUM_FEATURES):
        pool, probs = params.feature_distribution(predicate, role, t)
        values.append(pool[sample_index(rng, probs)])
    return tuple(values)


def build_frame(params, predicate: str, voice: str, sequence: Sequence[RoleLabel],
                rng: np.random.Generator, language: str = "en", sentence_id: int = 0) -> Tuple[Frame, FrameAssignment]:
    """Lay the sequence out left to right (token i = element i) and draw features"""
    key = params.qualify(language, predicate)
    inner = list(sequence[1:-1])
    predicate_position = inner.index(PRED) + 1
    arguments = []
    roles = []
    for position, role in enumerate(inner, 1):
        if role == PRED:
            continue
        arguments.append(ArgumentMention(position, draw_features(params, key, role, rng), str(role)))
        roles.append(role)
    frame = Frame(
        frame_id=f"{language}:{sentence_id}:{predicate_position}",
        language=language,
        sentence_id=sentence_id,
        predicate=predicate,
        voice=Voice(voice),
        predicate_position=predicate_position,
        arguments=tuple(arguments),
    )
    return frame, FrameAssignment(frame, tuple(roles))


def generate_frame(params, predicate: str, voice: str, rng: np.random.Generator,
                   policy: Optional[ArgumentPolicy] = None, language: str = "en",
                   sentence_id: int = 0) -> Tuple[Frame, FrameAssignment]:
    sequence = sample_structure(params, params.qualify(language, predicate), voice, rng, policy)
    return build_frame(params, predicate, voice, sequence, rng, language, sentence_id)


@dataclass
class ClvTable:
    size: int
    first: np.ndarray   # role distribution in language 1, over inventory.labels
    second: np.ndarray  # role distribution in language 2


class AlignParams:
    """CRP-seated crosslingual tables used to correlate aligned roles"""

    def __init__(self, inventory: RoleInventory, alpha_crp: float = 1.0, noise: float = 0.05,
                 correspondence: Optional[Dict[RoleLabel, RoleLabel]] = None,
                 allow_new_tables: bool = True):
        self.inventory = inventory
        self.labels = list(inventory.labels)
        self.alpha_crp = alpha_crp
        self.noise = noise
        self.correspondence = dict(correspondence or {})
        self.allow_new_tables = allow_new_tables
        self.tables: Dict[Tuple[str, str], List[ClvTable]] = {}

    def peaked(self, anchor: RoleLabel) -> np.ndarray:
        probs = np.full(len(self.labels), self.noise / len(self.labels))
        probs[self.labels.index(anchor)] += 1.0 - self.noise
        return probs

    def add_table(self, pair_key: Tuple[str, str], first: np.ndarray, second: np.ndarray, size: int = 1):
        self.tables.setdefault(pair_key, []).append(ClvTable(size, np.asarray(first), np.asarray(second)))

    def table_weights(self, pair_key: Tuple[str, str]) -> np.ndarray:
        """CRP seating weights: existing tables by size, then NEW by alpha"""
        sizes = [t.size for t in self.tables.get(pair_key, [])]
        weights = np.array(sizes + [self.alpha_crp if self.allow_new_tables else 0.0], dtype=float)
        if weights.sum() <= 0:
            raise ConfigError(f"No table to seat a link of {pair_key} and new tables are disabled")
        return weights

    def draw_table(self, pair_key: Tuple[str, str], anchor: Optional[RoleLabel],
                   rng: np.random.Generator, seat: bool = True) -> int:
        """
        Table index from the CRP prior; len(tables) stands for NEW. A new
        table is peaked on anchor (uniform anchor when None). seat=False
        leaves the state untouched.
        """
        tables = self.tables.setdefault(pair_key, [])
        choice = sample_index(rng, self.table_weights(pair_key))
        if not seat:
            return choice
        if choice == len(tables):
            if anchor is None:
                anchor = self.labels[sample_index(rng, np.ones(len(self.labels)))]
            target = self.correspondence.get(anchor, anchor)
            tables.append(ClvTable(1, self.peaked(anchor), self.peaked(target)))
        else:
            tables[choice].size += 1
        return choice

    def draw_first_role(self, pair_key: Tuple[str, str], table: int, rng: np.random.Generator) -> RoleLabel:
        return self.labels[sample_index(rng, self.tables[pair_key][table].first)]

    def draw_second_role(self, pair_key: Tuple[str, str], table: int, rng: np.random.Generator) -> RoleLabel:
        return self.labels[sample_index(rng, self.tables[pair_key][table].second)]


def _argument_slots(sequence: Sequence[RoleLabel]) -> List[int]:
    return [i for i, label in enumerate(sequence) if 0 < i < len(sequence) - 1 and label != PRED]


def _place_role(sequence: List[RoleLabel], slot: int, role: RoleLabel):
    """Put role at slot unless it would repeat a primary role"""
    others = [label for k, label in enumerate(sequence) if k != slot]
    if role.kind == SECONDARY_KIND or role not in others:
        sequence[slot] = role


def generate_pair(params_a, params_b, align: AlignParams, p1: str, p2: str,
                  rng: np.random.Generator, link_rate: float = 0.3,
                  voices: Tuple[str, str] = (Voice.ACTIVE.value, Voice.ACTIVE.value),
                  languages: Tuple[str, str] = ("en", "de"), sentence_id: int = 0,
                  policy: Optional[ArgumentPolicy] = None
                  ) -> Tuple[Frame, Frame, Tuple[Tuple[int, int], ...], FrameAssignment, FrameAssignment]:
    """
    Both role structures are drawn monolingually. Argument i of both frames
    is linked with probability link_rate; each link seats a CLV table from
    the CRP prior and both aligned roles are redrawn from that table (a
    redraw that would repeat a primary role is dropped). Features follow
    the final roles.
    """
    sequence_a = list(sample_structure(params_a, params_a.qualify(languages[0], p1), voices[0], rng, policy))
    sequence_b = list(sample_structure(params_b, params_b.qualify(languages[1], p2), voices[1], rng, policy))
    slots_a = _argument_slots(sequence_a)
    slots_b = _argument_slots(sequence_b)

    links = []
    for i in range(min(len(slots_a), len(slots_b))):
        if rng.random() < link_rate:
            links.append((i, i))

    for i, j in links:
        table = align.draw_table((p1, p2), sequence_a[slots_a[i]], rng)
        _place_role(sequence_a, slots_a[i], align.draw_first_role((p1, p2), table, rng))
        _place_role(sequence_b, slots_b[j], align.draw_second_role((p1, p2), table, rng))

    frame_a, assignment_a = build_frame(params_a, p1, voices[0], sequence_a, rng, languages[0], sentence_id)
    frame_b, assignment_b = build_frame(params_b, p2, voices[1], sequence_b, rng, languages[1], sentence_id)
    return frame_a, frame_b, tuple(links), assignment_a, assignment_b


@dataclass
class SyntheticCorpus:
    corpus: Corpus
    config: SyntheticConfig
    params: Dict[str, SyntheticParams]
    align: Optional[AlignParams] = None
    assignments: Dict[str, FrameAssignment] = field(default_factory=dict)

    def gold_labels(self) -> Dict[str, List[str]]:
        return {
            frame_id: [str(role) for role in assignment.roles]
            for frame_id, assignment in sorted(self.assignments.items())
        }

    def params_to_dict(self) -> Dict:
        return {
            "format_version": 1,
            "kind": "generator_params",
            "config": self.config.to_dict(),
            "languages": {language: params.to_dict() for language, params in sorted(self.params.items())},
        }


def second_language_predicate(predicate: str, language: str) -> str:
    return f"{predicate}_{language}"


def generate_corpus(config: SyntheticConfig) -> SyntheticCorpus:
    rng = np.random.default_rng(config.seed)
    policy = config.argument_policy
    lang_a = config.languages[0]
    predicates_a = list(config.predicates)
    params = {lang_a: SyntheticParams.draw(config, predicates_a, rng)}
    assignments: Dict[str, FrameAssignment] = {}

    def voice():
        return Voice.PASSIVE.value if rng.random() < config.passive_rate else Voice.ACTIVE.value

    if not config.bilingual:
        frames = []
        for n in range(config.num_frames):
            predicate = predicates_a[n % len(predicates_a)]
            frame, assignment = generate_frame(params[lang_a], predicate, voice(), rng, policy, lang_a, n)
            frames.append(frame)
            assignments[frame.frame_id] = assignment
        logger.info(f"Generated {len(frames)} synthetic frames")
        corpus = Corpus((lang_a,), {lang_a: tuple(frames)}, ())
        return SyntheticCorpus(corpus, config, params, None, assignments)

    lang_b = config.languages[1]
    predicates_b = [second_language_predicate(p, lang_b) for p in predicates_a]
    params[lang_b] = SyntheticParams.draw(
        config, predicates_b, rng,
        peakiness=config.second_peakiness, language=f"{lang_b}_",
    )
    align = AlignParams(config.inventory, config.alpha_crp, config.align_noise)

    monolingual = {lang_a: [], lang_b: []}
    pairs = []
    for n in range(config.num_frames):
        k = n % len(predicates_a)
        frame_a, frame_b, links, assignment_a, assignment_b = generate_pair(
            params[lang_a], params[lang_b], align, predicates_a[k], predicates_b[k], rng,
            link_rate=config.link_rate, voices=(voice(), voice()),
            languages=(lang_a, lang_b), sentence_id=n, policy=policy,
        )
        assignments[frame_a.frame_id] = assignment_a
        assignments[frame_b.frame_id] = assignment_b
        if links:
            pairs.append(AlignedFramePair(frame_a, frame_b, links))
        else:
            monolingual[lang_a].append(frame_a)
            monolingual[lang_b].append(frame_b)

    logger.info(f"Generated {len(pairs)} linked synthetic pairs out of {config.num_frames}")
    corpus = Corpus(
        (lang_a, lang_b),
        {language: tuple(frames) for language, frames in monolingual.items()},
        tuple(pairs),
    )
    return SyntheticCorpus(corpus, config, params, align, assignments)
