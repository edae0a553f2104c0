"""
Monolingual role model: collapsed count tables, frame joint, marginal and
the posterior-mean parameter view used for decoding and generation.

Every frame is scored as a sequence of categorical events:
    order    key (predicate, voice)              value Ordering
    sr       key (predicate, interval)           value secondary RoleLabel
    stop     key (predicate, interval, adj)      value True (stop) / False (continue)
    feature  key (predicate, role, type)         value feature string
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.special import gammaln

from corpus import Frame
from errors import ContractViolation, EnumerationLimitExceeded
from roles import (
    END,
    NUM_FEATURES,
    PRED,
    SECONDARY_KIND,
    START,
    Hyperparams,
    Interval,
    Ordering,
    RoleInventory,
    RoleLabel,
    count_orderings,
    interval_key,
    ordering_key,
    parse_interval,
    parse_ordering,
)

logger = logging.getLogger(__name__)

ORDER = "order"
SR = "sr"
STOP = "stop"
FEATURE = "feature"
EVENT_KINDS = (ORDER, SR, STOP, FEATURE)

UNK = "<unk>"
BACKOFF_PREDICATE = "*"

Event = Tuple[str, tuple, object]


def predicate_key(language: str, predicate: str) -> str:
    """Count-table key: monolingual statistics never mix languages"""
    return f"{language}:{predicate}"


def backoff_key(key: str) -> str:
    return predicate_key(key.split(":", 1)[0], BACKOFF_PREDICATE)


def predictive_prob(counts: Mapping, value, alpha: float, vocab_size: int) -> float:
    """Dirichlet-multinomial posterior predictive (count + alpha) / (total + alpha * V)"""
    if vocab_size < 1:
        raise ValueError(f"Vocabulary size must be >= 1, got {vocab_size}")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    total = sum(counts.values())
    return (counts.get(value, 0) + alpha) / (total + alpha * vocab_size)


class FeatureVocabulary:
    """Global value inventory per feature type with one reserved UNK slot each"""

    def __init__(self, values: Sequence[Sequence[str]]):
        if len(values) != NUM_FEATURES:
            raise ValueError(f"Expected {NUM_FEATURES} feature inventories, got {len(values)}")
        self._values = tuple(tuple(sorted(set(v) - {UNK})) for v in values)
        self._known = tuple(set(v) for v in self._values)

    @classmethod
    def from_frames(cls, frames: Sequence[Frame]) -> "FeatureVocabulary":
        values: List[Set[str]] = [set() for _ in range(NUM_FEATURES)]
        for frame in frames:
            for argument in frame.arguments:
                for t, value in enumerate(argument.features):
                    values[t].add(value)
        return cls([sorted(v) for v in values])

    def size(self, feature_type: int) -> int:
        return len(self._values[feature_type]) + 1

    def values(self, feature_type: int) -> Tuple[str, ...]:
        return self._values[feature_type] + (UNK,)

    def normalize(self, feature_type: int, value: str) -> str:
        return value if value in self._known[feature_type] else UNK

    def to_dict(self) -> Dict:
        return {"values": [list(v) for v in self._values], "unk": UNK}

    @classmethod
    def from_dict(cls, data: Dict) -> "FeatureVocabulary":
        return cls(data["values"])

    def __eq__(self, other) -> bool:
        return isinstance(other, FeatureVocabulary) and self._values == other._values


@dataclass(frozen=True)
class FrameAssignment:
    frame: Frame
    roles: Tuple[RoleLabel, ...]

    def __post_init__(self):
        if len(self.roles) != len(self.frame.arguments):
            raise ContractViolation(
                f"Frame {self.frame.frame_id}: {len(self.roles)} roles for {len(self.frame.arguments)} arguments"
            )
        primaries = [r for r in self.roles if r.kind != SECONDARY_KIND]
        if any(r.is_marker for r in self.roles):
            raise ContractViolation(f"Frame {self.frame.frame_id}: marker label assigned to an argument")
        if len(set(primaries)) != len(primaries):
            raise ContractViolation(
                f"Frame {self.frame.frame_id}: primary role repeated in {[str(r) for r in self.roles]}"
            )

    def with_role(self, position: int, role: RoleLabel) -> "FrameAssignment":
        roles = list(self.roles)
        roles[position] = role
        return FrameAssignment(self.frame, tuple(roles))


def role_sequence(assignment: FrameAssignment) -> Tuple[RoleLabel, ...]:
    """START, the argument roles with PRED at the predicate's linear position, END"""
    frame = assignment.frame
    sequence = [START]
    placed = False
    for argument, role in zip(frame.arguments, assignment.roles):
        if not placed and argument.head_token > frame.predicate_position:
            sequence.append(PRED)
            placed = True
        sequence.append(role)
    if not placed:
        sequence.append(PRED)
    sequence.append(END)
    return tuple(sequence)


def ordering_of(sequence: Sequence[RoleLabel]) -> Ordering:
    return tuple(label for label in sequence if label.kind != SECONDARY_KIND)


def structure_events(predicate: str, voice: str, sequence: Sequence[RoleLabel]) -> List[Event]:
    """Ordering, stop/continue and SR events of a full role sequence"""
    events: List[Event] = [(ORDER, (predicate, voice), ordering_of(sequence))]
    anchors = [i for i, label in enumerate(sequence) if label.kind != SECONDARY_KIND]
    for left, right in zip(anchors, anchors[1:]):
        interval = (sequence[left], sequence[right])
        inner = sequence[left + 1:right]
        for n, role in enumerate(inner):
            events.append((STOP, (predicate, interval, 0 if n == 0 else 1), False))
            events.append((SR, (predicate, interval), role))
        events.append((STOP, (predicate, interval, 0 if not inner else 1), True))
    return events


def frame_events(assignment: FrameAssignment,
                 vocabulary: Optional[FeatureVocabulary] = None) -> List[Event]:
    frame = assignment.frame
    predicate = predicate_key(frame.language, frame.predicate)
    events = structure_events(predicate, frame.voice.value, role_sequence(assignment))
    for argument, role in zip(frame.arguments, assignment.roles):
        for t, value in enumerate(argument.features):
            if vocabulary is not None:
                value = vocabulary.normalize(t, value)
            events.append((FEATURE, (predicate, role, t), value))
    return events


class _FactorSource:
    """Shared prior bookkeeping for the collapsed and the point-estimate views"""

    def __init__(self, inventory: RoleInventory, vocabulary: FeatureVocabulary,
                 hyperparams: Hyperparams):
        self.inventory = inventory
        self.vocabulary = vocabulary
        self.hyperparams = hyperparams
        self._num_orderings = count_orderings(inventory.num_primary)

    def vocab_size(self, kind: str, key: tuple) -> int:
        if kind == ORDER:
            return self._num_orderings
        if kind == SR:
            return self.inventory.num_secondary
        if kind == STOP:
            return 2
        return self.vocabulary.size(key[2])

    def prior(self, kind: str, key: tuple, value, hp: Hyperparams) -> Tuple[float, float]:
        """(pseudo-count of value, pseudo-count total) under the prior"""
        if kind == ORDER:
            return hp.alpha_order, hp.alpha_order * self._num_orderings
        if kind == SR:
            return hp.alpha_sr, hp.alpha_sr * self.inventory.num_secondary
        if kind == STOP:
            stop, cont = hp.beta_stop
            return (stop if value else cont), stop + cont
        alpha = hp.alpha_feat[key[2]]
        return alpha, alpha * self.vocabulary.size(key[2])

    def check_assignment(self, assignment: FrameAssignment):
        for role in assignment.roles:
            if not self.inventory.contains(role):
                raise ContractViolation(
                    f"Frame {assignment.frame.frame_id}: role {role} outside the inventory "
                    f"(N={self.inventory.num_roles}, K={self.inventory.num_primary})"
                )

    def score_events(self, events: Sequence[Event], hp: Hyperparams, included: bool) -> float:
        raise NotImplementedError


class CountTables(_FactorSource):
    """Collapsed sufficient statistics for order, SR, stop and feature draws"""

    def __init__(self, inventory: RoleInventory, vocabulary: FeatureVocabulary,
                 hyperparams: Optional[Hyperparams] = None):
        super().__init__(inventory, vocabulary, hyperparams or Hyperparams())
        self._counts: Dict[str, Dict[tuple, Dict[object, int]]] = {kind: {} for kind in EVENT_KINDS}
        self._totals: Dict[str, Dict[tuple, int]] = {kind: {} for kind in EVENT_KINDS}

    def count(self, kind: str, key: tuple, value) -> int:
        return self._counts[kind].get(key, {}).get(value, 0)

    def total(self, kind: str, key: tuple) -> int:
        return self._totals[kind].get(key, 0)

    def counts(self, kind: str, key: tuple) -> Dict[object, int]:
        return dict(self._counts[kind].get(key, {}))

    def keys(self, kind: str) -> List[tuple]:
        return list(self._counts[kind])

    def add(self, kind: str, key: tuple, value, delta: int = 1):
        table = self._counts[kind].setdefault(key, {})
        new = table.get(value, 0) + delta
        if new < 0:
            raise ContractViolation(f"Count for {kind} {key} -> {value} would become negative")
        if new == 0:
            table.pop(value, None)
        else:
            table[value] = new
        total = self._totals[kind].get(key, 0) + delta
        if total == 0:
            self._totals[kind].pop(key, None)
            self._counts[kind].pop(key, None)
        else:
            self._totals[kind][key] = total

    def add_events(self, events: Sequence[Event], sign: int = 1):
        for kind, key, value in events:
            self.add(kind, key, value, sign)

    def add_assignment(self, assignment: FrameAssignment):
        self.add_events(frame_events(assignment, self.vocabulary), 1)

    def remove_assignment(self, assignment: FrameAssignment):
        self.add_events(frame_events(assignment, self.vocabulary), -1)

    def event_totals(self) -> Dict[str, int]:
        return {kind: sum(self._totals[kind].values()) for kind in EVENT_KINDS}

    def verify(self):
        """Totals match the per-value counts and nothing is negative"""
        for kind in EVENT_KINDS:
            for key, table in self._counts[kind].items():
                if any(c < 0 for c in table.values()):
                    raise ContractViolation(f"Negative count under {kind} {key}")
                if sum(table.values()) != self._totals[kind].get(key, 0):
                    raise ContractViolation(f"Stale total under {kind} {key}")

    def score_events(self, events: Sequence[Event], hp: Hyperparams, included: bool) -> float:
        overlay: Counter = Counter()
        overlay_totals: Counter = Counter()
        if included:
            for kind, key, value in events:
                overlay[(kind, key, value)] -= 1
                overlay_totals[(kind, key)] -= 1

        log_prob = 0.0
        for kind, key, value in events:
            count = self.count(kind, key, value) + overlay[(kind, key, value)]
            total = self.total(kind, key) + overlay_totals[(kind, key)]
            if count < 0:
                raise ContractViolation(f"Frame events missing from tables ({kind} {key} -> {value})")
            alpha, alpha_total = self.prior(kind, key, value, hp)
            log_prob += math.log((count + alpha) / (total + alpha_total))
            overlay[(kind, key, value)] += 1
            overlay_totals[(kind, key)] += 1
        return log_prob

    def log_evidence(self, hp: Optional[Hyperparams] = None) -> float:
        """Log probability of every counted event, integrating the parameters out"""
        hp = hp or self.hyperparams
        log_prob = 0.0
        for kind in EVENT_KINDS:
            for key, table in self._counts[kind].items():
                values = list(table)
                alphas = np.array([self.prior(kind, key, v, hp)[0] for v in values])
                counts = np.array([table[v] for v in values], dtype=float)
                alpha_total = self.prior(kind, key, values[0], hp)[1]
                log_prob += float(
                    gammaln(alpha_total) - gammaln(alpha_total + counts.sum())
                    + (gammaln(alphas + counts) - gammaln(alphas)).sum()
                )
        return log_prob

    def pooled(self) -> "CountTables":
        """Counts summed over predicates under the backoff predicate"""
        pooled = CountTables(self.inventory, self.vocabulary, self.hyperparams)
        for kind in EVENT_KINDS:
            for key, table in self._counts[kind].items():
                pooled_key = (backoff_key(key[0]),) + key[1:]
                for value, count in table.items():
                    pooled.add(kind, pooled_key, value, count)
        return pooled

    def predicates(self) -> Set[str]:
        return {key[0] for key in self._counts[ORDER]}

    def copy(self) -> "CountTables":
        clone = CountTables(self.inventory, self.vocabulary, self.hyperparams)
        for kind in EVENT_KINDS:
            clone._counts[kind] = {key: dict(table) for key, table in self._counts[kind].items()}
            clone._totals[kind] = dict(self._totals[kind])
        return clone

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CountTables)
            and self._counts == other._counts
            and self._totals == other._totals
        )

    def to_dict(self) -> Dict:
        data = {}
        for kind in EVENT_KINDS:
            entries = []
            for key, table in self._counts[kind].items():
                entries.append({
                    "key": _encode_key(kind, key),
                    "counts": {_encode_value(kind, v): c for v, c in table.items()},
                })
            entries.sort(key=lambda e: [str(part) for part in e["key"]])
            data[kind] = entries
        return data

    @classmethod
    def from_dict(cls, data: Dict, inventory: RoleInventory, vocabulary: FeatureVocabulary,
                  hyperparams: Hyperparams) -> "CountTables":
        tables = cls(inventory, vocabulary, hyperparams)
        for kind in EVENT_KINDS:
            for entry in data.get(kind, []):
                key = _decode_key(kind, entry["key"])
                for value, count in entry["counts"].items():
                    tables.add(kind, key, _decode_value(kind, value), int(count))
        return tables


def _encode_key(kind: str, key: tuple) -> list:
    if kind == ORDER:
        return [key[0], key[1]]
    if kind == SR:
        return [key[0], interval_key(key[1])]
    if kind == STOP:
        return [key[0], interval_key(key[1]), key[2]]
    return [key[0], str(key[1]), key[2]]


def _decode_key(kind: str, raw: list) -> tuple:
    if kind == ORDER:
        return raw[0], raw[1]
    if kind == SR:
        return raw[0], parse_interval(raw[1])
    if kind == STOP:
        return raw[0], parse_interval(raw[1]), int(raw[2])
    return raw[0], RoleLabel.parse(raw[1]), int(raw[2])


def _encode_value(kind: str, value) -> str:
    if kind == ORDER:
        return ordering_key(value)
    if kind == SR:
        return str(value)
    if kind == STOP:
        return "stop" if value else "continue"
    return value


def _decode_value(kind: str, raw: str):
    if kind == ORDER:
        return parse_ordering(raw)
    if kind == SR:
        return RoleLabel.parse(raw)
    if kind == STOP:
        return raw == "stop"
    return raw


class PointEstimates(_FactorSource):
    """Posterior-mean parameters from frozen counts, with a pooled backoff for unseen predicates"""

    def __init__(self, tables: CountTables, backoff: Optional[CountTables] = None):
        super().__init__(tables.inventory, tables.vocabulary, tables.hyperparams)
        self.tables = tables
        self.backoff = backoff if backoff is not None else tables.pooled()
        self._seen = tables.predicates()

    def _resolve(self, key: tuple) -> Tuple[CountTables, tuple]:
        if key[0] in self._seen:
            return self.tables, key
        return self.backoff, (backoff_key(key[0]),) + key[1:]

    def prob(self, kind: str, key: tuple, value) -> float:
        tables, key = self._resolve(key)
        alpha, alpha_total = self.prior(kind, key, value, self.hyperparams)
        return (tables.count(kind, key, value) + alpha) / (tables.total(kind, key) + alpha_total)

    def score_events(self, events: Sequence[Event], hp: Hyperparams, included: bool) -> float:
        return sum(math.log(self.prob(kind, key, value)) for kind, key, value in events)

    def is_seen(self, predicate: str) -> bool:
        return predicate in self._seen

    def qualify(self, language: str, predicate: str) -> str:
        return predicate_key(language, predicate)

    def order_distribution(self, predicate: str, voice: str) -> Tuple[List[Ordering], np.ndarray]:
        orderings = list(self.inventory.orderings)
        probs = np.array([self.prob(ORDER, (predicate, voice), o) for o in orderings])
        return orderings, probs

    def sr_distribution(self, predicate: str, interval: Interval) -> Tuple[List[RoleLabel], np.ndarray]:
        labels = list(self.inventory.secondaries)
        probs = np.array([self.prob(SR, (predicate, interval), s) for s in labels])
        return labels, probs

    def stop_prob(self, predicate: str, interval: Interval, adjacent: int) -> float:
        return self.prob(STOP, (predicate, interval, adjacent), True)

    def feature_distribution(self, predicate: str, role: RoleLabel,
                             feature_type: int) -> Tuple[List[str], np.ndarray]:
        values = list(self.vocabulary.values(feature_type))
        probs = np.array([self.prob(FEATURE, (predicate, role, feature_type), v) for v in values])
        return values, probs


def frame_log_joint(assignment: FrameAssignment, source: _FactorSource,
                    hp: Optional[Hyperparams] = None, included: bool = False) -> float:
    """
    Log joint of an assignment and its features.

    With collapsed counts the frame's events are scored one after another
    (Polya urn). `included=True` means the frame's own events are already
    in the tables and are discounted first.
    """
    source.check_assignment(assignment)
    events = frame_events(assignment, source.vocabulary)
    return source.score_events(events, hp or source.hyperparams, included)


def enumerate_assignments(frame: Frame, inventory: RoleInventory) -> Iterator[FrameAssignment]:
    """Every assignment respecting the no-repeat rule for primary roles"""
    labels = inventory.labels
    roles: List[RoleLabel] = []
    used: Set[RoleLabel] = set()

    def extend(position: int):
        if position == len(frame.arguments):
            yield FrameAssignment(frame, tuple(roles))
            return
        for label in labels:
            if label.kind != SECONDARY_KIND and label in used:
                continue
            roles.append(label)
            if label.kind != SECONDARY_KIND:
                used.add(label)
            yield from extend(position + 1)
            roles.pop()
            used.discard(label)

    yield from extend(0)


def log_marginal_prob(frame: Frame, source: _FactorSource, hp: Optional[Hyperparams] = None,
                      included: bool = False, max_arguments: Optional[int] = None) -> float:
    """Brute-force sum over enumerate_assignments; the argument limit defaults to the marginal settings"""
    if max_arguments is None:
        from settings import get_settings
        max_arguments = get_settings().get_max_enumeration_arguments()
    if len(frame.arguments) > max_arguments:
        raise EnumerationLimitExceeded(
            f"Frame {frame.frame_id} has {len(frame.arguments)} arguments; "
            f"exact marginal is limited to {max_arguments}, use sampling"
        )
    total = -np.inf
    for assignment in enumerate_assignments(frame, source.inventory):
        total = np.logaddexp(total, frame_log_joint(assignment, source, hp, included))
    return float(total)


def marginal_prob(frame: Frame, source: _FactorSource, hp: Optional[Hyperparams] = None,
                  included: bool = False, max_arguments: Optional[int] = None) -> float:
    """Sum of the joint over every valid assignment of the frame"""
    return math.exp(log_marginal_prob(frame, source, hp, included, max_arguments))


def sample_index(rng: np.random.Generator, weights: Sequence[float]) -> int:
    cumulative = np.cumsum(weights)
    total = cumulative[-1]
    if not total > 0:
        raise ValueError("Cannot sample from all-zero weights")
    index = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
    return min(index, len(cumulative) - 1)


def sample_log_weights(rng: np.random.Generator, log_weights: Sequence[float]) -> int:
    log_weights = np.asarray(log_weights, dtype=float)
    return sample_index(rng, np.exp(log_weights - log_weights.max()))
