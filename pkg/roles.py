"""
Role label space: primary/secondary roles, orderings, intervals and priors
"""

import itertools
import math
from dataclasses import dataclass, field, asdict
from functools import lru_cache
from typing import Dict, List, NamedTuple, Sequence, Tuple

from errors import ConfigError

START_KIND = "START"
END_KIND = "END"
PRED_KIND = "PRED"
PRIMARY_KIND = "P"
SECONDARY_KIND = "S"

NUM_FEATURES = 3
FEATURE_NAMES = ("deprel", "head_word", "head_pos")


class RoleLabel(NamedTuple):
    kind: str
    index: int = 0

    def __str__(self) -> str:
        if self.kind in (PRIMARY_KIND, SECONDARY_KIND):
            return f"{self.kind}{self.index}"
        return self.kind

    @property
    def is_primary(self) -> bool:
        return self.kind != SECONDARY_KIND

    @property
    def is_marker(self) -> bool:
        return self.kind in (START_KIND, END_KIND, PRED_KIND)

    @classmethod
    def parse(cls, text: str) -> "RoleLabel":
        text = text.strip()
        if text in (START_KIND, END_KIND, PRED_KIND):
            return cls(text, 0)
        if len(text) > 1 and text[0] in (PRIMARY_KIND, SECONDARY_KIND) and text[1:].isdigit():
            index = int(text[1:])
            if index >= 1:
                return cls(text[0], index)
        raise ValueError(f"Not a role label: {text!r}")


START = RoleLabel(START_KIND)
END = RoleLabel(END_KIND)
PRED = RoleLabel(PRED_KIND)

Ordering = Tuple[RoleLabel, ...]
Interval = Tuple[RoleLabel, RoleLabel]


def primary(k: int) -> RoleLabel:
    return RoleLabel(PRIMARY_KIND, k)


def secondary(j: int) -> RoleLabel:
    return RoleLabel(SECONDARY_KIND, j)


def ordering_key(ordering: Sequence[RoleLabel]) -> str:
    return " ".join(str(label) for label in ordering)


def parse_ordering(text: str) -> Ordering:
    return tuple(RoleLabel.parse(part) for part in text.split())


def interval_key(interval: Interval) -> str:
    return f"{interval[0]}~{interval[1]}"


def parse_interval(text: str) -> Interval:
    left, right = text.split("~")
    return RoleLabel.parse(left), RoleLabel.parse(right)


def intervals(ordering: Sequence[RoleLabel]) -> List[Interval]:
    """Consecutive primary-role pairs of an ordering"""
    return [(ordering[i], ordering[i + 1]) for i in range(len(ordering) - 1)]


def is_valid_ordering(ordering: Sequence[RoleLabel], num_primary: int) -> bool:
    if len(ordering) < 3 or ordering[0] != START or ordering[-1] != END:
        return False
    if len(set(ordering)) != len(ordering):
        return False
    if sum(1 for label in ordering if label == PRED) != 1:
        return False
    for label in ordering[1:-1]:
        if label == PRED:
            continue
        if label.kind != PRIMARY_KIND or not 1 <= label.index <= num_primary:
            return False
    return True


@lru_cache(maxsize=None)
def enumerate_orderings(num_primary: int) -> Tuple[Ordering, ...]:
    """All START ... END sequences with PRED once and any subset of P1..PK"""
    if num_primary < 0:
        raise ConfigError(f"Number of primary roles must be >= 0, got {num_primary}")
    labels = [primary(k) for k in range(1, num_primary + 1)]
    orderings = []
    for size in range(num_primary + 1):
        for subset in itertools.combinations(labels, size):
            for permutation in itertools.permutations(subset + (PRED,)):
                orderings.append((START,) + permutation + (END,))
    return tuple(orderings)


def count_orderings(num_primary: int) -> int:
    return sum(
        math.comb(num_primary, m) * math.factorial(m + 1)
        for m in range(num_primary + 1)
    )


@dataclass(frozen=True)
class RoleInventory:
    """N roles per predicate, K of them primary"""
    num_roles: int
    num_primary: int

    def __post_init__(self):
        if self.num_primary < 0:
            raise ConfigError(f"K must be >= 0, got {self.num_primary}")
        if self.num_roles <= self.num_primary:
            raise ConfigError(
                f"N must exceed K (N={self.num_roles}, K={self.num_primary})"
            )

    @property
    def num_secondary(self) -> int:
        return self.num_roles - self.num_primary

    @property
    def primaries(self) -> Tuple[RoleLabel, ...]:
        return tuple(primary(k) for k in range(1, self.num_primary + 1))

    @property
    def secondaries(self) -> Tuple[RoleLabel, ...]:
        return tuple(secondary(j) for j in range(1, self.num_secondary + 1))

    @property
    def labels(self) -> Tuple[RoleLabel, ...]:
        """Labels an argument can carry"""
        return self.primaries + self.secondaries

    @property
    def orderings(self) -> Tuple[Ordering, ...]:
        return enumerate_orderings(self.num_primary)

    def contains(self, label: RoleLabel) -> bool:
        if label.kind == PRIMARY_KIND:
            return 1 <= label.index <= self.num_primary
        if label.kind == SECONDARY_KIND:
            return 1 <= label.index <= self.num_secondary
        return False

    def to_dict(self) -> Dict:
        return {"num_roles": self.num_roles, "num_primary": self.num_primary}

    @classmethod
    def from_dict(cls, data: Dict) -> "RoleInventory":
        return cls(int(data["num_roles"]), int(data["num_primary"]))


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0 or math.isinf(value):
        raise ConfigError(f"Hyperparameter {name} must be a positive real, got {value}")
    return value


@dataclass(frozen=True)
class Hyperparams:
    alpha_order: float = 1.0
    alpha_sr: float = 1.0
    alpha_feat: Tuple[float, ...] = field(default=(0.1,) * NUM_FEATURES)
    beta_stop: Tuple[float, float] = (1.0, 1.0)
    alpha_crp: float = 1.0
    alpha_align: float = 0.1

    def __post_init__(self):
        _positive("alpha_order", self.alpha_order)
        _positive("alpha_sr", self.alpha_sr)
        _positive("alpha_crp", self.alpha_crp)
        _positive("alpha_align", self.alpha_align)
        if len(self.alpha_feat) != NUM_FEATURES:
            raise ConfigError(f"alpha_feat needs {NUM_FEATURES} values, got {len(self.alpha_feat)}")
        for value in self.alpha_feat:
            _positive("alpha_feat", value)
        if len(self.beta_stop) != 2:
            raise ConfigError("beta_stop needs a (stop, continue) pair")
        for value in self.beta_stop:
            _positive("beta_stop", value)

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["alpha_feat"] = list(self.alpha_feat)
        data["beta_stop"] = list(self.beta_stop)
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "Hyperparams":
        known = {"alpha_order", "alpha_sr", "alpha_feat", "beta_stop", "alpha_crp", "alpha_align"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown hyperparameters: {', '.join(sorted(unknown))}")
        values = dict(data)
        if "alpha_feat" in values:
            feat = values["alpha_feat"]
            if isinstance(feat, (int, float)):
                feat = [feat] * NUM_FEATURES
            values["alpha_feat"] = tuple(float(v) for v in feat)
        if "beta_stop" in values:
            stop = values["beta_stop"]
            if isinstance(stop, (int, float)):
                stop = [stop, stop]
            values["beta_stop"] = tuple(float(v) for v in stop)
        for name in ("alpha_order", "alpha_sr", "alpha_crp", "alpha_align"):
            if name in values:
                values[name] = float(values[name])
        return cls(**values)
