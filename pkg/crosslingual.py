"""
Crosslingual latent variables: one Chinese Restaurant Process per predicate
pair, with per-table role counts for each language, and the coupled joint
of an aligned frame pair.
"""

import logging
import math
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from corpus import AlignedFramePair
from errors import ContractViolation
from model_core import CountTables, FrameAssignment, frame_log_joint, predicate_key
from roles import Hyperparams, RoleInventory, RoleLabel

logger = logging.getLogger(__name__)

NEW_TABLE = None

LinkId = Tuple[int, int]  # (pair index, link index)
PairKey = Tuple[str, str]


class CrpState:
    """Seating of aligned links at tables for one predicate pair"""

    def __init__(self):
        self.table_assignment: Dict[Hashable, int] = {}
        self.table_sizes: Dict[int, int] = {}
        self.next_table_id = 0

    @property
    def total(self) -> int:
        return len(self.table_assignment)

    def tables(self) -> List[int]:
        return sorted(self.table_sizes)

    def seat(self, link: Hashable, table: Optional[int] = NEW_TABLE) -> int:
        if link in self.table_assignment:
            raise ContractViolation(f"Link {link} is already seated")
        if table is NEW_TABLE:
            table = self.next_table_id
        if table >= self.next_table_id:
            self.next_table_id = table + 1
        self.table_assignment[link] = table
        self.table_sizes[table] = self.table_sizes.get(table, 0) + 1
        return table

    def unseat(self, link: Hashable) -> int:
        try:
            table = self.table_assignment.pop(link)
        except KeyError:
            raise ContractViolation(f"Link {link} has no table") from None
        self.table_sizes[table] -= 1
        if self.table_sizes[table] == 0:
            del self.table_sizes[table]
        return table

    def table_of(self, link: Hashable) -> int:
        try:
            return self.table_assignment[link]
        except KeyError:
            raise ContractViolation(f"Link {link} has no CLV assignment") from None

    def check(self):
        sizes: Dict[int, int] = {}
        for table in self.table_assignment.values():
            sizes[table] = sizes.get(table, 0) + 1
        if sizes != self.table_sizes:
            raise ContractViolation("Table sizes disagree with link assignments")

    def copy(self) -> "CrpState":
        clone = CrpState()
        clone.table_assignment = dict(self.table_assignment)
        clone.table_sizes = dict(self.table_sizes)
        clone.next_table_id = self.next_table_id
        return clone

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CrpState)
            and self.table_assignment == other.table_assignment
            and self.table_sizes == other.table_sizes
        )


def crp_assignment_prob(state: CrpState, table: Optional[int], alpha_crp: float) -> float:
    """Seating probability of the next link: n_c / (n + alpha) or alpha / (n + alpha) for NEW"""
    if alpha_crp <= 0:
        raise ValueError(f"alpha_crp must be positive, got {alpha_crp}")
    denominator = state.total + alpha_crp
    if table is NEW_TABLE:
        return alpha_crp / denominator
    if table not in state.table_sizes:
        raise ValueError(f"Unknown table id {table}")
    return state.table_sizes[table] / denominator


def crp_log_partition_prob(table_sizes: Sequence[int], alpha_crp: float) -> float:
    """Exchangeable partition probability of a seating with the given table sizes"""
    sizes = np.asarray([s for s in table_sizes if s > 0], dtype=float)
    n = sizes.sum()
    if n == 0:
        return 0.0
    return float(
        len(sizes) * math.log(alpha_crp)
        + gammaln(sizes).sum()
        + gammaln(alpha_crp)
        - gammaln(alpha_crp + n)
    )


class AlignCounts:
    """Role counts per (table, language) for one predicate pair"""

    def __init__(self):
        self._counts: Dict[Tuple[int, str], Dict[RoleLabel, int]] = {}
        self._totals: Dict[Tuple[int, str], int] = {}

    def count(self, table: Optional[int], language: str, role: RoleLabel) -> int:
        if table is NEW_TABLE:
            return 0
        return self._counts.get((table, language), {}).get(role, 0)

    def total(self, table: Optional[int], language: str) -> int:
        if table is NEW_TABLE:
            return 0
        return self._totals.get((table, language), 0)

    def add(self, table: int, language: str, role: RoleLabel, delta: int = 1):
        key = (table, language)
        counts = self._counts.setdefault(key, {})
        new = counts.get(role, 0) + delta
        if new < 0:
            raise ContractViolation(f"Alignment count for table {table}/{language}/{role} would become negative")
        if new == 0:
            counts.pop(role, None)
        else:
            counts[role] = new
        total = self._totals.get(key, 0) + delta
        if total == 0:
            self._totals.pop(key, None)
            self._counts.pop(key, None)
        else:
            self._totals[key] = total

    def predictive(self, table: Optional[int], language: str, role: RoleLabel,
                   alpha_align: float, num_roles: int) -> float:
        return (self.count(table, language, role) + alpha_align) / (
            self.total(table, language) + alpha_align * num_roles
        )

    def log_evidence(self, alpha_align: float, num_roles: int) -> float:
        log_prob = 0.0
        for key, counts in self._counts.items():
            values = np.array(list(counts.values()), dtype=float)
            log_prob += float(
                gammaln(alpha_align * num_roles) - gammaln(alpha_align * num_roles + values.sum())
                + (gammaln(alpha_align + values) - gammaln(alpha_align)).sum()
            )
        return log_prob

    def items(self):
        return sorted(self._counts.items(), key=lambda kv: (kv[0][0], kv[0][1]))

    def copy(self) -> "AlignCounts":
        clone = AlignCounts()
        clone._counts = {key: dict(counts) for key, counts in self._counts.items()}
        clone._totals = dict(self._totals)
        return clone

    def __eq__(self, other) -> bool:
        return isinstance(other, AlignCounts) and self._counts == other._counts


def pair_key_of(pair: AlignedFramePair) -> PairKey:
    return (
        predicate_key(pair.frame_a.language, pair.frame_a.predicate),
        predicate_key(pair.frame_b.language, pair.frame_b.predicate),
    )


class CrosslingualState:
    """CRP seating plus alignment counts for every predicate pair"""

    def __init__(self, inventory: RoleInventory, hyperparams: Optional[Hyperparams] = None):
        self.inventory = inventory
        self.hyperparams = hyperparams or Hyperparams()
        self.crp: Dict[PairKey, CrpState] = {}
        self.align: Dict[PairKey, AlignCounts] = {}

    def restaurant(self, pair_key: PairKey) -> Tuple[CrpState, AlignCounts]:
        if pair_key not in self.crp:
            self.crp[pair_key] = CrpState()
            self.align[pair_key] = AlignCounts()
        return self.crp[pair_key], self.align[pair_key]

    def seat(self, pair_key: PairKey, link: LinkId, table: Optional[int],
             roles: Mapping[str, RoleLabel]) -> int:
        crp, align = self.restaurant(pair_key)
        table = crp.seat(link, table)
        for language, role in roles.items():
            align.add(table, language, role, 1)
        return table

    def unseat(self, pair_key: PairKey, link: LinkId, roles: Mapping[str, RoleLabel]) -> int:
        crp, align = self.restaurant(pair_key)
        table = crp.table_of(link)
        for language, role in roles.items():
            align.add(table, language, role, -1)
        crp.unseat(link)
        return table

    def table_of(self, pair_key: PairKey, link: LinkId) -> int:
        return self.restaurant(pair_key)[0].table_of(link)

    def remove_role(self, pair_key: PairKey, link: LinkId, language: str, role: RoleLabel):
        self.align[pair_key].add(self.table_of(pair_key, link), language, role, -1)

    def add_role(self, pair_key: PairKey, link: LinkId, language: str, role: RoleLabel):
        self.align[pair_key].add(self.table_of(pair_key, link), language, role, 1)

    def role_log_weight(self, pair_key: PairKey, link: LinkId, language: str, role: RoleLabel) -> float:
        """log P(role | link's table) with the link's own role count removed"""
        table = self.table_of(pair_key, link)
        return math.log(self.align[pair_key].predictive(
            table, language, role, self.hyperparams.alpha_align, self.inventory.num_roles
        ))

    def table_log_weights(self, pair_key: PairKey,
                          roles: Mapping[str, RoleLabel]) -> Tuple[List[Optional[int]], np.ndarray]:
        """Candidate tables (existing then NEW) for an unseated link and their log weights"""
        crp, align = self.restaurant(pair_key)
        hp = self.hyperparams
        candidates: List[Optional[int]] = crp.tables() + [NEW_TABLE]
        weights = []
        for table in candidates:
            size = hp.alpha_crp if table is NEW_TABLE else crp.table_sizes[table]
            log_weight = math.log(size)
            for language, role in roles.items():
                log_weight += math.log(align.predictive(
                    table, language, role, hp.alpha_align, self.inventory.num_roles
                ))
            weights.append(log_weight)
        return candidates, np.array(weights)

    def num_tables(self) -> int:
        return sum(len(crp.table_sizes) for crp in self.crp.values())

    def num_links(self) -> int:
        return sum(crp.total for crp in self.crp.values())

    def log_partition_prob(self) -> float:
        return sum(
            crp_log_partition_prob(list(crp.table_sizes.values()), self.hyperparams.alpha_crp)
            for crp in self.crp.values()
        )

    def log_evidence(self) -> float:
        """CRP partition probabilities plus the alignment role draws"""
        hp = self.hyperparams
        return self.log_partition_prob() + sum(
            align.log_evidence(hp.alpha_align, self.inventory.num_roles) for align in self.align.values()
        )

    def check(self):
        for pair_key, crp in self.crp.items():
            crp.check()
            align = self.align[pair_key]
            for (table, _), counts in align.items():
                if table not in crp.table_sizes:
                    raise ContractViolation(f"Counts kept for removed table {table} of {pair_key}")
                if any(c < 0 for c in counts.values()):
                    raise ContractViolation(f"Negative alignment count in {pair_key}")

    def copy(self) -> "CrosslingualState":
        clone = CrosslingualState(self.inventory, self.hyperparams)
        clone.crp = {k: v.copy() for k, v in self.crp.items()}
        clone.align = {k: v.copy() for k, v in self.align.items()}
        return clone

    def to_dict(self) -> Dict:
        restaurants = []
        for pair_key in sorted(self.crp):
            crp = self.crp[pair_key]
            restaurants.append({
                "pair": list(pair_key),
                "tables": {str(t): crp.table_sizes[t] for t in crp.tables()},
                "assignments": sorted(
                    [list(link) + [table] for link, table in crp.table_assignment.items()]
                ),
                "align": [
                    {"table": table, "language": language,
                     "counts": {str(role): c for role, c in sorted(counts.items(), key=lambda kv: str(kv[0]))}}
                    for (table, language), counts in self.align[pair_key].items()
                ],
            })
        return {"restaurants": restaurants}

    @classmethod
    def from_dict(cls, data: Dict, inventory: RoleInventory, hyperparams: Hyperparams) -> "CrosslingualState":
        state = cls(inventory, hyperparams)
        for entry in data.get("restaurants", []):
            pair_key = tuple(entry["pair"])
            crp, align = state.restaurant(pair_key)
            for pair_index, link_index, table in entry["assignments"]:
                crp.seat((pair_index, link_index), table)
            for record in entry["align"]:
                for role, count in record["counts"].items():
                    align.add(record["table"], record["language"], RoleLabel.parse(role), count)
        return state


def coupled_log_joint(pair: AlignedFramePair, assignment_a: FrameAssignment, assignment_b: FrameAssignment,
                      clv: Mapping[int, int], tables: CountTables, state: CrosslingualState,
                      hp: Optional[Hyperparams] = None, pair_index: int = 0, included: bool = False) -> float:
    """
    Deficient coupled joint of an aligned pair: both monolingual joints, the
    CRP seating of the pair's links and each aligned role drawn again from
    its link's table. `clv` maps link index to table id; ids absent from the
    state open new tables. Links are seated one after another, so on a fresh
    state P(z) is the exchangeable partition probability.
    """
    hp = hp or state.hyperparams
    missing = [i for i in range(len(pair.links)) if i not in clv]
    if missing:
        raise ContractViolation(f"Links {missing} of pair {pair_index} have no CLV assignment")

    # both frames scored in sequence against the counts of everything else
    scratch = tables.copy()
    if included:
        scratch.remove_assignment(assignment_a)
        scratch.remove_assignment(assignment_b)
    log_joint = frame_log_joint(assignment_a, scratch, hp)
    scratch.add_assignment(assignment_a)
    log_joint += frame_log_joint(assignment_b, scratch, hp)
    if not pair.links:
        return log_joint

    pair_key = pair_key_of(pair)
    language_a, language_b = pair.frame_a.language, pair.frame_b.language
    crp, align = state.restaurant(pair_key)
    crp, align = crp.copy(), align.copy()

    def roles_of(link_index: int) -> Dict[str, RoleLabel]:
        i, j = pair.links[link_index]
        return {language_a: assignment_a.roles[i], language_b: assignment_b.roles[j]}

    if included:
        for link_index in range(len(pair.links)):
            link = (pair_index, link_index)
            table = crp.table_of(link)
            for language, role in roles_of(link_index).items():
                align.add(table, language, role, -1)
            crp.unseat(link)

    num_roles = state.inventory.num_roles
    for link_index in range(len(pair.links)):
        table = clv[link_index]
        existing = table in crp.table_sizes
        log_joint += math.log(crp_assignment_prob(crp, table if existing else NEW_TABLE, hp.alpha_crp))
        for language, role in roles_of(link_index).items():
            log_joint += math.log(align.predictive(
                table if existing else NEW_TABLE, language, role, hp.alpha_align, num_roles
            ))
        seated = crp.seat(("scratch", pair_index, link_index), table)
        for language, role in roles_of(link_index).items():
            align.add(seated, language, role, 1)
    return log_joint
