"""
Collapsed Gibbs sampling over roles and crosslingual latent variables,
point-estimate extraction and decoding with frozen parameters
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from corpus import Corpus, Frame, corpus_digest, read_json, write_json
from crosslingual import (
    NEW_TABLE,
    CrosslingualState,
    LinkId,
    PairKey,
    crp_assignment_prob,
    pair_key_of,
)
from errors import ConfigError, ContractViolation, DataError
from model_core import (
    EVENT_KINDS,
    CountTables,
    FeatureVocabulary,
    FrameAssignment,
    PointEstimates,
    frame_events,
    frame_log_joint,
    sample_index,
    sample_log_weights,
)
from roles import SECONDARY_KIND, Hyperparams, RoleInventory, RoleLabel

logger = logging.getLogger(__name__)

MONO = "mono"
BILINGUAL = "bilingual"
TRANSFER = "transfer"
REGIMES = (MONO, BILINGUAL, TRANSFER)

MODEL_FORMAT_VERSION = 1

Clamp = Tuple[Optional[RoleLabel], ...]


@dataclass(frozen=True)
class SamplerConfig:
    iterations: int = 5000
    burn_in: int = 2000
    seed: int = 13
    chains: int = 1
    regime: str = MONO
    num_roles: int = 21
    num_primary: int = 2
    clamps: Mapping[str, Tuple[Optional[str], ...]] = field(default_factory=dict)
    source_language: Optional[str] = None
    decode_iterations: int = 100
    record_every: int = 1
    check_invariants: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ConfigError(f"Unknown regime {self.regime!r}; expected one of {', '.join(REGIMES)}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if not 0 <= self.burn_in < self.iterations:
            raise ConfigError(f"burn_in must satisfy 0 <= burn_in < iterations ({self.burn_in} vs {self.iterations})")
        if self.chains < 1:
            raise ConfigError(f"chains must be >= 1, got {self.chains}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a non-negative 64-bit integer, got {self.seed}")
        if self.decode_iterations < 1 or self.record_every < 1 or self.workers < 1:
            raise ConfigError("decode_iterations, record_every and workers must be >= 1")
        if self.regime == TRANSFER and not self.source_language:
            raise ConfigError("The transfer regime needs source_language")
        RoleInventory(self.num_roles, self.num_primary)

    @property
    def inventory(self) -> RoleInventory:
        return RoleInventory(self.num_roles, self.num_primary)

    @property
    def clamp_mask(self) -> Dict[str, Tuple[bool, ...]]:
        return {frame_id: tuple(label is not None for label in labels) for frame_id, labels in self.clamps.items()}

    def with_overrides(self, **values) -> "SamplerConfig":
        return replace(self, **values)

    def to_dict(self) -> Dict:
        data = asdict(self)
        data.pop("clamps")
        data["clamped_frames"] = len(self.clamps)
        return data

    @classmethod
    def from_dict(cls, data: Mapping, defaults: Optional[Mapping] = None) -> "SamplerConfig":
        aliases = {"N": "num_roles", "K": "num_primary"}
        known = {f.name for f in fields(cls)}
        values = {}
        for source in (defaults or {}, data):
            for key, value in source.items():
                key = aliases.get(key, key)
                if key not in known:
                    raise ConfigError(f"Unknown sampler setting {key!r}")
                values[key] = value
        for name in ("iterations", "burn_in", "seed", "chains", "num_roles", "num_primary",
                     "decode_iterations", "record_every", "workers"):
            if name in values:
                try:
                    values[name] = int(values[name])
                except (TypeError, ValueError):
                    raise ConfigError(f"{name} must be an integer, got {values[name]!r}") from None
        return cls(**values)


def load_run_config(path: str, settings=None) -> Tuple[SamplerConfig, Hyperparams, Optional[str]]:
    """Run config JSON over settings defaults; returns (config, hyperparams, clamp source path)"""
    if settings is None:
        from settings import get_settings
        settings = get_settings()
    try:
        data = read_json(path) if path else {}
    except DataError as e:
        raise ConfigError(str(e)) from None
    except OSError as e:
        raise ConfigError(f"Cannot read run config {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: run config must be a JSON object")

    data = dict(data)
    hyperparams = dict(settings.get_hyperparameters())
    hyperparams.update(data.pop("hyperparameters", {}) or {})
    clamp_source = data.pop("clamp_source", None)
    defaults = {k: v for k, v in settings.get_sampler_settings().items() if k != "check_invariants"}
    data.setdefault("check_invariants", settings.is_invariant_checking_enabled())
    config = SamplerConfig.from_dict(data, defaults)
    return config, Hyperparams.from_dict(hyperparams), clamp_source


def parse_clamps(corpus: Corpus, clamps: Mapping[str, Sequence[Optional[str]]],
                 inventory: RoleInventory) -> Dict[str, Clamp]:
    frames = {frame.frame_id: frame for frame in corpus.frames()}
    parsed = {}
    for frame_id, labels in clamps.items():
        frame = frames.get(frame_id)
        if frame is None:
            raise DataError(f"Clamp refers to unknown frame {frame_id}")
        if len(labels) != len(frame.arguments):
            raise DataError(f"Clamp for {frame_id} has {len(labels)} labels for {len(frame.arguments)} arguments")
        roles = []
        for label in labels:
            if label is None:
                roles.append(None)
                continue
            try:
                role = label if isinstance(label, RoleLabel) else RoleLabel.parse(label)
            except ValueError as e:
                raise DataError(f"Clamp for {frame_id}: {e}") from None
            if not inventory.contains(role):
                raise DataError(f"Clamp for {frame_id}: {role} is outside the role inventory")
            roles.append(role)
        parsed[frame_id] = tuple(roles)
    return parsed


def build_clamps(frames: Sequence[Frame], mapping: Mapping[str, RoleLabel]) -> Dict[str, Tuple[Optional[str], ...]]:
    """Clamp labels from gold roles through a role mapping; repeated primaries stay free"""
    clamps = {}
    for frame in frames:
        labels: List[Optional[str]] = []
        used = set()
        for argument in frame.arguments:
            role = mapping.get(argument.gold_role) if argument.gold_role is not None else None
            if role is not None and role.kind != SECONDARY_KIND:
                if role in used:
                    logger.warning(f"Frame {frame.frame_id}: gold maps to {role} twice, leaving the repeat unclamped")
                    role = None
                else:
                    used.add(role)
            labels.append(str(role) if role is not None else None)
        if any(label is not None for label in labels):
            clamps[frame.frame_id] = tuple(labels)
    return clamps


def transfer_clamps(corpus: Corpus, config: SamplerConfig) -> Dict[str, Tuple[Optional[str], ...]]:
    """Source-language labeled frames clamped through the default gold-to-role mapping"""
    from evaluation import default_role_mapping, gold_label_frequencies

    frames = list(corpus.monolingual_frames.get(config.source_language, ()))
    if not frames:
        raise ConfigError(f"Transfer regime: no labeled {config.source_language} frames in the corpus")
    mapping = default_role_mapping(gold_label_frequencies(frames), config.num_roles, config.num_primary)
    return build_clamps(frames, mapping.labels)


def role_candidates(assignment: FrameAssignment, position: int, inventory: RoleInventory) -> List[RoleLabel]:
    """All SRs plus the PRs not used elsewhere in the frame"""
    used = {
        role for k, role in enumerate(assignment.roles)
        if k != position and role.kind != SECONDARY_KIND
    }
    return [label for label in inventory.labels if label.kind == SECONDARY_KIND or label not in used]


def role_log_weights(assignment: FrameAssignment, position: int, candidates: Sequence[RoleLabel],
                     source, hp: Optional[Hyperparams] = None) -> np.ndarray:
    return np.array([
        frame_log_joint(assignment.with_role(position, candidate), source, hp)
        for candidate in candidates
    ])


def gibbs_step_role_mono(position: int, assignment: FrameAssignment, tables: CountTables,
                         hp: Hyperparams, rng: np.random.Generator) -> RoleLabel:
    """Draw a role for one argument; the frame's events must be out of the tables"""
    candidates = role_candidates(assignment, position, tables.inventory)
    weights = role_log_weights(assignment, position, candidates, tables, hp)
    return candidates[sample_log_weights(rng, weights)]


def gibbs_step_role_coupled(position: int, assignment: FrameAssignment, tables: CountTables,
                            crosslingual: CrosslingualState, links: Sequence[Tuple[PairKey, LinkId, str]],
                            hp: Hyperparams, rng: np.random.Generator) -> RoleLabel:
    """As the mono step, times the link tables' predictive for every link at this position"""
    candidates = role_candidates(assignment, position, tables.inventory)
    weights = role_log_weights(assignment, position, candidates, tables, hp)
    for pair_key, link, language in links:
        weights = weights + np.array([
            crosslingual.role_log_weight(pair_key, link, language, candidate) for candidate in candidates
        ])
    return candidates[sample_log_weights(rng, weights)]


def gibbs_step_clv(pair_key: PairKey, roles: Mapping[str, RoleLabel], crosslingual: CrosslingualState,
                   rng: np.random.Generator) -> Optional[int]:
    """Table for an unseated link (NEW_TABLE for a fresh one)"""
    candidates, weights = crosslingual.table_log_weights(pair_key, roles)
    return candidates[sample_log_weights(rng, weights)]


def initial_roles(frame: Frame, inventory: RoleInventory, rng: np.random.Generator,
                  clamp: Optional[Clamp] = None) -> FrameAssignment:
    """Left to right, uniform over unused PRs and all SRs; clamped positions keep their label"""
    clamp = clamp or (None,) * len(frame.arguments)
    reserved = [role for role in clamp if role is not None and role.kind != SECONDARY_KIND]
    if len(set(reserved)) != len(reserved):
        raise DataError(f"Frame {frame.frame_id}: clamped labels repeat a primary role")
    used = set(reserved)
    roles = []
    for label in clamp:
        if label is not None:
            roles.append(label)
            continue
        choices = [l for l in inventory.labels if l.kind == SECONDARY_KIND or l not in used]
        role = choices[int(rng.integers(len(choices)))]
        if role.kind != SECONDARY_KIND:
            used.add(role)
        roles.append(role)
    return FrameAssignment(frame, tuple(roles))


class GibbsState:
    """Mutable sampler state of one chain"""

    def __init__(self, corpus: Corpus, config: SamplerConfig, hp: Hyperparams,
                 vocabulary: FeatureVocabulary, clamps: Optional[Mapping[str, Clamp]] = None):
        self.config = config
        self.hp = hp
        self.inventory = config.inventory
        self.tables = CountTables(self.inventory, vocabulary, hp)
        self.frames = corpus.frames()
        self.clamps = dict(clamps or {})
        self.assignments: Dict[str, FrameAssignment] = {}
        self.coupled = config.regime in (BILINGUAL, TRANSFER)
        self.pairs = list(corpus.parallel_pairs) if self.coupled else []
        self.crosslingual = CrosslingualState(self.inventory, hp) if self.coupled else None
        self.links_at: Dict[Tuple[str, int], List[Tuple[PairKey, LinkId, str]]] = {}
        for pair_index, pair in enumerate(self.pairs):
            pair_key = pair_key_of(pair)
            for link_index, (i, j) in enumerate(pair.links):
                link = (pair_index, link_index)
                self.links_at.setdefault((pair.frame_a.frame_id, i), []).append(
                    (pair_key, link, pair.frame_a.language))
                self.links_at.setdefault((pair.frame_b.frame_id, j), []).append(
                    (pair_key, link, pair.frame_b.language))

    def initialize(self, rng: np.random.Generator):
        for frame in self.frames:
            assignment = initial_roles(frame, self.inventory, rng, self.clamps.get(frame.frame_id))
            self.assignments[frame.frame_id] = assignment
            self.tables.add_assignment(assignment)
        for pair_index, pair in enumerate(self.pairs):
            pair_key = pair_key_of(pair)
            for link_index in range(len(pair.links)):
                crp, _ = self.crosslingual.restaurant(pair_key)
                candidates = crp.tables() + [NEW_TABLE]
                weights = [crp_assignment_prob(crp, table, self.hp.alpha_crp) for table in candidates]
                table = candidates[sample_index(rng, weights)]
                self.crosslingual.seat(pair_key, (pair_index, link_index), table,
                                       self.link_roles(pair_index, link_index))

    def link_roles(self, pair_index: int, link_index: int) -> Dict[str, RoleLabel]:
        pair = self.pairs[pair_index]
        i, j = pair.links[link_index]
        return {
            pair.frame_a.language: self.assignments[pair.frame_a.frame_id].roles[i],
            pair.frame_b.language: self.assignments[pair.frame_b.frame_id].roles[j],
        }

    def free_positions(self, frame: Frame) -> List[int]:
        clamp = self.clamps.get(frame.frame_id)
        return [i for i in range(len(frame.arguments)) if clamp is None or clamp[i] is None]

    def resample_frame(self, frame: Frame, rng: np.random.Generator):
        free = self.free_positions(frame)
        if not free:
            return
        assignment = self.assignments[frame.frame_id]
        self.tables.remove_assignment(assignment)
        for position in free:
            links = self.links_at.get((frame.frame_id, position), [])
            current = assignment.roles[position]
            for pair_key, link, language in links:
                self.crosslingual.remove_role(pair_key, link, language, current)
            if links:
                role = gibbs_step_role_coupled(position, assignment, self.tables, self.crosslingual,
                                               links, self.hp, rng)
            else:
                role = gibbs_step_role_mono(position, assignment, self.tables, self.hp, rng)
            assignment = assignment.with_role(position, role)
            for pair_key, link, language in links:
                self.crosslingual.add_role(pair_key, link, language, role)
        self.assignments[frame.frame_id] = assignment
        self.tables.add_assignment(assignment)

    def resample_link(self, pair_index: int, link_index: int, rng: np.random.Generator):
        pair_key = pair_key_of(self.pairs[pair_index])
        link = (pair_index, link_index)
        roles = self.link_roles(pair_index, link_index)
        self.crosslingual.unseat(pair_key, link, roles)
        table = gibbs_step_clv(pair_key, roles, self.crosslingual, rng)
        self.crosslingual.seat(pair_key, link, table, roles)

    def sweep(self, rng: np.random.Generator):
        for frame in self.frames:
            self.resample_frame(frame, rng)
        for pair_index, pair in enumerate(self.pairs):
            for link_index in range(len(pair.links)):
                self.resample_link(pair_index, link_index, rng)

    def log_joint(self) -> float:
        log_joint = self.tables.log_evidence(self.hp)
        if self.crosslingual is not None:
            log_joint += self.crosslingual.log_evidence()
        return log_joint

    def num_tables(self) -> int:
        return self.crosslingual.num_tables() if self.crosslingual is not None else 0

    def labels(self) -> Dict[str, Tuple[str, ...]]:
        return {
            frame_id: tuple(str(role) for role in assignment.roles)
            for frame_id, assignment in sorted(self.assignments.items())
        }


def init_assignments(corpus: Corpus, config: SamplerConfig, rng: np.random.Generator,
                     hp: Optional[Hyperparams] = None, clamps: Optional[Mapping[str, Clamp]] = None,
                     vocabulary: Optional[FeatureVocabulary] = None) -> GibbsState:
    """Fresh chain state: roles drawn left to right, links seated sequentially by the CRP prior"""
    if hp is None:
        hp = Hyperparams()
    if vocabulary is None:
        vocabulary = FeatureVocabulary.from_frames(corpus.frames())
    state = GibbsState(corpus, config, hp, vocabulary, clamps)
    state.initialize(rng)
    return state


def count_conservation_check(state: GibbsState):
    """Every table total equals the number of currently assigned events of its kind"""
    state.tables.verify()
    expected = {kind: 0 for kind in EVENT_KINDS}
    for assignment in state.assignments.values():
        for kind, _, _ in frame_events(assignment, state.tables.vocabulary):
            expected[kind] += 1
    actual = state.tables.event_totals()
    if actual != expected:
        raise ContractViolation(f"Count tables drifted: {actual} vs assigned events {expected}")
    for frame_id, clamp in state.clamps.items():
        roles = state.assignments[frame_id].roles
        if any(label is not None and label != role for label, role in zip(clamp, roles)):
            raise ContractViolation(f"Clamped label altered in frame {frame_id}")
    if state.crosslingual is not None:
        state.crosslingual.check()
        links = sum(len(pair.links) for pair in state.pairs)
        if state.crosslingual.num_links() != links:
            raise ContractViolation(f"{state.crosslingual.num_links()} links seated, {links} expected")


@dataclass
class ChainResult:
    chain: int
    seed: int
    state: GibbsState
    trajectory: List[Dict]
    final_log_joint: float


def run_chain(corpus: Corpus, config: SamplerConfig, hp: Hyperparams, vocabulary: FeatureVocabulary,
              clamps: Optional[Mapping[str, Clamp]] = None, chain: int = 0,
              on_sweep: Optional[Callable[[GibbsState, int], None]] = None) -> ChainResult:
    seed = config.seed + chain
    rng = np.random.default_rng(seed)
    state = init_assignments(corpus, config, rng, hp, clamps, vocabulary)
    if config.check_invariants:
        count_conservation_check(state)

    trajectory = []
    progress_every = max(1, config.iterations // 10)
    for sweep in range(1, config.iterations + 1):
        state.sweep(rng)
        if config.check_invariants:
            count_conservation_check(state)
        if on_sweep is not None:
            on_sweep(state, sweep)
        if sweep % config.record_every == 0 or sweep == config.iterations:
            trajectory.append({
                "chain": chain,
                "sweep": sweep,
                "phase": "burn_in" if sweep <= config.burn_in else "sample",
                "log_joint": state.log_joint(),
                "num_tables": state.num_tables(),
            })
        if sweep % progress_every == 0:
            logger.info(f"Chain {chain}: sweep {sweep}/{config.iterations}")

    return ChainResult(chain, seed, state, trajectory, state.log_joint())


@dataclass
class FittedModel:
    inventory: RoleInventory
    hyperparams: Hyperparams
    vocabulary: FeatureVocabulary
    tables: CountTables
    backoff: CountTables
    crosslingual: Optional[CrosslingualState] = None
    training_labels: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    provenance: Dict = field(default_factory=dict)
    trajectory: List[Dict] = field(default_factory=list, compare=False)

    def point_estimates(self) -> PointEstimates:
        return PointEstimates(self.tables, self.backoff)

    def to_dict(self) -> Dict:
        data = {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "model",
            "inventory": self.inventory.to_dict(),
            "hyperparameters": self.hyperparams.to_dict(),
            "vocabulary": self.vocabulary.to_dict(),
            "counts": self.tables.to_dict(),
            "backoff": self.backoff.to_dict(),
            "training_labels": {k: list(v) for k, v in sorted(self.training_labels.items())},
            "provenance": self.provenance,
        }
        if self.crosslingual is not None:
            data["crosslingual"] = self.crosslingual.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict, source: str = "<model>") -> "FittedModel":
        if data.get("kind") != "model" or data.get("format_version") != MODEL_FORMAT_VERSION:
            raise DataError(f"{source}: not a version {MODEL_FORMAT_VERSION} model file")
        try:
            inventory = RoleInventory.from_dict(data["inventory"])
            hyperparams = Hyperparams.from_dict(data["hyperparameters"])
            vocabulary = FeatureVocabulary.from_dict(data["vocabulary"])
            tables = CountTables.from_dict(data["counts"], inventory, vocabulary, hyperparams)
            backoff = CountTables.from_dict(data["backoff"], inventory, vocabulary, hyperparams)
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"{source}: malformed model file: {e}") from None
        crosslingual = None
        if "crosslingual" in data:
            crosslingual = CrosslingualState.from_dict(data["crosslingual"], inventory, hyperparams)
        return cls(
            inventory, hyperparams, vocabulary, tables, backoff, crosslingual,
            {k: tuple(v) for k, v in data.get("training_labels", {}).items()},
            data.get("provenance", {}),
        )


def save_model(model: FittedModel, path: str):
    write_json(path, model.to_dict())
    logger.info(f"Model saved to {path}")


def load_model(path: str) -> FittedModel:
    from schemas import validate_document
    data = read_json(path)
    validate_document(data, "model", path)
    return FittedModel.from_dict(data, path)


def _check_regime(corpus: Corpus, config: SamplerConfig):
    if corpus.is_empty():
        raise DataError("Cannot train on an empty corpus")
    if config.regime in (BILINGUAL, TRANSFER) and not corpus.parallel_pairs:
        raise ConfigError(f"The {config.regime} regime needs aligned frame pairs; the corpus has none")
    if config.regime == TRANSFER and config.source_language not in corpus.languages:
        raise ConfigError(f"Source language {config.source_language} is not in the corpus")


def train(corpus: Corpus, config: SamplerConfig, hp: Optional[Hyperparams] = None,
          clamps: Optional[Mapping[str, Sequence[Optional[str]]]] = None) -> FittedModel:
    """Run the chains and keep point estimates from the final sample of the best chain"""
    hp = hp or Hyperparams()
    _check_regime(corpus, config)

    raw_clamps = dict(config.clamps)
    raw_clamps.update(clamps or {})
    if config.regime == TRANSFER:
        for frame_id, labels in transfer_clamps(corpus, config).items():
            raw_clamps.setdefault(frame_id, labels)
    parsed = parse_clamps(corpus, raw_clamps, config.inventory)
    clamped_positions = sum(1 for labels in parsed.values() for label in labels if label is not None)
    logger.info(f"Training {config.regime} regime: {len(corpus.frames())} frames, "
                f"{len(corpus.parallel_pairs)} pairs, {clamped_positions} clamped positions")

    vocabulary = FeatureVocabulary.from_frames(corpus.frames())

    def run(chain: int) -> ChainResult:
        return run_chain(corpus, config, hp, vocabulary, parsed, chain)

    if config.chains == 1:
        results = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=config.chains) as executor:
            results = list(executor.map(run, range(config.chains)))

    best = max(results, key=lambda r: (r.final_log_joint, -r.chain))
    logger.info(f"Selected chain {best.chain} (final log joint {best.final_log_joint:.3f})")

    tables = best.state.tables.copy()
    provenance = {
        "regime": config.regime,
        "seed": config.seed,
        "chains": config.chains,
        "selected_chain": best.chain,
        "iterations": config.iterations,
        "burn_in": config.burn_in,
        "corpus_digest": corpus_digest(corpus),
        "clamped_positions": clamped_positions,
        "config": config.to_dict(),
    }
    return FittedModel(
        inventory=config.inventory,
        hyperparams=hp,
        vocabulary=vocabulary,
        tables=tables,
        backoff=tables.pooled(),
        crosslingual=best.state.crosslingual.copy() if best.state.crosslingual is not None else None,
        training_labels=best.state.labels(),
        provenance=provenance,
        trajectory=[record for result in results for record in result.trajectory],
    )


def decode_frame(frame: Frame, params: PointEstimates, iterations: int, rng: np.random.Generator,
                 clamp: Optional[Clamp] = None) -> FrameAssignment:
    """Gibbs with frozen parameters; keeps the best-scoring assignment seen"""
    assignment = initial_roles(frame, params.inventory, rng, clamp)
    free = [i for i in range(len(frame.arguments)) if clamp is None or clamp[i] is None]
    if not free:
        return assignment
    best, best_score = assignment, frame_log_joint(assignment, params)
    for _ in range(iterations):
        for position in free:
            candidates = role_candidates(assignment, position, params.inventory)
            weights = role_log_weights(assignment, position, candidates, params)
            choice = sample_log_weights(rng, weights)
            assignment = assignment.with_role(position, candidates[choice])
            if weights[choice] > best_score:
                best, best_score = assignment, float(weights[choice])
    return best


def decode(frames: Sequence[Frame], model: FittedModel, config: SamplerConfig,
           clamps: Optional[Mapping[str, Clamp]] = None) -> Dict[str, FrameAssignment]:
    """Frame i draws from its own generator seeded by (seed, i), so threads do not change results"""
    params = model.point_estimates()
    clamps = clamps or {}
    unseen = sorted({f.predicate for f in frames if not params.is_seen(params.qualify(f.language, f.predicate))})
    if unseen:
        logger.info(f"Decoding {len(unseen)} unseen predicates with backoff parameters")

    def decode_one(item: Tuple[int, Frame]) -> Tuple[str, FrameAssignment]:
        index, frame = item
        rng = np.random.default_rng([config.seed, index])
        return frame.frame_id, decode_frame(
            frame, params, config.decode_iterations, rng, clamps.get(frame.frame_id)
        )

    if config.workers == 1:
        results = [decode_one(item) for item in enumerate(frames)]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(decode_one, enumerate(frames)))
    return dict(results)


def assignments_to_labels(assignments: Mapping[str, FrameAssignment]) -> Dict[str, Tuple[str, ...]]:
    return {
        frame_id: tuple(str(role) for role in assignment.roles)
        for frame_id, assignment in sorted(assignments.items())
    }
