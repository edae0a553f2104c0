"""
Corpus ingestion: CoNLL-2009 sentences, Pharaoh word alignments,
per-predicate frames, aligned frame pairs and corpus serialization
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from errors import (
    AlignmentDesyncError,
    AlignmentFormatError,
    ConllFormatError,
    ConllStructureError,
    DataError,
)
from roles import NUM_FEATURES

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
EMPTY_FEATURE = "_"

Link = Tuple[int, int]


class Voice(str, Enum):
    ACTIVE = "active"
    PASSIVE = "passive"


@dataclass(frozen=True)
class ColumnProfile:
    """Column indices of a CoNLL-2009 style file"""
    name: str
    id: int = 0
    form: int = 1
    lemma: int = 2
    pos: int = 4
    head: int = 8
    deprel: int = 10
    fillpred: int = 12
    pred: int = 13
    first_apred: int = 14
    voice_column: bool = False  # extended layout: one VOICE column after the APREDs

    @property
    def min_columns(self) -> int:
        return self.first_apred


CONLL2009 = ColumnProfile("conll2009")
CONLL2009_PREDICTED = ColumnProfile("predicted", lemma=3, pos=5, head=9, deprel=11)
CONLL2009_VOICE = ColumnProfile("conll2009-voice", voice_column=True)

COLUMN_PROFILES = {
    profile.name: profile for profile in (CONLL2009, CONLL2009_PREDICTED, CONLL2009_VOICE)
}


def get_column_profile(name: str) -> ColumnProfile:
    try:
        return COLUMN_PROFILES[name]
    except KeyError:
        raise DataError(
            f"Unknown column profile {name!r}; known: {', '.join(sorted(COLUMN_PROFILES))}"
        ) from None


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    pos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class PredicateInstance:
    position: int
    lemma: str
    sense: str
    arguments: Tuple[Tuple[int, str], ...]  # (head position, APRED label)
    voice: Optional[Voice] = None


@dataclass(frozen=True)
class Sentence:
    sentence_id: int
    tokens: Tuple[Token, ...]
    predicates: Tuple[PredicateInstance, ...]

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def children(self, index: int) -> List[Token]:
        return [token for token in self.tokens if token.head == index]

    def predicate_at(self, position: int) -> Optional[PredicateInstance]:
        for instance in self.predicates:
            if instance.position == position:
                return instance
        return None


@dataclass(frozen=True)
class ArgumentMention:
    head_token: int
    features: Tuple[str, ...]
    gold_role: Optional[str] = None

    def __post_init__(self):
        if len(self.features) != NUM_FEATURES:
            raise DataError(
                f"Argument at {self.head_token} has {len(self.features)} features, expected {NUM_FEATURES}"
            )
        if any(not value for value in self.features):
            raise DataError(f"Argument at {self.head_token} has an empty feature value")


@dataclass(frozen=True)
class Frame:
    frame_id: str
    language: str
    sentence_id: int
    predicate: str
    voice: Voice
    predicate_position: int
    arguments: Tuple[ArgumentMention, ...]

    def __post_init__(self):
        heads = [argument.head_token for argument in self.arguments]
        if any(b <= a for a, b in zip(heads, heads[1:])):
            raise DataError(f"Frame {self.frame_id}: argument heads not strictly increasing: {heads}")
        if self.predicate_position in heads:
            raise DataError(f"Frame {self.frame_id}: predicate position is also an argument head")

    @property
    def gold_labels(self) -> Tuple[Optional[str], ...]:
        return tuple(argument.gold_role for argument in self.arguments)

    def __len__(self) -> int:
        return len(self.arguments)


@dataclass(frozen=True)
class AlignedFramePair:
    frame_a: Frame
    frame_b: Frame
    links: Tuple[Link, ...]

    def __post_init__(self):
        left = [i for i, _ in self.links]
        right = [j for _, j in self.links]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise DataError(
                f"Pair {self.frame_a.frame_id}/{self.frame_b.frame_id}: links are not one-to-one"
            )
        for i, j in self.links:
            if not (0 <= i < len(self.frame_a.arguments) and 0 <= j < len(self.frame_b.arguments)):
                raise DataError(
                    f"Pair {self.frame_a.frame_id}/{self.frame_b.frame_id}: link ({i}, {j}) out of range"
                )

    @property
    def pair_key(self) -> Tuple[str, str]:
        return self.frame_a.predicate, self.frame_b.predicate


@dataclass(frozen=True)
class Corpus:
    languages: Tuple[str, ...]
    monolingual_frames: Mapping[str, Tuple[Frame, ...]] = field(default_factory=dict)
    parallel_pairs: Tuple[AlignedFramePair, ...] = ()

    def __post_init__(self):
        seen: Set[str] = set()
        for frame in self.frames():
            if frame.frame_id in seen:
                raise DataError(f"Frame {frame.frame_id} appears more than once in the corpus")
            seen.add(frame.frame_id)
            if frame.language not in self.languages:
                raise DataError(f"Frame {frame.frame_id} has undeclared language {frame.language}")

    def frames(self, language: Optional[str] = None) -> List[Frame]:
        """Every frame once: monolingual frames first, then both sides of the pairs"""
        result = []
        for lang in self.languages:
            if language is None or lang == language:
                result.extend(self.monolingual_frames.get(lang, ()))
        for pair in self.parallel_pairs:
            for frame in (pair.frame_a, pair.frame_b):
                if language is None or frame.language == language:
                    result.append(frame)
        return result

    def is_empty(self) -> bool:
        return not self.frames()


def read_conll(path: str, columns: ColumnProfile = CONLL2009,
               auxiliaries: Optional[Iterable[str]] = None) -> List[Sentence]:
    """Read a CoNLL-2009 file; predicates with an auxiliary lemma are skipped"""
    excluded = set(auxiliaries or ())
    sentences: List[Sentence] = []
    rows: List[Tuple[int, List[str]]] = []
    skipped = 0

    def flush():
        nonlocal rows, skipped
        if rows:
            sentence, dropped = _build_sentence(path, len(sentences), rows, columns, excluded)
            sentences.append(sentence)
            skipped += dropped
            rows = []

    with open(path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                flush()
                continue
            fields = line.split("\t")
            if len(fields) < columns.min_columns:
                raise ConllFormatError(
                    f"expected at least {columns.min_columns} tab-separated columns, found {len(fields)}",
                    path, line_no,
                )
            rows.append((line_no, fields))
    flush()

    logger.info(
        f"Read {len(sentences)} sentences from {path} "
        f"({sum(len(s.predicates) for s in sentences)} predicates, {skipped} auxiliaries skipped)"
    )
    return sentences


def _parse_int(value: str, what: str, path: str, line_no: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConllFormatError(f"{what} is not an integer: {value!r}", path, line_no) from None


def _build_sentence(path: str, sentence_id: int, rows: List[Tuple[int, List[str]]],
                    columns: ColumnProfile, excluded: Set[str]) -> Tuple[Sentence, int]:
    num_predicates = sum(1 for _, fields in rows if fields[columns.fillpred] == "Y")
    expected = columns.first_apred + num_predicates + (1 if columns.voice_column else 0)
    length = len(rows)

    tokens = []
    for position, (line_no, fields) in enumerate(rows, 1):
        if len(fields) != expected:
            raise ConllFormatError(
                f"expected {expected} columns for a sentence with {num_predicates} predicates, "
                f"found {len(fields)}", path, line_no,
            )
        index = _parse_int(fields[columns.id], "ID", path, line_no)
        if index != position:
            raise ConllFormatError(f"token ID {index} out of sequence (expected {position})", path, line_no)
        head = _parse_int(fields[columns.head], "HEAD", path, line_no)
        if head < 0 or head > length:
            raise ConllStructureError(
                f"head {head} points outside the sentence (length {length})", path, line_no
            )
        tokens.append(Token(
            index=index,
            form=fields[columns.form],
            lemma=fields[columns.lemma],
            pos=fields[columns.pos],
            head=head,
            deprel=fields[columns.deprel],
        ))

    predicates = []
    dropped = 0
    apred = columns.first_apred
    for line_no, fields in rows:
        if fields[columns.fillpred] != "Y":
            continue
        position = int(fields[columns.id])
        token = tokens[position - 1]
        column = apred
        apred += 1
        if token.lemma in excluded:
            dropped += 1
            continue
        arguments = tuple(
            (arg_position, arg_fields[column])
            for arg_position, (_, arg_fields) in enumerate(rows, 1)
            if arg_fields[column] != "_"
        )
        voice = None
        if columns.voice_column:
            raw = fields[-1].strip().lower()
            if raw in (Voice.ACTIVE.value, Voice.PASSIVE.value):
                voice = Voice(raw)
            elif raw not in ("_", ""):
                raise ConllFormatError(f"unknown voice value {fields[-1]!r}", path, line_no)
        predicates.append(PredicateInstance(
            position=position,
            lemma=token.lemma,
            sense=fields[columns.pred],
            arguments=arguments,
            voice=voice,
        ))

    return Sentence(sentence_id, tuple(tokens), tuple(predicates)), dropped


def _parse_link(text: str, path: str, line_no: int) -> Link:
    parts = text.split("-")
    if len(parts) != 2 or not parts[0].isdigit() or not parts[1].isdigit():
        raise AlignmentFormatError(f"{path}:{line_no}: malformed alignment link {text!r}")
    return int(parts[0]), int(parts[1])


def filter_one_to_one(links: Iterable[Link]) -> FrozenSet[Link]:
    """Keep the lexicographically first link for every conflicting index"""
    used_left: Set[int] = set()
    used_right: Set[int] = set()
    kept = set()
    for i, j in sorted(set(links)):
        if i in used_left or j in used_right:
            continue
        used_left.add(i)
        used_right.add(j)
        kept.add((i, j))
    return frozenset(kept)


def read_alignments(path: str, one_to_one: bool = True,
                    expected_pairs: Optional[int] = None) -> List[FrozenSet[Link]]:
    """Read a Pharaoh file: one line per sentence pair, 0-based "i-j" links"""
    with open(path, 'r', encoding='utf-8') as f:
        lines = f.read().splitlines()

    alignments = []
    for line_no, line in enumerate(lines, 1):
        links = {_parse_link(part, path, line_no) for part in line.split()}
        alignments.append(filter_one_to_one(links) if one_to_one else frozenset(links))

    if expected_pairs is not None and len(alignments) != expected_pairs:
        raise AlignmentDesyncError(
            f"{path}: {len(alignments)} alignment lines for {expected_pairs} sentence pairs"
        )
    logger.info(f"Read {len(alignments)} alignment lines from {path}")
    return alignments


def intersect_alignments(forward: Sequence[FrozenSet[Link]],
                         backward: Sequence[FrozenSet[Link]]) -> List[FrozenSet[Link]]:
    """Links present in both directions; backward links are target-source"""
    if len(forward) != len(backward):
        raise AlignmentDesyncError(
            f"Directional alignments disagree in length: {len(forward)} vs {len(backward)}"
        )
    return [
        frozenset(link for link in fwd if (link[1], link[0]) in bwd)
        for fwd, bwd in zip(forward, backward)
    ]


def read_argument_file(path: str) -> Dict[Tuple[int, int], Tuple[int, ...]]:
    """Sidecar argument lists: (sentence id, predicate position) -> head positions"""
    from schemas import validate_document
    data = read_json(path)
    _check_format(data, "arguments", path)
    validate_document(data, "arguments", path)
    result = {}
    for entry in data.get("entries", []):
        try:
            key = (int(entry["sentence_id"]), int(entry["predicate_position"]))
            heads = tuple(sorted({int(h) for h in entry["arguments"]}))
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"{path}: malformed argument entry {entry!r}: {e}") from None
        result[key] = heads
    return result


def infer_voice(sentence: Sentence, predicate_position: int,
                passive_auxiliaries: Iterable[str] = ("be", "get"),
                participle_tags: Iterable[str] = ("VBN",)) -> Voice:
    """Passive iff a participle attached to an auxiliary; an explicit voice column wins"""
    instance = sentence.predicate_at(predicate_position)
    if instance is not None and instance.voice is not None:
        return instance.voice

    auxiliaries = set(passive_auxiliaries)
    token = sentence.token(predicate_position)
    if token.pos not in set(participle_tags):
        return Voice.ACTIVE
    if token.head > 0 and sentence.token(token.head).lemma in auxiliaries:
        return Voice.PASSIVE
    if any(child.lemma in auxiliaries for child in sentence.children(predicate_position)):
        return Voice.PASSIVE
    return Voice.ACTIVE


def _argument_features(token: Token) -> Tuple[str, str, str]:
    return (
        token.deprel or EMPTY_FEATURE,
        token.form or EMPTY_FEATURE,
        token.pos or EMPTY_FEATURE,
    )


def _frames_for_sentence(sentence: Sentence, language: str,
                         argument_lists: Optional[Mapping[Tuple[int, int], Sequence[int]]],
                         max_arguments: int,
                         passive_auxiliaries: Iterable[str],
                         participle_tags: Iterable[str]) -> List[Frame]:
    frames = []
    for instance in sentence.predicates:
        gold = dict(instance.arguments)
        key = (sentence.sentence_id, instance.position)
        if argument_lists is not None and key in argument_lists:
            heads = argument_lists[key]
        else:
            heads = [position for position, _ in instance.arguments]
        heads = sorted({h for h in heads if h != instance.position and 1 <= h <= len(sentence.tokens)})

        frame_id = f"{language}:{sentence.sentence_id}:{instance.position}"
        if len(heads) > max_arguments:
            logger.warning(
                f"Frame {frame_id} has {len(heads)} arguments, truncating to {max_arguments}"
            )
            heads = heads[:max_arguments]

        arguments = tuple(
            ArgumentMention(h, _argument_features(sentence.token(h)), gold.get(h))
            for h in heads
        )
        frames.append(Frame(
            frame_id=frame_id,
            language=language,
            sentence_id=sentence.sentence_id,
            predicate=instance.lemma,
            voice=infer_voice(sentence, instance.position, passive_auxiliaries, participle_tags),
            predicate_position=instance.position,
            arguments=arguments,
        ))
    return frames


def _argument_links(frame_a: Frame, frame_b: Frame, token_links: FrozenSet[Link]) -> Tuple[Link, ...]:
    links = [
        (i, j)
        for i, arg_a in enumerate(frame_a.arguments)
        for j, arg_b in enumerate(frame_b.arguments)
        if (arg_a.head_token - 1, arg_b.head_token - 1) in token_links
    ]
    return tuple(sorted(filter_one_to_one(links)))


def _pair_sentence(frames_a: List[Frame], frames_b: List[Frame],
                   token_links: FrozenSet[Link]) -> Tuple[List[AlignedFramePair], List[Frame]]:
    """
    One-to-one frame matching; unmatched frames stay monolingual.

    Every predicate pair sharing at least one argument link is a candidate.
    Candidates are taken greedily: pairs whose predicates are aligned first,
    then by number of shared links, then by predicate positions. A frame
    joins at most one pair, so each frame is generated exactly once (either
    inside its pair or monolingually) and a predicate aligned to two
    predicates on the other side keeps only the best match.
    """
    candidates = []
    for frame_a in frames_a:
        for frame_b in frames_b:
            links = _argument_links(frame_a, frame_b, token_links)
            if not links:
                continue
            predicate_aligned = (frame_a.predicate_position - 1, frame_b.predicate_position - 1) in token_links
            candidates.append((
                not predicate_aligned, -len(links),
                frame_a.predicate_position, frame_b.predicate_position,
                frame_a, frame_b, links,
            ))
    candidates.sort(key=lambda c: c[:4])

    pairs = []
    used = set()
    for *_, frame_a, frame_b, links in candidates:
        if frame_a.frame_id in used or frame_b.frame_id in used:
            continue
        used.update((frame_a.frame_id, frame_b.frame_id))
        pairs.append(AlignedFramePair(frame_a, frame_b, links))

    leftovers = [f for f in frames_a + frames_b if f.frame_id not in used]
    return pairs, leftovers


def extract_frames(sentences: Mapping[str, Sequence[Sentence]],
                   alignments: Optional[Sequence[FrozenSet[Link]]] = None,
                   argument_lists: Optional[Mapping[str, Mapping[Tuple[int, int], Sequence[int]]]] = None,
                   max_arguments: int = 25,
                   passive_auxiliaries: Optional[Mapping[str, Iterable[str]]] = None,
                   participle_tags: Optional[Mapping[str, Iterable[str]]] = None) -> Corpus:
    """Build frames per predicate instance and pair frames across aligned sentences"""
    languages = tuple(sentences)
    argument_lists = argument_lists or {}
    passive_auxiliaries = passive_auxiliaries or {}
    participle_tags = participle_tags or {}

    per_language: Dict[str, List[List[Frame]]] = {}
    for language in languages:
        per_language[language] = [
            _frames_for_sentence(
                sentence, language, argument_lists.get(language), max_arguments,
                passive_auxiliaries.get(language, ("be", "get")),
                participle_tags.get(language, ("VBN",)),
            )
            for sentence in sentences[language]
        ]

    if alignments is None:
        monolingual = {
            language: tuple(f for frames in per_language[language] for f in frames)
            for language in languages
        }
        return Corpus(languages, monolingual, ())

    if len(languages) != 2:
        raise DataError(f"Aligned extraction needs exactly two languages, got {len(languages)}")
    lang_a, lang_b = languages
    if not (len(per_language[lang_a]) == len(per_language[lang_b]) == len(alignments)):
        raise AlignmentDesyncError(
            f"{len(alignments)} alignment lines for {len(per_language[lang_a])} {lang_a} "
            f"and {len(per_language[lang_b])} {lang_b} sentences"
        )

    monolingual = {lang_a: [], lang_b: []}
    pairs = []
    for frames_a, frames_b, token_links in zip(per_language[lang_a], per_language[lang_b], alignments):
        sentence_pairs, leftovers = _pair_sentence(frames_a, frames_b, token_links)
        pairs.extend(sentence_pairs)
        for frame in leftovers:
            monolingual[frame.language].append(frame)

    logger.info(f"Extracted {len(pairs)} aligned frame pairs")
    return Corpus(
        languages,
        {language: tuple(frames) for language, frames in monolingual.items()},
        tuple(pairs),
    )


def merge_corpora(*corpora: Corpus) -> Corpus:
    """Concatenate corpora; languages keep first-seen order"""
    languages: List[str] = []
    monolingual: Dict[str, List[Frame]] = {}
    pairs: List[AlignedFramePair] = []
    for corpus in corpora:
        for language in corpus.languages:
            if language not in languages:
                languages.append(language)
            monolingual.setdefault(language, []).extend(corpus.monolingual_frames.get(language, ()))
        pairs.extend(corpus.parallel_pairs)
    return Corpus(
        tuple(languages),
        {language: tuple(frames) for language, frames in monolingual.items()},
        tuple(pairs),
    )


@dataclass
class CorpusStatistics:
    languages: Tuple[str, ...]
    frames: Dict[str, int]
    arguments: Dict[str, int]
    aligned_arguments: Dict[str, int]
    predicates: Dict[str, int]
    parallel_pairs: int
    links: int

    def coverage(self, language: str) -> float:
        """Percentage of a language's arguments that carry an alignment link"""
        total = self.arguments.get(language, 0)
        return 100.0 * self.aligned_arguments.get(language, 0) / total if total else 0.0

    @property
    def overall_coverage(self) -> float:
        total = sum(self.arguments.values())
        return 100.0 * sum(self.aligned_arguments.values()) / total if total else 0.0

    def to_dict(self) -> Dict:
        return {
            "languages": list(self.languages),
            "frames": dict(self.frames),
            "arguments": dict(self.arguments),
            "aligned_arguments": dict(self.aligned_arguments),
            "predicates": dict(self.predicates),
            "parallel_pairs": self.parallel_pairs,
            "links": self.links,
            "coverage_percent": {lang: round(self.coverage(lang), 4) for lang in self.languages},
        }


def corpus_statistics(corpus: Corpus) -> CorpusStatistics:
    frames = {}
    arguments = {}
    predicates = {}
    aligned = {language: 0 for language in corpus.languages}
    for language in corpus.languages:
        language_frames = corpus.frames(language)
        frames[language] = len(language_frames)
        arguments[language] = sum(len(f.arguments) for f in language_frames)
        predicates[language] = len({f.predicate for f in language_frames})
    links = 0
    for pair in corpus.parallel_pairs:
        links += len(pair.links)
        aligned[pair.frame_a.language] += len(pair.links)
        aligned[pair.frame_b.language] += len(pair.links)
    return CorpusStatistics(
        corpus.languages, frames, arguments, aligned, predicates,
        len(corpus.parallel_pairs), links,
    )


def frame_to_dict(frame: Frame) -> Dict:
    return {
        "id": frame.frame_id,
        "language": frame.language,
        "sentence_id": frame.sentence_id,
        "predicate": frame.predicate,
        "voice": frame.voice.value,
        "predicate_position": frame.predicate_position,
        "arguments": [
            {
                "head_token": argument.head_token,
                "features": list(argument.features),
                "gold_role": argument.gold_role,
            }
            for argument in frame.arguments
        ],
    }


def frame_from_dict(data: Dict) -> Frame:
    try:
        return Frame(
            frame_id=data["id"],
            language=data["language"],
            sentence_id=int(data["sentence_id"]),
            predicate=data["predicate"],
            voice=Voice(data["voice"]),
            predicate_position=int(data["predicate_position"]),
            arguments=tuple(
                ArgumentMention(int(a["head_token"]), tuple(a["features"]), a.get("gold_role"))
                for a in data["arguments"]
            ),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DataError):
            raise
        raise DataError(f"Malformed frame record: {e}") from None


def corpus_to_dict(corpus: Corpus) -> Dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "corpus",
        "languages": list(corpus.languages),
        "monolingual_frames": {
            language: [frame_to_dict(f) for f in corpus.monolingual_frames.get(language, ())]
            for language in corpus.languages
        },
        "parallel_pairs": [
            {
                "frame_a": frame_to_dict(pair.frame_a),
                "frame_b": frame_to_dict(pair.frame_b),
                "links": [list(link) for link in pair.links],
            }
            for pair in corpus.parallel_pairs
        ],
    }


def corpus_from_dict(data: Dict, source: str = "<corpus>") -> Corpus:
    _check_format(data, "corpus", source)
    languages = tuple(data["languages"])
    monolingual = {
        language: tuple(frame_from_dict(f) for f in data.get("monolingual_frames", {}).get(language, []))
        for language in languages
    }
    pairs = tuple(
        AlignedFramePair(
            frame_from_dict(p["frame_a"]),
            frame_from_dict(p["frame_b"]),
            tuple((int(i), int(j)) for i, j in p["links"]),
        )
        for p in data.get("parallel_pairs", [])
    )
    return Corpus(languages, monolingual, pairs)


def save_corpus(corpus: Corpus, path: str):
    write_json(path, corpus_to_dict(corpus))
    logger.info(f"Corpus saved to {path}")


def load_corpus(path: str) -> Corpus:
    from schemas import validate_document
    data = read_json(path)
    _check_format(data, "corpus", path)
    validate_document(data, "corpus", path)
    return corpus_from_dict(data, path)


def corpus_digest(corpus: Corpus) -> str:
    canonical = json.dumps(corpus_to_dict(corpus), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _check_format(data: Dict, kind: str, source: str):
    if not isinstance(data, dict) or data.get("kind") != kind:
        raise DataError(f"{source}: not a {kind} file")
    if data.get("format_version") != FORMAT_VERSION:
        raise DataError(
            f"{source}: unsupported format_version {data.get('format_version')} (expected {FORMAT_VERSION})"
        )


def write_json(path: str, data) -> None:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline"""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, ensure_ascii=False, indent=1, sort_keys=True)
        f.write("\n")


def read_json(path: str):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON: {e}") from None
