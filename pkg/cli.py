import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

from database import create_tables, get_db_session
from errors import ConfigError, ContractViolation, DataError, RoleInductionError
from report_generator import ReportGenerator
from run_logger import get_run_logger, write_trajectory
from run_registry import RunRegistry
from settings import get_settings

load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _language_paths(values: Sequence[str], what: str) -> Dict[str, str]:
    """Parse LANG=PATH arguments, keeping command-line order"""
    result = {}
    for value in values or ():
        language, sep, path = value.partition("=")
        if not sep or not language or not path:
            raise ConfigError(f"Expected LANG=PATH for {what}, got {value!r}")
        if language in result:
            raise ConfigError(f"{what} given twice for language {language}")
        result[language] = path
    return result


def _require_file(path: str, what: str):
    if not os.path.isfile(path):
        raise DataError(f"{what} not found: {path}")


def _emit(text: str):
    sys.stdout.write(text)
    sys.stdout.flush()


class CommandRun:
    """Registry row, run log and manifest for one command invocation"""

    def __init__(self, db, command: str, inputs: Sequence[str], config: Optional[Dict] = None,
                 seed: Optional[int] = None):
        self.registry = RunRegistry(db)
        self.run_logger = get_run_logger()
        self.run = self.registry.start_run(command, inputs, config, seed)
        self.run_logger.log_event(self.run.run_id, "start", {"command": command, "inputs": list(inputs)})
        self.primary_output: Optional[str] = None

    def artifact(self, role: str, path: str, primary: bool = False):
        self.registry.add_artifact(self.run, role, path)
        if primary or self.primary_output is None:
            self.primary_output = path

    def finish(self, exit_code: int, message: Optional[str] = None):
        self.registry.finish_run(self.run, exit_code, message)
        event = "finish" if exit_code == 0 else "error"
        self.run_logger.log_event(self.run.run_id, event, {"exit_code": exit_code, "message": message})
        # commands without an output file keep their manifest with the run log
        base = self.primary_output or self.run_logger.run_file_stem(self.run.run_id)
        manifest = self.registry.write_manifest(self.run, base)
        logger.info(f"Manifest written to {manifest}")


_runs_started = 0


def _run_command(command: str, inputs: Sequence[str], body, config: Optional[Dict] = None,
                 seed: Optional[int] = None) -> int:
    global _runs_started
    db = get_db_session()
    try:
        run = CommandRun(db, command, inputs, config, seed)
        _runs_started += 1
        try:
            body(run)
        except RoleInductionError as e:
            run.finish(e.exit_code, str(e))
            raise
        except OSError as e:
            run.finish(DataError.exit_code, str(e))
            raise
        except Exception as e:
            run.finish(ContractViolation.exit_code, f"{type(e).__name__}: {e}")
            raise
        run.finish(0)
        return 0
    finally:
        db.close()


def _record_failed_command(command: str, exit_code: int, message: str):
    """Register a command that failed before its run started"""
    try:
        db = get_db_session()
        try:
            CommandRun(db, command, []).finish(exit_code, message)
        finally:
            db.close()
    except Exception as e:
        logger.warning(f"Could not record failed {command} run: {e}")


def cmd_ingest(args) -> int:
    """Read CoNLL files (and alignments) into a corpus file"""
    from corpus import (
        extract_frames, get_column_profile, intersect_alignments, read_alignments,
        read_argument_file, read_conll, save_corpus, corpus_statistics,
    )

    settings = get_settings()
    conll = _language_paths(args.conll, "--conll")
    if not conll:
        raise ConfigError("ingest needs at least one --conll LANG=PATH")
    argument_files = _language_paths(args.arguments, "--arguments")
    if args.bilingual and not args.alignments:
        raise ConfigError("Bilingual ingestion needs --alignments")
    if args.alignments and len(conll) != 2:
        raise ConfigError(f"Alignments need exactly two --conll languages, got {len(conll)}")
    inputs = list(conll.values()) + list(argument_files.values())
    for language, path in conll.items():
        _require_file(path, f"CoNLL file for {language}")
    for language, path in argument_files.items():
        _require_file(path, f"Argument file for {language}")
    for path in (args.alignments, args.reverse_alignments):
        if path:
            _require_file(path, "Alignment file")
            inputs.append(path)

    def body(run: CommandRun):
        profile = get_column_profile(args.columns or settings.get_column_profile())
        sentences = {
            language: read_conll(path, profile, settings.get_auxiliaries(language))
            for language, path in conll.items()
        }
        alignments = None
        if args.alignments:
            expected = len(next(iter(sentences.values())))
            one_to_one = settings.is_one_to_one_alignment_enabled()
            alignments = read_alignments(args.alignments, one_to_one, expected)
            if args.reverse_alignments:
                backward = read_alignments(args.reverse_alignments, one_to_one, expected)
                alignments = intersect_alignments(alignments, backward)
        argument_lists = {language: read_argument_file(path) for language, path in argument_files.items()}
        languages = list(conll)
        corpus = extract_frames(
            sentences, alignments, argument_lists,
            max_arguments=settings.get_max_arguments(),
            passive_auxiliaries={lang: settings.get_passive_auxiliaries(lang) for lang in languages},
            participle_tags={lang: settings.get_participle_tags(lang) for lang in languages},
        )
        save_corpus(corpus, args.output)
        run.artifact("corpus", args.output, primary=True)
        _emit(ReportGenerator().generate_corpus_report(corpus_statistics(corpus)))

    return _run_command("ingest", inputs, body, {"columns": args.columns, "bilingual": args.bilingual})


def _load_clamp_labels(path: Optional[str]) -> Dict[str, Tuple[Optional[str], ...]]:
    from evaluation import read_labels
    if not path:
        return {}
    _require_file(path, "Clamp labels file")
    return read_labels(path)


def _sampler_overrides(args) -> Dict:
    overrides = {}
    for name in ("seed", "iterations", "burn_in", "chains", "regime", "workers", "source_language"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return overrides


def _load_config(args):
    from inference import load_run_config
    if args.config:
        _require_file(args.config, "Run config")
    config, hp, clamp_source = load_run_config(args.config)
    overrides = _sampler_overrides(args)
    if overrides:
        try:
            config = config.with_overrides(**overrides)
        except TypeError as e:
            raise ConfigError(str(e)) from None
    return config, hp, clamp_source


def cmd_train(args) -> int:
    from corpus import load_corpus
    from inference import save_model, train

    _require_file(args.corpus, "Corpus file")
    config, hp, clamp_source = _load_config(args)
    clamp_path = args.clamps or clamp_source
    inputs = [args.corpus] + [p for p in (args.config, clamp_path) if p]
    trajectory_path = args.trajectory or f"{args.output}.trajectory.jsonl"

    def body(run: CommandRun):
        corpus = load_corpus(args.corpus)
        clamps = _load_clamp_labels(clamp_path)
        model = train(corpus, config, hp, clamps)
        save_model(model, args.output)
        write_trajectory(trajectory_path, model.trajectory)
        run.artifact("model", args.output, primary=True)
        run.artifact("trajectory", trajectory_path)
        run.registry.add_trajectory(run.run, model.trajectory)
        run.run_logger.log_trajectory(run.run.run_id, model.trajectory)
        run.run_logger.log_event(run.run.run_id, "clamping",
                                 {"clamped_positions": model.provenance["clamped_positions"]})
        logger.info(f"Clamped positions: {model.provenance['clamped_positions']}")
        if args.labels:
            from evaluation import write_labels
            write_labels(args.labels, model.training_labels)
            run.artifact("labels", args.labels)

    config_data = config.to_dict()
    config_data["hyperparameters"] = hp.to_dict()
    return _run_command("train", inputs, body, config_data, config.seed)


def cmd_decode(args) -> int:
    from corpus import load_corpus
    from evaluation import write_labels
    from inference import assignments_to_labels, decode, load_model, parse_clamps

    _require_file(args.corpus, "Corpus file")
    _require_file(args.model, "Model file")
    config, _, _ = _load_config(args)
    inputs = [args.corpus, args.model] + [p for p in (args.config, args.clamps) if p]

    def body(run: CommandRun):
        corpus = load_corpus(args.corpus)
        model = load_model(args.model)
        frames = corpus.frames(args.language)
        clamps = parse_clamps(corpus, _load_clamp_labels(args.clamps), model.inventory)
        labels = assignments_to_labels(decode(frames, model, config, clamps))
        write_labels(args.output, labels)
        run.artifact("labels", args.output, primary=True)
        logger.info(f"Decoded {len(labels)} frames")

    return _run_command("decode", inputs, body, config.to_dict(), config.seed)


def _labels_source(args, corpus, frames):
    """Labels from --labels, or decoded with --model"""
    from evaluation import read_labels
    from inference import assignments_to_labels, decode, load_model

    if args.labels:
        _require_file(args.labels, "Labels file")
        return read_labels(args.labels)
    model = load_model(args.model)
    config, _, _ = _load_config(args)
    return assignments_to_labels(decode(frames, model, config))


def cmd_eval(args) -> int:
    from corpus import load_corpus
    from evaluation import compare_systems, read_labels, score_labels

    if bool(args.labels) == bool(args.model):
        raise ConfigError("eval needs exactly one of --labels or --model")
    settings = get_settings()
    _require_file(args.corpus, "Corpus file")
    inputs = [args.corpus] + [p for p in (args.labels, args.model, args.compare, args.gold) if p]
    iterations = args.shuffles or settings.get_shuffle_iterations()
    excluded = settings.get_excluded_gold_labels()

    def body(run: CommandRun):
        corpus = load_corpus(args.corpus)
        frames = corpus.frames(args.language)
        if args.gold:
            frames = _with_gold(frames, read_labels(args.gold))
        labels = _labels_source(args, corpus, frames)
        report = score_labels(frames, labels, excluded)
        reporter = ReportGenerator()
        if args.compare:
            _require_file(args.compare, "Comparison labels file")
            other = read_labels(args.compare)
            other_report = score_labels(frames, other, excluded)
            report.significance.append(compare_systems(
                frames, labels, other, f"{args.name} vs {args.compare_name}", iterations,
                args.seed, settings.get_significance_level(), excluded,
            ))
            _emit(reporter.generate_f1_line(args.name, report) + "\n")
            _emit(reporter.generate_f1_line(args.compare_name, other_report) + "\n")
        _emit(reporter.generate_eval_report(report))
        if args.output:
            reporter.save_report_json(report.to_dict(), args.output)
            run.artifact("report", args.output, primary=True)

    return _run_command("eval", inputs, body, {"shuffles": iterations, "excluded": excluded}, args.seed)


def _with_gold(frames, gold_labels):
    """Replace the frames' gold roles by an external gold labels file"""
    from dataclasses import replace

    updated = []
    for frame in frames:
        labels = gold_labels.get(frame.frame_id)
        if labels is None:
            updated.append(frame)
            continue
        if len(labels) != len(frame.arguments):
            raise DataError(f"Gold labels for {frame.frame_id}: {len(labels)} labels for {len(frame.arguments)} arguments")
        arguments = tuple(replace(a, gold_role=g) for a, g in zip(frame.arguments, labels))
        updated.append(replace(frame, arguments=arguments))
    return updated


def cmd_baseline(args) -> int:
    from corpus import load_corpus
    from evaluation import (
        default_role_mapping, gold_label_frequencies, select_supervised_sentences,
        supervised_baseline, syntactic_baseline, write_labels,
    )

    settings = get_settings()
    _require_file(args.corpus, "Corpus file")
    sampler = settings.get_sampler_settings()
    num_roles = args.num_roles or int(sampler["num_roles"])
    num_primary = args.num_primary if args.num_primary is not None else int(sampler["num_primary"])

    def body(run: CommandRun):
        corpus = load_corpus(args.corpus)
        frames = corpus.frames(args.language)
        if args.kind == "syntactic":
            labels = syntactic_baseline(frames, num_roles)
        else:
            from roles import Hyperparams
            excluded = settings.get_excluded_gold_labels()
            chosen = select_supervised_sentences(frames, args.fraction, args.seed)
            labeled = [f for f in frames if (f.language, f.sentence_id) in chosen]
            unlabeled = [f for f in frames if (f.language, f.sentence_id) not in chosen]
            mapping = default_role_mapping(
                gold_label_frequencies(frames, excluded), num_roles, num_primary,
                settings.get_primary_gold_labels(),
            )
            labels = supervised_baseline(
                labeled, unlabeled, mapping, num_roles, num_primary,
                Hyperparams.from_dict(settings.get_hyperparameters()), args.seed,
                settings.get_decode_iterations(),
            )
        write_labels(args.output, labels)
        run.artifact("labels", args.output, primary=True)
        logger.info(f"{args.kind} baseline labels written for {len(labels)} frames")

    config = {"kind": args.kind, "num_roles": num_roles, "num_primary": num_primary,
              "fraction": args.fraction}
    return _run_command("baseline", [args.corpus], body, config, args.seed)


def cmd_generate(args) -> int:
    from corpus import read_json, save_corpus, write_json
    from evaluation import write_labels
    from generator import SyntheticConfig, generate_corpus

    if args.config:
        _require_file(args.config, "Synthetic config")
        data = read_json(args.config)
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config}: synthetic config must be a JSON object")
    else:
        data = {}
    if args.seed is not None:
        data = dict(data, seed=args.seed)
    config = SyntheticConfig.from_dict(data)
    labels_path = args.labels or f"{args.output}.gold.json"
    params_path = args.params or f"{args.output}.params.json"

    def body(run: CommandRun):
        synthetic = generate_corpus(config)
        save_corpus(synthetic.corpus, args.output)
        write_labels(labels_path, synthetic.gold_labels(), kind="gold_labels")
        write_json(params_path, synthetic.params_to_dict())
        run.artifact("corpus", args.output, primary=True)
        run.artifact("gold_labels", labels_path)
        run.artifact("generator_params", params_path)

    inputs = [args.config] if args.config else []
    return _run_command("generate", inputs, body, config.to_dict(), config.seed)


def cmd_stats(args) -> int:
    from corpus import corpus_statistics, load_corpus

    _require_file(args.corpus, "Corpus file")

    def body(run: CommandRun):
        stats = corpus_statistics(load_corpus(args.corpus))
        reporter = ReportGenerator()
        _emit(reporter.generate_corpus_report(stats))
        if args.output:
            reporter.save_report_json(stats.to_dict(), args.output)
            run.artifact("statistics", args.output, primary=True)

    return _run_command("stats", [args.corpus], body)


def cmd_sweep(args) -> int:
    """Semi-supervised learning curve: model vs supervised baseline per labeled fraction"""
    from corpus import load_corpus
    from evaluation import semi_supervised_curve

    settings = get_settings()
    _require_file(args.corpus, "Corpus file")
    config, hp, _ = _load_config(args)
    fractions = _parse_fractions(args.fractions)
    repetitions = args.repetitions or settings.get_semi_supervised_repetitions()

    def body(run: CommandRun):
        corpus = load_corpus(args.corpus)
        curve = semi_supervised_curve(corpus, fractions, config, hp, repetitions,
                                      settings.get_excluded_gold_labels())
        reporter = ReportGenerator()
        _emit(reporter.generate_curve_report(curve))
        if args.output:
            reporter.save_report_json(curve.to_dict(), args.output)
            run.artifact("curve", args.output, primary=True)

    config_data = dict(config.to_dict(), fractions=fractions, repetitions=repetitions)
    return _run_command("sweep", [p for p in (args.corpus, args.config) if p], body, config_data, config.seed)


def _parse_fractions(text: str) -> List[float]:
    try:
        fractions = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"Fractions must be comma-separated numbers, got {text!r}") from None
    if not fractions or any(not 0.0 <= f <= 1.0 for f in fractions):
        raise ConfigError(f"Fractions must lie in [0, 1], got {text!r}")
    return fractions


def _add_sampler_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="run config JSON (SamplerConfig / Hyperparams keys)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--burn-in", dest="burn_in", type=int)
    parser.add_argument("--chains", type=int)
    parser.add_argument("--workers", type=int)


class RoleInductionParser(argparse.ArgumentParser):
    """Usage errors are configuration errors"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ConfigError.exit_code, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = RoleInductionParser(
        prog="role-induction",
        description="Bayesian semantic role induction with crosslingual coupling",
    )
    parser.add_argument("--settings", help="settings JSON file (default: settings.json or $ROLE_INDUCTION_SETTINGS)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (default from settings)")
    parser.add_argument("--database", help="run registry database URL (default: $DATABASE_URL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read CoNLL-2009 files and alignments into a corpus file")
    p.add_argument("--conll", action="append", required=True, metavar="LANG=PATH")
    p.add_argument("--alignments", help="Pharaoh alignment file (first language -> second)")
    p.add_argument("--reverse-alignments", dest="reverse_alignments",
                   help="Pharaoh file in the reverse direction; only links present in both are kept")
    p.add_argument("--arguments", action="append", metavar="LANG=PATH", help="sidecar argument list JSON")
    p.add_argument("--columns", help="column profile (conll2009, conll2009-predicted, conll2009-voice)")
    p.add_argument("--bilingual", action="store_true", help="fail unless an alignment file is given")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("train", help="run the Gibbs sampler and write a model")
    p.add_argument("corpus")
    _add_sampler_flags(p)
    p.add_argument("--regime", choices=["mono", "bilingual", "transfer"])
    p.add_argument("--source-language", dest="source_language")
    p.add_argument("--clamps", help="labels file with roles to hold fixed (null = free)")
    p.add_argument("--trajectory", help="trajectory output (default: <output>.trajectory.jsonl)")
    p.add_argument("--labels", help="also write the final training sample's labels")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("decode", help="label frames with a trained model")
    p.add_argument("corpus")
    p.add_argument("model")
    _add_sampler_flags(p)
    p.add_argument("--language")
    p.add_argument("--clamps")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_decode)

    p = sub.add_parser("eval", help="purity / collocation / F1 against gold labels")
    p.add_argument("corpus")
    p.add_argument("--labels")
    p.add_argument("--model")
    p.add_argument("--gold", help="gold labels file overriding the corpus gold roles")
    p.add_argument("--compare", help="second labels file for a stratified shuffling test")
    p.add_argument("--name", default="system")
    p.add_argument("--compare-name", dest="compare_name", default="comparison")
    p.add_argument("--shuffles", type=int)
    p.add_argument("--language")
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="report JSON")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("baseline", help="syntactic or supervised baseline labels")
    p.add_argument("corpus")
    p.add_argument("--kind", choices=["syntactic", "supervised"], default="syntactic")
    p.add_argument("--num-roles", dest="num_roles", type=int, help="N (clusters for the syntactic baseline)")
    p.add_argument("--num-primary", dest="num_primary", type=int)
    p.add_argument("--fraction", type=float, default=0.1, help="labeled sentence fraction (supervised)")
    p.add_argument("--language")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_baseline)

    p = sub.add_parser("generate", help="sample a synthetic corpus with known roles")
    p.add_argument("--config", help="synthetic config JSON")
    p.add_argument("--seed", type=int)
    p.add_argument("--labels", help="gold labels output (default: <output>.gold.json)")
    p.add_argument("--params", help="generator parameters output (default: <output>.params.json)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("stats", help="frame, argument and alignment coverage counts")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", help="statistics JSON")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("sweep", help="semi-supervised curve against the supervised baseline")
    p.add_argument("corpus")
    _add_sampler_flags(p)
    p.add_argument("--fractions", default="0.01,0.05,0.1,0.25,0.5")
    p.add_argument("--repetitions", type=int)
    p.add_argument("-o", "--output", help="curve JSON")
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = get_settings(args.settings)
    level = (args.log_level or settings.get_log_level()).upper()
    logging.basicConfig(format=LOG_FORMAT, level=getattr(logging, level, logging.INFO))

    runs_before = _runs_started
    try:
        if args.database:
            from database import configure_database
            configure_database(args.database)
        create_tables()
        return args.handler(args)
    except RoleInductionError as e:
        logger.error(str(e))
        exit_code, message = e.exit_code, str(e)
    except OSError as e:
        logger.error(f"I/O error: {e}")
        exit_code, message = DataError.exit_code, str(e)
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}")
        exit_code, message = ContractViolation.exit_code, f"{type(e).__name__}: {e}"
    if _runs_started == runs_before:
        _record_failed_command(args.command, exit_code, message)
    return exit_code


if __name__ == '__main__':
    sys.exit(main())
