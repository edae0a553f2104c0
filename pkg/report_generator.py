from typing import Dict, List

from corpus import CorpusStatistics, write_json
from evaluation import EvalReport, SemiSupervisedCurve
from models import Run


class ReportGenerator:
    def generate_eval_report(self, report: EvalReport, title: str = "Evaluation") -> str:
        """Per-predicate table followed by the micro-averaged line"""
        lines = [f"{title}", ""]
        if report.per_predicate:
            width = max(len("predicate"), max(len(p) for p in report.per_predicate))
            lines.append(f"{'predicate':<{width}}  {'n':>6}  {'PU':>6}  {'CO':>6}  {'F1':>6}")
            for predicate, score in sorted(report.per_predicate.items()):
                lines.append(
                    f"{predicate:<{width}}  {score.instances:>6}  "
                    f"{score.pu:>6.3f}  {score.co:>6.3f}  {score.f1:>6.3f}"
                )
            lines.append("")
        lines.append(f"micro  n={report.instances}  PU={report.pu:.3f}  CO={report.co:.3f}  F1={report.f1:.3f}")
        for result in report.significance:
            verdict = "significant" if result.significant else "not significant"
            lines.append(
                f"{result.comparison}: p={result.p_value:.4f} ({verdict}; "
                f"{result.iterations} shuffles, seed {result.seed})"
            )
        return "\n".join(lines) + "\n"

    def generate_f1_line(self, name: str, report: EvalReport) -> str:
        return f"{name}: F1={report.f1:.3f} (PU={report.pu:.3f}, CO={report.co:.3f}, n={report.instances})"

    def generate_corpus_report(self, stats: CorpusStatistics) -> str:
        lines = []
        for language in stats.languages:
            lines.append(
                f"{language}: {stats.frames[language]} frames, {stats.arguments[language]} arguments, "
                f"{stats.predicates[language]} predicates"
            )
        if stats.parallel_pairs:
            lines.append(f"aligned frame pairs: {stats.parallel_pairs}, argument links: {stats.links}")
            for language in stats.languages:
                lines.append(f"{language} alignment coverage: {stats.coverage(language):.1f}%")
        return "\n".join(lines) + "\n"

    def generate_curve_report(self, curve: SemiSupervisedCurve) -> str:
        lines = [f"unsupervised model F1: {curve.unsupervised_f1:.3f} (all frames)", ""]
        lines.append(f"{'labeled':>8}  {'model F1':>9}  {'baseline F1':>11}  {'unsupervised F1':>15}")
        for point in curve.points:
            unsupervised = "-" if point.unsupervised_f1 is None else f"{point.unsupervised_f1:.3f}"
            lines.append(f"{point.fraction * 100:>7.1f}%  {point.model_f1:>9.3f}  "
                         f"{point.baseline_f1:>11.3f}  {unsupervised:>15}")
        crossover = curve.crossover
        lines.append("")
        if crossover is None:
            lines.append("supervised baseline never reaches the unsupervised model")
        else:
            lines.append(f"supervised baseline reaches the unsupervised model at {crossover * 100:.1f}% labeled")
        return "\n".join(lines) + "\n"

    def generate_run_report(self, runs: List[Run]) -> str:
        if not runs:
            return "No runs recorded.\n"
        lines = []
        for run in runs:
            started = run.started_at.strftime('%Y-%m-%d %H:%M:%S') if run.started_at else "-"
            lines.append(f"{run.run_id}  {run.command:<9} {run.status:<8} seed={run.seed}  started {started}")
            for artifact in sorted(run.artifacts, key=lambda a: a.role):
                lines.append(f"    {artifact.role}: {artifact.path} ({artifact.digest[:12]})")
        return "\n".join(lines) + "\n"

    def save_report_json(self, data: Dict, path: str):
        write_json(path, data)
