"""Batch execution of configured experiments.

Each experiment writes into its own directory `<out>/<label>/`: one
`report.json`, one CSV per table and one JSON file per document. Experiments
share no mutable state, so with `max_workers > 1` they run on a joblib thread
pool.
"""

from pathlib import Path
from typing import Callable, List, Optional

from joblib import Parallel, delayed
from loguru import logger

from ._experiments import Experiment, InvariantBattery, experiment_for
from ._types.report import Report, Summary
from ._utils.serde import json_dumps, write_csv
from .config import ConfigFile, ExperimentConfig
from .stores import ReportStore

__all__ = ["ExperimentRunner", "DEFAULT_OUT"]

DEFAULT_OUT = Path("rrde-out")


class ExperimentRunner:
    def __init__(self, config: ConfigFile, out: Optional[Path] = None) -> None:
        self.config = config
        self.out = out

    def _out_dir(self, exp: ExperimentConfig) -> Path:
        root = self.out or exp.out or DEFAULT_OUT
        return Path(root) / exp.output_name

    def _write(self, exp: ExperimentConfig, store: ReportStore, report: Report) -> None:
        target = self._out_dir(exp)
        target.mkdir(parents=True, exist_ok=True)
        for name, columns in store.tables.items():
            write_csv(target / f"{name}.csv", columns)
        for name, doc in store.documents.items():
            (target / f"{name}.json").write_text(json_dumps(doc) + "\n")
        (target / "report.json").write_text(report.model_dump_json(indent=2) + "\n")
        logger.info("wrote {} files to {}", len(report.files) + 1, target)

    def _execute(
        self,
        exp: ExperimentConfig,
        factory: Callable[[ExperimentConfig], Experiment],
        write: bool,
    ) -> Report:
        store = factory(exp).execute()
        report = store.to_report(exp.model_dump(mode="json"))
        if write:
            self._write(exp, store, report)
        return report

    def _map(
        self, factory: Callable[[ExperimentConfig], Experiment], write: bool
    ) -> Summary:
        jobs = self.config.experiments
        if self.config.max_workers > 1 and len(jobs) > 1:
            reports: List[Report] = Parallel(
                n_jobs=self.config.max_workers, prefer="threads"
            )(delayed(self._execute)(exp, factory, write) for exp in jobs)
        else:
            reports = [self._execute(exp, factory, write) for exp in jobs]
        return Summary(reports=reports)

    def run(self) -> Summary:
        """Run every configured experiment and write its files"""
        return self._map(experiment_for, write=True)

    def verify(self) -> Summary:
        """Run the invariant battery on every configured instance; nothing is written"""
        return self._map(InvariantBattery, write=False)
