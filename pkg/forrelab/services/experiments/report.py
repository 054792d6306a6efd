"""
Experiment reports.

The canonical JSON and the CSV rows leave out wall time, so a report
regenerated from the same spec and seed is byte-identical.
"""
import csv
import io
import json
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, Field

from forrelab import __version__
from forrelab.core.stats import (
    DifferenceEstimate,
    ProportionEstimate,
    Verdict,
    check_close,
    check_lower_bound,
    check_upper_bound,
)
from .models import GameSpec

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["game", "seed", "trials", "kind", "name", "value", "ci_low", "ci_high", "bound", "verdict"]


class Estimate(BaseModel):
    name: str
    value: float
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    trials: int = 0

    @classmethod
    def of(cls, name: str, est: Union[ProportionEstimate, DifferenceEstimate], trials: int) -> "Estimate":
        return cls(name=name, value=est.estimate, ci_low=est.ci_low, ci_high=est.ci_high, trials=trials)


class BoundCheck(BaseModel):
    """A measured value against a bound, labelled at 3 sigma."""
    name: str
    estimate: float
    stderr: float
    bound: float
    relation: str
    verdict: Verdict

    @classmethod
    def at_most(cls, name: str, estimate: float, stderr: float, bound: float) -> "BoundCheck":
        return cls(name=name, estimate=estimate, stderr=stderr, bound=bound, relation="<=",
                   verdict=check_upper_bound(estimate, stderr, bound))

    @classmethod
    def at_least(cls, name: str, estimate: float, stderr: float, bound: float) -> "BoundCheck":
        return cls(name=name, estimate=estimate, stderr=stderr, bound=bound, relation=">=",
                   verdict=check_lower_bound(estimate, stderr, bound))

    @classmethod
    def close_to(cls, name: str, estimate: float, stderr: float, target: float) -> "BoundCheck":
        return cls(name=name, estimate=estimate, stderr=stderr, bound=target, relation="~=",
                   verdict=check_close(estimate, stderr, target))


class ExperimentReport(BaseModel):
    spec: GameSpec
    version: str = __version__
    estimates: list[Estimate] = Field(default_factory=list)
    checks: list[BoundCheck] = Field(default_factory=list)
    error_budgets: dict[str, float] = Field(default_factory=dict)
    query_counts: dict[str, int] = Field(default_factory=dict)
    world_digest: str = ""
    notes: list[str] = Field(default_factory=list)
    wall_time: float = 0.0

    def estimate(self, name: str) -> Estimate:
        for est in self.estimates:
            if est.name == name:
                return est
        raise KeyError(name)

    def check(self, name: str) -> BoundCheck:
        for chk in self.checks:
            if chk.name == name:
                return chk
        raise KeyError(name)

    @property
    def consistent(self) -> bool:
        return all(c.verdict is Verdict.CONSISTENT for c in self.checks)

    def canonical_json(self) -> str:
        payload = self.model_dump(mode="json", exclude={"wall_time"})
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_csv_rows(self) -> list[list[str]]:
        head = [self.spec.game.value, str(self.spec.seed), str(self.spec.trials)]
        rows = [CSV_COLUMNS]
        for est in self.estimates:
            rows.append(head + ["estimate", est.name, repr(est.value),
                                "" if est.ci_low is None else repr(est.ci_low),
                                "" if est.ci_high is None else repr(est.ci_high), "", ""])
        for chk in self.checks:
            rows.append(head + ["check", chk.name, repr(chk.estimate), "", "",
                                f"{chk.relation} {chk.bound!r}", chk.verdict.value])
        for name, budget in sorted(self.error_budgets.items()):
            rows.append(head + ["error_budget", name, repr(budget), "", "", "", ""])
        return rows

    def to_csv(self) -> str:
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(self.to_csv_rows())
        return buffer.getvalue()

    def write(self, out_dir: Union[str, Path], stem: Optional[str] = None) -> tuple[Path, Path]:
        """Write ``<stem>.json`` (canonical) and ``<stem>.csv`` into ``out_dir``."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = stem or f"{self.spec.game.value}-seed{self.spec.seed}"
        json_path, csv_path = out / f"{stem}.json", out / f"{stem}.csv"
        json_path.write_text(self.canonical_json(), encoding="utf-8")
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        logger.info(f"Report written to {json_path} and {csv_path}")
        return json_path, csv_path

    def summary(self) -> str:
        lines = [f"{self.spec.game.value} ({self.spec.profile.describe()}, trials={self.spec.trials}, seed={self.spec.seed})"]
        for est in self.estimates:
            ci = "" if est.ci_low is None else f"  [{est.ci_low:.4f}, {est.ci_high:.4f}]"
            lines.append(f"  {est.name:<28} {est.value:.6f}{ci}")
        for chk in self.checks:
            lines.append(f"  {chk.name:<28} {chk.estimate:.6f} {chk.relation} {chk.bound:.6g}: {chk.verdict.value}")
        for name, budget in sorted(self.error_budgets.items()):
            lines.append(f"  error budget {name:<15} {budget:.3g}")
        lines.extend(f"  note: {note}" for note in self.notes)
        return "\n".join(lines)


def load_report(path: Union[str, Path]) -> ExperimentReport:
    return ExperimentReport.model_validate_json(Path(path).read_text(encoding="utf-8"))
