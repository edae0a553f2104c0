"""
Per-run line-delimited logs: command events and sampler trajectories
"""

import json
import os
import logging
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional

logger = logging.getLogger(__name__)


class RunLogger:
    def __init__(self, log_directory: str = "run_logs"):
        self.log_directory = log_directory
        self._ensure_log_directory()

    def _ensure_log_directory(self):
        """Create the log directory if it does not exist"""
        if not os.path.exists(self.log_directory):
            os.makedirs(self.log_directory)
            logger.info(f"Created run log directory: {self.log_directory}")

    def run_file_stem(self, run_id: str) -> str:
        return os.path.join(self.log_directory, f"run_{run_id}")

    def _get_log_file_path(self, run_id: str) -> str:
        return f"{self.run_file_stem(run_id)}.jsonl"

    def _write_record(self, run_id: str, record: Dict[str, Any]):
        log_file = self._get_log_file_path(run_id)
        try:
            with open(log_file, 'a', encoding='utf-8') as f:
                f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
        except OSError as e:
            logger.error(f"Error writing run log {log_file}: {e}")

    def log_event(self, run_id: str, event_type: str, data: Optional[Dict[str, Any]] = None,
                  timestamp: Optional[datetime] = None):
        """Record a command event (start, finish, error, clamping, ...)"""
        if timestamp is None:
            timestamp = datetime.now()
        record = {"type": event_type, "time": timestamp.isoformat(timespec="seconds")}
        record.update(data or {})
        self._write_record(run_id, record)

    def log_trajectory(self, run_id: str, records: Iterable[Dict[str, Any]]):
        for record in records:
            entry = {"type": "sweep"}
            entry.update(record)
            self._write_record(run_id, entry)

    def read_run_log(self, run_id: str) -> List[Dict[str, Any]]:
        log_file = self._get_log_file_path(run_id)
        if not os.path.exists(log_file):
            return []
        records = []
        with open(log_file, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError:
                    logger.warning(f"Skipping unreadable line in {log_file}")
        return records

    def get_run_summary(self, run_id: str) -> Dict[str, Any]:
        """Summary of one run log: events, sweeps per chain, last log joint per chain"""
        try:
            records = self.read_run_log(run_id)
        except OSError as e:
            logger.error(f"Error reading run log for {run_id}: {e}")
            return {"run_id": run_id, "total_records": 0, "error": str(e)}

        summary = {
            "run_id": run_id,
            "total_records": len(records),
            "events": [],
            "sweeps": {},
            "final_log_joint": {},
            "has_errors": False,
        }
        for record in records:
            if record.get("type") == "sweep":
                chain = str(record.get("chain", 0))
                summary["sweeps"][chain] = max(summary["sweeps"].get(chain, 0), record.get("sweep", 0))
                summary["final_log_joint"][chain] = record.get("log_joint")
            else:
                summary["events"].append(record.get("type"))
                if record.get("type") == "error":
                    summary["has_errors"] = True
        return summary


def write_trajectory(path: str, records: Iterable[Dict[str, Any]]):
    """Trajectory artifact: one JSON record per line, no wall-clock fields"""
    with open(path, 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(record, sort_keys=True) + "\n")


def read_trajectory(path: str) -> List[Dict[str, Any]]:
    with open(path, 'r', encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]


# Global run logger instance
_run_logger_instance = None


def get_run_logger(log_directory: Optional[str] = None) -> RunLogger:
    """Get the global run logger"""
    global _run_logger_instance
    if _run_logger_instance is None or (
        log_directory is not None and log_directory != _run_logger_instance.log_directory
    ):
        if log_directory is None:
            from settings import get_settings
            log_directory = get_settings().get_run_log_directory()
        _run_logger_instance = RunLogger(log_directory)
    return _run_logger_instance
