import hashlib
import json
import logging
import os
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, Iterable, List, Optional

from sqlalchemy.orm import Session

from models import Run, Artifact, TrajectoryPoint

logger = logging.getLogger(__name__)


def file_digest(path: str) -> str:
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(65536), b""):
            sha.update(chunk)
    return sha.hexdigest()


def data_digest(data) -> str:
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    command: str
    config_digest: Optional[str] = None
    inputs: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    artifacts: List[Dict[str, str]] = field(default_factory=list)
    run_id: str = ""
    started_at: Optional[datetime] = None
    finished_at: Optional[datetime] = None
    exit_code: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            "format_version": 1,
            "kind": "manifest",
            "command": self.command,
            "config_digest": self.config_digest,
            "inputs": dict(sorted(self.inputs.items())),
            "seed": self.seed,
            "artifacts": self.artifacts,
            "exit_code": self.exit_code,
            # wall-clock fields, the only part that differs between identical reruns
            "timing": {
                "run_id": self.run_id,
                "started_at": self.started_at.isoformat() if self.started_at else None,
                "finished_at": self.finished_at.isoformat() if self.finished_at else None,
            },
        }


class RunRegistry:
    def __init__(self, db: Session):
        self.db = db

    def start_run(self, command: str, input_paths: Iterable[str] = (), config: Optional[Dict] = None,
                  seed: Optional[int] = None) -> Run:
        inputs = {path: file_digest(path) for path in input_paths if path and os.path.exists(path)}
        run = Run(
            run_id=uuid.uuid4().hex,
            command=command,
            config_digest=data_digest(config) if config is not None else None,
            input_digests=inputs,
            seed=str(seed) if seed is not None else None,
            status='running',
            started_at=datetime.utcnow(),
        )
        self.db.add(run)
        self.db.commit()
        logger.info(f"Run {run.run_id} started: {command}")
        return run

    def add_artifact(self, run: Run, role: str, path: str) -> Artifact:
        artifact = Artifact(run_id=run.id, role=role, path=path, digest=file_digest(path))
        self.db.add(artifact)
        self.db.commit()
        return artifact

    def add_trajectory(self, run: Run, records: Iterable[Dict]):
        for record in records:
            self.db.add(TrajectoryPoint(
                run_id=run.id,
                chain=record["chain"],
                sweep=record["sweep"],
                phase=record.get("phase"),
                log_joint=record.get("log_joint"),
                num_tables=record.get("num_tables"),
            ))
        self.db.commit()

    def finish_run(self, run: Run, exit_code: int, message: Optional[str] = None):
        run.exit_code = exit_code
        run.status = 'ok' if exit_code == 0 else 'failed'
        run.message = message
        run.finished_at = datetime.utcnow()
        self.db.commit()
        logger.info(f"Run {run.run_id} finished with exit code {exit_code}")

    def get_run(self, run_id: str) -> Optional[Run]:
        return self.db.query(Run).filter(Run.run_id == run_id).first()

    def list_runs(self, command: Optional[str] = None) -> List[Run]:
        query = self.db.query(Run)
        if command:
            query = query.filter(Run.command == command)
        return query.order_by(Run.started_at.desc()).all()

    def get_manifest(self, run: Run) -> RunManifest:
        return RunManifest(
            command=run.command,
            config_digest=run.config_digest,
            inputs=dict(run.input_digests or {}),
            seed=int(run.seed) if run.seed is not None else None,
            artifacts=[
                {"role": a.role, "path": a.path, "digest": a.digest}
                for a in sorted(run.artifacts, key=lambda a: (a.role, a.path))
            ],
            run_id=run.run_id,
            started_at=run.started_at,
            finished_at=run.finished_at,
            exit_code=run.exit_code,
        )

    def write_manifest(self, run: Run, output_path: str) -> str:
        """Write <output>.manifest.json next to the primary artifact"""
        manifest_path = f"{output_path}.manifest.json"
        with open(manifest_path, 'w', encoding='utf-8') as f:
            json.dump(self.get_manifest(run).to_dict(), f, ensure_ascii=False, indent=1, sort_keys=True)
            f.write("\n")
        return manifest_path
