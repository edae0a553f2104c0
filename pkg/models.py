from sqlalchemy import Column, Integer, String, DateTime, Float, ForeignKey, Text, JSON
from sqlalchemy.orm import declarative_base, relationship
from datetime import datetime

Base = declarative_base()


class Run(Base):
    __tablename__ = 'runs'

    id = Column(Integer, primary_key=True)
    run_id = Column(String(64), unique=True, nullable=False)
    command = Column(String(50), nullable=False)  # 'ingest', 'train', 'decode', 'eval', ...
    config_digest = Column(String(64))
    input_digests = Column(JSON)  # {path: sha256}
    seed = Column(String(20))  # decimal; seeds go up to 2**64 - 1
    status = Column(String(20), default='running')  # 'running', 'ok', 'failed'
    exit_code = Column(Integer)
    message = Column(Text)
    started_at = Column(DateTime, default=datetime.utcnow)
    finished_at = Column(DateTime)

    artifacts = relationship("Artifact", back_populates="run")
    trajectory = relationship("TrajectoryPoint", back_populates="run")


class Artifact(Base):
    __tablename__ = 'artifacts'

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('runs.id'), nullable=False)
    role = Column(String(50), nullable=False)  # 'corpus', 'model', 'labels', 'report', ...
    path = Column(String(500), nullable=False)
    digest = Column(String(64))
    created_at = Column(DateTime, default=datetime.utcnow)

    run = relationship("Run", back_populates="artifacts")


class TrajectoryPoint(Base):
    __tablename__ = 'trajectory_points'

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('runs.id'), nullable=False)
    chain = Column(Integer, nullable=False)
    sweep = Column(Integer, nullable=False)
    phase = Column(String(20))
    log_joint = Column(Float)
    num_tables = Column(Integer)

    run = relationship("Run", back_populates="trajectory")
