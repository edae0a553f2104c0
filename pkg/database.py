from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from models import Base
import os
from dotenv import load_dotenv

load_dotenv()

DATABASE_URL = os.getenv('DATABASE_URL', 'sqlite:///role_induction.db')

engine = None
SessionLocal = None


def configure_database(url: str = None):
    """(Re)bind the engine; tests point this at an in-memory or tmp_path database"""
    global engine, SessionLocal
    engine = create_engine(url or DATABASE_URL)
    SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    return engine


def create_tables():
    if engine is None:
        configure_database()
    Base.metadata.create_all(bind=engine)


def get_db_session():
    if SessionLocal is None:
        configure_database()
    return SessionLocal()
