"""
Settings module for the role induction toolkit
Loads configuration from JSON file
"""

import json
import os
import logging
from typing import Dict, List, Optional

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_FILE = os.getenv("ROLE_INDUCTION_SETTINGS", "settings.json")

ENGLISH_AUXILIARIES = [
    "be", "have", "do", "will", "would", "shall", "should",
    "may", "might", "can", "could", "must",
]
GERMAN_AUXILIARIES = [
    "sein", "haben", "werden", "können", "müssen", "sollen",
    "wollen", "dürfen", "mögen",
]


class Settings:
    def __init__(self, settings_file: Optional[str] = None):
        self.settings_file = settings_file or DEFAULT_SETTINGS_FILE
        self._settings = {}
        self.load_settings()

    def load_settings(self):
        """Load settings from JSON file"""
        try:
            if os.path.exists(self.settings_file):
                with open(self.settings_file, 'r', encoding='utf-8') as f:
                    self._settings = json.load(f)
                logger.info(f"Settings loaded from {self.settings_file}")
            else:
                # Create default settings file if it doesn't exist
                self.create_default_settings()
                logger.info(f"Created default settings file: {self.settings_file}")
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error loading settings: {e}")
            self._settings = self.default_settings()

    @staticmethod
    def default_settings() -> Dict:
        return {
            "sampler": {
                "regime": "mono",
                "iterations": 5000,
                "burn_in": 2000,
                "chains": 1,
                "seed": 13,
                "num_roles": 21,
                "num_primary": 2,
                "decode_iterations": 100,
                "check_invariants": False
            },
            "hyperparameters": {
                "alpha_order": 1.0,
                "alpha_sr": 1.0,
                "alpha_feat": [0.1, 0.1, 0.1],
                "beta_stop": [1.0, 1.0],
                "alpha_crp": 1.0,
                "alpha_align": 0.1
            },
            "corpus": {
                "column_profile": "conll2009",
                "auxiliaries": {
                    "en": ENGLISH_AUXILIARIES,
                    "de": GERMAN_AUXILIARIES
                },
                "passive_auxiliaries": {
                    "en": ["be", "get"],
                    "de": ["werden", "sein"]
                },
                "participle_tags": {
                    "en": ["VBN"],
                    "de": ["VVPP", "VAPP", "VMPP"]
                },
                "max_arguments": 25,
                "one_to_one_alignments": True
            },
            "evaluation": {
                "excluded_gold_labels": ["V"],
                "primary_gold_labels": ["A0", "A1"],
                "shuffle_iterations": 10000,
                "significance_level": 0.05,
                "semi_supervised_repetitions": 10
            },
            "marginal": {
                "max_enumeration_arguments": 8
            },
            "logging": {
                "level": "INFO",
                "run_log_directory": "run_logs"
            }
        }

    def create_default_settings(self):
        """Create default settings file"""
        self._settings = self.default_settings()
        self.save_settings()

    def save_settings(self):
        """Save current settings to file"""
        try:
            with open(self.settings_file, 'w', encoding='utf-8') as f:
                json.dump(self._settings, f, ensure_ascii=False, indent=2)
            logger.info(f"Settings saved to {self.settings_file}")
        except OSError as e:
            logger.error(f"Error saving settings: {e}")

    def _section(self, name: str) -> Dict:
        section = dict(self.default_settings().get(name, {}))
        section.update(self._settings.get(name, {}))
        return section

    def get_sampler_settings(self) -> Dict:
        """Sampler schedule defaults (SamplerConfig field names)"""
        return self._section("sampler")

    def get_hyperparameters(self) -> Dict:
        """Prior defaults (Hyperparams field names)"""
        return self._section("hyperparameters")

    def get_decode_iterations(self) -> int:
        return int(self.get_sampler_settings().get("decode_iterations", 100))

    def is_invariant_checking_enabled(self) -> bool:
        return bool(self.get_sampler_settings().get("check_invariants", False))

    def get_corpus_settings(self) -> Dict:
        return self._section("corpus")

    def get_column_profile(self) -> str:
        return self.get_corpus_settings().get("column_profile", "conll2009")

    def get_auxiliaries(self, language: str) -> List[str]:
        """Auxiliary lemmas excluded from predicate selection"""
        return self.get_corpus_settings().get("auxiliaries", {}).get(language, [])

    def get_passive_auxiliaries(self, language: str) -> List[str]:
        return self.get_corpus_settings().get("passive_auxiliaries", {}).get(language, ["be"])

    def get_participle_tags(self, language: str) -> List[str]:
        return self.get_corpus_settings().get("participle_tags", {}).get(language, ["VBN"])

    def get_max_arguments(self) -> int:
        return int(self.get_corpus_settings().get("max_arguments", 25))

    def is_one_to_one_alignment_enabled(self) -> bool:
        return bool(self.get_corpus_settings().get("one_to_one_alignments", True))

    def get_evaluation_settings(self) -> Dict:
        return self._section("evaluation")

    def get_excluded_gold_labels(self) -> List[str]:
        return self.get_evaluation_settings().get("excluded_gold_labels", ["V"])

    def get_primary_gold_labels(self) -> List[str]:
        return self.get_evaluation_settings().get("primary_gold_labels", ["A0", "A1"])

    def get_shuffle_iterations(self) -> int:
        return int(self.get_evaluation_settings().get("shuffle_iterations", 10000))

    def get_significance_level(self) -> float:
        return float(self.get_evaluation_settings().get("significance_level", 0.05))

    def get_semi_supervised_repetitions(self) -> int:
        return int(self.get_evaluation_settings().get("semi_supervised_repetitions", 10))

    def get_max_enumeration_arguments(self) -> int:
        return int(self._section("marginal").get("max_enumeration_arguments", 8))

    def get_log_level(self) -> str:
        return self._section("logging").get("level", "INFO")

    def get_run_log_directory(self) -> str:
        return self._section("logging").get("run_log_directory", "run_logs")

    def reload_settings(self):
        """Reload settings from file"""
        self.load_settings()
        logger.info("Settings reloaded")


# Global settings instance
_settings_instance = None


def get_settings(settings_file: Optional[str] = None) -> Settings:
    """Get global settings instance"""
    global _settings_instance
    if _settings_instance is None or (
        settings_file is not None and settings_file != _settings_instance.settings_file
    ):
        _settings_instance = Settings(settings_file)
    return _settings_instance


def reload_settings():
    """Reload global settings"""
    global _settings_instance
    if _settings_instance:
        _settings_instance.reload_settings()
