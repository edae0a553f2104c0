import numpy as np
import pytest

from corpus import ArgumentMention, Frame, Voice
from roles import Hyperparams, RoleInventory

# ID FORM LEMMA PLEMMA POS PPOS FEAT PFEAT HEAD PHEAD DEPREL PDEPREL FILLPRED PRED APRED...
ENGLISH_SENTENCES = [
    [
        "1 John john john NNP NNP _ _ 2 2 SBJ SBJ _ _ A0",
        "2 gave give give VBD VBD _ _ 0 0 ROOT ROOT Y give.01 _",
        "3 Mary mary mary NNP NNP _ _ 2 2 IOBJ IOBJ _ _ A2",
        "4 a a a DT DT _ _ 5 5 NMOD NMOD _ _ _",
        "5 book book book NN NN _ _ 2 2 OBJ OBJ _ _ A1",
    ],
    [
        "1 The the the DT DT _ _ 2 2 NMOD NMOD _ _ _",
        "2 book book book NN NN _ _ 3 3 SBJ SBJ _ _ A1",
        "3 was be be VBD VBD _ _ 0 0 ROOT ROOT _ _ _",
        "4 given give give VBN VBN _ _ 3 3 VC VC Y give.01 _",
    ],
    [
        "1 She she she PRP PRP _ _ 2 2 SBJ SBJ _ _ _ A0",
        "2 has have have VBZ VBZ _ _ 0 0 ROOT ROOT Y have.01 _ _",
        "3 said say say VBN VBN _ _ 2 2 VC VC Y say.01 _ _",
        "4 it it it PRP PRP _ _ 3 3 OBJ OBJ _ _ _ A1",
    ],
]

GERMAN_SENTENCES = [
    [
        "1 Hans hans hans NE NE _ _ 2 2 SB SB _ _ A0",
        "2 gab geben geben VVFIN VVFIN _ _ 0 0 ROOT ROOT Y geben.01 _",
        "3 Maria maria maria NE NE _ _ 2 2 DA DA _ _ A2",
        "4 ein ein ein ART ART _ _ 5 5 NK NK _ _ _",
        "5 Buch buch buch NN NN _ _ 2 2 OA OA _ _ A1",
    ],
]

# John-Hans, gave-gab, book-Buch; Mary is left unaligned
PARALLEL_ALIGNMENT = "0-0 1-1 4-4\n"


def conll_text(sentences) -> str:
    blocks = ["\n".join("\t".join(row.split()) for row in sentence) for sentence in sentences]
    return "\n\n".join(blocks) + "\n\n"


@pytest.fixture
def english_conll(tmp_path):
    path = tmp_path / "en.conll"
    path.write_text(conll_text(ENGLISH_SENTENCES), encoding="utf-8")
    return str(path)


@pytest.fixture
def parallel_files(tmp_path):
    en = tmp_path / "par.en.conll"
    de = tmp_path / "par.de.conll"
    align = tmp_path / "par.align"
    en.write_text(conll_text(ENGLISH_SENTENCES[:1]), encoding="utf-8")
    de.write_text(conll_text(GERMAN_SENTENCES), encoding="utf-8")
    align.write_text(PARALLEL_ALIGNMENT, encoding="utf-8")
    return str(en), str(de), str(align)


@pytest.fixture
def make_frame():
    """Frame with arguments laid out around the predicate: heads 1..n+1 minus the predicate position"""

    def factory(features, gold=None, frame_id="en:0:2", predicate="give", language="en",
                predicate_position=2, voice=Voice.ACTIVE, sentence_id=0):
        gold = gold or [None] * len(features)
        heads = [h for h in range(1, len(features) + 2) if h != predicate_position][:len(features)]
        arguments = tuple(
            ArgumentMention(head, tuple(feature), label)
            for head, feature, label in zip(heads, features, gold)
        )
        return Frame(frame_id, language, sentence_id, predicate, voice, predicate_position, arguments)

    return factory


@pytest.fixture
def small_inventory():
    return RoleInventory(num_roles=3, num_primary=1)


@pytest.fixture
def hyperparams():
    return Hyperparams(alpha_feat=(0.5, 0.5, 0.5))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def db_session(tmp_path):
    import database
    database.configure_database(f"sqlite:///{tmp_path / 'runs.db'}")
    database.create_tables()
    session = database.get_db_session()
    yield session
    session.close()


@pytest.fixture
def cli_env(tmp_path, monkeypatch):
    """Isolated settings file, run registry database and run log directory"""
    import database
    from run_logger import get_run_logger

    monkeypatch.chdir(tmp_path)
    database.configure_database(f"sqlite:///{tmp_path / 'registry.db'}")
    get_run_logger(str(tmp_path / "run_logs"))
    return tmp_path
