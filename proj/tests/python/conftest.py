import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def fixtures():
    return pathlib.Path(os.environ.get("DAMTEVAL_FIXTURE_DIR", ROOT / "tests" / "fixtures"))


@pytest.fixture(scope="session")
def toy(fixtures):
    d = fixtures / "toy"
    names = ["sysA", "sysB", "sysC"]
    return {
        "dir": d,
        "refs": d / "refs.txt",
        "hyps": {n: d / "hyps" / f"{n}.txt" for n in names},
        "ref_emb": d / "emb" / "ref.emb1",
        "sys_embs": {n: d / "emb" / f"{n}.emb1" for n in names},
    }
