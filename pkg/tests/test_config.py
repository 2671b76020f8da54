import pytest

from bite.clients import ConfigError
from bite.config import build_editor, build_embedder, build_judge, check_credentials, load_config
from bite.judges import RemoteJudge, SyntheticJudge

JUDGE = {"id": "j", "kind": "synthetic", "planted_weights": {"emoji_count": 1.0}}


def test_shipped_configs_load():
    for name in ("offline", "transfer", "remote.example"):
        cfg = load_config(f"configs/{name}.yaml")
        assert cfg.judges and cfg.T == 25 and cfg.K == 3


@pytest.mark.parametrize("bad", [
    {"judges": []},
    {"judges": [JUDGE], "surprise": 1},
    {"judges": [JUDGE, JUDGE]},
    {"judges": [{**JUDGE, "id": "a__b"}]},
    {"judges": [JUDGE], "policies": ["greedy"]},
    {"judges": [JUDGE], "T": 0},
    {"judges": [{**JUDGE, "mode": "listwise"}]},
    {"judges": [{**JUDGE, "mapping": "seven_level"}]},
])
def test_invalid_configs(bad):
    with pytest.raises(ConfigError):
        load_config(bad)


def test_literal_key_rejected():
    cfg = load_config({"judges": [{"id": "r", "kind": "remote", "base_url": "http://x", "model": "m",
                                   "api_key": "sk-123"}]})
    with pytest.raises(ConfigError, match="environment"):
        check_credentials(cfg)


def test_missing_key_variable(monkeypatch):
    monkeypatch.delenv("BITE_ABSENT_KEY", raising=False)
    cfg = load_config({"judges": [{"id": "r", "kind": "remote", "base_url": "http://x", "model": "m",
                                   "api_key_env": "BITE_ABSENT_KEY"}]})
    with pytest.raises(ConfigError, match="BITE_ABSENT_KEY"):
        check_credentials(cfg)
    monkeypatch.setenv("BITE_ABSENT_KEY", "k")
    check_credentials(cfg)


def test_builders():
    j = build_judge({**JUDGE, "base_quality": {"kind": "hashed", "low": 2, "high": 4}})
    assert isinstance(j, SyntheticJudge)
    assert 2 <= j.score("q", "a").numeric <= 4
    r = build_judge({"id": "r", "kind": "remote", "base_url": "http://x", "model": "m"})
    assert isinstance(r, RemoteJudge)
    assert build_embedder({"kind": "offline-hashing"}).d == 256
    assert build_embedder({"kind": "remote", "base_url": "http://x", "model": "e"}).d == 384
    with pytest.raises(ConfigError):
        build_editor({"kind": "mystery"})
    with pytest.raises(ConfigError):
        build_judge({**JUDGE, "base_quality": {"kind": "psychic"}})
