import pytest

from bite.clients import ConfigError, EndpointConfig, RetryableError


def test_complete_returns_message_content(fake_client):
    client, server = fake_client(["hello"])
    assert client.complete("hi") == "hello"
    _, body = server.requests[0]
    assert body["messages"][-1] == {"role": "user", "content": "hi"}
    assert body["model"] == "fake-model"


@pytest.mark.parametrize("status", [500, 503, 429])
def test_retries_on_transient_status(fake_client, status):
    client, server = fake_client([status, "ok"])
    assert client.complete("x") == "ok"
    assert len(server.requests) == 2


def test_gives_up_after_max_attempts(fake_client):
    client, server = fake_client([500], max_attempts=3)
    with pytest.raises(RetryableError):
        client.complete("x")
    assert len(server.requests) == 3


def test_client_error_is_not_retried(fake_client):
    client, server = fake_client([401])
    with pytest.raises(ConfigError):
        client.complete("x")
    assert len(server.requests) == 1


def test_missing_key_variable(monkeypatch, fake_client):
    monkeypatch.delenv("BITE_TEST_KEY", raising=False)
    with pytest.raises(ConfigError, match="BITE_TEST_KEY"):
        fake_client(["x"], api_key_env="BITE_TEST_KEY")
    assert EndpointConfig("http://x", "m").api_key() is None


def test_key_is_sent_but_redacted_in_exchange_log(monkeypatch, fake_client):
    monkeypatch.setenv("BITE_TEST_KEY", "sk-secret")
    client, server = fake_client(["ok"], api_key_env="BITE_TEST_KEY")
    client.complete("x")
    request, _ = server.requests[0]
    assert request.headers["Authorization"] == "Bearer sk-secret"
    assert "sk-secret" not in repr(client.exchanges)
