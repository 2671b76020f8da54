import json

import httpx
import pytest

from bite.clients import EndpointConfig, HTTPClient


class FakeEndpoint:
    """Scripted OpenAI-compatible server. Each reply is a string, a status code or a callable."""

    def __init__(self, replies):
        self.replies = list(replies)
        self.requests = []

    def __call__(self, request: httpx.Request) -> httpx.Response:
        body = json.loads(request.content)
        self.requests.append((request, body))
        reply = self.replies.pop(0) if len(self.replies) > 1 else self.replies[0]
        if callable(reply):
            reply = reply(body)
        if isinstance(reply, int):
            return httpx.Response(reply, text="error")
        if isinstance(reply, dict):
            return httpx.Response(200, json=reply)
        return httpx.Response(200, json={"choices": [{"message": {"content": reply}}]})


def make_client(replies, api_key_env=None, max_attempts=3):
    server = FakeEndpoint(replies)
    cfg = EndpointConfig("http://fake.local/v1", "fake-model", api_key_env=api_key_env,
                         max_attempts=max_attempts)
    client = HTTPClient(cfg, transport=httpx.MockTransport(server), sleep=lambda s: None)
    return client, server


@pytest.fixture
def fake_client():
    return make_client


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary is printed after the run."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
