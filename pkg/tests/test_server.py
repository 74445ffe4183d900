import json
import threading
import urllib.error
import urllib.request

import pytest

from rocketeval.flightsim import Environment
from rocketeval.pipeline import TaskSpec, evaluate_source
from rocketeval.server import make_server, parse_wind


@pytest.fixture(scope="module")
def server_url():
    server = make_server("127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()


def get(url):
    with urllib.request.urlopen(url, timeout=30) as resp:
        return resp.status, json.loads(resp.read().decode())


def post(url, payload):
    req = urllib.request.Request(url, data=json.dumps(payload).encode(),
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=300) as resp:
            return resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read().decode())


ALT_TASK = {
    "challenge": "target_altitude",
    "environment": {"wind_speed": 5.0, "wind_from": "E"},
    "target_apogee": 3048.0,
    "iteration_budget": 2,
}


def test_parse_wind_tokens():
    env = parse_wind("5@E")
    assert env.wind_speed == 5.0 and env.wind_from == "E"
    env = parse_wind("3.5@270")
    assert env.wind_from == 270.0


def test_task_brief_endpoint(server_url):
    status, data = get(f"{server_url}/task-brief?challenge=altitude&target=3048&wind=5@E")
    assert status == 200
    assert "**Target Apogee**: 3048.0 meters" in data["brief"]


def test_evaluate_matches_direct_pipeline(server_url, example_text):
    status, data = post(f"{server_url}/evaluate",
                        {"task": ALT_TASK, "design": json.loads(example_text)})
    assert status == 200
    direct = evaluate_source(
        example_text,
        TaskSpec(challenge="target_altitude", environment=Environment(5.0, "E"),
                 target_apogee=3048.0, iteration_budget=2))
    assert data["reward"]["total"] == direct.reward.total
    assert data["outcome"]["apogee"] == direct.outcome.apogee
    assert data["drc"]["passed"] is True


def test_evaluate_accepts_raw_text_design(server_url, example_text):
    block = "```python\nconfig = " + example_text + "\n```"
    status, data = post(f"{server_url}/evaluate",
                        {"task": ALT_TASK, "design": block})
    assert status == 200
    assert data["reward"]["total"] > 0.0


def test_evaluate_rejects_missing_design(server_url):
    status, data = post(f"{server_url}/evaluate", {"task": ALT_TASK})
    assert status == 400
    assert "design" in data["error"]


def test_session_turn_flow(server_url, example_text):
    status, first = post(f"{server_url}/session/turn",
                         {"task": ALT_TASK, "raw_text": example_text})
    assert status == 200
    sid = first["session_id"]
    assert first["index"] == 0
    assert first["done"] is False

    status, second = post(f"{server_url}/session/turn",
                          {"session_id": sid, "raw_text": "garbage"})
    assert status == 200
    assert second["index"] == 1
    assert second["done"] is True
    assert second["attempt"]["reward"]["total"] == 0.0
    assert second["best_total"] == first["attempt"]["reward"]["total"]

    status, third = post(f"{server_url}/session/turn",
                         {"session_id": sid, "raw_text": example_text})
    assert status == 409  # budget exhausted


def test_unknown_session_404(server_url, example_text):
    status, data = post(f"{server_url}/session/turn",
                        {"session_id": "s999999", "raw_text": example_text})
    assert status == 404


def test_unknown_path_404(server_url):
    status, data = get(f"{server_url}/health")
    assert status == 200
    req = urllib.request.Request(f"{server_url}/nope", data=b"{}",
                                 headers={"Content-Type": "application/json"})
    try:
        urllib.request.urlopen(req, timeout=30)
        assert False, "expected HTTPError"
    except urllib.error.HTTPError as e:
        assert e.code == 404
