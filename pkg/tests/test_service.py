import pytest
from fastapi.testclient import TestClient

from hornpac.core import BOTTOM
from hornpac.io import parse_burmeister
from hornpac.learner import LearnerConfig, pac_horn_approximation
from hornpac.oracle import DatasetOracle
from hornpac.service import create_app

TOY_CXT = "B\ntoy\n3\n3\no1\no2\no3\nx\ny\nz\nXX.\nX.X\nX..\n"


def toy_doc():
    return parse_burmeister(TOY_CXT)


def script_expert(client, sid, doc, max_steps=200_000):
    """Answer every surfaced query like the dataset oracle would."""
    from hornpac.core import Implication, holds_in_data

    universe = doc.universe
    steps = 0
    while True:
        state = client.get(f"/sessions/{sid}/query").json()
        if state["query"] is None:
            return state["state"], steps
        q = state["query"]
        premise = universe.make(q["premise"])
        conclusion = BOTTOM if q["conclusion"] == "bottom" else universe.make(q["conclusion"])
        violating = holds_in_data(doc.family, Implication(premise, conclusion))
        if violating is None:
            body = {"accept": True}
        else:
            body = {"accept": False, "counterexample": list(violating.labels())}
        response = client.post(f"/sessions/{sid}/answer", json=body)
        assert response.status_code == 200, response.text
        steps += 1
        if steps > max_steps:
            raise AssertionError("scripted session did not converge")


@pytest.fixture
def client(tmp_path):
    return TestClient(create_app(state_dir=tmp_path / "state"))


def create_manual(client, seed=5, epsilon=0.2, delta=0.2, labels=("x", "y", "z"), **extra):
    body = {
        "epsilon": epsilon, "delta": delta, "seed": seed,
        "universe": list(labels), "answering": "manual",
        "cache_counterexamples": False, "cache_confirmed": False,
    }
    body.update(extra)
    response = client.post("/sessions", json=body)
    assert response.status_code == 200, response.text
    return response.json()["id"]


class TestSessionLifecycle:
    def test_create_validates_config(self, client):
        bad = client.post("/sessions", json={"epsilon": 0, "delta": 0.5, "universe": ["a"]})
        assert bad.status_code == 400
        missing = client.post("/sessions", json={"epsilon": 0.5, "delta": 0.5})
        assert missing.status_code == 400

    def test_unknown_session_is_404(self, client):
        for verb, path in [
            ("get", "/sessions/nope"),
            ("get", "/sessions/nope/query"),
            ("get", "/sessions/nope/hypothesis"),
            ("get", "/sessions/nope/report"),
        ]:
            assert getattr(client, verb)(path).status_code == 404
        assert client.post("/sessions/nope/abort").status_code == 404

    def test_next_query_is_idempotent(self, client):
        sid = create_manual(client)
        first = client.get(f"/sessions/{sid}/query").json()
        second = client.get(f"/sessions/{sid}/query").json()
        assert first == second

    def test_scripted_run_reaches_finished(self, client):
        doc = toy_doc()
        sid = create_manual(client, labels=doc.universe.names, seed=7)
        state, steps = script_expert(client, sid, doc)
        assert state == "finished"
        report = client.get(f"/sessions/{sid}/report").json()
        assert report["report"]["terminated"] is True
        answered = [r for r in report["log"] if r["type"] == "answer"]
        assert len(answered) == steps
        assert {r["source"] for r in answered} == {"human"}

    def test_scripted_session_matches_direct_run(self, client):
        doc = toy_doc()
        sid = create_manual(client, labels=doc.universe.names, seed=21, epsilon=0.1, delta=0.1)
        state, _ = script_expert(client, sid, doc)
        assert state == "finished"
        via_http = client.get(f"/sessions/{sid}/hypothesis").json()["implications"]
        config = LearnerConfig(0.1, 0.1, seed=21)
        direct, _ = pac_horn_approximation(DatasetOracle(doc.family), config)
        direct_payload = [
            {
                "premise": list(i.premise.labels()),
                "conclusion": "bottom" if i.conclusion is BOTTOM
                else list(i.conclusion.labels()),
            }
            for i in direct
        ]
        stripped = [
            {"premise": i["premise"], "conclusion": i["conclusion"]} for i in via_http
        ]
        assert stripped == direct_payload


class TestAnswerValidation:
    def test_rejection_requires_counterexample(self, client):
        sid = create_manual(client)
        response = client.post(f"/sessions/{sid}/answer", json={"accept": False})
        assert response.status_code == 400

    def test_counterexample_must_contain_premise(self, client):
        doc = toy_doc()
        sid = create_manual(client, labels=doc.universe.names, seed=3)
        query = client.get(f"/sessions/{sid}/query").json()["query"]
        outside = [n for n in doc.universe.names if n not in query["premise"]]
        response = client.post(
            f"/sessions/{sid}/answer",
            json={"accept": False, "counterexample": outside[:1] if query["premise"] else []},
        )
        if query["premise"]:
            assert response.status_code == 400
            after = client.get(f"/sessions/{sid}/query").json()["query"]
            assert after == query  # state unchanged

    def test_counterexample_must_omit_some_conclusion(self, client):
        # accepting-by-counterexample is impossible: X containing the conclusion is rejected
        sid = create_manual(client, labels=("x", "y"), seed=11)
        query = client.get(f"/sessions/{sid}/query").json()["query"]
        everything = ["x", "y"]
        response = client.post(
            f"/sessions/{sid}/answer",
            json={"accept": False, "counterexample": everything},
        )
        if query["conclusion"] == "bottom":
            # falsum is never contained: such a rejection is structurally fine
            assert response.status_code == 200
        else:
            assert response.status_code == 400

    def test_unknown_labels_rejected(self, client):
        sid = create_manual(client)
        response = client.post(
            f"/sessions/{sid}/answer",
            json={"accept": False, "counterexample": ["nope"]},
        )
        assert response.status_code == 400

    def test_answer_after_finish_is_409(self, client):
        doc = toy_doc()
        sid = create_manual(client, labels=doc.universe.names, seed=7)
        state, _ = script_expert(client, sid, doc)
        assert state == "finished"
        response = client.post(f"/sessions/{sid}/answer", json={"accept": True})
        assert response.status_code == 409


class TestDatasetSessions:
    def test_auto_session_runs_to_completion_on_create(self, tmp_path, zoo_doc):
        app = create_app(default_dataset=zoo_doc)
        client = TestClient(app)
        response = client.post("/sessions", json={
            "epsilon": 0.2, "delta": 0.2, "seed": 9, "dataset": "default",
        })
        assert response.status_code == 200
        view = response.json()
        assert view["state"] == "finished"
        assert view["queries"]["by_source"]["dataset"] > 0
        assert view["queries"]["by_source"]["human"] == 0

    def test_hybrid_routes_only_full_queries_to_the_human(self, zoo_doc):
        # strong mode asks full closure queries; restricted probes stay automatic
        client = TestClient(create_app(default_dataset=zoo_doc))
        response = client.post("/sessions", json={
            "epsilon": 0.5, "delta": 0.5, "seed": 2, "dataset": "default",
            "answering": "hybrid", "mode": "strong",
            "cache_counterexamples": False, "cache_confirmed": False,
        })
        assert response.status_code == 200
        sid = response.json()["id"]
        state = client.get(f"/sessions/{sid}/query").json()
        steps = 0
        doc = zoo_doc
        while state["query"] is not None and steps < 5000:
            q = state["query"]
            assert not q["restricted"]  # humans only see full queries in hybrid mode
            from hornpac.core import Implication, holds_in_data

            premise = doc.universe.make(q["premise"])
            conclusion = (
                BOTTOM if q["conclusion"] == "bottom" else doc.universe.make(q["conclusion"])
            )
            violating = holds_in_data(doc.family, Implication(premise, conclusion))
            body = {"accept": True} if violating is None else {
                "accept": False, "counterexample": list(violating.labels())
            }
            assert client.post(f"/sessions/{sid}/answer", json=body).status_code == 200
            state = client.get(f"/sessions/{sid}/query").json()
            steps += 1
        report = client.get(f"/sessions/{sid}/report").json()
        sources = {r["source"] for r in report["log"] if r["type"] == "answer"}
        assert "dataset" in sources
        restricted_by_human = [
            r for r in report["log"]
            if r["type"] == "answer" and r["source"] == "human" and r["query"]["restricted"]
        ]
        assert restricted_by_human == []

    def test_auto_session_equals_cli_semantics(self, tmp_path):
        doc = toy_doc()
        data = tmp_path / "toy.cxt"
        data.write_text(TOY_CXT, encoding="utf-8")
        client = TestClient(create_app())
        response = client.post("/sessions", json={
            "epsilon": 0.1, "delta": 0.1, "seed": 21, "dataset": str(data),
        })
        assert response.status_code == 200
        view = response.json()
        config = LearnerConfig(0.1, 0.1, seed=21)
        direct, _ = pac_horn_approximation(DatasetOracle(doc.family), config)
        assert view["implications"] == len(direct)


class TestAbortAndCaching:
    def test_abort_marks_session(self, client):
        sid = create_manual(client)
        response = client.post(f"/sessions/{sid}/abort")
        assert response.status_code == 200
        assert response.json()["state"] == "aborted"
        again = client.post(f"/sessions/{sid}/abort")
        assert again.status_code == 409
        answer = client.post(f"/sessions/{sid}/answer", json={"accept": True})
        assert answer.status_code == 409
        report = client.get(f"/sessions/{sid}/report").json()
        assert report["report"] is None

    def test_manual_sessions_cache_by_default(self, client):
        doc = toy_doc()
        body = {
            "epsilon": 0.2, "delta": 0.2, "seed": 5,
            "universe": list(doc.universe.names), "answering": "manual",
        }
        sid = client.post("/sessions", json=body).json()["id"]
        state, _ = script_expert(client, sid, doc)
        assert state == "finished"
        report = client.get(f"/sessions/{sid}/report").json()
        cache_answers = [
            r for r in report["log"] if r["type"] == "answer" and r["source"] == "cache"
        ]
        assert cache_answers, "expected some cache-answered queries in a human session"


class TestPersistence:
    def test_finished_session_survives_restart(self, tmp_path):
        state_dir = tmp_path / "state"
        client = TestClient(create_app(state_dir=state_dir))
        doc = toy_doc()
        sid = create_manual(client, labels=doc.universe.names, seed=7)
        state, _ = script_expert(client, sid, doc)
        assert state == "finished"
        before = client.get(f"/sessions/{sid}/hypothesis").json()["implications"]

        revived = TestClient(create_app(state_dir=state_dir))
        view = revived.get(f"/sessions/{sid}")
        assert view.status_code == 200
        assert view.json()["state"] == "finished"
        after = revived.get(f"/sessions/{sid}/hypothesis").json()["implications"]
        assert after == before

    def test_dataset_session_survives_restart(self, tmp_path):
        state_dir = tmp_path / "state"
        data = tmp_path / "toy.cxt"
        data.write_text(TOY_CXT, encoding="utf-8")
        client = TestClient(create_app(state_dir=state_dir))
        view = client.post("/sessions", json={
            "epsilon": 0.3, "delta": 0.3, "seed": 6, "dataset": str(data),
        }).json()
        assert view["state"] == "finished"

        revived = TestClient(create_app(state_dir=state_dir))
        after = revived.get(f"/sessions/{view['id']}").json()
        assert after["state"] == "finished"
        assert after["hypothesis"] == view["hypothesis"]

    def test_aborted_session_restores_as_aborted(self, tmp_path):
        state_dir = tmp_path / "state"
        client = TestClient(create_app(state_dir=state_dir))
        sid = create_manual(client, seed=3)
        client.post(f"/sessions/{sid}/answer", json={"accept": True})
        client.post(f"/sessions/{sid}/abort")

        revived = TestClient(create_app(state_dir=state_dir))
        view = revived.get(f"/sessions/{sid}").json()
        assert view["state"] == "aborted"
        assert revived.post(
            f"/sessions/{sid}/answer", json={"accept": True}
        ).status_code == 409

    def test_awaiting_session_resumes_after_restart(self, tmp_path):
        state_dir = tmp_path / "state"
        client = TestClient(create_app(state_dir=state_dir))
        doc = toy_doc()
        sid = create_manual(client, labels=doc.universe.names, seed=13, epsilon=0.3, delta=0.3)
        # answer only a few queries, then "crash"
        for _ in range(5):
            state = client.get(f"/sessions/{sid}/query").json()
            if state["query"] is None:
                break
            from hornpac.core import Implication, holds_in_data

            q = state["query"]
            premise = doc.universe.make(q["premise"])
            conclusion = (
                BOTTOM if q["conclusion"] == "bottom" else doc.universe.make(q["conclusion"])
            )
            violating = holds_in_data(doc.family, Implication(premise, conclusion))
            body = {"accept": True} if violating is None else {
                "accept": False, "counterexample": list(violating.labels())
            }
            client.post(f"/sessions/{sid}/answer", json=body)

        revived = TestClient(create_app(state_dir=state_dir))
        resumed_state, _ = script_expert(revived, sid, doc)
        assert resumed_state == "finished"
        # the resumed run must agree with an uninterrupted scripted run
        fresh_client = TestClient(create_app())
        fresh = create_manual(
            fresh_client, labels=doc.universe.names, seed=13, epsilon=0.3, delta=0.3
        )
        script_expert(fresh_client, fresh, doc)
        assert (
            revived.get(f"/sessions/{sid}/hypothesis").json()["implications"]
            == fresh_client.get(f"/sessions/{fresh}/hypothesis").json()["implications"]
        )
