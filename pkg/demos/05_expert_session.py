"""Interactive expert sessions: suspend the learner at each query, answer over HTTP.

This demo drives the session API in-process.  Against a live server
(``hornpac serve --port 8000``), the same requests work over the network,
and the browser UI under frontend/ offers the human-facing flow.

Run with: python demos/05_expert_session.py
"""

from fastapi.testclient import TestClient

from hornpac.core import BOTTOM, Implication, holds_in_data
from hornpac.io import load_context, packaged_dataset_path, packaged_scaling_path
from hornpac.service import create_app

doc = load_context(packaged_dataset_path("zoo"), packaged_scaling_path("zoo"))
client = TestClient(create_app(default_dataset=doc))

# Auto mode: the attached dataset answers everything; a human just watches.
view = client.post("/sessions", json={
    "epsilon": 0.3, "delta": 0.3, "seed": 1, "dataset": "default",
}).json()
print(f"auto session finished with {view['implications']} implications; "
      f"queries by source: {view['queries']['by_source']}")

# Manual mode: every query suspends the learner until an expert answers.
# Here a script plays the expert, answering faithfully from the zoo data.
universe = doc.universe
view = client.post("/sessions", json={
    "epsilon": 0.4, "delta": 0.4, "seed": 5,
    "universe": list(universe.names), "answering": "manual",
}).json()
sid = view["id"]
answers = 0
while view["pending_query"] is not None:
    q = view["pending_query"]
    premise = universe.make(q["premise"])
    conclusion = BOTTOM if q["conclusion"] == "bottom" else universe.make(q["conclusion"])
    witness = holds_in_data(doc.family, Implication(premise, conclusion))
    if witness is None:
        body = {"accept": True}
    else:
        body = {"accept": False, "counterexample": list(witness.labels())}
    view = client.post(f"/sessions/{sid}/answer", json=body).json()
    answers += 1

print(f"manual session: {answers} expert answers, state={view['state']}, "
      f"{view['implications']} implications")
report = client.get(f"/sessions/{sid}/report").json()
sources = {}
for record in report["log"]:
    if record["type"] == "answer":
        sources[record["source"]] = sources.get(record["source"], 0) + 1
print("answer log by source:", sources)
print("report:", {k: report["report"][k] for k in
                  ("implications", "rounds", "restricted_queries", "cache_hits")})
