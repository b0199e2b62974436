#!/usr/bin/env python3
"""Capture API payloads from the real dashboard service into test fixtures.

Run from the repo root after installing the Python package:

    python3 frontend/scripts/capture-fixtures.py

Rewrites frontend/tests/fixtures/*.json. The UI contract tests compare
view models against these byte-for-byte, so regenerate them whenever the
service wire format changes intentionally.
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from muscale.model import document_to_json_dict
from muscale.service import ServiceConfig, create_app
from muscale.synthgen import nested_triads_spec, broad_middle_spec, generate

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> int:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    triads_doc, _ = generate(nested_triads_spec())
    broad_doc, _ = generate(broad_middle_spec())
    empty_doc = {
        "title": "blank start",
        "key": "blank",
        "id": "d-blank",
        "creator": "cleo",
        "settings": {"visibility": "public", "backgroundColor": "#ffffff"},
        "elements": [],
    }

    with tempfile.TemporaryDirectory() as tmp:
        with TestClient(create_app(ServiceConfig(data_dir=tmp))) as client:
            course = client.post(
                "/courses", json={"name": "Programming Studio", "term": "Spring"}
            ).json()
            assignment = client.post(
                f"/courses/{course['id']}/assignments", json={"title": "Deliverable 1"}
            ).json()
            aid = assignment["id"]

            subs = {}
            for label, doc in (
                ("ada", document_to_json_dict(triads_doc)),
                ("ben", document_to_json_dict(broad_doc)),
                ("cleo", empty_doc),
            ):
                r = client.post(
                    f"/assignments/{aid}/submissions",
                    json={"studentLabel": label, "document": doc},
                )
                r.raise_for_status()
                subs[label] = r.json()["id"]

            fixtures = {
                "courses.json": client.get("/courses").json(),
                "assignments.json": client.get(f"/courses/{course['id']}/assignments").json(),
                "submissions.json": client.get(f"/assignments/{aid}/submissions").json(),
                "ada-analytics.json": client.get(f"/submissions/{subs['ada']}/analytics").json(),
                "ada-overlay.json": client.get(f"/submissions/{subs['ada']}/overlay").json(),
                "ada-hierarchy.json": client.get(f"/submissions/{subs['ada']}/hierarchy").json(),
                "ada-document.json": client.get(f"/submissions/{subs['ada']}/document").json(),
                "ids.json": {"courseId": course["id"], "assignmentId": aid, "submissions": subs},
            }

    for name, payload in fixtures.items():
        path = FIXTURE_DIR / name
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
