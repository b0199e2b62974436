"""Dashboard service integration: entity lifecycle, analytics endpoints,
persistence, and concurrency."""

import json
import re
import threading

import pytest
from fastapi.testclient import TestClient

from muscale.model import document_to_json_dict, serialize_document
from muscale.recognizer import RecognizerConfig, compute_analytics
from muscale.service import ServiceConfig, create_app
from muscale.synthgen import generate

from helpers import corpus_spec, make_doc, make_element

EMPTY_DOC = {
    "title": "empty",
    "key": "empty-doc",
    "id": "d-empty",
    "creator": "tests",
    "settings": {"visibility": "public", "backgroundColor": "#ffffff"},
    "elements": [],
}


@pytest.fixture()
def client(tmp_path):
    app = create_app(ServiceConfig(data_dir=str(tmp_path / "data")))
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def assignment(client):
    course = client.post("/courses", json={"name": "Programming Studio"}).json()
    assignment = client.post(
        f"/courses/{course['id']}/assignments", json={"title": "Deliverable 1"}
    ).json()
    return course, assignment


def submit(client, assignment_id, label, document):
    return client.post(
        f"/assignments/{assignment_id}/submissions",
        json={"studentLabel": label, "document": document},
    )


class TestEntities:
    def test_create_course(self, client):
        r = client.post("/courses", json={"name": "Interaction Design", "term": "Spring"})
        assert r.status_code == 201
        body = r.json()
        assert body["id"].startswith("c-")
        assert body["name"] == "Interaction Design"
        assert client.get("/courses").json()[0]["id"] == body["id"]

    def test_assignment_unknown_course_404(self, client):
        r = client.post("/courses/nope/assignments", json={"title": "x"})
        assert r.status_code == 404
        body = r.json()
        assert set(body) == {"code", "message", "path"}
        assert body["code"] == "not_found"

    def test_invalid_payload_422(self, client):
        r = client.post("/courses", json={"term": "missing name"})
        assert r.status_code == 422
        assert r.json()["code"] == "invalid_payload"

    def test_idempotent_create(self, client):
        payload = {"name": "Studio", "idempotencyKey": "abc-1"}
        first = client.post("/courses", json=payload).json()
        second = client.post("/courses", json=payload).json()
        assert first["id"] == second["id"]
        assert len(client.get("/courses").json()) == 1

    def test_idempotent_assignment(self, client, assignment):
        course, _ = assignment
        payload = {"title": "Final", "idempotencyKey": "k9"}
        a1 = client.post(f"/courses/{course['id']}/assignments", json=payload).json()
        a2 = client.post(f"/courses/{course['id']}/assignments", json=payload).json()
        assert a1["id"] == a2["id"]

    def test_get_assignment(self, client, assignment):
        course, a = assignment
        got = client.get(f"/assignments/{a['id']}").json()
        assert got == {
            "id": a["id"],
            "courseId": course["id"],
            "title": "Deliverable 1",
            "dueDate": None,
        }

    def test_list_assignments(self, client, assignment):
        course, a = assignment
        rows = client.get(f"/courses/{course['id']}/assignments").json()
        assert [row["id"] for row in rows] == [a["id"]]


class TestSubmissions:
    def test_empty_document_analytics(self, client, assignment):
        _, a = assignment
        r = submit(client, a["id"], "student-01", EMPTY_DOC)
        assert r.status_code == 201
        analytics = r.json()["analytics"]
        assert analytics["numScales"] == 0
        assert analytics["numClusters"] == 0
        assert analytics["fluency"] == {"elementCount": 0, "wordCount": 0, "imageCount": 0}

    def test_nested_triads_analytics(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        r = submit(client, a["id"], "student-02", document_to_json_dict(doc))
        body = r.json()
        assert (body["analytics"]["numScales"], body["analytics"]["numClusters"]) == (3, 7)
        assert body["documentKey"] == doc.key

    def test_invalid_document_422_with_path(self, client, assignment):
        _, a = assignment
        bad = {**EMPTY_DOC, "elements": [{"id": "e", "kind": "image"}]}
        r = submit(client, a["id"], "student-03", bad)
        assert r.status_code == 422
        assert r.json()["path"] == "elements[0].width"

    def test_unknown_assignment_404(self, client):
        assert submit(client, "a-missing", "s", EMPTY_DOC).status_code == 404

    def test_resubmission_supersedes_with_history(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        first = submit(client, a["id"], "student-04", EMPTY_DOC).json()
        second = submit(client, a["id"], "student-04", document_to_json_dict(doc)).json()
        assert second["id"] == first["id"]
        assert second["version"] == 2
        assert len(second["history"]) == 1
        assert second["history"][0]["contentHash"] == first["contentHash"]
        assert second["analytics"] != first["analytics"]
        rows = client.get(f"/assignments/{a['id']}/submissions").json()
        assert len(rows) == 1
        assert rows[0]["submission"]["version"] == 2

    def test_list_empty(self, client, assignment):
        _, a = assignment
        assert client.get(f"/assignments/{a['id']}/submissions").json() == []

    def test_list_order_and_stability(self, client, assignment):
        _, a = assignment
        for label in ("zeta", "alpha", "mid"):
            doc = {**EMPTY_DOC, "key": f"doc-{label}"}
            submit(client, a["id"], label, doc)
        rows1 = client.get(f"/assignments/{a['id']}/submissions").json()
        rows2 = client.get(f"/assignments/{a['id']}/submissions").json()
        assert rows1 == rows2
        assert [r["submission"]["studentLabel"] for r in rows1] == ["alpha", "mid", "zeta"]

    def test_oversized_element_count_413(self, client, assignment):
        _, a = assignment
        doc = {**EMPTY_DOC, "elements": [{"id": f"e{i}"} for i in range(10_001)]}
        assert submit(client, a["id"], "bulk", doc).status_code == 413

    def test_oversized_body_413(self, client, assignment):
        _, a = assignment
        doc = {**EMPTY_DOC, "padding": "x" * (10 * 1024 * 1024 + 1)}
        assert submit(client, a["id"], "bulk", doc).status_code == 413


class TestDerivedEndpoints:
    def test_analytics_bytes_match_recomputation(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        sid = submit(client, a["id"], "s1", document_to_json_dict(doc)).json()["id"]
        served = client.get(f"/submissions/{sid}/analytics").content
        assert served == compute_analytics(doc).canonical_bytes()

    def test_document_endpoint_returns_canonical_blob(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        sid = submit(client, a["id"], "s1", document_to_json_dict(doc)).json()["id"]
        assert client.get(f"/submissions/{sid}/document").content == serialize_document(doc)

    def test_hierarchy_single_element(self, client, assignment):
        _, a = assignment
        doc = {
            **EMPTY_DOC,
            "elements": [
                {
                    "id": "only",
                    "kind": "image",
                    "width": 10,
                    "height": 10,
                    "transforms": {"position": {"x": 0, "y": 0}, "scale": 1, "rotation": 0},
                }
            ],
        }
        sid = submit(client, a["id"], "s1", doc).json()["id"]
        hierarchy = client.get(f"/submissions/{sid}/hierarchy").json()
        assert hierarchy["numScales"] == 1
        assert len(hierarchy["clusters"]) == 1
        assert hierarchy["clusters"][0]["parentClusterId"] is None
        assert hierarchy["clusters"][0]["memberElementIds"] == ["only"]

    def test_overlay_region_count(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        sid = submit(client, a["id"], "s1", document_to_json_dict(doc)).json()["id"]
        overlay = client.get(f"/submissions/{sid}/overlay").json()
        analytics = client.get(f"/submissions/{sid}/analytics").json()
        assert len(overlay["regions"]) == analytics["numClusters"]
        assert len(overlay["timeline"]) == analytics["numClusters"]

    def test_svg_highlight_narrows_view_box(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        sid = submit(client, a["id"], "s1", document_to_json_dict(doc)).json()["id"]
        full = client.get(f"/submissions/{sid}/overlay.svg").content
        deep = client.get(f"/submissions/{sid}/overlay.svg?highlightCluster=6").content

        def view_width(svg):
            return float(re.search(rb'viewBox="[-\d.]+ [-\d.]+ ([\d.]+)', svg).group(1))

        assert view_width(deep) < view_width(full) / 4
        r = client.get(f"/submissions/{sid}/overlay.svg?highlightCluster=777")
        assert r.status_code == 422
        assert r.json()["code"] == "unknown_cluster"

    def test_animated_svg_steps(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        sid = submit(client, a["id"], "s1", document_to_json_dict(doc)).json()["id"]
        svg = client.get(f"/submissions/{sid}/overlay.svg?animated=true").content
        assert svg.count(b"<animate ") == 7

    def test_submission_detail(self, client, assignment, nested_triads):
        _, a = assignment
        doc, _ = nested_triads
        created = submit(client, a["id"], "s1", document_to_json_dict(doc)).json()
        got = client.get(f"/submissions/{created['id']}").json()
        assert got == created


class TestPersistence:
    def test_restart_reproduces_state(self, tmp_path, nested_triads):
        data_dir = str(tmp_path / "data")
        cfg = ServiceConfig(data_dir=data_dir)
        doc, _ = nested_triads
        with TestClient(create_app(cfg)) as c1:
            course = c1.post("/courses", json={"name": "Studio"}).json()
            a = c1.post(f"/courses/{course['id']}/assignments", json={"title": "D1"}).json()
            submit(c1, a["id"], "amy", document_to_json_dict(doc))
            submit(c1, a["id"], "amy", EMPTY_DOC)  # version 2
            submit(c1, a["id"], "bob", EMPTY_DOC)
            before_courses = c1.get("/courses").content
            before_rows = c1.get(f"/assignments/{a['id']}/submissions").content

        with TestClient(create_app(cfg)) as c2:
            assert c2.get("/courses").content == before_courses
            assert c2.get(f"/assignments/{a['id']}/submissions").content == before_rows
            amy = c2.get(f"/assignments/{a['id']}/submissions").json()[0]
            assert amy["submission"]["version"] == 2

    def test_config_change_invalidates_cached_analytics(self, tmp_path, nested_triads):
        data_dir = str(tmp_path / "data")
        doc, _ = nested_triads
        with TestClient(create_app(ServiceConfig(data_dir=data_dir))) as c1:
            course = c1.post("/courses", json={"name": "Studio"}).json()
            a = c1.post(f"/courses/{course['id']}/assignments", json={"title": "D1"}).json()
            sid = submit(c1, a["id"], "amy", document_to_json_dict(doc)).json()["id"]
            default_bytes = c1.get(f"/submissions/{sid}/analytics").content

        looser = ServiceConfig(data_dir=data_dir, zoom_step=2.0)
        with TestClient(create_app(looser)) as c2:
            served = c2.get(f"/submissions/{sid}/analytics").content
            assert served != default_bytes
            expected = compute_analytics(doc, RecognizerConfig(zoom_step=2.0)).canonical_bytes()
            assert served == expected

    def test_cache_hit_equals_recomputation(self, tmp_path, nested_triads):
        doc, _ = nested_triads
        with TestClient(create_app(ServiceConfig(data_dir=str(tmp_path / "d")))) as c:
            course = c.post("/courses", json={"name": "S"}).json()
            a = c.post(f"/courses/{course['id']}/assignments", json={"title": "D"}).json()
            sid = submit(c, a["id"], "amy", document_to_json_dict(doc)).json()["id"]
            first = c.get(f"/submissions/{sid}/analytics").content  # computes
            second = c.get(f"/submissions/{sid}/analytics").content  # cache hit
            assert first == second == compute_analytics(doc).canonical_bytes()


class TestConcurrency:
    def test_parallel_submissions_consistent(self, client, assignment):
        _, a = assignment
        errors = []

        def submit_many(prefix):
            try:
                for i in range(5):
                    doc, _ = generate(corpus_spec(i, base_seed=3000))
                    r = submit(client, a["id"], f"{prefix}-{i}", document_to_json_dict(doc))
                    assert r.status_code == 201
            except Exception as exc:  # noqa: BLE001
                errors.append(exc)

        def read_many():
            try:
                for _ in range(10):
                    rows = client.get(f"/assignments/{a['id']}/submissions").json()
                    for row in rows:
                        assert row["analytics"]["numClusters"] >= 1
            except Exception as exc:  # noqa: BLE001
                errors.append(exc)

        threads = [
            threading.Thread(target=submit_many, args=("alpha",)),
            threading.Thread(target=submit_many, args=("beta",)),
            threading.Thread(target=read_many),
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        rows = client.get(f"/assignments/{a['id']}/submissions").json()
        assert len(rows) == 10
