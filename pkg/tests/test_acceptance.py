"""Acceptance suite.

One test per acceptance criterion, each printing a PASS/FAIL line. Run with

    pytest tests/test_acceptance.py -v -s
"""

import functools
import json
import time
from dataclasses import replace

import pytest
from fastapi.testclient import TestClient

from muscale.annotator import RenderOptions, build_overlay, render_svg
from muscale.cli import main as cli_main
from muscale.canonical import canonical_json_bytes
from muscale.model import (
    Point,
    Transforms,
    parse_document,
    serialize_document,
    document_to_json_dict,
)
from muscale.recognizer import (
    RecognizerConfig,
    assign_scale_levels,
    build_hierarchy,
    cluster_at_rank,
    compute_analytics,
)
from muscale.service import ServiceConfig, create_app
from muscale.synthgen import nested_triads_spec, broad_middle_spec, generate, generate_unconstrained

from helpers import brute_force_components, corpus_spec, make_doc, make_element


def criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"\nACCEPTANCE {name}: FAIL")
                raise
            print(f"\nACCEPTANCE {name}: PASS")
            return result

        return run

    return wrap


def hierarchies_equal(recognized, expected):
    return (
        recognized.num_scales == expected.num_scales
        and recognized.element_levels == expected.element_levels
        and [
            (c.id, c.scale_rank, c.parent_cluster_id, c.member_element_ids)
            for c in recognized.clusters
        ]
        == [
            (c.id, c.scale_rank, c.parent_cluster_id, c.member_element_ids)
            for c in expected.clusters
        ]
    )


@criterion("oracle-exact-recovery")
def test_oracle_exact_recovery():
    """200 seeded documents, exact recovery, < 20 s total, < 1 s each."""
    recovered = 0
    worst = 0.0
    started = time.perf_counter()
    for i in range(200):
        t0 = time.perf_counter()
        doc, truth = generate(corpus_spec(i))
        recognized = build_hierarchy(doc)
        worst = max(worst, time.perf_counter() - t0)
        assert len(doc.elements) <= 500
        assert len(truth.expected.clusters) <= 50
        assert truth.expected.num_scales <= 4
        if (
            hierarchies_equal(recognized, truth.expected)
            and recognized.clusters_per_scale() == truth.expected.clusters_per_scale()
        ):
            recovered += 1
    elapsed = time.perf_counter() - started
    assert recovered == 200, f"only {recovered}/200 recovered"
    assert elapsed < 20.0, f"corpus took {elapsed:.1f}s"
    assert worst < 1.0, f"slowest document took {worst:.2f}s"


@criterion("preset-fixtures")
def test_preset_fixtures():
    doc3, _ = generate(nested_triads_spec())
    record3 = compute_analytics(doc3)
    assert record3.num_scales == 3
    assert record3.clusters_per_scale == (1, 3, 3)
    assert record3.num_clusters == 7

    doc4, _ = generate(broad_middle_spec())
    record4 = compute_analytics(doc4)
    assert record4.num_scales == 3
    assert record4.clusters_per_scale == (1, 7, 2)
    assert record4.num_clusters == 10


@criterion("brute-force-equivalence")
def test_brute_force_equivalence():
    """Sweep-based clustering equals the O(n^2) union-find oracle on 100
    unconstrained documents."""
    cfg = RecognizerConfig()
    for i in range(100):
        doc = generate_unconstrained(50_000 + i, 20 + (i * 7) % 281)
        assert len(doc.elements) <= 300
        levels = assign_scale_levels(doc, cfg)
        for rank in range(1, max(levels.values()) + 1):
            fast = cluster_at_rank(doc, levels, rank, cfg)
            oracle = brute_force_components(doc, levels, rank, cfg)
            assert fast == oracle, f"doc {i} rank {rank} diverges from oracle"


def _translate(doc, dx, dy):
    return replace(
        doc,
        elements=tuple(
            replace(
                e,
                transforms=replace(
                    e.transforms,
                    position=Point(e.transforms.position.x + dx, e.transforms.position.y + dy),
                ),
            )
            for e in doc.elements
        ),
    )


def _scale_uniform(doc, gamma):
    return replace(
        doc,
        elements=tuple(
            replace(
                e,
                transforms=Transforms(
                    position=Point(
                        e.transforms.position.x * gamma, e.transforms.position.y * gamma
                    ),
                    scale=e.transforms.scale * gamma,
                    rotation=e.transforms.rotation,
                ),
            )
            for e in doc.elements
        ),
    )


def _core(record):
    data = record.to_json_dict()
    data.pop("contentHash")  # position-bearing bytes legitimately change
    return data


@criterion("invariance-suite")
def test_invariance_suite():
    """Translation, uniform-scale, permutation, and determinism: 560 cases,
    zero failures."""
    cases = 0
    for i in range(70):
        doc, _ = generate(corpus_spec(i, base_seed=7100))
        base_record = compute_analytics(doc)
        base_hierarchy = build_hierarchy(doc)
        memberships = [c.member_element_ids for c in base_hierarchy.clusters]

        for dx, dy in ((512.25, -77.5), (-1e5, 42.0)):
            assert _core(compute_analytics(_translate(doc, dx, dy))) == _core(base_record)
            cases += 1

        for gamma in (0.01, 1.0, 137.0):
            h = build_hierarchy(_scale_uniform(doc, gamma))
            assert h.num_scales == base_hierarchy.num_scales
            assert h.clusters_per_scale() == base_hierarchy.clusters_per_scale()
            assert h.element_levels == base_hierarchy.element_levels
            assert [c.member_element_ids for c in h.clusters] == memberships
            cases += 1

        shuffled = replace(doc, elements=tuple(reversed(doc.elements)))
        assert _core(compute_analytics(shuffled)) == _core(base_record)
        assert [c.member_element_ids for c in build_hierarchy(shuffled).clusters] == memberships
        cases += 1

        again = build_hierarchy(doc)
        assert again == base_hierarchy
        assert [c.id for c in again.clusters] == [c.id for c in base_hierarchy.clusters]
        cases += 1

        overlay = build_overlay(doc, base_hierarchy)
        opts = RenderOptions(animated=(i % 2 == 0))
        assert render_svg(doc, overlay, opts) == render_svg(doc, overlay, opts)
        cases += 1

    assert cases >= 500, f"only {cases} invariance cases executed"


@criterion("trivial-anchors")
def test_trivial_anchors():
    empty = compute_analytics(make_doc([]))
    assert (empty.num_scales, empty.num_clusters) == (0, 0)

    single = compute_analytics(make_doc([make_element("a", width=30, height=30)]))
    assert (single.num_scales, single.num_clusters) == (1, 1)
    assert single.clusters_per_scale == (1,)

    z = RecognizerConfig().zoom_step
    c0 = 270.0
    ladder = make_doc(
        [
            make_element(f"e{k}", x=k * 1e6, width=c0 / z**k, height=c0 / z**k)
            for k in range(3)
        ]
    )
    record = compute_analytics(ladder)
    assert record.num_scales == 3


@criterion("round-trip-and-canonical-form")
def test_round_trip_and_canonical_form(tmp_path, capsys):
    """parse/serialize identity over the whole corpus, and CLI analytics
    byte-identical to service analytics for 50 ingested submissions."""
    # identity over margin corpus, preset fixtures, and unconstrained docs
    docs = [generate(corpus_spec(i))[0] for i in range(50)]
    docs += [generate(nested_triads_spec())[0], generate(broad_middle_spec())[0]]
    docs += [generate_unconstrained(i, 30) for i in range(10)]
    for doc in docs:
        blob = serialize_document(doc)
        assert parse_document(blob) == doc
        assert serialize_document(parse_document(blob)) == blob

    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for i, doc in enumerate(docs[:50]):
        (corpus / f"doc-{i:03d}.json").write_bytes(serialize_document(doc))

    code = cli_main(["analyze", str(corpus)])
    out = capsys.readouterr().out
    assert code == 0
    cli_by_hash = {
        row["analytics"]["contentHash"]: canonical_json_bytes(row["analytics"])
        for row in json.loads(out)
    }
    assert len(cli_by_hash) == 50

    app = create_app(ServiceConfig(data_dir=str(tmp_path / "data")))
    with TestClient(app) as client:
        course = client.post("/courses", json={"name": "Studio"}).json()
        a = client.post(f"/courses/{course['id']}/assignments", json={"title": "D1"}).json()
        for i, doc in enumerate(docs[:50]):
            r = client.post(
                f"/assignments/{a['id']}/submissions",
                json={"studentLabel": f"student-{i:03d}", "document": document_to_json_dict(doc)},
            )
            assert r.status_code == 201
        rows = client.get(f"/assignments/{a['id']}/submissions").json()
        assert len(rows) == 50
        for row in rows:
            sid = row["submission"]["id"]
            served = client.get(f"/submissions/{sid}/analytics").content
            assert served == cli_by_hash[row["submission"]["contentHash"]]


@criterion("service-integration")
def test_service_integration(tmp_path):
    """Course -> assignment -> 50 submissions -> 50 rows; resubmission
    history; byte-identical state after restart."""
    cfg = ServiceConfig(data_dir=str(tmp_path / "data"))
    docs = [generate(corpus_spec(i, base_seed=7700))[0] for i in range(50)]

    with TestClient(create_app(cfg)) as client:
        course = client.post("/courses", json={"name": "Programming Studio"}).json()
        a = client.post(
            f"/courses/{course['id']}/assignments", json={"title": "Deliverable"}
        ).json()
        for i, doc in enumerate(docs):
            r = client.post(
                f"/assignments/{a['id']}/submissions",
                json={"studentLabel": f"student-{i:03d}", "document": document_to_json_dict(doc)},
            )
            assert r.status_code == 201
        rows = client.get(f"/assignments/{a['id']}/submissions").json()
        assert len(rows) == 50
        for row in rows:
            assert row["analytics"]["numClusters"] >= 1
            assert row["analytics"]["contentHash"] == row["submission"]["contentHash"]

        resub = client.post(
            f"/assignments/{a['id']}/submissions",
            json={"studentLabel": "student-000", "document": document_to_json_dict(docs[1])},
        ).json()
        assert resub["version"] == 2
        assert len(resub["history"]) == 1

        before_courses = client.get("/courses").content
        before_rows = client.get(f"/assignments/{a['id']}/submissions").content
        sample_sid = rows[7]["submission"]["id"]
        before_analytics = client.get(f"/submissions/{sample_sid}/analytics").content
        before_svg = client.get(f"/submissions/{sample_sid}/overlay.svg").content

    with TestClient(create_app(cfg)) as client:
        assert client.get("/courses").content == before_courses
        assert client.get(f"/assignments/{a['id']}/submissions").content == before_rows
        assert client.get(f"/submissions/{sample_sid}/analytics").content == before_analytics
        assert client.get(f"/submissions/{sample_sid}/overlay.svg").content == before_svg
        recovered = client.get(f"/assignments/{a['id']}/submissions").json()
        amy = [r for r in recovered if r["submission"]["studentLabel"] == "student-000"]
        assert amy[0]["submission"]["version"] == 2
