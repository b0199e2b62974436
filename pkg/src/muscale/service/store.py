"""File-backed store for courses, assignments, and submissions.

Everything lives in one data directory:

    blobs/<sha256>.json   content-addressed canonical document bytes
    entities.log          append-only JSON lines, replayed at startup

Writes are serialized through a single lock and fsynced line by line, so a
crash can lose at most the line being written and never corrupts earlier
state. Readers take the same lock only long enough to snapshot entity
state; analytics are computed outside the lock from immutable inputs and
memoized by (content hash, config digest).
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from ..canonical import canonical_json_bytes, sha256_hex
from ..model import Document, parse_document, serialize_document
from ..recognizer import AnalyticsRecord, RecognizerConfig, compute_analytics


class NotFound(Exception):
    def __init__(self, kind: str, entity_id: str):
        self.kind = kind
        self.entity_id = entity_id
        super().__init__(f"{kind} {entity_id!r} not found")


@dataclass
class CourseRec:
    id: str
    name: str
    term: str
    instructor_names: list[str]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "term": self.term,
            "instructorNames": list(self.instructor_names),
        }


@dataclass
class AssignmentRec:
    id: str
    course_id: str
    title: str
    due_date: str | None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "courseId": self.course_id,
            "title": self.title,
            "dueDate": self.due_date,
        }


@dataclass
class SubmissionVersion:
    version: int
    content_hash: str
    document_key: str
    ingested_at: str

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "contentHash": self.content_hash,
            "documentKey": self.document_key,
            "ingestedAt": self.ingested_at,
        }


@dataclass
class SubmissionRec:
    """One submission slot per (assignment, student); resubmission bumps the
    version and retains earlier versions as history."""

    id: str
    assignment_id: str
    student_label: str
    content_hash: str
    document_key: str
    ingested_at: str
    version: int = 1
    history: list[SubmissionVersion] = field(default_factory=list)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "assignmentId": self.assignment_id,
            "studentLabel": self.student_label,
            "contentHash": self.content_hash,
            "documentKey": self.document_key,
            "ingestedAt": self.ingested_at,
            "version": self.version,
            "history": [h.to_json_dict() for h in self.history],
        }


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class Store:
    def __init__(self, data_dir: str | Path, config: RecognizerConfig | None = None):
        self.data_dir = Path(data_dir)
        self.config = config or RecognizerConfig()
        self.blob_dir = self.data_dir / "blobs"
        self.log_path = self.data_dir / "entities.log"
        self.blob_dir.mkdir(parents=True, exist_ok=True)

        self._lock = threading.RLock()
        self._seq = 0
        self.courses: dict[str, CourseRec] = {}
        self.assignments: dict[str, AssignmentRec] = {}
        self.submissions: dict[str, SubmissionRec] = {}
        self._by_student: dict[tuple[str, str], str] = {}  # (assignment, label) -> id
        self._idempotency: dict[tuple[str, str], str] = {}  # (kind, key) -> id
        self._analytics_cache: dict[tuple[str, str], bytes] = {}

        self._replay()
        self._log_file = open(self.log_path, "ab")

    # -- log machinery ------------------------------------------------------

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        with open(self.log_path, "rb") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue  # trailing torn write from a crash
                self._apply(entry)
                self._seq = max(self._seq, entry.get("seq", 0))

    def _append(self, entry: dict[str, Any]) -> None:
        self._seq += 1
        entry = {"seq": self._seq, **entry}
        self._log_file.write(canonical_json_bytes(entry) + b"\n")
        self._log_file.flush()
        os.fsync(self._log_file.fileno())
        self._apply(entry)

    def _apply(self, entry: dict[str, Any]) -> None:
        op = entry["op"]
        data = entry["data"]
        if op == "course":
            rec = CourseRec(
                id=data["id"],
                name=data["name"],
                term=data["term"],
                instructor_names=list(data["instructorNames"]),
            )
            self.courses[rec.id] = rec
        elif op == "assignment":
            rec = AssignmentRec(
                id=data["id"],
                course_id=data["courseId"],
                title=data["title"],
                due_date=data["dueDate"],
            )
            self.assignments[rec.id] = rec
        elif op == "submission":
            sub = self.submissions.get(data["id"])
            version = SubmissionVersion(
                version=data["version"],
                content_hash=data["contentHash"],
                document_key=data["documentKey"],
                ingested_at=data["ingestedAt"],
            )
            if sub is None:
                sub = SubmissionRec(
                    id=data["id"],
                    assignment_id=data["assignmentId"],
                    student_label=data["studentLabel"],
                    content_hash=version.content_hash,
                    document_key=version.document_key,
                    ingested_at=version.ingested_at,
                    version=version.version,
                )
                self.submissions[sub.id] = sub
                self._by_student[(sub.assignment_id, sub.student_label)] = sub.id
            else:
                sub.history.append(
                    SubmissionVersion(
                        version=sub.version,
                        content_hash=sub.content_hash,
                        document_key=sub.document_key,
                        ingested_at=sub.ingested_at,
                    )
                )
                sub.content_hash = version.content_hash
                sub.document_key = version.document_key
                sub.ingested_at = version.ingested_at
                sub.version = version.version
        if key := entry.get("idempotencyKey"):
            self._idempotency[(op, key)] = data["id"]

    def close(self) -> None:
        with self._lock:
            self._log_file.flush()
            os.fsync(self._log_file.fileno())
            self._log_file.close()

    # -- blobs and analytics -------------------------------------------------

    def _blob_path(self, content_hash: str) -> Path:
        return self.blob_dir / f"{content_hash}.json"

    def _store_blob(self, content_hash: str, data: bytes) -> None:
        path = self._blob_path(content_hash)
        if path.exists():
            return
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(data)
        tmp.replace(path)

    def load_document_bytes(self, content_hash: str) -> bytes:
        path = self._blob_path(content_hash)
        if not path.exists():
            raise NotFound("blob", content_hash)
        return path.read_bytes()

    def load_document(self, content_hash: str) -> Document:
        return parse_document(self.load_document_bytes(content_hash))

    def analytics_bytes(self, content_hash: str) -> bytes:
        """Canonical analytics JSON for a stored blob under the current
        config. Cache hits are byte-equal to recomputation by construction:
        the cache key pins both inputs of the pure computation."""
        key = (content_hash, self.config.digest())
        cached = self._analytics_cache.get(key)
        if cached is not None:
            return cached
        record = compute_analytics(self.load_document(content_hash), self.config)
        data = record.canonical_bytes()
        self._analytics_cache[key] = data
        return data

    def analytics_record(self, content_hash: str) -> AnalyticsRecord:
        return compute_analytics(self.load_document(content_hash), self.config)

    # -- entity operations ----------------------------------------------------

    def create_course(
        self,
        name: str,
        term: str = "",
        instructor_names: list[str] | None = None,
        idempotency_key: str | None = None,
    ) -> CourseRec:
        with self._lock:
            if idempotency_key and ("course", idempotency_key) in self._idempotency:
                return self.courses[self._idempotency[("course", idempotency_key)]]
            rec = CourseRec(
                id=f"c-{uuid.uuid4().hex[:12]}",
                name=name,
                term=term,
                instructor_names=instructor_names or [],
            )
            self._append(
                {
                    "op": "course",
                    "data": rec.to_json_dict(),
                    "idempotencyKey": idempotency_key,
                }
            )
            return rec

    def list_courses(self) -> list[CourseRec]:
        with self._lock:
            return sorted(self.courses.values(), key=lambda c: (c.name, c.id))

    def create_assignment(
        self,
        course_id: str,
        title: str,
        due_date: str | None = None,
        idempotency_key: str | None = None,
    ) -> AssignmentRec:
        with self._lock:
            if course_id not in self.courses:
                raise NotFound("course", course_id)
            if idempotency_key and ("assignment", idempotency_key) in self._idempotency:
                return self.assignments[self._idempotency[("assignment", idempotency_key)]]
            rec = AssignmentRec(
                id=f"a-{uuid.uuid4().hex[:12]}",
                course_id=course_id,
                title=title,
                due_date=due_date,
            )
            self._append(
                {
                    "op": "assignment",
                    "data": rec.to_json_dict(),
                    "idempotencyKey": idempotency_key,
                }
            )
            return rec

    def get_assignment(self, assignment_id: str) -> AssignmentRec:
        with self._lock:
            if assignment_id not in self.assignments:
                raise NotFound("assignment", assignment_id)
            return self.assignments[assignment_id]

    def list_assignments(self, course_id: str) -> list[AssignmentRec]:
        with self._lock:
            if course_id not in self.courses:
                raise NotFound("course", course_id)
            rows = [a for a in self.assignments.values() if a.course_id == course_id]
            return sorted(rows, key=lambda a: (a.title, a.id))

    def submit_document(
        self, assignment_id: str, student_label: str, doc: Document
    ) -> SubmissionRec:
        """Store the blob and the submission entity; analytics are computed
        synchronously by the caller via analytics_bytes."""
        blob = serialize_document(doc)
        content_hash = sha256_hex(blob)
        with self._lock:
            if assignment_id not in self.assignments:
                raise NotFound("assignment", assignment_id)
            self._store_blob(content_hash, blob)
            existing_id = self._by_student.get((assignment_id, student_label))
            if existing_id is None:
                sub_id = f"s-{uuid.uuid4().hex[:12]}"
                version = 1
            else:
                sub_id = existing_id
                version = self.submissions[existing_id].version + 1
            self._append(
                {
                    "op": "submission",
                    "data": {
                        "id": sub_id,
                        "assignmentId": assignment_id,
                        "studentLabel": student_label,
                        "contentHash": content_hash,
                        "documentKey": doc.key,
                        "ingestedAt": _now_iso(),
                        "version": version,
                    },
                }
            )
            return self.submissions[sub_id]

    def get_submission(self, submission_id: str) -> SubmissionRec:
        with self._lock:
            if submission_id not in self.submissions:
                raise NotFound("submission", submission_id)
            return self.submissions[submission_id]

    def list_submissions(self, assignment_id: str) -> list[SubmissionRec]:
        with self._lock:
            if assignment_id not in self.assignments:
                raise NotFound("assignment", assignment_id)
            rows = [
                s for s in self.submissions.values() if s.assignment_id == assignment_id
            ]
            return sorted(rows, key=lambda s: (s.student_label, s.ingested_at))
