"""Pydantic request/response models for the dashboard API.

Wire names are camelCase to match the document format and the analytics
JSON. Analytics payloads themselves are emitted as canonical bytes by the
endpoints, not through these models.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class CourseCreate(BaseModel):
    name: str = Field(min_length=1)
    term: str = ""
    instructorNames: list[str] = []
    idempotencyKey: Optional[str] = None


class CourseOut(BaseModel):
    id: str
    name: str
    term: str
    instructorNames: list[str]


class AssignmentCreate(BaseModel):
    title: str = Field(min_length=1)
    dueDate: Optional[str] = None
    idempotencyKey: Optional[str] = None


class AssignmentOut(BaseModel):
    id: str
    courseId: str
    title: str
    dueDate: Optional[str]


class SubmissionCreate(BaseModel):
    studentLabel: str = Field(min_length=1)
    document: dict[str, Any]


class SubmissionVersionOut(BaseModel):
    version: int
    contentHash: str
    documentKey: str
    ingestedAt: str


class SubmissionOut(BaseModel):
    id: str
    assignmentId: str
    studentLabel: str
    documentKey: str
    contentHash: str
    ingestedAt: str
    version: int
    history: list[SubmissionVersionOut]
    analytics: dict[str, Any]


class SubmissionIdentity(BaseModel):
    id: str
    assignmentId: str
    studentLabel: str
    documentKey: str
    contentHash: str
    ingestedAt: str
    version: int


class SubmissionRow(BaseModel):
    submission: SubmissionIdentity
    analytics: dict[str, Any]


class ErrorBody(BaseModel):
    code: str
    message: str
    path: str
