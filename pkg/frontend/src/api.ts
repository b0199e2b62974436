// Thin typed client for the dashboard service. All data shown in the UI
// flows through these calls.

import type {
  AnalyticsRecord,
  Assignment,
  Course,
  DesignDocument,
  Hierarchy,
  Overlay,
  SubmissionRow,
} from './types.js'

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message)
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path)
    if (!response.ok) {
      let code = 'error'
      let message = response.statusText
      try {
        const body = await response.json()
        code = body.code ?? code
        message = body.message ?? message
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message)
    }
    return response.json() as Promise<T>
  }

  listCourses(): Promise<Course[]> {
    return this.get('/courses')
  }

  listAssignments(courseId: string): Promise<Assignment[]> {
    return this.get(`/courses/${courseId}/assignments`)
  }

  getAssignment(assignmentId: string): Promise<Assignment> {
    return this.get(`/assignments/${assignmentId}`)
  }

  listSubmissions(assignmentId: string): Promise<SubmissionRow[]> {
    return this.get(`/assignments/${assignmentId}/submissions`)
  }

  getAnalytics(submissionId: string): Promise<AnalyticsRecord> {
    return this.get(`/submissions/${submissionId}/analytics`)
  }

  getOverlay(submissionId: string): Promise<Overlay> {
    return this.get(`/submissions/${submissionId}/overlay`)
  }

  getHierarchy(submissionId: string): Promise<Hierarchy> {
    return this.get(`/submissions/${submissionId}/hierarchy`)
  }

  getDocument(submissionId: string): Promise<DesignDocument> {
    return this.get(`/submissions/${submissionId}/document`)
  }
}
