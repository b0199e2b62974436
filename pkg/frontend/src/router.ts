// Route parsing and formatting. Routes are plain paths
// (/courses, /assignments/{id}, /submissions/{id}[?focus=...],
// /submissions/{id}/clusters/{cid}); when the app is statically hosted
// next to the API the same routes travel in the hash fragment, so the
// parser accepts both forms.

export type Route =
  | { kind: 'courses' }
  | { kind: 'assignment'; assignmentId: string }
  | { kind: 'submission'; submissionId: string; focus?: string }
  | { kind: 'cluster'; submissionId: string; clusterId: number }
  | { kind: 'notFound'; raw: string }

export function parseRoute(raw: string): Route {
  let path = raw
  if (path.startsWith('#')) path = path.slice(1)
  if (!path.startsWith('/')) path = '/' + path

  let focus: string | undefined
  const queryAt = path.indexOf('?')
  if (queryAt >= 0) {
    focus = new URLSearchParams(path.slice(queryAt + 1)).get('focus') ?? undefined
    path = path.slice(0, queryAt)
  }

  const parts = path.split('/').filter(Boolean)
  if (parts.length === 0 || (parts.length === 1 && parts[0] === 'courses')) {
    return { kind: 'courses' }
  }
  if (parts.length === 2 && parts[0] === 'assignments') {
    return { kind: 'assignment', assignmentId: parts[1] }
  }
  if (parts.length === 2 && parts[0] === 'submissions') {
    return { kind: 'submission', submissionId: parts[1], focus }
  }
  if (parts.length === 4 && parts[0] === 'submissions' && parts[2] === 'clusters') {
    const clusterId = Number(parts[3])
    if (Number.isInteger(clusterId)) {
      return { kind: 'cluster', submissionId: parts[1], clusterId }
    }
  }
  return { kind: 'notFound', raw }
}

export function formatRoute(route: Route): string {
  switch (route.kind) {
    case 'courses':
      return '/courses'
    case 'assignment':
      return `/assignments/${route.assignmentId}`
    case 'submission':
      return route.focus
        ? `/submissions/${route.submissionId}?focus=${route.focus}`
        : `/submissions/${route.submissionId}`
    case 'cluster':
      return `/submissions/${route.submissionId}/clusters/${route.clusterId}`
    case 'notFound':
      return route.raw
  }
}
