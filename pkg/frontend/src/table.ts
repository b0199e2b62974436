// Assignment table: one row per submission, analytics as links into the
// instance view. Built as a plain view model so the contract test can
// compare it against the service payload without a DOM.

import { formatRoute } from './router.js'
import type { SubmissionRow } from './types.js'

export interface TableRowModel {
  submissionId: string
  studentLabel: string
  version: number
  ingestedAt: string
  scales: number
  clusters: number
  clustersPerScale: number[]
  elements: number
  words: number
  images: number
  scalesHref: string
  clustersHref: string
  instanceHref: string
}

export function buildAssignmentTable(rows: SubmissionRow[]): TableRowModel[] {
  // row order is the service's order (studentLabel, then ingestedAt)
  return rows.map((row) => ({
    submissionId: row.submission.id,
    studentLabel: row.submission.studentLabel,
    version: row.submission.version,
    ingestedAt: row.submission.ingestedAt,
    scales: row.analytics.numScales,
    clusters: row.analytics.numClusters,
    clustersPerScale: row.analytics.clustersPerScale,
    elements: row.analytics.fluency.elementCount,
    words: row.analytics.fluency.wordCount,
    images: row.analytics.fluency.imageCount,
    scalesHref: formatRoute({
      kind: 'submission',
      submissionId: row.submission.id,
      focus: 'scales',
    }),
    clustersHref: formatRoute({
      kind: 'submission',
      submissionId: row.submission.id,
      focus: 'clusters',
    }),
    instanceHref: formatRoute({ kind: 'submission', submissionId: row.submission.id }),
  }))
}

const esc = (s: string) =>
  s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;')

export function renderTableHtml(model: TableRowModel[]): string {
  if (model.length === 0) {
    return '<p class="empty-state">No submissions yet.</p>'
  }
  const body = model
    .map(
      (r) => `<tr>
  <td><a href="#${esc(r.instanceHref)}" data-route="${esc(r.instanceHref)}">${esc(r.studentLabel)}</a></td>
  <td>v${r.version}</td>
  <td><a class="analytic" href="#${esc(r.scalesHref)}" data-route="${esc(r.scalesHref)}">${r.scales}</a></td>
  <td><a class="analytic" href="#${esc(r.clustersHref)}" data-route="${esc(r.clustersHref)}">${r.clusters}</a></td>
  <td>${r.clustersPerScale.join(' / ') || '&ndash;'}</td>
  <td>${r.elements}</td>
  <td>${r.words}</td>
  <td>${r.images}</td>
</tr>`,
    )
    .join('\n')
  return `<table class="submissions">
<thead><tr><th>Student</th><th></th><th>Scales</th><th>Clusters</th><th>Per scale</th><th>Elements</th><th>Words</th><th>Images</th></tr></thead>
<tbody>
${body}
</tbody>
</table>`
}
