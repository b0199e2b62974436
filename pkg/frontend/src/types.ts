// Wire types for the dashboard service API. The UI never computes
// analytics: every number rendered comes from one of these payloads.

export interface Course {
  id: string
  name: string
  term: string
  instructorNames: string[]
}

export interface Assignment {
  id: string
  courseId: string
  title: string
  dueDate: string | null
}

export interface Fluency {
  elementCount: number
  wordCount: number
  imageCount: number
}

export interface AnalyticsRecord {
  numScales: number
  numClusters: number
  clustersPerScale: number[]
  fluency: Fluency
  contentHash: string
  configEcho: { zoomStep: number; expansionFactor: number; maxLevels: number }
}

export interface SubmissionIdentity {
  id: string
  assignmentId: string
  studentLabel: string
  documentKey: string
  contentHash: string
  ingestedAt: string
  version: number
}

export interface SubmissionRow {
  submission: SubmissionIdentity
  analytics: AnalyticsRecord
}

export interface WorldRect {
  minX: number
  minY: number
  maxX: number
  maxY: number
}

export interface OverlayRegion {
  clusterId: number
  scaleRank: number
  paddedRegion: WorldRect
  fill: string
  opacity: number
}

export interface TimelineStep {
  stepIndex: number
  scaleRank: number
  clusterId: number
}

export interface Overlay {
  regions: OverlayRegion[]
  timeline: TimelineStep[]
  viewBox: WorldRect
}

export interface HierarchyCluster {
  id: number
  scaleRank: number
  memberElementIds: string[]
  region: WorldRect
  parentClusterId: number | null
}

export interface Hierarchy {
  numScales: number
  clusters: HierarchyCluster[]
  elementLevels: Record<string, number>
}

export interface DocumentElement {
  id: string
  kind: string
  width: number
  height: number
  transforms: { position: { x: number; y: number }; scale: number; rotation: number }
  text?: string
}

export interface DesignDocument {
  title: string
  key: string
  id: string
  creator: string
  settings: { visibility: string; backgroundColor: string }
  elements: DocumentElement[]
}
