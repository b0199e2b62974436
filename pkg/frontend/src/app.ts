// Application wiring: routing, data fetching, and DOM glue around the pure
// view models. Runs in the browser; everything testable lives in the other
// modules.

import { ApiClient, ApiError } from './api.js'
import {
  initialAnimation,
  pause,
  play,
  revealedClusters,
  setSpeed,
  stepBack,
  stepForward,
  tick,
} from './animation.js'
import { drawInstance, hitTestCluster } from './instance.js'
import { formatRoute, parseRoute, type Route } from './router.js'
import { initialViewState, withAnimation, withViewport, type ViewState } from './state.js'
import { buildAssignmentTable, renderTableHtml } from './table.js'
import { buildTree, renderTreeHtml } from './tree.js'
import type { DesignDocument, Hierarchy, Overlay } from './types.js'
import { panBy, visibleWorldRect, zoomAt, zoomToRegion } from './viewport.js'

const api = new ApiClient()
let state: ViewState = initialViewState()

const root = () => document.getElementById('app')!

function navigate(route: Route): void {
  window.location.hash = formatRoute(route)
}

function currentRoute(): Route {
  const hash = window.location.hash
  if (hash && hash.length > 1) return parseRoute(hash)
  return parseRoute(window.location.pathname + window.location.search)
}

function offlineBanner(error: unknown): string {
  const detail = error instanceof Error ? error.message : String(error)
  return `<div class="banner offline">Service unreachable: ${detail}. Retry when the dashboard service is up.</div>`
}

function notFoundView(what: string): string {
  return `<div class="banner missing">404 &mdash; ${what} was not found.</div>
    <p><a href="#/courses" data-route="/courses">Back to courses</a></p>`
}

function wireRouteLinks(): void {
  root()
    .querySelectorAll<HTMLAnchorElement>('a[data-route]')
    .forEach((a) => {
      a.addEventListener('click', (event) => {
        event.preventDefault()
        navigate(parseRoute(a.dataset.route!))
      })
    })
}

async function showCourses(): Promise<void> {
  try {
    const courses = await api.listCourses()
    const items = await Promise.all(
      courses.map(async (c) => {
        const assignments = await api.listAssignments(c.id)
        const links = assignments
          .map(
            (a) =>
              `<li><a href="#/assignments/${a.id}" data-route="/assignments/${a.id}">${a.title}</a></li>`,
          )
          .join('')
        return `<section class="course"><h2>${c.name}</h2><ul>${links || '<li>No assignments.</li>'}</ul></section>`
      }),
    )
    root().innerHTML = `<h1>Courses</h1>${items.join('') || '<p class="empty-state">No courses yet.</p>'}`
    wireRouteLinks()
  } catch (error) {
    root().innerHTML = offlineBanner(error)
  }
}

async function showAssignment(assignmentId: string): Promise<void> {
  try {
    const [assignment, rows] = await Promise.all([
      api.getAssignment(assignmentId),
      api.listSubmissions(assignmentId),
    ])
    const table = renderTableHtml(buildAssignmentTable(rows))
    root().innerHTML = `<h1>${assignment.title}</h1>${table}`
    wireRouteLinks()
  } catch (error) {
    root().innerHTML =
      error instanceof ApiError && error.status === 404
        ? notFoundView(`assignment ${assignmentId}`)
        : offlineBanner(error)
    wireRouteLinks()
  }
}

interface InstanceData {
  doc: DesignDocument
  overlay: Overlay
  hierarchy: Hierarchy
}

let animationTimer: number | undefined

async function showInstance(submissionId: string, clusterId?: number): Promise<void> {
  if (animationTimer !== undefined) {
    window.clearInterval(animationTimer)
    animationTimer = undefined
  }
  let data: InstanceData
  try {
    const [doc, overlay, hierarchy, analytics] = await Promise.all([
      api.getDocument(submissionId),
      api.getOverlay(submissionId),
      api.getHierarchy(submissionId),
      api.getAnalytics(submissionId),
    ])
    data = { doc, overlay, hierarchy }
    root().innerHTML = `
      <h1>${doc.title}</h1>
      <p class="analytics-summary">
        scales <strong>${analytics.numScales}</strong> &middot;
        clusters <strong>${analytics.numClusters}</strong> &middot;
        elements ${analytics.fluency.elementCount} &middot;
        words ${analytics.fluency.wordCount} &middot;
        images ${analytics.fluency.imageCount}
      </p>
      <div class="controls">
        <button id="play">play</button>
        <button id="pause">pause</button>
        <button id="step-back">&laquo; step</button>
        <button id="step-fwd">step &raquo;</button>
        <label>speed <input id="speed" type="range" min="0.25" max="4" step="0.25" value="1"></label>
        <button id="reset-view">fit all</button>
        <span id="step-label"></span>
      </div>
      <div class="instance-layout">
        <canvas id="canvas" width="960" height="640"></canvas>
        <aside id="tree">${renderTreeHtml(buildTree(hierarchy), submissionId, clusterId)}</aside>
      </div>`
  } catch (error) {
    root().innerHTML =
      error instanceof ApiError && error.status === 404
        ? notFoundView(`submission ${submissionId}`)
        : offlineBanner(error)
    wireRouteLinks()
    return
  }

  const canvas = document.getElementById('canvas') as HTMLCanvasElement
  const ctx = canvas.getContext('2d')!
  const timeline = data.overlay.timeline
  state = { ...state, submissionId, selectedCluster: clusterId }
  state = withAnimation(state, { ...initialAnimation(), stepIndex: timeline.length - 1 }, timeline)

  const region = clusterId !== undefined
    ? data.overlay.regions.find((r) => r.clusterId === clusterId)
    : undefined
  // deep link restores the exact viewport for the cluster; otherwise fit all
  state = withViewport(
    state,
    zoomToRegion(region ? region.paddedRegion : data.overlay.viewBox, canvas.width, canvas.height),
  )

  const redraw = () => {
    const revealed = new Set(revealedClusters(state.animation, timeline))
    drawInstance(ctx, canvas.width, canvas.height, data.doc, data.overlay, state.viewport, {
      revealed,
      selectedCluster: state.selectedCluster,
    })
    const label = document.getElementById('step-label')
    if (label) {
      label.textContent = `step ${state.animation.stepIndex + 1}/${timeline.length}`
    }
  }

  document.getElementById('play')!.addEventListener('click', () => {
    if (state.animation.stepIndex >= timeline.length - 1) {
      state = withAnimation(state, { ...state.animation, stepIndex: -1 }, timeline)
    }
    state = withAnimation(state, play(state.animation), timeline)
  })
  document.getElementById('pause')!.addEventListener('click', () => {
    state = withAnimation(state, pause(state.animation), timeline)
  })
  document.getElementById('step-fwd')!.addEventListener('click', () => {
    state = withAnimation(state, stepForward(state.animation, timeline), timeline)
    redraw()
  })
  document.getElementById('step-back')!.addEventListener('click', () => {
    state = withAnimation(state, stepBack(state.animation, timeline), timeline)
    redraw()
  })
  document.getElementById('speed')!.addEventListener('input', (event) => {
    const value = Number((event.target as HTMLInputElement).value)
    state = withAnimation(state, setSpeed(state.animation, value), timeline)
  })
  document.getElementById('reset-view')!.addEventListener('click', () => {
    state = withViewport(state, zoomToRegion(data.overlay.viewBox, canvas.width, canvas.height))
    redraw()
  })

  let dragging = false
  let lastX = 0
  let lastY = 0
  canvas.addEventListener('pointerdown', (event) => {
    dragging = true
    lastX = event.offsetX
    lastY = event.offsetY
    canvas.setPointerCapture(event.pointerId)
  })
  canvas.addEventListener('pointermove', (event) => {
    if (!dragging) return
    state = withViewport(
      state,
      panBy(state.viewport, event.offsetX - lastX, event.offsetY - lastY),
    )
    lastX = event.offsetX
    lastY = event.offsetY
    redraw()
  })
  canvas.addEventListener('pointerup', (event) => {
    dragging = false
    canvas.releasePointerCapture(event.pointerId)
  })
  canvas.addEventListener('wheel', (event) => {
    event.preventDefault()
    const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15
    state = withViewport(state, zoomAt(state.viewport, factor, event.offsetX, event.offsetY))
    redraw()
  })
  canvas.addEventListener('dblclick', (event) => {
    const zoom = state.viewport.zoom
    const wx = event.offsetX / zoom + state.viewport.offsetX
    const wy = event.offsetY / zoom + state.viewport.offsetY
    const hit = hitTestCluster(data.overlay, wx, wy)
    if (hit) navigate({ kind: 'cluster', submissionId, clusterId: hit.clusterId })
  })

  animationTimer = window.setInterval(() => {
    if (!state.animation.playing) return
    state = withAnimation(state, tick(state.animation, timeline, 0.1), timeline)
    redraw()
  }, 100)

  wireRouteLinks()
  redraw()
  // expose the visible world rect for end-to-end checks of deep links
  ;(window as unknown as Record<string, unknown>).__viewportRect = visibleWorldRect(
    state.viewport,
    canvas.width,
    canvas.height,
  )
}

async function render(): Promise<void> {
  const route = currentRoute()
  switch (route.kind) {
    case 'courses':
      return showCourses()
    case 'assignment':
      return showAssignment(route.assignmentId)
    case 'submission':
      return showInstance(route.submissionId)
    case 'cluster':
      return showInstance(route.submissionId, route.clusterId)
    case 'notFound':
      root().innerHTML = notFoundView(`route ${route.raw}`)
      wireRouteLinks()
  }
}

window.addEventListener('hashchange', () => void render())
window.addEventListener('DOMContentLoaded', () => void render())
