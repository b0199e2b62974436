// Client view state. Invariants: zoom stays positive, animation step stays
// within the timeline, and analytics values are never derived client-side.

import { clampStep, initialAnimation, type AnimationState } from './animation.js'
import type { Viewport } from './viewport.js'
import type { TimelineStep } from './types.js'

export interface ViewState {
  courseId?: string
  assignmentId?: string
  submissionId?: string
  selectedCluster?: number
  viewport: Viewport
  animation: AnimationState
}

export function initialViewState(): ViewState {
  return {
    viewport: { offsetX: 0, offsetY: 0, zoom: 1 },
    animation: initialAnimation(),
  }
}

export function withViewport(state: ViewState, viewport: Viewport): ViewState {
  if (!(viewport.zoom > 0)) throw new Error(`zoom must be > 0, got ${viewport.zoom}`)
  return { ...state, viewport }
}

export function withAnimation(
  state: ViewState,
  animation: AnimationState,
  timeline: TimelineStep[],
): ViewState {
  return {
    ...state,
    animation: { ...animation, stepIndex: clampStep(animation.stepIndex, timeline) },
  }
}
