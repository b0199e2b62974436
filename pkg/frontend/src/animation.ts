// Timeline playback: reveals clusters one per step, outermost scale first.
// Pure state transitions so playback logic is testable without timers.

import type { TimelineStep } from './types.js'

export interface AnimationState {
  playing: boolean
  stepIndex: number // steps 0..stepIndex are revealed; -1 = nothing yet
  speed: number // steps per second
  elapsedInStep: number
}

export function initialAnimation(speed = 1): AnimationState {
  return { playing: false, stepIndex: -1, speed, elapsedInStep: 0 }
}

export function stepCount(timeline: TimelineStep[]): number {
  return timeline.length
}

export function clampStep(index: number, timeline: TimelineStep[]): number {
  return Math.max(-1, Math.min(index, timeline.length - 1))
}

export function play(state: AnimationState): AnimationState {
  return { ...state, playing: true }
}

export function pause(state: AnimationState): AnimationState {
  return { ...state, playing: false, elapsedInStep: 0 }
}

export function stepForward(state: AnimationState, timeline: TimelineStep[]): AnimationState {
  return { ...state, stepIndex: clampStep(state.stepIndex + 1, timeline), elapsedInStep: 0 }
}

export function stepBack(state: AnimationState, timeline: TimelineStep[]): AnimationState {
  return { ...state, stepIndex: clampStep(state.stepIndex - 1, timeline), elapsedInStep: 0 }
}

export function setSpeed(state: AnimationState, speed: number): AnimationState {
  if (!(speed > 0)) throw new Error(`speed must be > 0, got ${speed}`)
  return { ...state, speed }
}

/** Advance playback by `dtSeconds`; pauses itself at the final step. */
export function tick(
  state: AnimationState,
  timeline: TimelineStep[],
  dtSeconds: number,
): AnimationState {
  if (!state.playing || timeline.length === 0) return state
  let { stepIndex, elapsedInStep } = state
  elapsedInStep += dtSeconds * state.speed
  while (elapsedInStep >= 1 && stepIndex < timeline.length - 1) {
    elapsedInStep -= 1
    stepIndex += 1
  }
  const atEnd = stepIndex >= timeline.length - 1
  return {
    ...state,
    stepIndex,
    elapsedInStep: atEnd ? 0 : elapsedInStep,
    playing: atEnd ? false : state.playing,
  }
}

/** Cluster ids revealed at the current step (outer scales first). */
export function revealedClusters(state: AnimationState, timeline: TimelineStep[]): number[] {
  return timeline.filter((s) => s.stepIndex <= state.stepIndex).map((s) => s.clusterId)
}
