// Viewport math. The viewport transform is the only geometry the client
// owns; element positions come from the document verbatim.
//
// world -> screen:  sx = (wx - offsetX) * zoom,  sy = (wy - offsetY) * zoom

import type { WorldRect } from './types.js'

export interface Viewport {
  offsetX: number
  offsetY: number
  zoom: number
}

const REGION_MARGIN = 0.08 // breathing room around a focused region

export function worldToScreen(v: Viewport, wx: number, wy: number): [number, number] {
  return [(wx - v.offsetX) * v.zoom, (wy - v.offsetY) * v.zoom]
}

export function screenToWorld(v: Viewport, sx: number, sy: number): [number, number] {
  return [sx / v.zoom + v.offsetX, sy / v.zoom + v.offsetY]
}

export function panBy(v: Viewport, dxScreen: number, dyScreen: number): Viewport {
  return { ...v, offsetX: v.offsetX - dxScreen / v.zoom, offsetY: v.offsetY - dyScreen / v.zoom }
}

/** Zoom by `factor` keeping the world point under (sx, sy) fixed. */
export function zoomAt(v: Viewport, factor: number, sx: number, sy: number): Viewport {
  const zoom = Math.max(v.zoom * factor, Number.MIN_VALUE)
  const [wx, wy] = screenToWorld(v, sx, sy)
  return { zoom, offsetX: wx - sx / zoom, offsetY: wy - sy / zoom }
}

/**
 * Viewport that centers `rect` in a canvas of the given pixel size.
 * Pure: identical inputs produce an identical viewport, which is what makes
 * cluster deep links restore the exact same view.
 */
export function zoomToRegion(rect: WorldRect, canvasW: number, canvasH: number): Viewport {
  const w = Math.max(rect.maxX - rect.minX, Number.MIN_VALUE)
  const h = Math.max(rect.maxY - rect.minY, Number.MIN_VALUE)
  const zoom = Math.min(
    canvasW / (w * (1 + 2 * REGION_MARGIN)),
    canvasH / (h * (1 + 2 * REGION_MARGIN)),
  )
  const centerX = (rect.minX + rect.maxX) / 2
  const centerY = (rect.minY + rect.maxY) / 2
  return {
    zoom,
    offsetX: centerX - canvasW / 2 / zoom,
    offsetY: centerY - canvasH / 2 / zoom,
  }
}

/** The world rectangle currently visible in a canvas of the given size. */
export function visibleWorldRect(v: Viewport, canvasW: number, canvasH: number): WorldRect {
  return {
    minX: v.offsetX,
    minY: v.offsetY,
    maxX: v.offsetX + canvasW / v.zoom,
    maxY: v.offsetY + canvasH / v.zoom,
  }
}
