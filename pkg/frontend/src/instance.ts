// Zoomable instance view: draws document elements and overlay regions on a
// canvas under the current viewport transform. Colors come from the overlay
// payload so the client and the baked SVG can never disagree.

import type { DesignDocument, Overlay, OverlayRegion } from './types.js'
import type { Viewport } from './viewport.js'

const KIND_FILLS: Record<string, string> = {
  image: '#d9e8f5',
  text: '#ffffff',
  sketch: '#eef7e9',
  video: '#f5e3df',
  embed: '#efe9f7',
  other: '#eeeeee',
}

export interface DrawOptions {
  revealed?: Set<number> // cluster ids to show; undefined = all
  selectedCluster?: number
}

export function drawInstance(
  ctx: CanvasRenderingContext2D,
  canvasW: number,
  canvasH: number,
  doc: DesignDocument,
  overlay: Overlay,
  viewport: Viewport,
  opts: DrawOptions = {},
): void {
  ctx.setTransform(1, 0, 0, 1, 0, 0)
  ctx.fillStyle = doc.settings.backgroundColor
  ctx.fillRect(0, 0, canvasW, canvasH)
  ctx.setTransform(
    viewport.zoom,
    0,
    0,
    viewport.zoom,
    -viewport.offsetX * viewport.zoom,
    -viewport.offsetY * viewport.zoom,
  )

  // outer scales first so inner regions paint on top
  for (const region of overlay.regions) {
    if (opts.revealed && !opts.revealed.has(region.clusterId)) continue
    const r = region.paddedRegion
    ctx.globalAlpha = region.opacity
    ctx.fillStyle = region.fill
    ctx.fillRect(r.minX, r.minY, r.maxX - r.minX, r.maxY - r.minY)
    ctx.globalAlpha = 1
    if (region.clusterId === opts.selectedCluster) {
      ctx.strokeStyle = '#1a1a1a'
      ctx.lineWidth = 3 / viewport.zoom
      ctx.strokeRect(r.minX, r.minY, r.maxX - r.minX, r.maxY - r.minY)
    }
  }

  for (const e of doc.elements) {
    const t = e.transforms
    ctx.save()
    ctx.translate(t.position.x, t.position.y)
    ctx.rotate(t.rotation)
    ctx.scale(t.scale, t.scale)
    ctx.globalAlpha = 0.85
    ctx.fillStyle = KIND_FILLS[e.kind] ?? KIND_FILLS.other
    ctx.fillRect(0, 0, e.width, e.height)
    ctx.globalAlpha = 1
    ctx.strokeStyle = '#44444466'
    ctx.lineWidth = Math.max(e.width, e.height) * 0.01
    ctx.strokeRect(0, 0, e.width, e.height)
    if (e.kind === 'text' && e.text) {
      const size = Math.min(e.width, e.height) * 0.12
      ctx.fillStyle = '#222222'
      ctx.font = `${size}px sans-serif`
      ctx.textAlign = 'center'
      ctx.fillText(e.text.slice(0, 40), e.width / 2, e.height / 2, e.width * 0.9)
    }
    ctx.restore()
  }
}

/**
 * The innermost (deepest-rank, then smallest) region containing a world
 * point; used to navigate to a cluster by clicking it.
 */
export function hitTestCluster(
  overlay: Overlay,
  wx: number,
  wy: number,
): OverlayRegion | null {
  let best: OverlayRegion | null = null
  let bestArea = Infinity
  for (const region of overlay.regions) {
    const r = region.paddedRegion
    if (wx < r.minX || wx > r.maxX || wy < r.minY || wy > r.maxY) continue
    const area = (r.maxX - r.minX) * (r.maxY - r.minY)
    if (
      best === null ||
      region.scaleRank > best.scaleRank ||
      (region.scaleRank === best.scaleRank && area < bestArea)
    ) {
      best = region
      bestArea = area
    }
  }
  return best
}
