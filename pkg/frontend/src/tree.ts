// Hierarchy tree: nests clusters under their parents so the instance view
// can index scales and clusters for navigation.

import { formatRoute } from './router.js'
import type { Hierarchy } from './types.js'

export interface TreeNode {
  clusterId: number
  scaleRank: number
  memberCount: number
  children: TreeNode[]
}

export function buildTree(hierarchy: Hierarchy): TreeNode | null {
  const nodes = new Map<number, TreeNode>()
  for (const c of hierarchy.clusters) {
    nodes.set(c.id, {
      clusterId: c.id,
      scaleRank: c.scaleRank,
      memberCount: c.memberElementIds.length,
      children: [],
    })
  }
  let root: TreeNode | null = null
  for (const c of hierarchy.clusters) {
    const node = nodes.get(c.id)!
    if (c.parentClusterId === null) {
      root = node
    } else {
      nodes.get(c.parentClusterId)!.children.push(node)
    }
  }
  return root
}

export function childCountsPerRank(root: TreeNode | null): number[] {
  // e.g. [1, 3, 3] for the three-scale nested-triads fixture
  const counts: number[] = []
  const walk = (node: TreeNode) => {
    counts[node.scaleRank] = (counts[node.scaleRank] ?? 0) + 1
    node.children.forEach(walk)
  }
  if (root) walk(root)
  return counts
}

export function renderTreeHtml(root: TreeNode | null, submissionId: string, selected?: number): string {
  if (!root) return '<p class="empty-state">No clusters recognized.</p>'
  const render = (node: TreeNode): string => {
    const href = formatRoute({ kind: 'cluster', submissionId, clusterId: node.clusterId })
    const cls = node.clusterId === selected ? 'tree-node selected' : 'tree-node'
    const label = `scale ${node.scaleRank} &middot; cluster ${node.clusterId} (${node.memberCount})`
    const children = node.children.length
      ? `<ul>${node.children.map((c) => `<li>${render(c)}</li>`).join('')}</ul>`
      : ''
    return `<a class="${cls}" href="#${href}" data-route="${href}" data-cluster="${node.clusterId}">${label}</a>${children}`
  }
  return `<ul class="tree">${`<li>${render(root)}</li>`}</ul>`
}
