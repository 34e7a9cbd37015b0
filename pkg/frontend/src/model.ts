// View state and the pure transitions over it. No scores, closures, or rule
// logic here: every ordering displayed comes verbatim from the API.

import type { Fluent, RecommendationItem, SearchResultItem } from "./types.js";

export interface TreeNode {
  iri: string;
  label: string;
  // null until first expansion (children are fetched lazily)
  children: TreeNode[] | null;
  instances: string[] | null;
  expanded: boolean;
}

export interface AppState {
  query: string;
  results: SearchResultItem[];
  searchMessage: string | null;
  tree: TreeNode;
  treeWarning: string | null;
  consumerId: string;
  profile: Fluent[];
  recommendations: RecommendationItem[];
  profileMessage: string | null;
}

export const TAXONOMY_ROOT = "store:AutoProduct";

export function initialState(consumerId: string): AppState {
  return {
    query: "",
    results: [],
    searchMessage: null,
    tree: { iri: TAXONOMY_ROOT, label: "Auto Product", children: null, instances: null, expanded: false },
    treeWarning: null,
    consumerId,
    profile: [],
    recommendations: [],
    profileMessage: null,
  };
}

export function withResults(state: AppState, query: string, results: SearchResultItem[]): AppState {
  // order preserved exactly as returned
  return { ...state, query, results, searchMessage: null };
}

export function withSearchMessage(state: AppState, message: string): AppState {
  return { ...state, searchMessage: message };
}

export function localName(iri: string): string {
  const idx = Math.max(iri.lastIndexOf(":"), iri.lastIndexOf("#"), iri.lastIndexOf("/"));
  return idx >= 0 ? iri.slice(idx + 1) : iri;
}

function mapNode(node: TreeNode, iri: string, update: (n: TreeNode) => TreeNode): TreeNode {
  if (node.iri === iri) {
    return update(node);
  }
  if (!node.children) {
    return node;
  }
  return { ...node, children: node.children.map((c) => mapNode(c, iri, update)) };
}

export function withNodeChildren(
  state: AppState,
  iri: string,
  children: { iri: string; label: string }[],
  instances: string[],
): AppState {
  const tree = mapNode(state.tree, iri, (node) => ({
    ...node,
    expanded: true,
    children: children.map((c) => ({
      iri: c.iri,
      label: c.label,
      children: null,
      instances: null,
      expanded: false,
    })),
    instances,
  }));
  return { ...state, tree };
}

export function withNodeCollapsed(state: AppState, iri: string): AppState {
  return { ...state, tree: mapNode(state.tree, iri, (n) => ({ ...n, expanded: false })) };
}

export function withNodeExpanded(state: AppState, iri: string): AppState {
  return { ...state, tree: mapNode(state.tree, iri, (n) => ({ ...n, expanded: true })) };
}

export function withNodePruned(state: AppState, iri: string, warning: string): AppState {
  const prune = (node: TreeNode): TreeNode => ({
    ...node,
    children: node.children ? node.children.filter((c) => c.iri !== iri).map(prune) : null,
  });
  return { ...state, tree: prune(state.tree), treeWarning: warning };
}

export function findNode(node: TreeNode, iri: string): TreeNode | null {
  if (node.iri === iri) {
    return node;
  }
  for (const child of node.children ?? []) {
    const hit = findNode(child, iri);
    if (hit) {
      return hit;
    }
  }
  return null;
}

export function withProfile(
  state: AppState,
  profile: Fluent[],
  recommendations: RecommendationItem[],
): AppState {
  return { ...state, profile, recommendations, profileMessage: null };
}

export function withProfileMessage(state: AppState, message: string): AppState {
  return { ...state, profileMessage: message };
}
