// HTML string renderers: pure functions from state, testable without a DOM.

import { AppState, TreeNode, localName } from "./model.js";
import type { RecommendationItem, SearchResultItem } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const BADGE_LABELS: Record<string, string> = {
  exact_label: "exact match",
  token_label: "name match",
  synonym: "synonym",
  taxonomy_expansion: "related category",
};

export function renderResults(results: SearchResultItem[], message: string | null): string {
  if (message) {
    return `<p class="message">${escapeHtml(message)}</p>`;
  }
  if (!results.length) {
    return `<p class="message">No products match.</p>`;
  }
  const rows = results
    .map(
      (r) =>
        `<li data-iri="${escapeHtml(r.iri)}">` +
        `<span class="name">${escapeHtml(localName(r.iri))}</span>` +
        `<span class="badge badge-${escapeHtml(r.matched_via)}">` +
        `${escapeHtml(BADGE_LABELS[r.matched_via] ?? r.matched_via)}</span>` +
        `<span class="score">${r.score.toFixed(2)}</span></li>`,
    )
    .join("");
  return `<ol class="results">${rows}</ol>`;
}

export function renderTree(node: TreeNode): string {
  const toggle = node.expanded ? "&#9662;" : "&#9656;";
  let inner = "";
  if (node.expanded && node.children) {
    const childItems = node.children.map((c) => renderTree(c)).join("");
    const instanceItems = (node.instances ?? [])
      .map(
        (iri) =>
          `<li class="instance" data-iri="${escapeHtml(iri)}">${escapeHtml(localName(iri))}</li>`,
      )
      .join("");
    inner = `<ul>${childItems}${instanceItems}</ul>`;
  }
  return (
    `<li class="klass" data-iri="${escapeHtml(node.iri)}">` +
    `<button class="toggle" data-iri="${escapeHtml(node.iri)}">${toggle} ${escapeHtml(node.label)}</button>` +
    `${inner}</li>`
  );
}

export function renderTaxonomy(state: AppState): string {
  const warning = state.treeWarning
    ? `<p class="warning">${escapeHtml(state.treeWarning)}</p>`
    : "";
  return `${warning}<ul class="tree">${renderTree(state.tree)}</ul>`;
}

export function renderRecommendations(recs: RecommendationItem[]): string {
  if (!recs.length) {
    return `<p class="message">Nothing to recommend yet.</p>`;
  }
  const rows = recs
    .map(
      (r) =>
        `<li data-iri="${escapeHtml(r.product)}">` +
        `<span class="name">${escapeHtml(localName(r.product))}</span>` +
        `<span class="need">for ${escapeHtml(localName(r.need.target))}` +
        ` (rule ${escapeHtml(r.need.source_rule)})</span>` +
        `<span class="score">${r.score.toFixed(2)}</span></li>`,
    )
    .join("");
  return `<ol class="recommendations">${rows}</ol>`;
}

export function renderProfile(state: AppState): string {
  const message = state.profileMessage
    ? `<p class="warning">${escapeHtml(state.profileMessage)}</p>`
    : "";
  if (!state.profile.length) {
    return `${message}<p class="message">No profile facts yet.</p>`;
  }
  const rows = state.profile
    .map(
      (f) =>
        `<li><span class="cat">${escapeHtml(f.category)}</span>.` +
        `<span class="key">${escapeHtml(f.key)}</span> = ` +
        `<span class="value">${escapeHtml(f.value)}</span></li>`,
    )
    .join("");
  return `${message}<ul class="profile">${rows}</ul>`;
}
