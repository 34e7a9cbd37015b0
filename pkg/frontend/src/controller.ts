// Async flows between the API client and the view state. Each flow returns
// the next state; rendering happens elsewhere.

import { ApiClient, ApiRequestError } from "./api.js";
import {
  AppState,
  findNode,
  localName,
  withNodeChildren,
  withNodeCollapsed,
  withNodeExpanded,
  withNodePruned,
  withProfile,
  withProfileMessage,
  withResults,
  withSearchMessage,
} from "./model.js";
import type { Fluent } from "./types.js";

export async function submitSearch(
  client: ApiClient,
  state: AppState,
  query: string,
): Promise<AppState> {
  if (!query.trim()) {
    // inline validation: no request leaves the browser
    return withSearchMessage(state, "Type something to search for.");
  }
  try {
    const body = await client.search(query);
    // a search is a planned, user-initiated event
    await client.postEvent("action", "storefront_search", { q: query });
    return withResults(state, query, body.results);
  } catch (err) {
    if (err instanceof ApiRequestError) {
      return withSearchMessage(state, `Search failed: ${err.code}`);
    }
    return withSearchMessage(state, "Service unreachable, retry in a moment.");
  }
}

export async function toggleNode(
  client: ApiClient,
  state: AppState,
  iri: string,
): Promise<AppState> {
  const node = findNode(state.tree, iri);
  if (!node) {
    return state;
  }
  if (node.expanded) {
    return withNodeCollapsed(state, iri);
  }
  if (node.children !== null) {
    // already fetched once; expansion is purely local after that
    return withNodeExpanded(state, iri);
  }
  try {
    const desc = await client.describe(iri);
    const children = await Promise.all(
      desc.subclasses.map(async (childIri) => {
        try {
          const childDesc = await client.describe(childIri);
          return { iri: childIri, label: childDesc.label ?? localName(childIri) };
        } catch {
          return { iri: childIri, label: localName(childIri) };
        }
      }),
    );
    return withNodeChildren(state, iri, children, desc.instances);
  } catch (err) {
    if (err instanceof ApiRequestError && err.status === 404) {
      return withNodePruned(state, iri, `${localName(iri)} is gone from the catalog.`);
    }
    throw err;
  }
}

export async function editFluent(
  client: ApiClient,
  state: AppState,
  fluent: Fluent,
): Promise<AppState> {
  // one request cycle: write the fluent, then read the fresh ranking
  try {
    const profile = await client.upsertFluent(state.consumerId, fluent);
    const recs = await client.recommendations(state.consumerId);
    return withProfile(state, profile.fluents, recs.recommendations);
  } catch (err) {
    if (err instanceof ApiRequestError) {
      return withProfileMessage(state, `${err.code}: ${err.message}`);
    }
    return withProfileMessage(state, "Service unreachable, retry in a moment.");
  }
}
