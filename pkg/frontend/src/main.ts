// DOM wiring: reads inputs, runs controller flows, writes rendered HTML.

import { ApiClient } from "./api.js";
import { editFluent, submitSearch, toggleNode } from "./controller.js";
import { AppState, initialState } from "./model.js";
import { renderProfile, renderRecommendations, renderResults, renderTaxonomy } from "./render.js";

const client = new ApiClient("");

function sessionConsumerId(): string {
  const key = "semstore-consumer-id";
  let id = localStorage.getItem(key);
  if (!id) {
    id = crypto.randomUUID();
    localStorage.setItem(key, id);
  }
  return id;
}

let state: AppState = initialState(sessionConsumerId());

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function paint(): void {
  el("results").innerHTML = renderResults(state.results, state.searchMessage);
  el("taxonomy").innerHTML = renderTaxonomy(state);
  el("profile").innerHTML = renderProfile(state);
  el("recommendations").innerHTML = renderRecommendations(state.recommendations);
  el("consumer-id").textContent = state.consumerId;
}

async function run(next: Promise<AppState>): Promise<void> {
  state = await next;
  paint();
}

function wire(): void {
  el<HTMLFormElement>("search-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const query = el<HTMLInputElement>("search-box").value;
    void run(submitSearch(client, state, query));
  });

  el("taxonomy").addEventListener("click", (ev) => {
    const target = (ev.target as HTMLElement).closest<HTMLElement>(".toggle");
    if (target?.dataset.iri) {
      void run(toggleNode(client, state, target.dataset.iri));
    }
  });

  el<HTMLFormElement>("profile-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const fluent = {
      category: el<HTMLSelectElement>("fluent-category").value,
      key: el<HTMLInputElement>("fluent-key").value.trim(),
      value: el<HTMLInputElement>("fluent-value").value.trim(),
    };
    if (!fluent.key) {
      return;
    }
    void run(editFluent(client, state, fluent));
  });

  paint();
  void run(toggleNode(client, state, state.tree.iri));
}

document.addEventListener("DOMContentLoaded", wire);
