// Bootstraps the three task panes against the inference service.

import { ApiClient, FetchLike, ModelInfo } from "./api.js";
import { CompletionController } from "./controller.js";
import {
  errorBannerHtml, modelOptionsHtml, searchResultsHtml, suggestionsHtml,
} from "./render.js";

const client = new ApiClient(window.fetch.bind(window) as FetchLike);

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function showBanner(message: string | null): void {
  byId("banner").innerHTML = errorBannerHtml(message);
}

function setupCompletion(models: ModelInfo[]): void {
  const selector = byId<HTMLSelectElement>("complete-model");
  const editor = byId<HTMLTextAreaElement>("complete-editor");
  const pane = byId("complete-suggestions");

  const controller = new CompletionController(client, (state) => {
    pane.innerHTML = suggestionsHtml(state.suggestions);
    showBanner(state.error);
  });

  selector.innerHTML = modelOptionsHtml(models, "complete", "");
  if (selector.value !== "") {
    controller.selectModel(selector.value);
  }
  selector.addEventListener("change", () => controller.selectModel(selector.value));
  editor.addEventListener("input", () => controller.onInput(editor.value));
}

function setupSummarize(models: ModelInfo[]): void {
  const selector = byId<HTMLSelectElement>("summarize-model");
  const editor = byId<HTMLTextAreaElement>("summarize-editor");
  const output = byId("summarize-output");
  selector.innerHTML = modelOptionsHtml(models, "summarize", "");

  byId<HTMLButtonElement>("summarize-go").addEventListener("click", async () => {
    try {
      const summary = await client.summarize({
        model_id: selector.value,
        code: editor.value,
      });
      output.textContent = summary;
      showBanner(null);
    } catch (err) {
      output.textContent = "";
      showBanner(err instanceof Error ? err.message : String(err));
    }
  });
}

function setupSearch(models: ModelInfo[]): void {
  const selector = byId<HTMLSelectElement>("search-model");
  const query = byId<HTMLInputElement>("search-query");
  const results = byId("search-results");
  selector.innerHTML = modelOptionsHtml(models, "search", "");

  byId<HTMLButtonElement>("search-go").addEventListener("click", async () => {
    try {
      const hits = await client.search({
        model_id: selector.value,
        query: query.value,
        k: 5,
      });
      results.innerHTML = searchResultsHtml(hits);
      showBanner(null);
    } catch (err) {
      results.innerHTML = "";
      showBanner(err instanceof Error ? err.message : String(err));
    }
  });
}

async function boot(): Promise<void> {
  try {
    const models = await client.models();
    setupCompletion(models);
    setupSummarize(models);
    setupSearch(models);
  } catch (err) {
    showBanner(err instanceof Error ? err.message : String(err));
    for (const pane of Array.from(document.querySelectorAll<HTMLFieldSetElement>("fieldset"))) {
      pane.disabled = true;
    }
  }
}

void boot();
