// Pure HTML-string rendering helpers; the DOM wiring lives in main.ts.

import { Candidate, ModelInfo, SearchHit } from "./api.js";

export function formatProb(prob: number): string {
  return prob.toFixed(3);
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Suggestion rows with probability bars; server order is preserved. */
export function suggestionsHtml(candidates: Candidate[]): string {
  if (candidates.length === 0) {
    return '<p class="empty">no suggestions</p>';
  }
  const rows = candidates.map((c) => {
    const width = Math.max(1, Math.round(c.prob * 100));
    return (
      `<li class="suggestion">` +
      `<span class="token">${escapeHtml(c.token)}</span>` +
      `<span class="bar" style="width:${width}%"></span>` +
      `<span class="prob">${formatProb(c.prob)}</span>` +
      `</li>`
    );
  });
  return `<ul class="suggestions">${rows.join("")}</ul>`;
}

export function searchResultsHtml(hits: SearchHit[]): string {
  if (hits.length === 0) {
    return '<p class="empty">no results</p>';
  }
  const rows = hits.map(
    (h) =>
      `<li class="hit"><span class="path">${escapeHtml(h.path)}</span>` +
      `<span class="score">${h.score.toFixed(3)}</span></li>`,
  );
  return `<ul class="results">${rows.join("")}</ul>`;
}

export function modelOptionsHtml(models: ModelInfo[], task: string, selected: string): string {
  return models
    .filter((m) => m.task === task)
    .map((m) => {
      const sel = m.id === selected ? " selected" : "";
      return `<option value="${escapeHtml(m.id)}"${sel}>${escapeHtml(m.id)} — ${escapeHtml(m.description)}</option>`;
    })
    .join("");
}

export function errorBannerHtml(message: string | null): string {
  if (message === null) {
    return "";
  }
  return `<div class="banner error">${escapeHtml(message)}</div>`;
}
