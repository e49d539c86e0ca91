/** DOM rendering for the triage view.
 *
 * One function rebuilds the whole page from the store on every change.
 * The row table is written strictly in the order the store holds, which
 * is the order the listing endpoint returned.
 */

import { escapeHtml, highlight } from "./highlight.js";
import {
  ALPHA_DEFAULT,
  ALPHA_MAX,
  ALPHA_MIN,
  ALPHA_STEP,
  TriageStore,
} from "./state.js";
import type { PredictionRow, RepFilterEntry } from "./types.js";

export function render(root: HTMLElement, store: TriageStore): void {
  const rows = store.visibleRows();
  root.innerHTML = `
    ${renderStats(store)}
    ${renderBanner(store)}
    ${renderError(store)}
    <div class="layout">
      <aside class="rep-pane" id="rep-pane">
        <h2>representations</h2>
        ${store.reps.map(renderRepEntry).join("")}
      </aside>
      <main>
        ${renderControls(store)}
        ${renderTable(rows, store)}
      </main>
    </div>
    ${renderToast(store)}
  `;
  wire(root, store);
}

function renderStats(store: TriageStore): string {
  if (!store.stats) return "";
  const s = store.stats;
  return `
    <header id="stats-bar" class="stats">
      <span class="stat">visible <b id="stat-visible">${s.visible}</b></span>
      <span class="stat">banned <b id="stat-banned">${s.banned}</b></span>
      <span class="stat">hidden reps <b id="stat-hidden-reps">${s.hidden_reps}</b></span>
      <span class="stat">steps <b id="stat-steps">${s.steps_taken}</b></span>
    </header>
  `;
}

function renderBanner(store: TriageStore): string {
  if (store.connectionOk) return "";
  return `<div id="banner" class="banner">cannot reach the triage service</div>`;
}

function renderError(store: TriageStore): string {
  if (!store.lastError || !store.connectionOk) return "";
  return `<div id="error" class="error">${escapeHtml(store.lastError)}</div>`;
}

function renderControls(store: TriageStore): string {
  return `
    <div class="controls">
      <label for="alpha">similarity cutoff
        <input id="alpha" type="range"
               min="${ALPHA_MIN.toFixed(2)}" max="${ALPHA_MAX.toFixed(2)}"
               step="${ALPHA_STEP.toFixed(2)}" value="${store.alpha}">
        <span id="alpha-value">${store.alpha.toFixed(2)}</span>
      </label>
      <label for="min-score">min score
        <input id="min-score" type="number" min="0" max="1" step="0.05"
               value="${store.minScore}">
      </label>
    </div>
  `;
}

function renderTable(rows: PredictionRow[], store: TriageStore): string {
  if (!store.loaded) return `<p id="loading">loading…</p>`;
  if (!store.connectionOk && store.master.length === 0) return "";
  if (rows.length === 0) {
    return `<p id="empty" class="empty">no predictions to review</p>`;
  }
  return `
    <table class="predictions">
      <thead>
        <tr><th>score</th><th>sink</th><th>statement</th><th></th></tr>
      </thead>
      <tbody>
        ${rows.map(renderRow).join("")}
      </tbody>
    </table>
  `;
}

function renderRow(row: PredictionRow): string {
  return `
    <tr class="pred-row${row.banned ? " banned" : ""}" data-id="${escapeHtml(row.id)}">
      <td class="score">${row.score.toFixed(2)}</td>
      <td class="rep"><code>${escapeHtml(row.rep)}</code></td>
      <td class="stmt">
        <pre><code>${highlight(row.stmt)}</code></pre>
        <details class="func">
          <summary>context</summary>
          <pre><code>${highlight(row.func)}</code></pre>
        </details>
      </td>
      <td class="actions">
        <button class="ban" data-id="${escapeHtml(row.id)}">ban</button>
        <button class="ban-similar" data-id="${escapeHtml(row.id)}">ban similar</button>
      </td>
    </tr>
  `;
}

function renderRepEntry(entry: RepFilterEntry): string {
  return `
    <label class="rep-entry" data-rep="${escapeHtml(entry.rep)}">
      <input type="checkbox" class="rep-toggle"
             data-rep="${escapeHtml(entry.rep)}"
             ${entry.hidden ? "checked" : ""}>
      <code>${escapeHtml(entry.rep)}</code>
      <span class="count">${entry.count}</span>
    </label>
  `;
}

function renderToast(store: TriageStore): string {
  if (!store.toast) return "";
  return `
    <div id="toast" class="toast">
      <span>${escapeHtml(store.toast.label)}</span>
      <button id="undo">undo</button>
    </div>
  `;
}

function wire(root: HTMLElement, store: TriageStore): void {
  for (const btn of root.querySelectorAll<HTMLButtonElement>("button.ban")) {
    btn.addEventListener("click", () => store.ban(btn.dataset["id"] ?? ""));
  }
  for (const btn of root.querySelectorAll<HTMLButtonElement>("button.ban-similar")) {
    btn.addEventListener("click", () => store.banSimilar(btn.dataset["id"] ?? ""));
  }
  for (const box of root.querySelectorAll<HTMLInputElement>("input.rep-toggle")) {
    box.addEventListener("change", () =>
      store.toggleRep(box.dataset["rep"] ?? "", box.checked),
    );
  }
  const alpha = root.querySelector<HTMLInputElement>("#alpha");
  alpha?.addEventListener("input", () => {
    store.setAlpha(Number(alpha.value) || ALPHA_DEFAULT);
  });
  const minScore = root.querySelector<HTMLInputElement>("#min-score");
  minScore?.addEventListener("change", () => {
    store.setMinScore(Number(minScore.value) || 0);
  });
  const undo = root.querySelector<HTMLButtonElement>("#undo");
  undo?.addEventListener("click", () => store.undo());
}
