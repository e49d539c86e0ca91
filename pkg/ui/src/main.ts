/** Entry point: wires the store to the page and starts the first load.
 *
 * The service origin defaults to same-origin and can be overridden with
 * ?api=http://host:port for local development against a separate server.
 */

import { TriageApi } from "./api.js";
import { render } from "./render.js";
import { TriageStore } from "./state.js";

export function boot(root: HTMLElement, api: TriageApi): TriageStore {
  const store = new TriageStore(api);
  store.subscribe(() => render(root, store));
  render(root, store);
  void store.load();
  return store;
}

const rootEl = document.getElementById("app");
if (rootEl) {
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  boot(rootEl, new TriageApi(base));
}
