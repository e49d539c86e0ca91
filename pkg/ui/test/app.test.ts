// End-to-end view tests against a recorded mock of the triage service.
// The mock replays fixture JSON; no scoring or similarity runs client-side.

import { beforeEach, describe, expect, it } from "vitest";

import { TriageApi } from "../src/api.js";
import { boot } from "../src/main.js";
import type { TriageStore } from "../src/state.js";
import type { PredictionRow, RepFilterEntry, TriageStats } from "../src/types.js";

const ROWS: PredictionRow[] = [
  { id: "p1#3", rep: "relay(0)", score: 0.91, stmt: "relay(a);", func: "function f(a) {\n  relay(a);\n}", banned: false },
  { id: "p2#1", rep: "send(0)", score: 0.845, stmt: "send(b);", func: "function g(b) {\n  send(b);\n}", banned: false },
  { id: "p1#9", rep: "relay(0)", score: 0.84, stmt: "relay(c);", func: "function h(c) {\n  relay(c);\n}", banned: false },
  { id: "p3#2", rep: "log(0)", score: 0.61, stmt: "log(d);", func: "function k(d) {\n  log(d);\n}", banned: false },
  { id: "p2#7", rep: "send(0)", score: 0.55, stmt: "send(e);", func: "function m(e) {\n  send(e);\n}", banned: false },
];

const REPS: RepFilterEntry[] = [
  { rep: "relay(0)", count: 2, hidden: false },
  { rep: "send(0)", count: 2, hidden: false },
  { rep: "log(0)", count: 1, hidden: false },
];

const STATS: TriageStats = {
  total: 5, visible: 5, banned: 0, hidden_reps: 0, steps_taken: 0,
};

interface Call {
  method: string;
  path: string;
  body?: unknown;
}

type Handler = (id: string, body: unknown) => unknown;

interface ServiceOverrides {
  rows?: PredictionRow[];
  ban?: Handler;
  banSimilar?: Handler;
  unban?: Handler;
  failAll?: boolean;
  gate?: Array<() => void>;
}

function json(data: unknown, status = 200): Response {
  return new Response(JSON.stringify(data), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function mockService(overrides: ServiceOverrides = {}) {
  const calls: Call[] = [];
  const rows = overrides.rows ?? ROWS;
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, "http://svc.test");
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ method, path: url.pathname, body });
    if (overrides.failAll) throw new TypeError("fetch failed");
    if (overrides.gate) {
      await new Promise<void>((resolve) => overrides.gate?.push(resolve));
    }
    if (method === "GET" && url.pathname === "/api/predictions") return json(rows);
    if (method === "GET" && url.pathname === "/api/representations") return json(REPS);
    if (method === "GET" && url.pathname === "/api/stats") return json(STATS);
    const action = url.pathname.match(/^\/api\/predictions\/([^/]+)\/([a-z-]+)$/);
    if (action) {
      const id = decodeURIComponent(action[1] ?? "");
      const verb = action[2];
      if (verb === "ban") {
        return respond(overrides.ban, id, body, { dismissed: [id] });
      }
      if (verb === "ban-similar") {
        return respond(overrides.banSimilar, id, body, { dismissed: [id] });
      }
      if (verb === "unban") {
        return respond(overrides.unban, id, body, { restored: [id] });
      }
    }
    if (method === "POST" && url.pathname === "/api/representations/toggle") {
      return json(body);
    }
    return json({ detail: "unknown path" }, 404);
  };
  return { fetchFn, calls };
}

function respond(handler: Handler | undefined, id: string, body: unknown,
                 fallback: unknown): Response {
  if (!handler) return json(fallback);
  const out = handler(id, body);
  if (out instanceof Response) return out;
  return json(out);
}

async function settle(store: TriageStore): Promise<void> {
  for (let i = 0; i < 5; i++) {
    await store.idle();
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

function mount() {
  document.body.innerHTML = `<div id="app"></div>`;
  return document.getElementById("app") as HTMLElement;
}

function visibleIds(root: HTMLElement): string[] {
  return [...root.querySelectorAll<HTMLElement>("tr.pred-row")].map(
    (tr) => tr.dataset["id"] ?? "",
  );
}

function clickBanSimilar(root: HTMLElement, id: string): void {
  const btn = [...root.querySelectorAll<HTMLButtonElement>("button.ban-similar")]
    .find((b) => b.dataset["id"] === id);
  if (!btn) throw new Error(`no ban-similar button for ${id}`);
  btn.click();
}

function clickBan(root: HTMLElement, id: string): void {
  const btn = [...root.querySelectorAll<HTMLButtonElement>("button.ban")]
    .find((b) => b.dataset["id"] === id);
  if (!btn) throw new Error(`no ban button for ${id}`);
  btn.click();
}

describe("triage view", () => {
  let root: HTMLElement;

  beforeEach(() => {
    root = mount();
  });

  it("renders rows exactly in the order the listing returns", async () => {
    const svc = mockService();
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    expect(visibleIds(root)).toEqual(ROWS.map((r) => r.id));
    const scores = [...root.querySelectorAll<HTMLElement>("td.score")].map(
      (td) => td.textContent?.trim(),
    );
    expect(scores).toEqual(["0.91", "0.84", "0.84", "0.61", "0.55"]);
  });

  it("shows header counters straight from the stats endpoint", async () => {
    const svc = mockService();
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    expect(root.querySelector("#stat-visible")?.textContent).toBe("5");
    expect(root.querySelector("#stat-banned")?.textContent).toBe("0");
    expect(root.querySelector("#stat-hidden-reps")?.textContent).toBe("0");
    expect(root.querySelector("#stat-steps")?.textContent).toBe("0");
  });

  it("lists representations with counts in API order", async () => {
    const svc = mockService();
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    const entries = [...root.querySelectorAll<HTMLElement>(".rep-entry")];
    expect(entries.map((e) => e.dataset["rep"])).toEqual(
      REPS.map((r) => r.rep),
    );
    expect(entries.map((e) => e.querySelector(".count")?.textContent)).toEqual(
      ["2", "2", "1"],
    );
  });

  it("ban-similar removes exactly the server's dismissed set", async () => {
    const svc = mockService({
      banSimilar: () => ({ dismissed: ["p1#3", "p1#9"] }),
    });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    clickBanSimilar(root, "p1#3");
    await settle(store);

    expect(visibleIds(root)).toEqual(["p2#1", "p3#2", "p2#7"]);
    const post = svc.calls.find((c) => c.path.endsWith("/ban-similar"));
    expect(post?.body).toEqual({ alpha: 0.95 });
  });

  it("reconciles an optimistic removal the server did not confirm", async () => {
    // Contrived: the server dismisses a different row than the one clicked.
    const svc = mockService({
      banSimilar: () => ({ dismissed: ["p1#9"] }),
    });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    clickBanSimilar(root, "p1#3");
    await settle(store);

    expect(visibleIds(root)).toEqual(["p1#3", "p2#1", "p3#2", "p2#7"]);
  });

  it("sends the alpha picked on the slider", async () => {
    const svc = mockService({
      banSimilar: (_id, body) => ({ dismissed: ["p3#2"] }),
    });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    const slider = root.querySelector<HTMLInputElement>("#alpha");
    expect(slider).not.toBeNull();
    slider!.value = "0.85";
    slider!.dispatchEvent(new Event("input", { bubbles: true }));
    await settle(store);

    clickBanSimilar(root, "p3#2");
    await settle(store);

    const post = svc.calls.find((c) => c.path.endsWith("/ban-similar"));
    expect(post?.body).toEqual({ alpha: 0.85 });
  });

  it("keeps the similarity slider on the documented range", async () => {
    const svc = mockService();
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    const slider = root.querySelector<HTMLInputElement>("#alpha");
    expect(slider).not.toBeNull();
    expect(Number(slider!.min)).toBeCloseTo(0.8, 10);
    expect(Number(slider!.max)).toBeCloseTo(1.0, 10);
    expect(Number(slider!.step)).toBeCloseTo(0.01, 10);
    expect(Number(slider!.value)).toBeCloseTo(0.95, 10);
  });

  it("undo restores the dismissed rows at their old positions", async () => {
    const svc = mockService({
      banSimilar: () => ({ dismissed: ["p2#1", "p2#7"] }),
    });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    clickBanSimilar(root, "p2#1");
    await settle(store);
    expect(visibleIds(root)).toEqual(["p1#3", "p1#9", "p3#2"]);

    const undo = root.querySelector<HTMLButtonElement>("#undo");
    expect(undo).not.toBeNull();
    undo!.click();
    await settle(store);

    expect(visibleIds(root)).toEqual(ROWS.map((r) => r.id));
    const unbans = svc.calls.filter((c) => c.path.endsWith("/unban"));
    expect(unbans.map((c) => decodeURIComponent(c.path.split("/")[3] ?? "")))
      .toEqual(["p2#1", "p2#7"]);
  });

  it("restores the row and surfaces the error when a ban fails", async () => {
    const svc = mockService({
      ban: () => json({ detail: "boom" }, 500),
    });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    clickBan(root, "p3#2");
    await settle(store);

    expect(visibleIds(root)).toEqual(ROWS.map((r) => r.id));
    expect(root.querySelector("#error")?.textContent).toContain("boom");
  });

  it("shows a connection banner when the service is unreachable", async () => {
    const svc = mockService({ failAll: true });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    expect(root.querySelector("#banner")).not.toBeNull();
    expect(root.querySelector("#stats-bar")).toBeNull();
  });

  it("shows an empty-state message when nothing needs review", async () => {
    const svc = mockService({ rows: [] });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    expect(root.querySelector("#empty")?.textContent).toContain("no predictions");
  });

  it("hides a representation's rows when its filter is toggled", async () => {
    const svc = mockService();
    const store = boot(root, new TriageApi("", svc.fetchFn));
    await settle(store);

    const box = [...root.querySelectorAll<HTMLInputElement>("input.rep-toggle")]
      .find((b) => b.dataset["rep"] === "send(0)");
    expect(box).not.toBeNull();
    box!.checked = true;
    box!.dispatchEvent(new Event("change", { bubbles: true }));
    await settle(store);

    expect(visibleIds(root)).toEqual(["p1#3", "p1#9", "p3#2"]);
    const post = svc.calls.find((c) => c.path === "/api/representations/toggle");
    expect(post?.body).toEqual({ rep: "send(0)", hidden: true });
  });

  it("runs at most one mutation at a time", async () => {
    const gate: Array<() => void> = [];
    const svc = mockService({ gate });
    const store = boot(root, new TriageApi("", svc.fetchFn));
    // Release the three initial listing calls.
    while (store.pending === 0 && gate.length < 3) {
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
    while (gate.length > 0) gate.shift()?.();
    await settle(store);

    clickBan(root, "p1#3");
    clickBan(root, "p3#2");
    // Both rows vanish optimistically right away.
    expect(visibleIds(root)).toEqual(["p2#1", "p1#9", "p2#7"]);

    await new Promise((resolve) => setTimeout(resolve, 0));
    const posted = () =>
      svc.calls.filter((c) => c.method === "POST" && c.path.endsWith("/ban"));
    expect(posted().length).toBe(1);

    // Finish the first ban (and its stats refresh); only then the second fires.
    while (gate.length > 0) gate.shift()?.();
    await new Promise((resolve) => setTimeout(resolve, 0));
    while (gate.length > 0) gate.shift()?.();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(posted().length).toBe(2);

    for (let i = 0; i < 10; i++) {
      while (gate.length > 0) gate.shift()?.();
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
    await settle(store);
    expect(visibleIds(root)).toEqual(["p2#1", "p1#9", "p2#7"]);
  });
});
