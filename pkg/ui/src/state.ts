/** Client-side session state for the triage view.
 *
 * The store never reorders or rescores anything. `master` keeps the rows
 * exactly as the last listing returned them, and every view of it is a
 * filter that preserves that order. Similarity and scoring stay on the
 * server; the client only applies the dismissed sets it is handed.
 *
 * Mutations run strictly one at a time through a promise chain. A click
 * hides the row immediately, then the server response reconciles the
 * removal: exactly the ids the server dismissed stay gone, anything the
 * optimistic step guessed wrong comes back.
 */

import { ApiError, TriageApi } from "./api.js";
import type { PredictionRow, RepFilterEntry, TriageStats } from "./types.js";

export const ALPHA_MIN = 0.8;
export const ALPHA_MAX = 1.0;
export const ALPHA_STEP = 0.01;
export const ALPHA_DEFAULT = 0.95;

export interface UndoToast {
  ids: string[];
  label: string;
}

type Listener = () => void;

export class TriageStore {
  master: PredictionRow[] = [];
  reps: RepFilterEntry[] = [];
  stats: TriageStats | null = null;
  alpha = ALPHA_DEFAULT;
  minScore = 0.0;

  connectionOk = true;
  lastError: string | null = null;
  toast: UndoToast | null = null;
  loaded = false;

  private removed = new Set<string>();
  private hiddenReps = new Set<string>();
  private listeners: Listener[] = [];
  private chain: Promise<void> = Promise.resolve();
  private pendingCount = 0;

  constructor(readonly api: TriageApi) {}

  // ------------------------------------------------------------- reads

  /** Rows to render, in the exact order the API returned them. */
  visibleRows(): PredictionRow[] {
    return this.master.filter(
      (r) => !this.removed.has(r.id) && !this.hiddenReps.has(r.rep),
    );
  }

  isHidden(rep: string): boolean {
    return this.hiddenReps.has(rep);
  }

  /** Mutations enqueued or in flight right now. */
  get pending(): number {
    return this.pendingCount;
  }

  /** Resolves once every queued mutation has settled. Test hook. */
  idle(): Promise<void> {
    return this.chain;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  // ------------------------------------------------------------- loads

  async load(): Promise<void> {
    try {
      const [rows, reps, stats] = await Promise.all([
        this.api.listPredictions({ minScore: this.minScore }),
        this.api.listRepresentations(),
        this.api.stats(),
      ]);
      this.master = rows;
      this.reps = reps;
      this.stats = stats;
      this.removed = new Set();
      this.hiddenReps = new Set(reps.filter((r) => r.hidden).map((r) => r.rep));
      this.connectionOk = true;
      this.lastError = null;
    } catch (err) {
      this.connectionOk = false;
      this.stats = null;
      this.lastError = describe(err);
    }
    this.loaded = true;
    this.emit();
  }

  setAlpha(alpha: number): void {
    this.alpha = Math.min(ALPHA_MAX, Math.max(ALPHA_MIN, alpha));
    this.emit();
  }

  setMinScore(minScore: number): void {
    this.minScore = Math.max(0, minScore);
    void this.load();
  }

  // --------------------------------------------------------- mutations

  ban(id: string): void {
    this.removed.add(id);
    this.toast = null;
    this.emit();
    this.enqueue(async () => {
      try {
        const resp = await this.api.ban(id);
        this.reconcile(id, resp.dismissed);
        this.toast = { ids: resp.dismissed, label: `banned ${resp.dismissed.length}` };
        await this.refreshMeta();
      } catch (err) {
        this.removed.delete(id);
        this.fail(err);
      }
      this.emit();
    });
  }

  banSimilar(id: string): void {
    const alpha = this.alpha;
    this.removed.add(id);
    this.toast = null;
    this.emit();
    this.enqueue(async () => {
      try {
        const resp = await this.api.banSimilar(id, alpha);
        this.reconcile(id, resp.dismissed);
        this.toast = {
          ids: resp.dismissed,
          label: `banned ${resp.dismissed.length} similar`,
        };
        await this.refreshMeta();
      } catch (err) {
        this.removed.delete(id);
        this.fail(err);
      }
      this.emit();
    });
  }

  undo(): void {
    const toast = this.toast;
    if (!toast) return;
    this.toast = null;
    this.emit();
    this.enqueue(async () => {
      try {
        for (const id of toast.ids) {
          await this.api.unban(id);
          this.removed.delete(id);
        }
        await this.refreshMeta();
      } catch (err) {
        this.fail(err);
      }
      this.emit();
    });
  }

  toggleRep(rep: string, hidden: boolean): void {
    if (hidden) this.hiddenReps.add(rep);
    else this.hiddenReps.delete(rep);
    this.emit();
    this.enqueue(async () => {
      try {
        await this.api.toggleRepresentation(rep, hidden);
        if (!hidden) {
          // Rows under a rep hidden at load time were never fetched.
          await this.load();
          return;
        }
        await this.refreshMeta();
      } catch (err) {
        if (hidden) this.hiddenReps.delete(rep);
        else this.hiddenReps.add(rep);
        this.fail(err);
      }
      this.emit();
    });
  }

  // --------------------------------------------------------- internals

  private enqueue(run: () => Promise<void>): void {
    this.pendingCount += 1;
    this.chain = this.chain
      .then(run)
      .finally(() => {
        this.pendingCount -= 1;
      });
  }

  /** Exactly the server's dismissed set stays removed. */
  private reconcile(clicked: string, dismissed: string[]): void {
    const gone = new Set(dismissed);
    if (!gone.has(clicked)) this.removed.delete(clicked);
    for (const id of dismissed) this.removed.add(id);
  }

  private async refreshMeta(): Promise<void> {
    const [reps, stats] = await Promise.all([
      this.api.listRepresentations(),
      this.api.stats(),
    ]);
    this.reps = reps;
    this.stats = stats;
    this.connectionOk = true;
  }

  private fail(err: unknown): void {
    this.lastError = describe(err);
    if (!(err instanceof ApiError)) this.connectionOk = false;
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }
}

function describe(err: unknown): string {
  if (err instanceof Error) return err.message;
  return String(err);
}
