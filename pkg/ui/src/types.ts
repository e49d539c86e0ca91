/** Wire types mirrored from the triage HTTP API. */

export interface PredictionRow {
  id: string;
  rep: string;
  score: number;
  stmt: string;
  func: string;
  banned: boolean;
}

export interface RepFilterEntry {
  rep: string;
  count: number;
  hidden: boolean;
}

export interface TriageStats {
  total: number;
  visible: number;
  banned: number;
  hidden_reps: number;
  steps_taken: number;
}

export interface BanResponse {
  dismissed: string[];
}

export interface UnbanResponse {
  restored: string[];
}

export interface SinkSpecRow {
  rep: string;
  kind: string;
  score: number;
}
