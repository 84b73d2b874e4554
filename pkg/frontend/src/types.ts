/** Wire types for the workbench API (all under /api/v1). */

export interface TokenDto {
  index: number;
  form: string;
  lemma: string;
  upos: string;
  start: number;
  end: number;
}

export interface SentenceDto {
  id: string;
  text: string;
  tokens: TokenDto[];
  annotation_sets: number;
}

export interface DocumentSummary {
  id: string;
  title: string;
  sentences: number;
  as_counts: Record<string, number>;
}

export type NiKind = "INI" | "DNI" | "CNI";

export type FeRealization =
  | { name: string; start: number; end: number }
  | { name: string; ni: NiKind };

export function isNi(fe: FeRealization): fe is { name: string; ni: NiKind } {
  return "ni" in fe;
}

export type AsStatus =
  | "machine_pending"
  | "accepted"
  | "deleted"
  | "updated"
  | "created"
  | "human";

export interface AnnotationSetDto {
  id: string;
  sentence_id: string;
  lu: { lemma: string; pos: string; frame: string };
  target: { start: number; end: number };
  fes: FeRealization[];
  status: AsStatus;
  provenance: "machine" | "human";
  time_spent: number;
}

export interface EditResponse {
  seq: number;
  deduplicated: boolean;
  annotation_set: AnnotationSetDto;
}

export interface LeaseDto {
  doc_id: string;
  annotator: string;
  token: string;
  expires_at: number;
}

export interface FrameSearchHit {
  name: string;
  id: string;
  definition: string;
  lu_match: boolean;
}

export interface FrameDetail {
  name: string;
  id: string;
  definition: string;
  fes: { name: string; coreness: "core" | "non_core"; definition: string }[];
  excludes: string[][];
  core_sets: string[][];
  minimal_core: { count: number; witness: string[] };
}

export type EditAction =
  | { action: "accept"; payload?: Record<string, never> }
  | { action: "delete"; payload?: Record<string, never> }
  | { action: "replace_frame"; payload: { frame: string } }
  | { action: "add_fe"; payload: { fe_name: string; span: { start: number; end: number } } }
  | { action: "remove_fe"; payload: { fe_name: string } }
  | { action: "set_ni"; payload: { fe_name: string; ni: NiKind } };
