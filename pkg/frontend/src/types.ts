/** Wire shapes of the /v1 API, as delivered by the server. */

export interface Span {
  start: number; // UTF-8 byte offset
  end: number;
}

export interface SymbolInfo {
  name: string;
  glyph: string;
  escape: string;
  abbreviation: string | null;
}

export interface RuleInfo {
  display_name: string;
  prover_name: string;
  schema: string;
  category: string;
  description: string;
}

export interface FeedbackItem {
  severity: "error" | "warning" | "information";
  origin_kind: "block" | "tutorial";
  block_id: string | null;
  local_span: Span | null;
  raw_text: string;
  hints: string[];
  kind: string;
  source_label: string;
}

export interface ProofStateInfo {
  block_id: string;
  position: number; // byte offset into the block content
  text: string;
  subgoals: number;
}

export interface BlockDiagnostic {
  block_id: string;
  severity: string;
  span: Span;
  code: string;
  message: string;
  layer: string;
}

export interface CheckPayload {
  request_id: string;
  status: string;
  feedback: FeedbackItem[];
  proof_states: ProofStateInfo[];
  diagnostics: BlockDiagnostic[];
  outcomes: Record<string, string>;
  error_code?: string;
  error?: string;
}

export interface StreamMessage {
  type: "check-result" | "notice";
  request_id: string | null;
  payload: CheckPayload | Record<string, unknown>;
}

export interface BlockView {
  id: string;
  kind: "text" | "example" | "task" | "hidden";
  content?: Record<string, string> | string;
  code?: string;
  initial?: string;
  outcome?: string;
  hidden?: boolean;
}

export interface SectionView {
  title: Record<string, string>;
  blocks: BlockView[];
}

export interface TutorialView {
  id: string;
  title: Record<string, string>;
  course_id: string;
  profile: string;
  sections: SectionView[];
}

export interface CourseView {
  id: string;
  title: string;
  locales: string[];
  profile: string;
  tutorials: string[];
  roster_size: number;
  enrolled: boolean;
}
