/** Wire and state types shared across the trial runner. */

export interface SessionItem {
  id: string;
  premise: string;
  question: string;
}

export interface SessionPayload {
  worker_id: string;
  list_id: string | null;
  items: SessionItem[];
  answered_item_ids: string[];
}

export interface ResponseRecord {
  worker_id: string;
  item_id: string;
  response: "yes" | "no";
  rt_premise_ms: number;
  rt_question_ms: number;
}

export interface QualItem {
  id: string;
  premise: string;
  question: string;
}

export interface QualResult {
  worker_id: string;
  n_correct: number;
  passed: boolean;
}

/** Phases advance strictly in this order within a trial; the instruction
 * screen sits before trial 1 and "done" after the last response. */
export type Phase =
  | "instructions"
  | "fixation"
  | "premise"
  | "isi"
  | "question"
  | "done";

export interface ViewState {
  phase: Phase;
  /** 0-based position in the list; moves only after a question response. */
  trialIndex: number;
  totalTrials: number;
  answered: number;
  /** Stimulus text: "+" in fixation, sentence/question text, "" when blank. */
  text: string;
}
