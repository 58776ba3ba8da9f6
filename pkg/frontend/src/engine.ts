/** Trial sequencing: fixation, premise until Space, blank, question until F/J.
 *
 * Everything time- or IO-shaped comes in through EngineDeps, so the whole
 * sequence runs headless under test with a fake clock and scheduler. RTs
 * are differences of the injected monotonic clock, never wall time.
 */

import type {
  Phase,
  ResponseRecord,
  SessionItem,
  ViewState,
} from "./types.js";

export const FIXATION_MS = 1000;
export const ISI_MS = 500;

export const KEY_ADVANCE = " ";
export const KEY_YES = "j";
export const KEY_NO = "f";

export interface EngineDeps {
  /** Monotonic milliseconds. */
  now(): number;
  schedule(fn: () => void, ms: number): number;
  cancel(handle: number): void;
  /** Hands a finished response to the delivery queue; called exactly once
   * per answered item, in trial order. */
  sink(record: ResponseRecord): void;
  /** Called after every accepted response with all answered item ids. */
  saveProgress(answeredIds: string[]): void;
  render(view: ViewState): void;
}

export class TrialEngine {
  private phase: Phase = "instructions";
  private index = 0;
  private premiseShownAt = 0;
  private premiseRt = 0;
  private questionShownAt = 0;
  private timer: number | null = null;
  private readonly answered: Set<string>;

  constructor(
    private readonly workerId: string,
    private readonly items: SessionItem[],
    alreadyAnswered: Iterable<string>,
    private readonly deps: EngineDeps,
  ) {
    this.answered = new Set(alreadyAnswered);
  }

  get state(): Phase {
    return this.phase;
  }

  get trialIndex(): number {
    return this.index;
  }

  get answeredCount(): number {
    return this.answered.size;
  }

  /** Render the instruction screen; trials wait for confirmInstructions. */
  start(): void {
    this.phase = "instructions";
    this.draw("");
  }

  /** Explicit confirmation on the instruction screen starts trial 1. */
  confirmInstructions(): void {
    if (this.phase !== "instructions") return;
    this.beginNextTrial();
  }

  keydown(rawKey: string): void {
    const key = rawKey.length === 1 ? rawKey.toLowerCase() : rawKey;
    if (this.phase === "premise" && key === KEY_ADVANCE) {
      this.leavePremise();
    } else if (this.phase === "question" && (key === KEY_YES || key === KEY_NO)) {
      this.answer(key === KEY_YES ? "yes" : "no");
    }
    // any other key in any other phase is ignored
  }

  private beginNextTrial(): void {
    // resume support: slide past items answered in an earlier visit
    while (
      this.index < this.items.length &&
      this.answered.has(this.items[this.index].id)
    ) {
      this.index += 1;
    }
    if (this.index >= this.items.length) {
      this.phase = "done";
      this.draw("");
      return;
    }
    this.phase = "fixation";
    this.draw("+");
    this.timer = this.deps.schedule(() => this.showPremise(), FIXATION_MS);
  }

  private showPremise(): void {
    this.timer = null;
    this.phase = "premise";
    this.premiseShownAt = this.deps.now();
    this.draw(this.items[this.index].premise);
  }

  private leavePremise(): void {
    this.premiseRt = this.deps.now() - this.premiseShownAt;
    this.phase = "isi";
    this.draw(""); // the sentence disappears at the keypress
    this.timer = this.deps.schedule(() => this.showQuestion(), ISI_MS);
  }

  private showQuestion(): void {
    this.timer = null;
    this.phase = "question";
    this.questionShownAt = this.deps.now();
    this.draw(this.items[this.index].question);
  }

  private answer(response: "yes" | "no"): void {
    const item = this.items[this.index];
    const record: ResponseRecord = {
      worker_id: this.workerId,
      item_id: item.id,
      response,
      rt_premise_ms: Math.round(this.premiseRt),
      rt_question_ms: Math.round(this.deps.now() - this.questionShownAt),
    };
    // leave the question phase before anything else runs, so the second
    // press of a double keypress finds no question to answer
    this.answered.add(item.id);
    this.index += 1;
    this.deps.sink(record);
    this.deps.saveProgress([...this.answered]);
    this.beginNextTrial();
  }

  private draw(text: string): void {
    this.deps.render({
      phase: this.phase,
      trialIndex: this.index,
      totalTrials: this.items.length,
      answered: this.answered.size,
      text,
    });
  }
}
