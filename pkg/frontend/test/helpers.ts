/** Shared doubles: a deterministic scheduler/clock and item factories. */

import type { ResponseRecord, SessionItem, ViewState } from "../src/types.js";
import { TrialEngine } from "../src/engine.js";

interface Scheduled {
  at: number;
  fn: () => void;
  id: number;
}

export class FakeTimers {
  now = 0;
  private due: Scheduled[] = [];
  private seq = 1;

  schedule = (fn: () => void, ms: number): number => {
    const id = this.seq;
    this.seq += 1;
    this.due.push({ at: this.now + ms, fn, id });
    return id;
  };

  cancel = (id: number): void => {
    this.due = this.due.filter((t) => t.id !== id);
  };

  /** Advance the clock, firing timers in order as they come due. */
  advance(ms: number): void {
    const target = this.now + ms;
    for (;;) {
      this.due.sort((a, b) => a.at - b.at);
      const next = this.due[0];
      if (!next || next.at > target) break;
      this.due.shift();
      this.now = next.at;
      next.fn();
    }
    this.now = target;
  }
}

export function makeItems(n: number): SessionItem[] {
  return Array.from({ length: n }, (_, k) => ({
    id: `item-${String(k).padStart(2, "0")}`,
    premise: `The premise number ${k} appeared on the screen.`,
    question: `Did premise number ${k} appear?`,
  }));
}

export interface Harness {
  engine: TrialEngine;
  timers: FakeTimers;
  posted: ResponseRecord[];
  saves: string[][];
  views: ViewState[];
}

export function harness(n = 96, answered: string[] = []): Harness {
  const timers = new FakeTimers();
  const posted: ResponseRecord[] = [];
  const saves: string[][] = [];
  const views: ViewState[] = [];
  const engine = new TrialEngine("w-test", makeItems(n), answered, {
    now: () => timers.now,
    schedule: timers.schedule,
    cancel: timers.cancel,
    sink: (record) => posted.push(record),
    saveProgress: (ids) => saves.push([...ids].sort()),
    render: (view) => views.push({ ...view }),
  });
  return { engine, timers, posted, saves, views };
}
