import { describe, expect, it } from "vitest";

import { FIXATION_MS, ISI_MS } from "../src/engine.js";
import { harness, makeItems } from "./helpers.js";

/** Answer the current trial: premise after `readMs`, question after `thinkMs`. */
function answerTrial(
  h: ReturnType<typeof harness>,
  key: string,
  readMs = 120,
  thinkMs = 80,
): void {
  h.timers.advance(FIXATION_MS); // fixation expires, premise on screen
  h.timers.advance(readMs);
  h.engine.keydown(" ");
  h.timers.advance(ISI_MS); // blank expires, question on screen
  h.timers.advance(thinkMs);
  h.engine.keydown(key);
}

describe("full session", () => {
  it("posts 96 well-formed records, one per item, in list order", () => {
    const h = harness(96);
    h.engine.start();
    h.engine.confirmInstructions();
    for (let k = 0; k < 96; k += 1) {
      answerTrial(h, k % 2 === 0 ? "j" : "f");
    }
    expect(h.engine.state).toBe("done");
    expect(h.posted).toHaveLength(96);
    const items = makeItems(96);
    h.posted.forEach((record, k) => {
      expect(record.worker_id).toBe("w-test");
      expect(record.item_id).toBe(items[k].id);
      expect(record.response).toBe(k % 2 === 0 ? "yes" : "no");
      expect(record.rt_premise_ms).toBe(120);
      expect(record.rt_question_ms).toBe(80);
    });
  });

  it("J answers yes and F answers no, case-insensitive", () => {
    const h = harness(4);
    h.engine.start();
    h.engine.confirmInstructions();
    answerTrial(h, "j");
    answerTrial(h, "f");
    answerTrial(h, "J");
    answerTrial(h, "F");
    expect(h.posted.map((r) => r.response)).toEqual(["yes", "no", "yes", "no"]);
  });

  it("reaction times are clock differences and never negative", () => {
    const h = harness(3);
    h.engine.start();
    h.engine.confirmInstructions();
    answerTrial(h, "j", 731, 244);
    answerTrial(h, "f", 1, 1);
    answerTrial(h, "j", 0, 0); // instant keypress still legal
    expect(h.posted.map((r) => r.rt_premise_ms)).toEqual([731, 1, 0]);
    expect(h.posted.map((r) => r.rt_question_ms)).toEqual([244, 1, 0]);
    for (const record of h.posted) {
      expect(record.rt_premise_ms).toBeGreaterThanOrEqual(0);
      expect(record.rt_question_ms).toBeGreaterThanOrEqual(0);
    }
  });
});

describe("phase discipline", () => {
  it("phases advance strictly fixation, premise, isi, question", () => {
    const h = harness(2);
    h.engine.start();
    h.engine.confirmInstructions();
    answerTrial(h, "j");
    answerTrial(h, "f");
    const phases = h.views.map((v) => v.phase);
    expect(phases).toEqual([
      "instructions",
      "fixation", "premise", "isi", "question",
      "fixation", "premise", "isi", "question",
      "done",
    ]);
  });

  it("trial index moves only after a question response", () => {
    const h = harness(2);
    h.engine.start();
    h.engine.confirmInstructions();
    expect(h.engine.trialIndex).toBe(0);
    h.timers.advance(FIXATION_MS); // premise up
    expect(h.engine.trialIndex).toBe(0);
    h.engine.keydown(" ");
    h.timers.advance(ISI_MS); // question up
    expect(h.engine.trialIndex).toBe(0);
    h.engine.keydown("j");
    expect(h.engine.trialIndex).toBe(1);
  });

  it("only space leaves the premise", () => {
    const h = harness(1);
    h.engine.start();
    h.engine.confirmInstructions();
    h.timers.advance(FIXATION_MS);
    h.engine.keydown("j");
    h.engine.keydown("f");
    h.engine.keydown("Enter");
    expect(h.engine.state).toBe("premise");
    h.engine.keydown(" ");
    expect(h.engine.state).toBe("isi");
  });

  it("only F or J answers the question", () => {
    const h = harness(1);
    h.engine.start();
    h.engine.confirmInstructions();
    h.timers.advance(FIXATION_MS);
    h.engine.keydown(" ");
    h.timers.advance(ISI_MS);
    h.engine.keydown(" ");
    h.engine.keydown("x");
    h.engine.keydown("Enter");
    expect(h.engine.state).toBe("question");
    expect(h.posted).toHaveLength(0);
    h.engine.keydown("f");
    expect(h.posted).toHaveLength(1);
  });

  it("keys during fixation and isi are ignored", () => {
    const h = harness(1);
    h.engine.start();
    h.engine.confirmInstructions();
    expect(h.engine.state).toBe("fixation");
    h.engine.keydown(" ");
    h.engine.keydown("j");
    expect(h.engine.state).toBe("fixation");
    h.timers.advance(FIXATION_MS);
    h.engine.keydown(" ");
    expect(h.engine.state).toBe("isi");
    h.engine.keydown("j");
    h.engine.keydown(" ");
    expect(h.engine.state).toBe("isi");
    expect(h.posted).toHaveLength(0);
  });

  it("a double keypress on the question posts exactly one record", () => {
    const h = harness(2);
    h.engine.start();
    h.engine.confirmInstructions();
    h.timers.advance(FIXATION_MS);
    h.engine.keydown(" ");
    h.timers.advance(ISI_MS);
    h.engine.keydown("j");
    h.engine.keydown("j"); // bounce lands in the next trial's fixation
    h.engine.keydown("f");
    expect(h.posted).toHaveLength(1);
    expect(h.posted[0].response).toBe("yes");
    expect(h.engine.state).toBe("fixation");
  });

  it("confirmation is required once and only once", () => {
    const h = harness(1);
    h.engine.start();
    expect(h.engine.state).toBe("instructions");
    h.engine.keydown(" ");
    h.engine.keydown("j");
    expect(h.engine.state).toBe("instructions");
    h.engine.confirmInstructions();
    expect(h.engine.state).toBe("fixation");
    h.engine.confirmInstructions(); // second click does nothing
    expect(h.engine.state).toBe("fixation");
  });
});

describe("resume", () => {
  it("starts at the first unanswered trial", () => {
    const items = makeItems(5);
    const h = harness(5, [items[0].id, items[1].id]);
    h.engine.start();
    h.engine.confirmInstructions();
    expect(h.engine.trialIndex).toBe(2);
    answerTrial(h, "j");
    expect(h.posted[0].item_id).toBe(items[2].id);
  });

  it("skips answered items scattered through the list", () => {
    const items = makeItems(5);
    const h = harness(5, [items[1].id, items[3].id]);
    h.engine.start();
    h.engine.confirmInstructions();
    answerTrial(h, "j");
    answerTrial(h, "j");
    answerTrial(h, "j");
    expect(h.engine.state).toBe("done");
    expect(h.posted.map((r) => r.item_id)).toEqual([
      items[0].id,
      items[2].id,
      items[4].id,
    ]);
  });

  it("a fully answered list is done at confirmation", () => {
    const items = makeItems(3);
    const h = harness(3, items.map((i) => i.id));
    h.engine.start();
    h.engine.confirmInstructions();
    expect(h.engine.state).toBe("done");
    expect(h.posted).toHaveLength(0);
  });

  it("saves cumulative progress after every response", () => {
    const items = makeItems(3);
    const h = harness(3, [items[0].id]);
    h.engine.start();
    h.engine.confirmInstructions();
    answerTrial(h, "j");
    answerTrial(h, "f");
    expect(h.saves).toEqual([
      [items[0].id, items[1].id].sort(),
      [items[0].id, items[1].id, items[2].id].sort(),
    ]);
  });
});
