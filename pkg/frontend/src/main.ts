/** Browser entry point: qualification form first, then the timed trial run.
 *
 * Served as a static bundle by the annotation server, so all requests are
 * same-origin. Worker identity comes from the ?worker= query parameter
 * (crowd platforms fill it in) and is pinned in localStorage after that.
 */

import {
  ApiError,
  fetchQualification,
  makePoster,
  startSession,
  submitQualification,
} from "./api.js";
import { TrialEngine } from "./engine.js";
import { PostQueue } from "./queue.js";
import type { SessionPayload, ViewState } from "./types.js";

const BASE = "";

const app = document.getElementById("app") as HTMLElement;

function workerId(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("worker");
  if (fromQuery) {
    localStorage.setItem("gelp.worker", fromQuery);
    return fromQuery;
  }
  const stored = localStorage.getItem("gelp.worker");
  if (stored) return stored;
  const fresh = `w-${Math.random().toString(36).slice(2, 10)}`;
  localStorage.setItem("gelp.worker", fresh);
  return fresh;
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function screen(...children: (HTMLElement | string)[]): void {
  app.replaceChildren();
  for (const child of children) {
    app.append(typeof child === "string" ? el("p", "copy", child) : child);
  }
}

function showFatal(message: string): void {
  screen(
    el("h1", "title", "Something went wrong"),
    message,
    "Your completed answers are saved. Please reload the page, and contact the requester if this screen comes back.",
  );
}

// -- qualification ------------------------------------------------------

async function runQualification(id: string): Promise<boolean> {
  const items = await fetchQualification(BASE);
  return new Promise((resolve) => {
    const form = el("form", "qual-form");
    items.forEach((item, k) => {
      const block = el("fieldset", "qual-item");
      block.append(
        el("p", "qual-premise", `${k + 1}. ${item.premise}`),
        el("p", "qual-question", item.question),
      );
      for (const value of ["yes", "no"] as const) {
        const label = el("label", "qual-choice");
        const radio = document.createElement("input");
        radio.type = "radio";
        radio.name = item.id;
        radio.value = value;
        radio.required = true;
        label.append(radio, ` ${value}`);
        block.append(label);
      }
      form.append(block);
    });
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.className = "button";
    submit.textContent = "Submit answers";
    form.append(submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form as HTMLFormElement);
      const answers: Record<string, "yes" | "no"> = {};
      for (const item of items) {
        answers[item.id] = data.get(item.id) as "yes" | "no";
      }
      submitQualification(BASE, id, answers).then(
        (result) => {
          if (result.passed) {
            localStorage.setItem(`gelp.qualified.${id}`, "1");
            resolve(true);
          } else {
            screen(
              el("h1", "title", "Thanks for your interest"),
              `You answered ${result.n_correct} of ${items.length} screening questions correctly, which is below the bar for this study.`,
            );
            resolve(false);
          }
        },
        (err) => {
          showFatal(String(err));
          resolve(false);
        },
      );
    });
    screen(
      el("h1", "title", "Screening questions"),
      "Read each sentence, then answer the question below it using only what the sentence stated.",
      form,
    );
  });
}

// -- the timed run ------------------------------------------------------

const INSTRUCTIONS = [
  "You will read sentences one at a time. First a + appears in the middle of the screen; keep your eyes on it.",
  "A sentence then replaces the +. Read it carefully. When you have understood it, press the space bar. The sentence disappears as soon as you press.",
  "After a short blank pause a yes/no question appears. Answer with the keyboard: J means yes, F means no.",
  "Answer from what the sentence actually stated, even if it described something odd. There are 96 sentences; short breaks between trials are fine, but please answer each question promptly once it appears.",
];

function renderTrial(view: ViewState): void {
  if (view.phase === "done") {
    screen(
      el("h1", "title", "All done"),
      "Your responses have been recorded. Thank you. You can close this window.",
    );
    return;
  }
  const progress = el(
    "div",
    "progress",
    `${view.answered} / ${view.totalTrials}`,
  );
  const stage = el("div", "stage");
  const stimulus = el(
    "div",
    view.phase === "fixation" ? "fixation" : "stimulus",
    view.text,
  );
  stage.append(stimulus);
  const hint = el(
    "div",
    "hint",
    view.phase === "premise"
      ? "space bar when understood"
      : view.phase === "question"
        ? "J = yes   F = no"
        : "",
  );
  app.replaceChildren(progress, stage, hint);
}

function runTrials(id: string, session: SessionPayload): void {
  const progressKey = `gelp.progress.${id}.${session.list_id}`;
  let local: string[] = [];
  try {
    local = JSON.parse(localStorage.getItem(progressKey) ?? "[]") as string[];
  } catch {
    local = [];
  }
  // the server knows what it received; local storage additionally covers
  // responses still sitting in the delivery queue
  const answered = new Set([...session.answered_item_ids, ...local]);

  const queue = new PostQueue(
    makePoster(BASE),
    localStorage,
    `gelp.queue.${id}`,
    {
      onStall: (_record, err) =>
        showFatal(`The server rejected a response (${err.message}).`),
    },
  );
  const engine = new TrialEngine(id, session.items, answered, {
    now: () => performance.now(),
    schedule: (fn, ms) => window.setTimeout(fn, ms),
    cancel: (handle) => window.clearTimeout(handle),
    sink: (record) => queue.enqueue(record),
    saveProgress: (ids) => localStorage.setItem(progressKey, JSON.stringify(ids)),
    render: renderTrial,
  });

  document.addEventListener("keydown", (event) => {
    if (event.repeat) return; // held keys do not auto-fire responses
    engine.keydown(event.key);
  });

  const begin = document.createElement("button");
  begin.type = "button";
  begin.className = "button";
  begin.textContent = "Begin";
  begin.addEventListener("click", () => engine.confirmInstructions());
  engine.start();
  screen(
    el("h1", "title", "Instructions"),
    ...INSTRUCTIONS,
    begin,
  );
}

// -- boot ---------------------------------------------------------------

async function boot(): Promise<void> {
  const id = workerId();
  try {
    if (!localStorage.getItem(`gelp.qualified.${id}`)) {
      const passed = await runQualification(id);
      if (!passed) return;
    }
    const session = await startSession(BASE, id);
    if (session.list_id === null) {
      screen(
        el("h1", "title", "No work available"),
        "Every list is currently taken or finished. Thank you for checking in.",
      );
      return;
    }
    runTrials(id, session);
  } catch (err) {
    if (err instanceof ApiError && err.status === 403) {
      // server says not qualified: clear the stale local flag and retry
      localStorage.removeItem(`gelp.qualified.${id}`);
      const passed = await runQualification(id);
      if (passed) {
        const session = await startSession(BASE, id);
        if (session.list_id !== null) runTrials(id, session);
      }
      return;
    }
    showFatal(String(err));
  }
}

void boot();
