/** Ordered, durable delivery of response records.
 *
 * One record in flight at a time, strictly FIFO. Transient failures
 * (network down, server 5xx) retry the same head forever with a fixed
 * delay, so nothing is dropped or reordered. The pending tail is mirrored
 * to storage on every change, which is what lets a page reload pick up
 * undelivered responses.
 */

import type { ResponseRecord } from "./types.js";

export class PostError extends Error {
  constructor(message: string, readonly permanent: boolean) {
    super(message);
  }
}

export interface QueueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface QueueOpts {
  retryDelayMs?: number;
  schedule?: (fn: () => void, ms: number) => void;
  /** A permanently rejected record (4xx) halts the queue; the record stays
   * buffered in storage and this callback fires once. */
  onStall?: (record: ResponseRecord, error: Error) => void;
}

export class PostQueue {
  private pending: ResponseRecord[];
  private pumping = false;
  private stalled = false;
  private waiters: Array<() => void> = [];
  private readonly retryDelayMs: number;
  private readonly scheduleFn: (fn: () => void, ms: number) => void;
  private readonly onStall: (record: ResponseRecord, error: Error) => void;

  constructor(
    private readonly poster: (record: ResponseRecord) => Promise<void>,
    private readonly store: QueueStore,
    private readonly key: string,
    opts: QueueOpts = {},
  ) {
    this.retryDelayMs = opts.retryDelayMs ?? 2000;
    this.scheduleFn = opts.schedule ?? ((fn, ms) => {
      setTimeout(fn, ms);
    });
    this.onStall = opts.onStall ?? (() => {});
    this.pending = this.load();
    if (this.pending.length > 0) {
      void this.pump();
    }
  }

  enqueue(record: ResponseRecord): void {
    this.pending.push(record);
    this.persist();
    void this.pump();
  }

  get size(): number {
    return this.pending.length;
  }

  /** Resolves once every buffered record has been delivered. */
  idle(): Promise<void> {
    if (this.pending.length === 0) return Promise.resolve();
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  private async pump(): Promise<void> {
    if (this.pumping || this.stalled) return;
    this.pumping = true;
    while (this.pending.length > 0) {
      const head = this.pending[0];
      try {
        await this.poster(head);
      } catch (err) {
        this.pumping = false;
        if (err instanceof PostError && err.permanent) {
          this.stalled = true;
          this.onStall(head, err);
          return;
        }
        this.scheduleFn(() => void this.pump(), this.retryDelayMs);
        return;
      }
      this.pending.shift();
      this.persist();
    }
    this.pumping = false;
    for (const waiter of this.waiters.splice(0)) waiter();
  }

  private persist(): void {
    if (this.pending.length === 0) {
      this.store.removeItem(this.key);
    } else {
      this.store.setItem(this.key, JSON.stringify(this.pending));
    }
  }

  private load(): ResponseRecord[] {
    const raw = this.store.getItem(this.key);
    if (raw === null) return [];
    try {
      return JSON.parse(raw) as ResponseRecord[];
    } catch {
      // corrupt buffer: better to start clean than to wedge the session
      this.store.removeItem(this.key);
      return [];
    }
  }
}
