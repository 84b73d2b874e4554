/** Per-AS review timing: the timer runs only while exactly one AS is focused;
 * switching focus stops and flushes the previous interval. Inactivity beyond
 * the idle limit auto-pauses the timer so wall-clock gaps do not inflate the
 * recorded interval; activity while paused resumes a fresh interval. */

export type TimerSink = (asId: string, action: "start" | "stop", ts: number) => void;

export interface ReviewTimerOptions {
  sink: TimerSink;
  now?: () => number; // seconds
  idleLimitSeconds?: number;
}

export class ReviewTimer {
  private sink: TimerSink;
  private now: () => number;
  readonly idleLimitSeconds: number;
  private activeAs: string | null = null;
  private running = false;
  private lastActivity = 0;

  constructor(options: ReviewTimerOptions) {
    this.sink = options.sink;
    this.now = options.now ?? (() => Date.now() / 1000);
    this.idleLimitSeconds = options.idleLimitSeconds ?? 120;
  }

  get active(): string | null {
    return this.activeAs;
  }

  get isRunning(): boolean {
    return this.running;
  }

  /** Focus an AS: flush the previous interval, start a new one. */
  focus(asId: string): void {
    if (this.activeAs === asId && this.running) {
      this.activity();
      return;
    }
    this.stop();
    this.activeAs = asId;
    this.lastActivity = this.now();
    this.running = true;
    this.sink(asId, "start", this.lastActivity);
  }

  /** Blur / switch away: emit the stop, capped at the idle limit. */
  stop(): void {
    if (!this.activeAs || !this.running) {
      this.activeAs = null;
      this.running = false;
      return;
    }
    const end = Math.min(this.now(), this.lastActivity + this.idleLimitSeconds);
    this.sink(this.activeAs, "stop", end);
    this.activeAs = null;
    this.running = false;
  }

  /** Annotator input (keys, clicks, selection) on the active AS. */
  activity(): void {
    if (!this.activeAs) return;
    const t = this.now();
    if (!this.running) {
      // resume after an auto-pause: a fresh interval starts now
      this.running = true;
      this.sink(this.activeAs, "start", t);
    }
    this.lastActivity = t;
  }

  /** Periodic idle check (call from setInterval). Auto-pauses the running
   * timer once the idle limit is exceeded, capping the interval. */
  tick(): void {
    if (!this.activeAs || !this.running) return;
    if (this.now() - this.lastActivity >= this.idleLimitSeconds) {
      this.sink(this.activeAs, "stop", this.lastActivity + this.idleLimitSeconds);
      this.running = false; // stays focused; next activity resumes
    }
  }
}
