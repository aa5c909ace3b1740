/** The explicit Check action with its in-flight guard.
 *
 * The prover is only consulted when the user asks: one click, one request.
 * While a request is in flight the controller refuses further submissions
 * (the button renders disabled); the guard clears when the correlated
 * result arrives, the request fails, or the deadline passes.
 */

export interface CheckSubmission {
  course_id: string;
  tutorial_id: string;
  request_id: string;
  blocks: Record<string, string>;
}

export interface CheckTransport {
  submit(request: CheckSubmission): Promise<{ request_id: string; state: string }>;
}

export class CheckController {
  private inFlight: string | null = null;
  private startedAt = 0;
  private counter = 0;

  constructor(
    private readonly transport: CheckTransport,
    private readonly timeoutMs: number = 45_000,
    private readonly now: () => number = Date.now,
  ) {}

  get busy(): boolean {
    return this.inFlight !== null;
  }

  get pendingRequestId(): string | null {
    return this.inFlight;
  }

  /** Submit all task contents; returns the request id, or null when a
   * request is already in flight (the guard). */
  async requestCheck(
    courseId: string,
    tutorialId: string,
    blocks: Record<string, string>,
  ): Promise<string | null> {
    if (this.inFlight !== null) return null;
    this.counter += 1;
    const requestId = `chk-${this.counter}-${Math.random().toString(36).slice(2, 10)}`;
    this.inFlight = requestId;
    this.startedAt = this.now();
    try {
      await this.transport.submit({
        course_id: courseId,
        tutorial_id: tutorialId,
        request_id: requestId,
        blocks,
      });
    } catch (error) {
      this.inFlight = null; // failed to send: button re-enables
      throw error;
    }
    return requestId;
  }

  /** Correlate an arriving result; true when it matches the pending
   * request and releases the guard, false for stale/foreign ids. */
  resolve(requestId: string): boolean {
    if (this.inFlight !== requestId) return false;
    this.inFlight = null;
    return true;
  }

  /** Drop the guard when the deadline passed; true if it was dropped. */
  expireIfTimedOut(): boolean {
    if (this.inFlight !== null && this.now() - this.startedAt >= this.timeoutMs) {
      this.inFlight = null;
      return true;
    }
    return false;
  }
}
