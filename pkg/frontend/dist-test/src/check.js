/** The explicit Check action with its in-flight guard.
 *
 * The prover is only consulted when the user asks: one click, one request.
 * While a request is in flight the controller refuses further submissions
 * (the button renders disabled); the guard clears when the correlated
 * result arrives, the request fails, or the deadline passes.
 */
export class CheckController {
    constructor(transport, timeoutMs = 45000, now = Date.now) {
        this.transport = transport;
        this.timeoutMs = timeoutMs;
        this.now = now;
        this.inFlight = null;
        this.startedAt = 0;
        this.counter = 0;
    }
    get busy() {
        return this.inFlight !== null;
    }
    get pendingRequestId() {
        return this.inFlight;
    }
    /** Submit all task contents; returns the request id, or null when a
     * request is already in flight (the guard). */
    async requestCheck(courseId, tutorialId, blocks) {
        if (this.inFlight !== null)
            return null;
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
        }
        catch (error) {
            this.inFlight = null; // failed to send: button re-enables
            throw error;
        }
        return requestId;
    }
    /** Correlate an arriving result; true when it matches the pending
     * request and releases the guard, false for stale/foreign ids. */
    resolve(requestId) {
        if (this.inFlight !== requestId)
            return false;
        this.inFlight = null;
        return true;
    }
    /** Drop the guard when the deadline passed; true if it was dropped. */
    expireIfTimedOut() {
        if (this.inFlight !== null && this.now() - this.startedAt >= this.timeoutMs) {
            this.inFlight = null;
            return true;
        }
        return false;
    }
}
