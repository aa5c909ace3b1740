/** Thin client for the /v1 HTTP and stream surface — the only backend
 * this application talks to. Transport factories are injectable so the
 * logic is testable without a browser. */
export class ApiError extends Error {
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
export class ApiClient {
    constructor(base, token, http = (url, init) => fetch(url, init), socketFactory = (url) => new WebSocket(url)) {
        this.base = base;
        this.token = token;
        this.http = http;
        this.socketFactory = socketFactory;
    }
    setToken(token) {
        this.token = token;
    }
    async request(method, path, body) {
        const response = await this.http(`${this.base}${path}`, {
            method,
            headers: {
                authorization: `Bearer ${this.token}`,
                ...(body !== undefined ? { "content-type": "application/json" } : {}),
            },
            ...(body !== undefined ? { body: JSON.stringify(body) } : {}),
        });
        if (response.status === 204)
            return null;
        if (response.status >= 400) {
            let code = "error";
            let message = `HTTP ${response.status}`;
            try {
                const payload = (await response.json());
                code = payload.error ?? code;
                message = payload.message ?? message;
            }
            catch {
                // non-JSON error body: keep the defaults
            }
            throw new ApiError(response.status, code, message);
        }
        return response.json();
    }
    async courses() {
        const data = (await this.request("GET", "/v1/courses"));
        return data.courses;
    }
    async tutorial(id, locale) {
        const suffix = locale ? `?locale=${encodeURIComponent(locale)}` : "";
        return (await this.request("GET", `/v1/tutorials/${id}${suffix}`));
    }
    async submitCheck(submission) {
        return (await this.request("POST", "/v1/checks", submission));
    }
    async checkResult(requestId) {
        return (await this.request("GET", `/v1/checks/${requestId}`));
    }
    async resetProgress(tutorialId) {
        return (await this.request("POST", `/v1/progress/${tutorialId}/reset`));
    }
    async rules(courseId, query = "", locale) {
        const params = new URLSearchParams({ course_id: courseId });
        if (query)
            params.set("q", query);
        if (locale)
            params.set("locale", locale);
        const data = (await this.request("GET", `/v1/rules?${params}`));
        return data.rules;
    }
    async symbols(query = "") {
        const params = query ? `?q=${encodeURIComponent(query)}` : "";
        const data = (await this.request("GET", `/v1/symbols${params}`));
        return data.symbols;
    }
    async highlight(document) {
        const data = (await this.request("POST", "/v1/tokens", { document }));
        return data.tokens;
    }
    /** Open the result stream; the token travels in the first frame. */
    openStream(onMessage, onClose) {
        const wsBase = this.base.replace(/^http/, "ws");
        const socket = this.socketFactory(`${wsBase}/v1/stream`);
        socket.onopen = () => socket.send(JSON.stringify({ token: this.token }));
        socket.onmessage = (event) => {
            try {
                onMessage(JSON.parse(event.data));
            }
            catch {
                // tolerate malformed frames; polling remains the fallback
            }
        };
        socket.onclose = () => onClose?.();
        return socket;
    }
}
