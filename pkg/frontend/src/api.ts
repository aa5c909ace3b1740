/** Thin client for the /v1 HTTP and stream surface — the only backend
 * this application talks to. Transport factories are injectable so the
 * logic is testable without a browser. */

import type {
  CheckPayload,
  CourseView,
  RuleInfo,
  StreamMessage,
  SymbolInfo,
  TutorialView,
} from "./types.js";
import type { CheckSubmission } from "./check.js";

export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}

export type HttpFn = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<HttpResponse>;

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: ((event: unknown) => void) | null;
  onopen: ((event: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string,
    private token: string,
    private readonly http: HttpFn = (url, init) => fetch(url, init),
    private readonly socketFactory: SocketFactory = (url) =>
      new WebSocket(url) as unknown as SocketLike,
  ) {}

  setToken(token: string): void {
    this.token = token;
  }

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await this.http(`${this.base}${path}`, {
      method,
      headers: {
        authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { "content-type": "application/json" } : {}),
      },
      ...(body !== undefined ? { body: JSON.stringify(body) } : {}),
    });
    if (response.status === 204) return null;
    if (response.status >= 400) {
      let code = "error";
      let message = `HTTP ${response.status}`;
      try {
        const payload = (await response.json()) as { error?: string; message?: string };
        code = payload.error ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body: keep the defaults
      }
      throw new ApiError(response.status, code, message);
    }
    return response.json();
  }

  async courses(): Promise<CourseView[]> {
    const data = (await this.request("GET", "/v1/courses")) as { courses: CourseView[] };
    return data.courses;
  }

  async tutorial(id: string, locale?: string): Promise<TutorialView> {
    const suffix = locale ? `?locale=${encodeURIComponent(locale)}` : "";
    return (await this.request("GET", `/v1/tutorials/${id}${suffix}`)) as TutorialView;
  }

  async submitCheck(submission: CheckSubmission): Promise<{ request_id: string; state: string }> {
    return (await this.request("POST", "/v1/checks", submission)) as {
      request_id: string;
      state: string;
    };
  }

  async checkResult(requestId: string): Promise<{ state: string; response: CheckPayload | null }> {
    return (await this.request("GET", `/v1/checks/${requestId}`)) as {
      state: string;
      response: CheckPayload | null;
    };
  }

  async resetProgress(tutorialId: string): Promise<{ contents: Record<string, string> }> {
    return (await this.request("POST", `/v1/progress/${tutorialId}/reset`)) as {
      contents: Record<string, string>;
    };
  }

  async rules(courseId: string, query = "", locale?: string): Promise<RuleInfo[]> {
    const params = new URLSearchParams({ course_id: courseId });
    if (query) params.set("q", query);
    if (locale) params.set("locale", locale);
    const data = (await this.request("GET", `/v1/rules?${params}`)) as { rules: RuleInfo[] };
    return data.rules;
  }

  async symbols(query = ""): Promise<SymbolInfo[]> {
    const params = query ? `?q=${encodeURIComponent(query)}` : "";
    const data = (await this.request("GET", `/v1/symbols${params}`)) as {
      symbols: SymbolInfo[];
    };
    return data.symbols;
  }

  async highlight(document: string): Promise<{ kind: string; start: number; end: number }[]> {
    const data = (await this.request("POST", "/v1/tokens", { document })) as {
      tokens: { kind: string; start: number; end: number }[];
    };
    return data.tokens;
  }

  /** Open the result stream; the token travels in the first frame. */
  openStream(onMessage: (message: StreamMessage) => void, onClose?: () => void): SocketLike {
    const wsBase = this.base.replace(/^http/, "ws");
    const socket = this.socketFactory(`${wsBase}/v1/stream`);
    socket.onopen = () => socket.send(JSON.stringify({ token: this.token }));
    socket.onmessage = (event) => {
      try {
        onMessage(JSON.parse(event.data) as StreamMessage);
      } catch {
        // tolerate malformed frames; polling remains the fallback
      }
    };
    socket.onclose = () => onClose?.();
    return socket;
  }
}
