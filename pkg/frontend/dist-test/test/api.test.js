import { strict as assert } from "node:assert";
import { test } from "node:test";
import { ApiClient, ApiError } from "../src/api.js";
function httpStub(routes) {
    const calls = [];
    const http = async (url, init) => {
        calls.push({ url, init });
        const key = `${init?.method ?? "GET"} ${url}`;
        const route = routes[key];
        if (route === undefined)
            throw new Error(`unexpected ${key}`);
        return {
            status: route.status,
            json: async () => route.body,
            text: async () => JSON.stringify(route.body),
        };
    };
    return { http, calls };
}
test("requests carry the bearer token", async () => {
    const { http, calls } = httpStub({
        "GET http://api/v1/courses": { status: 200, body: { courses: [] } },
    });
    const client = new ApiClient("http://api", "tok-123", http);
    await client.courses();
    const headers = calls[0].init.headers;
    assert.equal(headers["authorization"], "Bearer tok-123");
});
test("error payloads become typed ApiErrors", async () => {
    const { http } = httpStub({
        "GET http://api/v1/tutorials/x": {
            status: 403,
            body: { error: "not-enrolled", message: "you are not enrolled in this course" },
        },
    });
    const client = new ApiClient("http://api", "tok", http);
    await assert.rejects(() => client.tutorial("x"), (error) => error instanceof ApiError && error.code === "not-enrolled" && error.status === 403);
});
test("the stream authenticates with the first frame and forwards messages", () => {
    let sent = [];
    const socket = {
        send: (data) => void sent.push(data),
        close: () => undefined,
        onmessage: null,
        onclose: null,
        onopen: null,
    };
    const client = new ApiClient("http://api", "tok-9", async () => {
        throw new Error("no http in this test");
    }, () => socket);
    const received = [];
    const handle = client.openStream((message) => void received.push(message));
    assert.equal(handle, socket);
    socket.onopen?.({});
    assert.deepEqual(JSON.parse(sent[0]), { token: "tok-9" });
    socket.onmessage?.({
        data: JSON.stringify({ type: "check-result", request_id: "r1", payload: { status: "finished-ok" } }),
    });
    assert.equal(received.length, 1);
    assert.equal(received[0].request_id, "r1");
    socket.onmessage?.({ data: "not json" }); // tolerated
    assert.equal(received.length, 1);
});
test("stream url swaps http for ws", () => {
    let opened = "";
    const client = new ApiClient("https://proofs.example", "t", async () => {
        throw new Error("unused");
    }, (url) => {
        opened = url;
        return { send: () => undefined, close: () => undefined, onmessage: null, onclose: null, onopen: null };
    });
    client.openStream(() => undefined);
    assert.equal(opened, "wss://proofs.example/v1/stream");
});
