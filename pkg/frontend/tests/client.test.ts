import { describe, expect, it } from "vitest";

import { PadClient } from "../src/client.js";

/**
 * Controllable fetch stand-in: records every call and lets the test resolve
 * or reject each one by hand. Honors AbortSignal like the real fetch.
 */
function fakeFetch() {
  interface Call {
    url: string;
    init?: RequestInit;
    respond: (response: Response) => void;
    fail: (error: unknown) => void;
  }
  const calls: Call[] = [];
  const impl = (url: string, init?: RequestInit): Promise<Response> =>
    new Promise<Response>((resolve, reject) => {
      const signal = init?.signal;
      if (signal?.aborted) {
        reject(new DOMException("aborted", "AbortError"));
        return;
      }
      signal?.addEventListener("abort", () =>
        reject(new DOMException("aborted", "AbortError")),
      );
      calls.push({ url, init, respond: resolve, fail: reject });
    });
  return { impl, calls };
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const OK_BODY = {
  label: "x",
  confidence: 0.9,
  cluster_id: 1,
  scores: { x: 0.9 },
  strokes: [],
  features: [],
};

describe("PadClient.recognize", () => {
  it("posts to the configured base URL, trailing slash normalized", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://example.test:9999///", impl);
    const pending = client.recognize([[[0, 0], [1, 1]]]);
    expect(calls[0]!.url).toBe("http://example.test:9999/api/recognize");
    expect(calls[0]!.init?.method).toBe("POST");
    expect(JSON.parse(calls[0]!.init?.body as string)).toStrictEqual({
      strokes: [[[0, 0], [1, 1]]],
    });
    calls[0]!.respond(jsonResponse(200, OK_BODY));
    expect(await pending).toStrictEqual({ kind: "ok", response: OK_BODY });
  });

  it("maps HTTP errors to http_error with the server's detail", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const pending = client.recognize([]);
    calls[0]!.respond(jsonResponse(422, { detail: "empty strokes array" }));
    expect(await pending).toStrictEqual({
      kind: "http_error",
      status: 422,
      detail: "empty strokes array",
    });
  });

  it("falls back to the status text when the error body is not JSON", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const pending = client.recognize([]);
    calls[0]!.respond(
      new Response("<html>boom</html>", { status: 500, statusText: "Internal Server Error" }),
    );
    expect(await pending).toStrictEqual({
      kind: "http_error",
      status: 500,
      detail: "Internal Server Error",
    });
  });

  it("maps a rejected fetch to network_error", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const pending = client.recognize([]);
    calls[0]!.fail(new TypeError("fetch failed"));
    expect(await pending).toStrictEqual({ kind: "network_error", message: "fetch failed" });
  });

  it("keeps a single request in flight: a newer call supersedes the pending one", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const first = client.recognize([[[0, 0], [1, 1]]]);
    const second = client.recognize([[[0, 0], [2, 2]]]);
    expect(calls[0]!.init?.signal?.aborted).toBe(true);
    expect(await first).toStrictEqual({ kind: "superseded" });
    calls[1]!.respond(jsonResponse(200, OK_BODY));
    expect(await second).toStrictEqual({ kind: "ok", response: OK_BODY });
  });

  it("sequential completed requests do not abort each other", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const first = client.recognize([]);
    calls[0]!.respond(jsonResponse(200, OK_BODY));
    expect((await first).kind).toBe("ok");
    const second = client.recognize([]);
    expect(calls[1]!.init?.signal?.aborted).toBe(false);
    calls[1]!.respond(jsonResponse(200, OK_BODY));
    expect((await second).kind).toBe("ok");
  });
});

describe("PadClient.echo", () => {
  it("returns the echoed strokes on 200", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const strokes = [[[0.1, 0.2, 3], [0.4, 0.5, 6]]];
    const pending = client.echo(strokes);
    expect(calls[0]!.url).toBe("http://h/api/echo");
    calls[0]!.respond(jsonResponse(200, { strokes }));
    expect(await pending).toStrictEqual({ status: 200, strokes });
  });

  it("returns status and detail on errors", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const pending = client.echo([[["bad" as unknown as number, 0]]]);
    calls[0]!.respond(jsonResponse(400, { detail: "stroke 0 point 0 must be [x, y] or [x, y, t] numbers" }));
    expect(await pending).toStrictEqual({
      status: 400,
      detail: "stroke 0 point 0 must be [x, y] or [x, y, t] numbers",
    });
  });
});

describe("PadClient health/model", () => {
  it("health is true on 200 and false on 503 or network failure", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const first = client.health();
    calls[0]!.respond(jsonResponse(200, { status: "ok" }));
    expect(await first).toBe(true);

    const second = client.health();
    calls[1]!.respond(jsonResponse(503, { detail: "no model loaded" }));
    expect(await second).toBe(false);

    const third = client.health();
    calls[2]!.fail(new TypeError("fetch failed"));
    expect(await third).toBe(false);
  });

  it("model returns the manifest on 200 and null otherwise", async () => {
    const { impl, calls } = fakeFetch();
    const client = new PadClient("http://h", impl);
    const manifest = {
      clusters: { "1": { class_labels: ["a"], layer_sizes: [120, 64, 1] } },
      config: { passes: 1 },
    };
    const okCall = client.model();
    calls[0]!.respond(jsonResponse(200, manifest));
    expect(await okCall).toStrictEqual(manifest);

    const errCall = client.model();
    calls[1]!.respond(jsonResponse(503, { detail: "no model loaded" }));
    expect(await errCall).toBeNull();
  });
});
