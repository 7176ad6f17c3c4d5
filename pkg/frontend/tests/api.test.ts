import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, type Claimed } from "../src/api";

interface Recorded {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: string | undefined;
}

/** Builds a fetch stub that records the request and returns a canned reply. */
function stubFetch(reply: () => Response) {
  const calls: Recorded[] = [];
  const impl: typeof fetch = async (input, init) => {
    calls.push({
      url: String(input),
      method: init?.method ?? "GET",
      headers: (init?.headers ?? {}) as Record<string, string>,
      body: init?.body as string | undefined,
    });
    return reply();
  };
  return { impl, calls };
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const CLAIMED: Claimed = {
  pair: {
    id: "p9",
    text1: "eka",
    text2: "toka",
    source: "ManualExtraction",
    status: "Claimed",
    version: 1,
  },
  ticket: {
    pair_id: "p9",
    annotator: "ann",
    expires_at: 1234.5,
    batch_id: "default",
  },
  lints: [{ code: "SingleTokenDiff", detail: "one token differs" }],
};

describe("nextCandidate", () => {
  it("returns the claimed payload and encodes query parts", async () => {
    const { impl, calls } = stubFetch(() => jsonResponse(200, CLAIMED));
    const client = new ApiClient("http://svc:1/", { fetchImpl: impl });
    const claimed = await client.nextCandidate("batch one", "a/b");
    expect(claimed).toEqual(CLAIMED);
    expect(calls[0]!.url).toBe(
      "http://svc:1/batches/batch%20one/next?annotator=a%2Fb",
    );
    expect(calls[0]!.method).toBe("GET");
  });

  it("maps 204 to null when the queue is drained", async () => {
    const { impl } = stubFetch(() => new Response(null, { status: 204 }));
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    expect(await client.nextCandidate("default", "ann")).toBeNull();
  });
});

describe("submitAnnotation", () => {
  it("posts JSON and returns the stored annotation", async () => {
    const stored = {
      pair_id: "p9",
      annotator: "ann",
      label: "4<s",
      rewrites: [],
      note: null,
      created_at: 7,
    };
    const { impl, calls } = stubFetch(() => jsonResponse(201, stored));
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    const body = {
      pair_id: "p9",
      annotator: "ann",
      label: "4<s",
      rewrites: [] as [string, string][],
    };
    expect(await client.submitAnnotation(body)).toEqual(stored);
    expect(calls[0]!.method).toBe("POST");
    expect(calls[0]!.url).toBe("http://svc:1/annotations");
    expect(calls[0]!.headers["Content-Type"]).toBe("application/json");
    expect(JSON.parse(calls[0]!.body as string)).toEqual(body);
  });

  it("surfaces structured rejections as ApiError with violations", async () => {
    const { impl } = stubFetch(() =>
      jsonResponse(422, {
        error: "InvalidLabel",
        detail: "flags require the top grade",
        violations: ["FlagOnNonUniversal"],
      }),
    );
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    const attempt = client.submitAnnotation({
      pair_id: "p9",
      annotator: "ann",
      label: "2<",
      rewrites: [],
    });
    const err = (await attempt.catch((e) => e)) as ApiError;
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("InvalidLabel");
    expect(err.detail).toBe("flags require the top grade");
    expect(err.violations).toEqual(["FlagOnNonUniversal"]);
    expect(err.status).toBe(422);
  });
});

describe("error handling", () => {
  it("keeps the HTTP status line for non-JSON error bodies", async () => {
    const { impl } = stubFetch(
      () => new Response("<html>boom</html>", { status: 502, statusText: "Bad Gateway" }),
    );
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    const err = (await client.health().catch((e) => e)) as ApiError;
    expect(err.code).toBe("HttpError");
    expect(err.detail).toBe("502 Bad Gateway");
    expect(err.status).toBe(502);
  });

  it("wraps network failures as ConnectionFailed", async () => {
    const impl: typeof fetch = async () => {
      throw new TypeError("fetch failed");
    };
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    const err = (await client.health().catch((e) => e)) as ApiError;
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("ConnectionFailed");
    expect(err.status).toBeNull();
  });
});

describe("request shaping", () => {
  it("sends a bearer token when configured", async () => {
    const { impl, calls } = stubFetch(() =>
      jsonResponse(200, { status: "ok", version: "1" }),
    );
    const client = new ApiClient("http://svc:1", {
      fetchImpl: impl,
      token: "sekret",
    });
    await client.health();
    expect(calls[0]!.headers["Authorization"]).toBe("Bearer sekret");
  });

  it("omits the authorization header without a token", async () => {
    const { impl, calls } = stubFetch(() =>
      jsonResponse(200, { status: "ok", version: "1" }),
    );
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    await client.health();
    expect(calls[0]!.headers["Authorization"]).toBeUndefined();
  });

  it("strips trailing slashes from the base URL", async () => {
    const { impl, calls } = stubFetch(() =>
      jsonResponse(200, { status: "ok", version: "1" }),
    );
    const client = new ApiClient("http://svc:1///", { fetchImpl: impl });
    await client.health();
    expect(calls[0]!.url).toBe("http://svc:1/healthz");
  });
});

describe("edit and export", () => {
  it("posts a one-sided edit body", async () => {
    const result = {
      pair: { ...CLAIMED.pair, text1: "lyhyempi", version: 2 },
      directive: null,
      lints: [],
    };
    const { impl, calls } = stubFetch(() => jsonResponse(200, result));
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    const edited = await client.editPair("p 9", {
      annotator: "ann",
      new_text1: "lyhyempi",
    });
    expect(edited).toEqual(result);
    expect(calls[0]!.url).toBe("http://svc:1/pairs/p%209/edit");
    expect(JSON.parse(calls[0]!.body as string)).toEqual({
      annotator: "ann",
      new_text1: "lyhyempi",
    });
  });

  it("returns export payloads as raw text", async () => {
    const tsv = "id\ttext1\ttext2\tlabel\np1\ta\tb\t4\n";
    const { impl, calls } = stubFetch(() => new Response(tsv, { status: 200 }));
    const client = new ApiClient("http://svc:1", { fetchImpl: impl });
    expect(await client.exportCorpus("tsv", "default")).toBe(tsv);
    expect(calls[0]!.url).toBe("http://svc:1/export?format=tsv&batch=default");
  });
});
