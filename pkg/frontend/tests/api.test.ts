import { describe, expect, it } from "vitest";

import { ApiError, Client, type FetchLike } from "../src/api";
import type { ModelDoc } from "../src/types";

interface Call {
  url: string;
  method: string;
  body: unknown;
}

function fakeFetch(
  responses: { status: number; body: unknown }[],
): { fetch: FetchLike; calls: Call[] } {
  const calls: Call[] = [];
  const queue = [...responses];
  const fetch: FetchLike = (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body === undefined ? undefined : JSON.parse(init.body),
    });
    const next = queue.shift() ?? { status: 200, body: {} };
    return Promise.resolve({
      status: next.status,
      ok: next.status < 400,
      text: () =>
        Promise.resolve(
          typeof next.body === "string"
            ? next.body
            : JSON.stringify(next.body),
        ),
    });
  };
  return { fetch, calls };
}

const model: ModelDoc = {
  format: "etma-model/1",
  name: "tiny",
  components: [{ id: "A", states: ["O", "F"] }],
};

describe("request shapes", () => {
  it("posts the model document as the body", async () => {
    const { fetch, calls } = fakeFetch([
      { status: 201, body: { id: "ab12cd34-000000000000" } },
    ]);
    const client = new Client("", fetch);
    const created = await client.createSession(model);
    expect(created.id).toBe("ab12cd34-000000000000");
    expect(calls[0]).toEqual({
      url: "/api/models",
      method: "POST",
      body: model,
    });
  });

  it("sends evaluate with partition, optional probs and label", async () => {
    const { fetch, calls } = fakeFetch([
      { status: 200, body: { p_selected: 0.1, p_complement: 0.9, selected_indices: [1] } },
    ]);
    const client = new Client("", fetch);
    const partition = { mode: "indices" as const, values: ["3,5,7-10"] };
    await client.evaluate("ab12cd34-000000000000", partition, {
      label: "Both CBs Fail",
    });
    expect(calls[0]!.url).toBe("/api/models/ab12cd34-000000000000/evaluate");
    expect(calls[0]!.body).toEqual({ partition, label: "Both CBs Fail" });
  });

  it("sends whatif with the component and comparisons", async () => {
    const { fetch, calls } = fakeFetch([
      { status: 200, body: { id: "x", path_count: 31, results: [] } },
    ]);
    const client = new Client("", fetch);
    const partition = { mode: "indices" as const, values: ["3"] };
    await client.whatif("ab12cd34-000000000000", "CT", [
      { label: "fails", before: partition, after: partition },
    ]);
    expect(calls[0]!.body).toEqual({
      duplicate: "CT",
      partitions: [{ label: "fails", before: partition, after: partition }],
    });
  });

  it("prefixes a base URL and never doubles the slash", async () => {
    const { fetch, calls } = fakeFetch([{ status: 200, body: {} }]);
    const client = new Client("http://localhost:8898/", fetch);
    await client.summary("ab12cd34-000000000000");
    expect(calls[0]!.url).toBe(
      "http://localhost:8898/api/models/ab12cd34-000000000000",
    );
    expect(client.histogramUrl("s")).toBe(
      "http://localhost:8898/api/models/s/histogram.csv",
    );
  });

  it("returns raw text for the histogram export", async () => {
    const { fetch } = fakeFetch([
      { status: 200, body: "label,probability_percent\n" },
    ]);
    const client = new Client("", fetch);
    const csv = await client.histogramCsv("s");
    expect(csv).toBe("label,probability_percent\n");
  });
});

describe("error surfacing", () => {
  it("carries the service's error message and status", async () => {
    const { fetch } = fakeFetch([
      { status: 409, body: { error: "no tree yet; POST generate first" } },
    ]);
    const client = new Client("", fetch);
    const failure = await client
      .reduce("ab12cd34-000000000000", {
        format: "etma-directives/1",
        directives: [],
      })
      .then(
        () => null,
        (error: unknown) => error,
      );
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).status).toBe(409);
    expect((failure as ApiError).message).toBe(
      "no tree yet; POST generate first",
    );
  });

  it("keeps validation violations structured", async () => {
    const { fetch } = fakeFetch([
      {
        status: 422,
        body: {
          error: "model failed validation",
          violations: [
            {
              severity: "error",
              code: "duplicate-component",
              message: "component CT repeats",
              component: "CT",
              state: null,
            },
          ],
        },
      },
    ]);
    const client = new Client("", fetch);
    const failure = await client.createSession(model).then(
      () => null,
      (error: unknown) => error,
    );
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).violations).toHaveLength(1);
    expect((failure as ApiError).violations[0]!.code).toBe(
      "duplicate-component",
    );
  });

  it("tolerates a non-JSON error body", async () => {
    const { fetch } = fakeFetch([{ status: 502, body: "bad gateway" }]);
    const client = new Client("", fetch);
    const failure = await client.summary("s").then(
      () => null,
      (error: unknown) => error,
    );
    expect((failure as ApiError).status).toBe(502);
    expect((failure as ApiError).message).toBe("bad gateway");
  });
});
