// Thin client for the workbench service. Every number shown in the UI
// comes back through here untouched; responses are parsed as JSON and
// handed over as-is.

import type {
  CreateResponse,
  DirectivesDoc,
  EvaluateResponse,
  ModelDoc,
  PartitionDoc,
  PathsResponse,
  ProbsDoc,
  SessionSummary,
  TreeDoc,
  TreeSummaryResponse,
  Violation,
  WhatifResponse,
} from "./types";

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<{
  status: number;
  ok: boolean;
  text(): Promise<string>;
}>;

export class ApiError extends Error {
  status: number;
  violations: Violation[];

  constructor(status: number, message: string, violations: Violation[] = []) {
    super(message);
    this.status = status;
    this.violations = violations;
  }
}

interface ErrorBody {
  error?: string;
  violations?: Violation[];
}

export class Client {
  private base: string;
  private fetchImpl: FetchLike;

  constructor(base = "", fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl =
      fetchImpl ?? ((url, init) => fetch(url, init) as ReturnType<FetchLike>);
  }

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<string> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const text = await response.text();
    if (!response.ok) {
      let parsed: ErrorBody = {};
      try {
        parsed = JSON.parse(text) as ErrorBody;
      } catch {
        // non-JSON error body; fall through with the raw text
      }
      throw new ApiError(
        response.status,
        parsed.error ?? text ?? `request failed (${response.status})`,
        parsed.violations ?? [],
      );
    }
    return text;
  }

  private async json<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    return JSON.parse(await this.request(method, path, body)) as T;
  }

  createSession(model: ModelDoc): Promise<CreateResponse> {
    return this.json("POST", "/api/models", model);
  }

  summary(session: string): Promise<SessionSummary> {
    return this.json("GET", `/api/models/${session}`);
  }

  generate(session: string): Promise<TreeSummaryResponse> {
    return this.json("POST", `/api/models/${session}/generate`);
  }

  reduce(session: string, directives: DirectivesDoc): Promise<TreeSummaryResponse> {
    return this.json("POST", `/api/models/${session}/reduce`, directives);
  }

  evaluate(
    session: string,
    partition: PartitionDoc,
    options: { probs?: ProbsDoc; label?: string } = {},
  ): Promise<EvaluateResponse> {
    const body: Record<string, unknown> = { partition };
    if (options.probs) {
      body.probs = options.probs;
    }
    if (options.label) {
      body.label = options.label;
    }
    return this.json("POST", `/api/models/${session}/evaluate`, body);
  }

  whatif(
    session: string,
    duplicate: string,
    partitions: { label?: string; before: PartitionDoc; after: PartitionDoc }[] = [],
  ): Promise<WhatifResponse> {
    return this.json("POST", `/api/models/${session}/whatif`, {
      duplicate,
      partitions,
    });
  }

  tree(session: string): Promise<TreeDoc> {
    return this.json("GET", `/api/models/${session}/tree.json`);
  }

  paths(session: string): Promise<PathsResponse> {
    return this.json("GET", `/api/models/${session}/paths.json`);
  }

  histogramCsv(session: string): Promise<string> {
    return this.request("GET", `/api/models/${session}/histogram.csv`);
  }

  histogramUrl(session: string): string {
    return `${this.base}/api/models/${session}/histogram.csv`;
  }
}
