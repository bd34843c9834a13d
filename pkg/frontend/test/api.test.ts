// Contract tests against fixtures recorded from the real server.

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, FetchLike, tokenize } from "../src/api.js";

interface Fixture {
  request: { method: string; url: string; body: unknown };
  status: number;
  response: Record<string, unknown>;
}

function loadFixture(name: string): Fixture {
  const path = join(__dirname, "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(path, "utf-8")) as Fixture;
}

function fetchFromFixture(fixture: Fixture) {
  return vi.fn(async (url: string, init?: { method?: string; body?: string }) => {
    expect(url).toBe(fixture.request.url);
    expect(init?.method ?? "GET").toBe(fixture.request.method);
    if (fixture.request.body !== null) {
      expect(JSON.parse(init!.body!)).toEqual(fixture.request.body);
    }
    return {
      ok: fixture.status < 400,
      status: fixture.status,
      json: async () => fixture.response,
    };
  }) as unknown as FetchLike & ReturnType<typeof vi.fn>;
}

describe("ApiClient against recorded fixtures", () => {
  it("GET /api/models", async () => {
    const fixture = loadFixture("models");
    const client = new ApiClient(fetchFromFixture(fixture));
    const models = await client.models();
    expect(models).toEqual(fixture.response.models);
    expect(models.map((m) => m.task)).toEqual(["complete", "search", "summarize"]);
  });

  it("POST /api/complete sends the recorded schema and parses candidates", async () => {
    const fixture = loadFixture("complete");
    const client = new ApiClient(fetchFromFixture(fixture));
    const req = fixture.request.body as { model_id: string; tokens: string[]; k: number };
    const candidates = await client.complete(req);
    expect(candidates).toEqual(fixture.response.candidates);
    // server returns descending probabilities; the client must not re-sort
    const probs = candidates.map((c) => c.prob);
    expect(probs).toEqual([...probs].sort((a, b) => b - a));
  });

  it("POST /api/summarize", async () => {
    const fixture = loadFixture("summarize");
    const client = new ApiClient(fetchFromFixture(fixture));
    const req = fixture.request.body as { model_id: string; code: string };
    const summary = await client.summarize(req);
    expect(summary).toBe(fixture.response.summary);
  });

  it("POST /api/search", async () => {
    const fixture = loadFixture("search");
    const client = new ApiClient(fetchFromFixture(fixture));
    const req = fixture.request.body as { model_id: string; query: string; k: number };
    const hits = await client.search(req);
    expect(hits).toEqual(fixture.response.results);
  });

  it("maps 404 bodies to ApiError with the server message", async () => {
    const fixture = loadFixture("error_404");
    const client = new ApiClient(fetchFromFixture(fixture));
    const req = fixture.request.body as { model_id: string; tokens: string[]; k: number };
    await expect(client.complete(req)).rejects.toThrowError(ApiError);
    await expect(client.complete(req)).rejects.toMatchObject({
      status: 404,
      message: fixture.response.error,
    });
  });

  it("maps 422 empty-payload bodies to ApiError", async () => {
    const fixture = loadFixture("error_422");
    const client = new ApiClient(fetchFromFixture(fixture));
    const req = fixture.request.body as { model_id: string; tokens: string[]; k: number };
    await expect(client.complete(req)).rejects.toMatchObject({ status: 422 });
  });
});

describe("tokenize", () => {
  it("splits on runs of whitespace", () => {
    expect(tokenize("def add (")).toEqual(["def", "add", "("]);
    expect(tokenize("  a \n b\t")).toEqual(["a", "b"]);
    expect(tokenize("   ")).toEqual([]);
    expect(tokenize("")).toEqual([]);
  });
});
