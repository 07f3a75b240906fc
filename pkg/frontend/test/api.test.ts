import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { ApiError, Client, SessionStateSchema } from "../src/api.js";
import { sequencedFetch } from "./transport.js";

const fixture = JSON.parse(
  readFileSync(new URL("./fixtures/chemical_flow.json", import.meta.url), "utf8"),
);

describe("api client", () => {
  it("parses a recorded session payload", async () => {
    const { fetchFn } = sequencedFetch([
      { method: "POST", path: "/v1/sessions", status: 201, json: fixture.created },
    ]);
    const client = new Client("", fetchFn);
    const session = await client.createSession();
    expect(session.id).toBe(fixture.created.id);
    expect(session.finished).toBe(false);
    expect(session.question?.node).toBe(0);
    expect(session.question?.schema.choices).toHaveLength(3);
  });

  it("raises an ApiError from the error envelope, including step", async () => {
    const { fetchFn } = sequencedFetch([
      {
        method: "POST",
        path: "/v1/sessions/s1/answers",
        status: 400,
        json: { code: "invalid-answer", message: "choice out of range", step: 4 },
      },
    ]);
    const client = new Client("", fetchFn);
    const error = await client
      .postAnswer("s1", { choice: 99 })
      .then(() => null, (e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    const apiError = error as ApiError;
    expect(apiError.status).toBe(400);
    expect(apiError.code).toBe("invalid-answer");
    expect(apiError.message).toBe("choice out of range");
    expect(apiError.step).toBe(4);
  });

  it("keeps a generic message for non-envelope error bodies", async () => {
    const { fetchFn } = sequencedFetch([
      { method: "GET", path: "/v1/sessions/s1", status: 500, text: "boom" },
    ]);
    const client = new Client("", fetchFn);
    const error = await client.getSession("s1").then(() => null, (e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).code).toBe("http-error");
    expect((error as ApiError).status).toBe(500);
  });

  it("rejects malformed session payloads instead of guessing", async () => {
    const { fetchFn } = sequencedFetch([
      { method: "POST", path: "/v1/sessions", status: 201, json: { id: 42 } },
    ]);
    const client = new Client("", fetchFn);
    await expect(client.createSession()).rejects.toThrow();
  });

  it("returns model.lp as raw text", async () => {
    const { fetchFn } = sequencedFetch([
      { method: "GET", path: "/v1/sessions/s1/model.lp", text: fixture.model_lp },
    ]);
    const client = new Client("", fetchFn);
    expect(await client.getModelLp("s1")).toBe(fixture.model_lp);
  });

  it("sends answers as JSON bodies against the base URL", async () => {
    const step = fixture.steps[0];
    const { fetchFn, calls } = sequencedFetch([
      {
        method: "POST",
        path: `http://api/v1/sessions/${fixture.created.id}/answers`,
        json: step.response,
      },
    ]);
    const client = new Client("http://api", fetchFn);
    const session = await client.postAnswer(fixture.created.id, step.answer);
    expect(SessionStateSchema.parse(session)).toEqual(step.response);
    expect(calls[0]?.body).toBe(JSON.stringify(step.answer));
  });
});
