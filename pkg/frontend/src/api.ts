/**
 * Typed client for the /v1 HTTP API.
 *
 * All payloads are validated with zod at the boundary; the client never
 * invents state of its own. The fetch function is injectable so tests can
 * mock the transport.
 */

import { z } from "zod";

export const ChoiceSchema = z.object({
  index: z.number().int(),
  id: z.number().int(),
  label: z.string(),
});

export const ParamSpecSchema = z.object({
  name: z.string(),
  type: z.string(),
  optional: z.boolean().optional(),
});

export const QuestionSchema = z.object({
  node: z.number().int(),
  question: z.string(),
  schema: z.object({
    navigation: z.array(z.string()),
    choices: z.array(ChoiceSchema).optional(),
    params: z.array(ParamSpecSchema).optional(),
    builder: z.string().optional(),
  }),
});

export const SessionStateSchema = z.object({
  id: z.string(),
  finished: z.boolean(),
  question: QuestionSchema.nullable(),
  transcript: z.array(z.unknown()),
  variables: z.array(z.string()),
  constraints: z.array(z.string()),
  pending: z.number().int(),
});

export type Question = z.infer<typeof QuestionSchema>;
export type SessionState = z.infer<typeof SessionStateSchema>;

export type Answer =
  | { choice: number }
  | { params: Record<string, unknown> }
  | { navigation: "BACK" | "RESTART_BRANCH" | "FINISH_BRANCH" };

const ErrorEnvelopeSchema = z.object({
  code: z.string(),
  message: z.string(),
  step: z.number().int().optional(),
});

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly step?: number;

  constructor(status: number, code: string, message: string, step?: number) {
    super(message);
    this.status = status;
    this.code = code;
    this.step = step;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function raiseEnvelope(response: Response): Promise<never> {
  let code = "http-error";
  let message = `HTTP ${response.status}`;
  let step: number | undefined;
  try {
    const parsed = ErrorEnvelopeSchema.parse(await response.json());
    code = parsed.code;
    message = parsed.message;
    step = parsed.step;
  } catch {
    // non-envelope body; keep the generic message
  }
  throw new ApiError(response.status, code, message, step);
}

export class Client {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  private async json<T>(schema: z.ZodType<T>, path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) await raiseEnvelope(response);
    return schema.parse(await response.json());
  }

  getTree(): Promise<unknown> {
    return this.json(z.unknown(), "/v1/omt");
  }

  createSession(): Promise<SessionState> {
    return this.json(SessionStateSchema, "/v1/sessions", { method: "POST" });
  }

  getSession(id: string): Promise<SessionState> {
    return this.json(SessionStateSchema, `/v1/sessions/${id}`);
  }

  postAnswer(id: string, answer: Answer): Promise<SessionState> {
    return this.json(SessionStateSchema, `/v1/sessions/${id}/answers`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(answer),
    });
  }

  postBack(id: string): Promise<SessionState> {
    return this.json(SessionStateSchema, `/v1/sessions/${id}/back`, { method: "POST" });
  }

  async getModelLp(id: string): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/sessions/${id}/model.lp`);
    if (!response.ok) await raiseEnvelope(response);
    return response.text();
  }

  classify(lpText: string): Promise<unknown> {
    return this.json(z.unknown(), "/v1/classify", {
      method: "POST",
      headers: { "content-type": "text/plain" },
      body: lpText,
    });
  }
}
