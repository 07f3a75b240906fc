/**
 * Wizard state machine over the /v1 session API.
 *
 * The server is the source of truth: every state transition awaits the
 * server response and replaces the cached session wholesale. The UI layer
 * renders views derived from this cache and never computes model
 * semantics itself.
 */

import { Answer, ApiError, Client, SessionState } from "./api.js";

export interface ConstraintPreview {
  readonly text: string;
}

export interface WizardState {
  readonly session: SessionState;
  /** node ids answered so far; length always equals transcript length */
  readonly breadcrumb: readonly number[];
  /** set when the server no longer knows the session (e.g. restart) */
  readonly stale: boolean;
}

export type View =
  | {
      kind: "choices";
      node: number;
      question: string;
      choices: { index: number; id: number; label: string }[];
      backEnabled: boolean;
    }
  | {
      kind: "form";
      node: number;
      question: string;
      builder: string;
      params: { name: string; type: string; optional: boolean }[];
      variables: string[];
      backEnabled: boolean;
    }
  | {
      kind: "summary";
      constraints: ConstraintPreview[];
      downloadEnabled: boolean;
    }
  | { kind: "stale"; transcript: string }
  | { kind: "fallback"; raw: unknown };

export class SubmitInFlightError extends Error {
  constructor() {
    super("an answer is already awaiting the server");
  }
}

export class Wizard {
  private state_: WizardState;
  private busy = false;

  private constructor(
    private readonly client: Client,
    session: SessionState,
  ) {
    this.state_ = { session, breadcrumb: [], stale: false };
  }

  static async start(client: Client): Promise<Wizard> {
    return new Wizard(client, await client.createSession());
  }

  get state(): WizardState {
    return this.state_;
  }

  /** Serialized transcript, the recovery path for stale sessions. */
  exportTranscript(): string {
    return JSON.stringify(this.state_.session.transcript, null, 2);
  }

  renderQuestion(): View {
    const { session, stale, breadcrumb } = this.state_;
    if (stale) return { kind: "stale", transcript: this.exportTranscript() };
    if (session.finished || session.question === null) {
      return {
        kind: "summary",
        constraints: session.constraints.map((text) => ({ text })),
        downloadEnabled: session.finished && session.pending === 0,
      };
    }
    const q = session.question;
    const backEnabled = breadcrumb.length > 0;
    if (q.schema.choices !== undefined) {
      return {
        kind: "choices",
        node: q.node,
        question: q.question,
        choices: q.schema.choices,
        backEnabled,
      };
    }
    if (q.schema.params !== undefined && q.schema.builder !== undefined) {
      return {
        kind: "form",
        node: q.node,
        question: q.question,
        builder: q.schema.builder,
        params: q.schema.params.map((p) => ({
          name: p.name,
          type: p.type,
          optional: p.optional ?? false,
        })),
        variables: session.variables,
        backEnabled,
      };
    }
    return { kind: "fallback", raw: q.schema };
  }

  private async transition(fn: () => Promise<SessionState>): Promise<SessionState> {
    if (this.busy) throw new SubmitInFlightError();
    this.busy = true;
    try {
      return await fn();
    } finally {
      this.busy = false;
    }
  }

  /**
   * Submit one answer. On a 4xx the error is rethrown for field-level
   * display and the cached state is untouched; on a network failure the
   * caller may simply retry, since nothing was recorded locally.
   */
  async submitAnswer(answer: Answer): Promise<View> {
    const node = this.state_.session.question?.node;
    const session = await this.transition(() =>
      this.client.postAnswer(this.state_.session.id, answer),
    ).catch((error) => {
      if (error instanceof ApiError && error.status === 404) {
        this.state_ = { ...this.state_, stale: true };
      }
      throw error;
    });
    this.state_ = {
      session,
      breadcrumb: [...this.state_.breadcrumb, node ?? -1],
      stale: false,
    };
    return this.renderQuestion();
  }

  async back(): Promise<View> {
    const session = await this.transition(() =>
      this.client.postBack(this.state_.session.id),
    );
    this.state_ = {
      session,
      breadcrumb: this.state_.breadcrumb.slice(0, -1),
      stale: false,
    };
    return this.renderQuestion();
  }

  /** Fetch the finished model's LP bytes unmodified. */
  async downloadModel(): Promise<string> {
    if (!this.state_.session.finished) {
      throw new Error("session is not complete; download is disabled");
    }
    return this.client.getModelLp(this.state_.session.id);
  }
}
