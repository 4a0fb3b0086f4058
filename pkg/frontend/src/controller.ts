/** Session controller: serializes learner actions, keeps the poll loop
 * alive and folds every server response into the state.
 *
 * One mutation is in flight at a time; polling is suspended while a
 * mutation is pending. Connection loss flips a banner flag without
 * discarding local state. */

import { ApiClient, ApiError } from "./api";
import {
  UiSessionState,
  canSubmit,
  initialState,
  isOver,
  withConnectionLost,
  withInFlight,
  withNotice,
  withSession,
  withView,
} from "./state";
import type { ClientView, LearnerAction } from "./types";

export const DEFAULT_POLL_MS = 5000;

export interface ControllerOptions {
  pollMs?: number;
  onChange?: (state: UiSessionState) => void;
  /** injectable for tests */
  setIntervalFn?: typeof setInterval;
  clearIntervalFn?: typeof clearInterval;
}

export class SessionController {
  state: UiSessionState = initialState();
  private timer: ReturnType<typeof setInterval> | null = null;
  private readonly pollMs: number;
  private readonly onChange: (state: UiSessionState) => void;
  private readonly setIntervalFn: typeof setInterval;
  private readonly clearIntervalFn: typeof clearInterval;

  constructor(
    private api: ApiClient,
    options: ControllerOptions = {},
  ) {
    this.pollMs = options.pollMs ?? DEFAULT_POLL_MS;
    this.onChange = options.onChange ?? (() => {});
    this.setIntervalFn = options.setIntervalFn ?? setInterval.bind(globalThis);
    this.clearIntervalFn = options.clearIntervalFn ?? clearInterval.bind(globalThis);
  }

  private update(state: UiSessionState): void {
    this.state = state;
    this.onChange(state);
  }

  setState(mutate: (state: UiSessionState) => UiSessionState): void {
    this.update(mutate(this.state));
  }

  async start(scenario: string): Promise<void> {
    const { id, view } = await this.api.createSession(scenario);
    this.update(withSession(this.state, id, view));
    this.timer = this.setIntervalFn(() => {
      void this.pollCues();
    }, this.pollMs);
  }

  stop(): void {
    if (this.timer !== null) {
      this.clearIntervalFn(this.timer);
      this.timer = null;
    }
  }

  private fold(view: ClientView): void {
    this.update(withView(this.state, view));
    if (isOver(this.state)) this.stop();
  }

  private async mutate(action: LearnerAction): Promise<void> {
    if (this.state.sessionId === null || this.state.inFlight) return;
    this.update(withInFlight(withNotice(this.state, null), true));
    try {
      const view = await this.api.applyAction(this.state.sessionId, action);
      this.update(withInFlight(this.state, false));
      this.fold(view);
    } catch (error) {
      this.update(withInFlight(this.state, false));
      if (error instanceof ApiError) {
        // stale choices and finished sessions surface as notices, then
        // the view refreshes so the learner sees current reality
        this.update(withNotice(this.state, error.message));
        await this.refresh();
      } else {
        this.update(withConnectionLost(this.state));
      }
    }
  }

  async refresh(): Promise<void> {
    if (this.state.sessionId === null) return;
    try {
      const view = await this.api.getView(this.state.sessionId);
      this.fold(view);
    } catch (error) {
      if (!(error instanceof ApiError)) {
        this.update(withConnectionLost(this.state));
      }
    }
  }

  /** Periodic heartbeat: advances the server's logical clock so idle
   * timeouts and their cues show up within one interval. */
  async pollCues(): Promise<void> {
    if (this.state.sessionId === null || this.state.inFlight) return;
    if (isOver(this.state)) {
      this.stop();
      return;
    }
    await this.mutate({ type: "tick" });
  }

  async chooseDialogue(npcId: string, choiceIndex: number): Promise<void> {
    await this.mutate({ type: "dialogue_choice", npc: npcId, choice: choiceIndex });
  }

  async submitConceptMap(): Promise<void> {
    if (!canSubmit(this.state)) return;
    await this.mutate({ type: "teach_submit", assignments: { ...this.state.placed } });
  }

  logDownloadUrl(format: "jsonl" | "csv" = "jsonl"): string | null {
    if (this.state.sessionId === null) return null;
    return this.api.logUrl(this.state.sessionId, format);
  }
}
