// Chat state machine. One in-flight utterance per session: input is refused
// while a request is pending, matching the service's per-session
// serialization. All UI actions reduce to utterances or documented
// endpoints.

import { ApiError, type ListItem, type SessionSummary, type UtteranceReply } from './api.js';

export interface Turn {
  role: 'user' | 'assistant';
  text: string;
}

export interface ChatState {
  sessionId: string | null;
  seed: string | null;
  summary: SessionSummary | null;
  turns: Turn[];
  items: ListItem[];
  busy: boolean;
  error: string | null;
  canRetry: boolean;
  needsReopen: boolean;
  bookmarkedSeeds: string[];
}

// The slice of SessionApi the controller needs; tests inject a fake.
export interface SessionClient {
  openSession(seed: string): Promise<string>;
  sendUtterance(sessionId: string, utterance: string): Promise<UtteranceReply>;
  summary(sessionId: string): Promise<SessionSummary>;
  closeSession(sessionId: string): Promise<void>;
}

export class ChatController {
  private state: ChatState = {
    sessionId: null,
    seed: null,
    summary: null,
    turns: [],
    items: [],
    busy: false,
    error: null,
    canRetry: false,
    needsReopen: false,
    bookmarkedSeeds: [],
  };
  private lastUtterance: string | null = null;

  constructor(
    private readonly api: SessionClient,
    private readonly onChange: (state: ChatState) => void = () => {},
  ) {}

  getState(): ChatState {
    return { ...this.state, turns: [...this.state.turns], items: [...this.state.items] };
  }

  private update(patch: Partial<ChatState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.getState());
  }

  async openSite(seed: string): Promise<boolean> {
    if (this.state.busy) return false;
    this.update({ busy: true, error: null, canRetry: false, needsReopen: false });
    try {
      const sessionId = await this.api.openSession(seed);
      const summary = await this.api.summary(sessionId);
      const bookmarked = this.state.bookmarkedSeeds.includes(seed)
        ? this.state.bookmarkedSeeds
        : [...this.state.bookmarkedSeeds, seed];
      this.update({
        sessionId,
        seed,
        summary,
        turns: [{ role: 'assistant', text: `Connected to ${summary.current_title}.` }],
        items: [],
        busy: false,
        bookmarkedSeeds: bookmarked,
      });
      return true;
    } catch (err) {
      this.update({ busy: false, error: describe(err), canRetry: false });
      return false;
    }
  }

  async sendUtterance(text: string): Promise<UtteranceReply | null> {
    const utterance = text.trim();
    if (!utterance || this.state.busy || this.state.sessionId === null) return null;
    this.lastUtterance = utterance;
    this.update({
      busy: true,
      error: null,
      canRetry: false,
      turns: [...this.state.turns, { role: 'user', text: utterance }],
    });
    try {
      const reply = await this.api.sendUtterance(this.state.sessionId, utterance);
      const summary = await this.api.summary(this.state.sessionId);
      this.update({
        busy: false,
        summary,
        turns: [...this.state.turns, { role: 'assistant', text: reply.text }],
        items: reply.items,
      });
      return reply;
    } catch (err) {
      const expired = err instanceof ApiError && err.kind === 'session_expired';
      this.update({
        busy: false,
        error: describe(err),
        canRetry: !expired,
        needsReopen: expired,
      });
      return null;
    }
  }

  // Clicking item N is exactly the utterance "open N".
  async clickItem(n: number): Promise<UtteranceReply | null> {
    return this.sendUtterance(`open ${n}`);
  }

  async retry(): Promise<UtteranceReply | null> {
    if (this.lastUtterance === null || !this.state.canRetry) return null;
    // The failed user turn is already in the log; resend without duplicating it.
    const utterance = this.lastUtterance;
    if (this.state.busy || this.state.sessionId === null) return null;
    this.update({ busy: true, error: null, canRetry: false });
    try {
      const reply = await this.api.sendUtterance(this.state.sessionId, utterance);
      const summary = await this.api.summary(this.state.sessionId);
      this.update({
        busy: false,
        summary,
        turns: [...this.state.turns, { role: 'assistant', text: reply.text }],
        items: reply.items,
      });
      return reply;
    } catch (err) {
      const expired = err instanceof ApiError && err.kind === 'session_expired';
      this.update({
        busy: false,
        error: describe(err),
        canRetry: !expired,
        needsReopen: expired,
      });
      return null;
    }
  }

  async toggleVerbosity(): Promise<void> {
    const short = this.state.summary?.prefs.verbosity === 'short';
    await this.sendUtterance(
      short ? 'turn off short interactions' : 'turn on short interactions',
    );
  }

  async stepSpeechRate(direction: 'up' | 'down'): Promise<void> {
    await this.sendUtterance(
      direction === 'up' ? 'increase speech rate' : 'slow down the speech',
    );
  }

  async close(): Promise<void> {
    if (this.state.sessionId !== null) {
      await this.api.closeSession(this.state.sessionId);
    }
    this.update({ sessionId: null, summary: null, items: [], needsReopen: false });
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    switch (err.kind) {
      case 'transport':
        return `Could not reach the browsing service: ${err.message}`;
      case 'session_expired':
        return 'Your session expired. Reopen the site to continue.';
      case 'open_failed':
        return `Could not open that site: ${err.message}`;
      default:
        return `The service reported an error: ${err.message}`;
    }
  }
  return String(err);
}
