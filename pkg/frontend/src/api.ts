// Thin typed client for the convbrowse session API. No logic beyond
// transport and error shaping lives here: the server owns the dialog.

export interface ListItem {
  n: number;
  label: string;
}

export interface UtteranceReply {
  text: string;
  items: ListItem[];
  kind: string;
  session_id: string;
}

export interface SessionSummary {
  session_id: string;
  seed: string;
  current_url: string;
  current_title: string;
  history_titles: string[];
  bookmarks: { label: string; url: string }[];
  prefs: { verbosity: 'short' | 'normal'; speech_rate: number };
}

export type ApiErrorKind = 'transport' | 'session_expired' | 'open_failed' | 'server';

export class ApiError extends Error {
  constructor(readonly kind: ApiErrorKind, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

interface ErrorBody {
  error?: string;
  detail?: string;
}

async function errorFrom(resp: Response): Promise<ApiError> {
  let body: ErrorBody = {};
  try {
    body = (await resp.json()) as ErrorBody;
  } catch {
    // non-JSON error body; fall through with the status line only
  }
  const detail = body.detail ?? `HTTP ${resp.status}`;
  if (resp.status === 404 && body.error === 'not_found') {
    return new ApiError('session_expired', detail);
  }
  if (body.error === 'open_failed') {
    return new ApiError('open_failed', detail);
  }
  return new ApiError('server', detail);
}

export class SessionApi {
  constructor(readonly baseUrl: string) {}

  private async post(path: string, payload: unknown): Promise<Response> {
    try {
      return await fetch(this.baseUrl + path, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(payload),
      });
    } catch (err) {
      throw new ApiError('transport', String(err));
    }
  }

  async openSession(seed: string): Promise<string> {
    const resp = await this.post('/sessions', { seed });
    if (resp.status !== 201) throw await errorFrom(resp);
    const body = (await resp.json()) as { session_id: string };
    return body.session_id;
  }

  async sendUtterance(sessionId: string, utterance: string): Promise<UtteranceReply> {
    const resp = await this.post(`/sessions/${sessionId}/utterances`, { utterance });
    if (!resp.ok) throw await errorFrom(resp);
    return (await resp.json()) as UtteranceReply;
  }

  async summary(sessionId: string): Promise<SessionSummary> {
    let resp: Response;
    try {
      resp = await fetch(`${this.baseUrl}/sessions/${sessionId}`);
    } catch (err) {
      throw new ApiError('transport', String(err));
    }
    if (!resp.ok) throw await errorFrom(resp);
    return (await resp.json()) as SessionSummary;
  }

  async closeSession(sessionId: string): Promise<void> {
    try {
      await fetch(`${this.baseUrl}/sessions/${sessionId}`, { method: 'DELETE' });
    } catch {
      // closing is best-effort; an expired session is already gone
    }
  }
}
