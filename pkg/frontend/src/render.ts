// Pure HTML-string renderers. Rendering is a function of API responses plus
// local input state only; nothing here computes offerings, parses pages, or
// second-guesses the server's text.

import type { ListItem, SessionSummary } from './api.js';
import type { ChatState, Turn } from './controller.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderTurn(turn: Turn): string {
  const who = turn.role === 'user' ? 'You' : 'Agent';
  return (
    `<div class="turn turn-${turn.role}">` +
    `<span class="who">${who}:</span> ` +
    `<span class="text">${escapeHtml(turn.text)}</span>` +
    `</div>`
  );
}

// Every enumerated item is a button that sends "open N" — the same list is
// usable by voice ("open two") and by click.
export function renderItems(items: ListItem[]): string {
  if (items.length === 0) return '';
  const buttons = items
    .map(
      (item) =>
        `<li><button type="button" class="item" data-n="${item.n}" ` +
        `aria-label="Open item ${item.n}: ${escapeHtml(item.label)}">` +
        `${item.n}. ${escapeHtml(item.label)}</button></li>`,
    )
    .join('');
  return `<ol class="items" aria-label="Options">${buttons}</ol>`;
}

export function renderBanner(summary: SessionSummary | null): string {
  if (summary === null) {
    return `<div class="banner">No session. Enter a site address to begin.</div>`;
  }
  const crumb = summary.history_titles.map(escapeHtml).join(' &rsaquo; ');
  return (
    `<div class="banner">` +
    `<strong>${escapeHtml(summary.current_title)}</strong>` +
    `<span class="crumb">${crumb}</span>` +
    `</div>`
  );
}

export function renderError(message: string, retryLabel: string | null): string {
  const retry =
    retryLabel === null
      ? ''
      : ` <button type="button" class="retry">${escapeHtml(retryLabel)}</button>`;
  return `<div class="error" role="alert">${escapeHtml(message)}${retry}</div>`;
}

export function renderPrefs(summary: SessionSummary | null): string {
  const verbosity = summary?.prefs.verbosity ?? 'normal';
  const rate = summary?.prefs.speech_rate ?? 3;
  return (
    `<div class="prefs">` +
    `<button type="button" class="verbosity" aria-pressed="${verbosity === 'short'}">` +
    `Short replies: ${verbosity === 'short' ? 'on' : 'off'}</button>` +
    `<span class="rate">Speech rate ${rate}/5</span>` +
    `<button type="button" class="rate-down" aria-label="Slower speech">-</button>` +
    `<button type="button" class="rate-up" aria-label="Faster speech">+</button>` +
    `</div>`
  );
}

export function renderChat(state: ChatState): string {
  const turns = state.turns.map(renderTurn).join('');
  const items = renderItems(state.items);
  const error =
    state.error === null ? '' : renderError(state.error, state.canRetry ? 'Retry' : null);
  return (
    renderBanner(state.summary) +
    renderPrefs(state.summary) +
    `<div class="log" role="log" aria-live="polite">${turns}</div>` +
    items +
    error
  );
}
