// DOM wiring for the chat page. Everything testable lives in controller.ts
// and render.ts; this file only connects them to the document.

import { SessionApi } from './api.js';
import { ChatController } from './controller.js';
import { renderChat } from './render.js';

const API_BASE =
  new URLSearchParams(window.location.search).get('api') ?? 'http://127.0.0.1:8765';

function start(): void {
  const root = document.getElementById('chat');
  const seedInput = document.getElementById('seed') as HTMLInputElement | null;
  const openButton = document.getElementById('open');
  const utteranceInput = document.getElementById('utterance') as HTMLInputElement | null;
  const sendButton = document.getElementById('send');
  if (!root || !seedInput || !openButton || !utteranceInput || !sendButton) return;

  const controller = new ChatController(new SessionApi(API_BASE), (state) => {
    root.innerHTML = renderChat(state);
    utteranceInput.disabled = state.busy || state.sessionId === null;
    (sendButton as HTMLButtonElement).disabled = state.busy || state.sessionId === null;
  });

  openButton.addEventListener('click', () => {
    void controller.openSite(seedInput.value.trim());
  });

  const send = () => {
    const text = utteranceInput.value;
    utteranceInput.value = '';
    void controller.sendUtterance(text);
  };
  sendButton.addEventListener('click', send);
  utteranceInput.addEventListener('keydown', (event) => {
    if (event.key === 'Enter') send();
  });

  // Delegated clicks: ordinal buttons, retry, prefs.
  root.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains('item')) {
      const n = Number(target.dataset.n);
      if (Number.isInteger(n)) void controller.clickItem(n);
    } else if (target.classList.contains('retry')) {
      void controller.retry();
    } else if (target.classList.contains('verbosity')) {
      void controller.toggleVerbosity();
    } else if (target.classList.contains('rate-up')) {
      void controller.stepSpeechRate('up');
    } else if (target.classList.contains('rate-down')) {
      void controller.stepSpeechRate('down');
    }
  });
}

if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', start);
}
