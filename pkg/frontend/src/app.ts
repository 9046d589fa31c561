/**
 * Thin DOM layer: reads inputs, calls the API client, renders what the
 * service returns. All decisions and message text come from the server.
 */
import { ApiClient, ApiError } from './api.js';
import type { Notification, Outcome, QueueItem, Side } from './api.js';
import {
  emptyForm,
  groupOutbox,
  outcomePanel,
  toSubmissionBody,
  validateForm,
} from './state.js';
import type { FormState } from './state.js';

const api = new ApiClient('');

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function show(view: 'submit' | 'queue' | 'outbox'): void {
  for (const name of ['submit', 'queue', 'outbox'] as const) {
    el(`view-${name}`).hidden = name !== view;
    el(`nav-${name}`).classList.toggle('active', name === view);
  }
  if (view === 'queue') void renderQueue();
  if (view === 'outbox') void renderOutbox();
}

// ---------------------------------------------------------------- submit view

let photoFileName = '';
let photoBase64 = '';

function readForm(): FormState {
  return {
    side: (el<HTMLSelectElement>('f-side').value as Side) ?? 'MISSING',
    subject_name: el<HTMLInputElement>('f-subject').value,
    uploader: {
      name: el<HTMLInputElement>('f-name').value,
      nid: el<HTMLInputElement>('f-nid').value,
      phone: el<HTMLInputElement>('f-phone').value,
      email: el<HTMLInputElement>('f-email').value,
      address: el<HTMLInputElement>('f-address').value,
      police_station_id: el<HTMLInputElement>('f-station').value,
    },
    photoFileName,
    photoBase64,
  };
}

function renderOutcome(outcome: Outcome): void {
  const panel = outcomePanel(outcome);
  const box = el('submit-result');
  box.className = `panel ${panel.tone}`;
  box.hidden = false;
  const contactHtml = panel.contact
    ? `<div class="contact-card" id="contact-card">
         <h3>Contact on the other side</h3>
         <p class="contact-name">${escapeHtml(panel.contact.name)}</p>
         <p class="contact-phone">${escapeHtml(panel.contact.phone)}</p>
         <p class="contact-email">${escapeHtml(panel.contact.email)}</p>
       </div>`
    : '';
  box.innerHTML = `
    <p class="message">${escapeHtml(panel.message)}</p>
    <p class="entry-id">Entry ID: <code>${escapeHtml(panel.entryId)}</code></p>
    ${contactHtml}`;
}

function renderFormErrors(errors: string[]): void {
  const box = el('submit-result');
  box.className = 'panel rejected';
  box.hidden = false;
  box.innerHTML = `<ul>${errors.map((e) => `<li>${escapeHtml(e)}</li>`).join('')}</ul>`;
}

async function onPhotoChosen(input: HTMLInputElement): Promise<void> {
  const file = input.files?.[0];
  if (!file) return;
  photoFileName = file.name;
  const buf = new Uint8Array(await file.arrayBuffer());
  let binary = '';
  for (const byte of buf) binary += String.fromCharCode(byte);
  photoBase64 = btoa(binary);
  el('f-photo-name').textContent = file.name;
}

async function onSubmit(event: Event): Promise<void> {
  event.preventDefault();
  const form = readForm();
  const errors = validateForm(form);
  if (errors.length > 0) {
    renderFormErrors(errors);
    return;
  }
  try {
    const outcome = await api.submitEntry(toSubmissionBody(form));
    renderOutcome(outcome);
  } catch (err) {
    renderFormErrors([err instanceof ApiError ? err.message : String(err)]);
  }
}

// ----------------------------------------------------------------- queue view

function queueRow(item: QueueItem): string {
  return `
    <tr data-case="${escapeHtml(item.case_id)}">
      <td>${escapeHtml(item.summary.side)}</td>
      <td>${escapeHtml(item.summary.subject_name)}</td>
      <td>${escapeHtml(item.summary.uploader_name)}</td>
      <td><code>${escapeHtml(item.summary.nid)}</code></td>
      <td>${escapeHtml(item.station_id)}</td>
      <td>
        <button class="approve" data-case="${escapeHtml(item.case_id)}">Approve</button>
        <button class="deny" data-case="${escapeHtml(item.case_id)}">Deny</button>
      </td>
    </tr>`;
}

async function renderQueue(): Promise<void> {
  const body = el('queue-body');
  const note = el('queue-note');
  try {
    const items = await api.pendingVerifications();
    body.innerHTML = items.map(queueRow).join('');
    note.textContent = items.length === 0 ? 'No pending verifications.' : '';
  } catch (err) {
    note.textContent = String(err);
  }
}

async function onQueueClick(event: Event): Promise<void> {
  const target = event.target as HTMLElement;
  const caseId = target.dataset.case;
  if (!caseId || target.tagName !== 'BUTTON') return;
  const note = el('queue-note');
  try {
    const outcome = await api.decide(caseId, target.classList.contains('approve'));
    note.textContent = outcome.message;
  } catch (err) {
    note.textContent =
      err instanceof ApiError && err.status === 409
        ? 'This case was already decided.'
        : String(err);
  }
  await renderQueue();
}

// ---------------------------------------------------------------- outbox view

function noteCard(note: Notification): string {
  return `
    <div class="note" data-kind="${escapeHtml(note.kind)}">
      <div class="note-head">
        <span class="to">${escapeHtml(note.to_email)}</span>
        <span class="when">${escapeHtml(note.created_at)}</span>
      </div>
      <div class="subject">${escapeHtml(note.subject)}</div>
      <pre class="body">${escapeHtml(note.body)}</pre>
    </div>`;
}

async function renderOutbox(): Promise<void> {
  const box = el('outbox-groups');
  try {
    const groups = groupOutbox(await api.outbox());
    box.innerHTML = groups
      .map(
        (g) => `
          <section class="outbox-group" data-kind="${escapeHtml(g.kind)}">
            <h3>${escapeHtml(g.kind)} <span class="count">(${g.notifications.length})</span></h3>
            ${g.notifications.map(noteCard).join('')}
          </section>`,
      )
      .join('');
    if (groups.length === 0) box.innerHTML = '<p>The outbox is empty.</p>';
  } catch (err) {
    box.innerHTML = `<p>${escapeHtml(String(err))}</p>`;
  }
}

// -------------------------------------------------------------------- wiring

function escapeHtml(text: string): string {
  return text
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;');
}

function resetForm(): void {
  const blank = emptyForm();
  el<HTMLSelectElement>('f-side').value = blank.side;
  for (const [id, value] of [
    ['f-subject', blank.subject_name],
    ['f-name', blank.uploader.name],
    ['f-nid', blank.uploader.nid],
    ['f-phone', blank.uploader.phone],
    ['f-email', blank.uploader.email],
    ['f-address', blank.uploader.address],
    ['f-station', blank.uploader.police_station_id],
  ] as const) {
    el<HTMLInputElement>(id).value = value;
  }
  photoFileName = '';
  photoBase64 = '';
  el('f-photo-name').textContent = '';
  el('submit-result').hidden = true;
}

export function boot(): void {
  el('nav-submit').addEventListener('click', () => show('submit'));
  el('nav-queue').addEventListener('click', () => show('queue'));
  el('nav-outbox').addEventListener('click', () => show('outbox'));
  el('submit-form').addEventListener('submit', (e) => void onSubmit(e));
  el('f-reset').addEventListener('click', resetForm);
  el<HTMLInputElement>('f-photo').addEventListener('change', (e) =>
    void onPhotoChosen(e.target as HTMLInputElement),
  );
  el('queue-refresh').addEventListener('click', () => void renderQueue());
  el('view-queue').addEventListener('click', (e) => void onQueueClick(e));
  el('outbox-refresh').addEventListener('click', () => void renderOutbox());
  show('submit');
}

if (typeof document !== 'undefined' && document.getElementById('submit-form')) {
  boot();
}
