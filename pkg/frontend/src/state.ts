/**
 * View-model logic for the three console views, kept free of DOM access so
 * the scripted tests can drive exactly what a human would.
 */
import type { Notification, Outcome, SubmissionBody, Side, Uploader } from './api.js';

export interface FormState {
  side: Side;
  subject_name: string;
  uploader: Uploader;
  photoFileName: string;
  photoBase64: string;
}

export function emptyForm(side: Side = 'MISSING'): FormState {
  return {
    side,
    subject_name: '',
    uploader: { name: '', nid: '', phone: '', email: '', address: '', police_station_id: '' },
    photoFileName: '',
    photoBase64: '',
  };
}

/** Mirrors the server-side uploader invariants so obvious mistakes never
 * leave the browser; the server remains the authority. */
export function validateForm(form: FormState): string[] {
  const errors: string[] = [];
  if (!form.subject_name.trim()) errors.push('subject name is required');
  if (!form.uploader.name.trim()) errors.push('your name is required');
  if (!form.uploader.nid.trim()) errors.push('NID is required');
  if (!form.uploader.phone.trim()) errors.push('phone is required');
  if (!form.uploader.email.includes('@')) errors.push('email must contain @');
  if (!form.uploader.police_station_id.trim()) errors.push('police station is required');
  if (!form.photoBase64) errors.push('a photo is required');
  return errors;
}

export function photoFormatFor(fileName: string): string {
  const lower = fileName.toLowerCase();
  if (lower.endsWith('.faceimg.json')) return 'SYNTHETIC';
  if (lower.endsWith('.png')) return 'PNG';
  if (lower.endsWith('.jpg') || lower.endsWith('.jpeg')) return 'JPEG';
  return 'PNG';
}

export function toSubmissionBody(form: FormState): SubmissionBody {
  return {
    side: form.side,
    uploader: { ...form.uploader },
    subject_name: form.subject_name,
    photo: {
      format: photoFormatFor(form.photoFileName),
      payload_base64: form.photoBase64,
    },
  };
}

export interface OutcomePanel {
  tone: 'success' | 'pending' | 'rejected';
  message: string;
  contact: { name: string; phone: string; email: string } | null;
  entryId: string;
}

/** The disposition message is rendered verbatim from the API. */
export function outcomePanel(outcome: Outcome): OutcomePanel {
  const tone =
    outcome.disposition === 'MATCHED' || outcome.disposition === 'STORED_NO_MATCH'
      ? 'success'
      : outcome.disposition === 'PENDING_VERIFICATION'
        ? 'pending'
        : 'rejected';
  return {
    tone,
    message: outcome.message,
    contact: outcome.other_side_contact,
    entryId: outcome.entry_id,
  };
}

export interface OutboxGroup {
  kind: string;
  notifications: Notification[];
}

/** Group by kind, newest first within each group. */
export function groupOutbox(notifications: Notification[]): OutboxGroup[] {
  const byKind = new Map<string, Notification[]>();
  for (const note of notifications) {
    const bucket = byKind.get(note.kind) ?? [];
    bucket.push(note);
    byKind.set(note.kind, bucket);
  }
  return [...byKind.entries()].map(([kind, notes]) => ({
    kind,
    notifications: [...notes].reverse(),
  }));
}
