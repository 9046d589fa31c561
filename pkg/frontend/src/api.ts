/**
 * Typed client for the registry service's five endpoints.
 *
 * The console performs no business logic: every displayed state, including
 * all user-facing message strings, comes from these responses.
 */

export type Side = 'MISSING' | 'FINDING';

export interface Uploader {
  name: string;
  nid: string;
  phone: string;
  email: string;
  address: string;
  police_station_id: string;
}

export interface SubmissionBody {
  side: Side;
  uploader: Uploader;
  subject_name: string;
  photo: { format: string; payload_base64: string };
}

export interface Contact {
  name: string;
  phone: string;
  email: string;
}

export interface Outcome {
  entry_id: string;
  disposition: string;
  message: string;
  match: { query_entry_id: string; matched_entry_id: string; distance: number } | null;
  other_side_contact: Contact | null;
}

export interface EntryView {
  entry_id: string;
  side: Side;
  directory: string;
  subject_name: string;
  status: string;
  matched_entry_id: string | null;
  created_at: string;
  updated_at: string;
  other_side_contact: Contact | null;
}

export interface QueueItem {
  case_id: string;
  entry_id: string;
  station_id: string;
  state: string;
  opened_at: string;
  summary: { side: Side; subject_name: string; uploader_name: string; nid: string };
}

export interface Notification {
  id: string;
  kind: string;
  to_email: string;
  subject: string;
  body: string;
  related_entry_ids: string[];
  created_at: string;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const data = await resp.json();
    // 422 carries a full rejection Outcome, not a transport error
    if (!resp.ok && resp.status !== 422) {
      throw new ApiError(resp.status, data.error ?? `HTTP ${resp.status}`);
    }
    return data as T;
  }

  submitEntry(body: SubmissionBody): Promise<Outcome> {
    return this.request<Outcome>('POST', '/api/entries', body);
  }

  getEntry(entryId: string): Promise<EntryView> {
    return this.request<EntryView>('GET', `/api/entries/${entryId}`);
  }

  pendingVerifications(): Promise<QueueItem[]> {
    return this.request<QueueItem[]>('GET', '/api/verifications?state=PENDING');
  }

  decide(caseId: string, approve: boolean): Promise<Outcome> {
    return this.request<Outcome>('POST', `/api/verifications/${caseId}/decision`, { approve });
  }

  outbox(kind?: string): Promise<Notification[]> {
    const query = kind ? `?kind=${encodeURIComponent(kind)}` : '';
    return this.request<Notification[]>('GET', `/api/outbox${query}`);
  }
}
