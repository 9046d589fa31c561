/**
 * Live-server walkthrough of the family-reports-first flow, driven the way a
 * person would use the console: fill the submit form twice, approve both
 * items from the police queue, then read the contact card and the outbox.
 *
 * Gated behind RUN_INTEGRATION=1 because it spawns the Python service.
 */
import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { emptyForm, groupOutbox, outcomePanel, toSubmissionBody, validateForm } from '../src/state.js';
import type { FormState } from '../src/state.js';

const RUN = process.env.RUN_INTEGRATION === '1';
const PORT = 8765 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | undefined;
let dataDir = '';
const api = new ApiClient(BASE);

function syntheticPhotoBase64(identity: string, variant: string): string {
  const payload = JSON.stringify({
    identity_label: identity,
    noise_seed: 7,
    variant,
  });
  return Buffer.from(payload).toString('base64');
}

function fillForm(
  side: FormState['side'],
  subject: string,
  uploader: FormState['uploader'],
  variant: string,
): FormState {
  const form = emptyForm(side);
  form.subject_name = subject;
  form.uploader = uploader;
  form.photoFileName = `${subject}.faceimg.json`;
  form.photoBase64 = syntheticPhotoBase64('console-case1', variant);
  return form;
}

const FAMILY = {
  name: 'Rahim Uddin',
  nid: '111111',
  phone: '+880-1711-000111',
  email: 'rahim.uddin@example.org',
  address: 'House 12, Dhanmondi, Dhaka',
  police_station_id: 'PS-DHK-01',
};

const FINDER = {
  name: 'Karima Begum',
  nid: '222222',
  phone: '+880-1811-000222',
  email: 'karima.begum@example.org',
  address: 'Agrabad, Chattogram',
  police_station_id: 'PS-CTG-02',
};

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/health`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error('service did not become healthy in time');
}

describe.runIf(RUN)('console walkthrough against a live service', () => {
  beforeAll(async () => {
    dataDir = mkdtempSync(join(tmpdir(), 'reunite-console-'));
    server = spawn('python3', ['-m', 'reunite.cli', 'serve'], {
      env: {
        ...process.env,
        REUNITE_DATA_DIR: dataDir,
        REUNITE_PORT: String(PORT),
        REUNITE_AUTO_APPROVE: 'false',
      },
      stdio: 'inherit',
    });
    await waitForHealth();
  }, 40_000);

  afterAll(() => {
    server?.kill();
    if (dataDir) rmSync(dataDir, { recursive: true, force: true });
  });

  it('completes the missing-then-found flow end to end', async () => {
    // The family fills and submits the report form.
    const familyForm = fillForm('MISSING', 'Arif Uddin', FAMILY, 'family-photo');
    expect(validateForm(familyForm)).toEqual([]);
    const first = await api.submitEntry(toSubmissionBody(familyForm));
    expect(outcomePanel(first).tone).toBe('pending');

    // A police officer opens the queue and approves the single item.
    let queue = await api.pendingVerifications();
    expect(queue).toHaveLength(1);
    expect(queue[0].summary).toMatchObject({
      side: 'MISSING',
      subject_name: 'Arif Uddin',
      nid: '111111',
    });
    const firstDecision = await api.decide(queue[0].case_id, true);
    expect(firstDecision.disposition).toBe('STORED_NO_MATCH');

    // A second approval click on the same row surfaces the conflict.
    await expect(api.decide(queue[0].case_id, true)).rejects.toMatchObject({
      status: 409,
    });
    await expect(api.decide(queue[0].case_id, true)).rejects.toBeInstanceOf(ApiError);

    // The finder submits the same person from the other side.
    const finderForm = fillForm('FINDING', 'Unknown boy', FINDER, 'finder-photo');
    const second = await api.submitEntry(toSubmissionBody(finderForm));
    expect(outcomePanel(second).tone).toBe('pending');

    queue = await api.pendingVerifications();
    expect(queue).toHaveLength(1);
    expect(queue[0].entry_id).toBe(second.entry_id);
    const secondDecision = await api.decide(queue[0].case_id, true);

    // The approval resolves to a match; the contact card shows the family.
    expect(secondDecision.disposition).toBe('MATCHED');
    const panel = outcomePanel(secondDecision);
    expect(panel.tone).toBe('success');
    expect(panel.contact).toEqual({
      name: FAMILY.name,
      phone: FAMILY.phone,
      email: FAMILY.email,
    });

    // The matched state is visible on both entries afterwards.
    const familyEntry = await api.getEntry(first.entry_id);
    expect(familyEntry.status).toBe('MATCHED');
    expect(familyEntry.matched_entry_id).toBe(second.entry_id);

    // The outbox view shows one match notification to the family and one
    // to their police station.
    const groups = groupOutbox(await api.outbox());
    const byKind = new Map(groups.map((g) => [g.kind, g.notifications]));
    const toParty = byKind.get('MATCH_TO_PARTY') ?? [];
    const toPolice = byKind.get('MATCH_TO_POLICE') ?? [];
    expect(toParty).toHaveLength(1);
    expect(toPolice).toHaveLength(1);
    expect(toParty[0].to_email).toBe(FAMILY.email);
    expect(toParty[0].related_entry_ids).toContain(second.entry_id);
  }, 60_000);
});

describe.runIf(!RUN)('integration gate', () => {
  it.skip('set RUN_INTEGRATION=1 to run the live walkthrough', () => {});
});
