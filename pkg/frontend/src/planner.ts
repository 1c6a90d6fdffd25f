// Session state and the recalculation flow. Everything here is pure or
// promise-based so it can be exercised without a DOM; the UI never computes
// a radiobiological number itself, it only relays what the service returned.

import type {
  BedResult,
  CourseDto,
  EngineWarning,
  Envelope,
  EquivalentResult,
  NtcpResult,
  RiskResult,
  ServiceClient,
  TissueInfo,
} from './types.js';
import { FieldError, PlanRow, emptyPlan, isPlanActive, validateSession } from './validate.js';

export interface Demographics {
  patient: string;
  pathology: string;
  operator: string;
  notes: string;
}

export interface TissueResults {
  tissue: string;
  equivalent: EquivalentResult;
  bed: BedResult;
  ntcp: NtcpResult | null;
  risk: RiskResult | null;
}

export interface SessionState {
  demographics: Demographics;
  oar: string;
  target: string;
  referenceDose: string;
  plans: PlanRow[];
  errors: FieldError[];
  serviceError: string | null;
  results: TissueResults[] | null;
  cancelled: boolean; // every plan zeroed: calculation intentionally skipped
  seq: number;
  appliedSeq: number;
  inFlight: boolean;
}

export function newSession(): SessionState {
  return {
    demographics: { patient: '', pathology: '', operator: '', notes: '' },
    oar: '',
    target: '',
    referenceDose: '2',
    plans: [emptyPlan(), emptyPlan(), emptyPlan()],
    errors: [],
    serviceError: null,
    results: null,
    cancelled: false,
    seq: 0,
    appliedSeq: 0,
    inFlight: false,
  };
}

export interface CourseMapping {
  courses: CourseDto[];
  planIndexes: number[]; // editor index feeding each course, for inline errors
}

export function activeCourses(plans: PlanRow[]): CourseMapping {
  const courses: CourseDto[] = [];
  const planIndexes: number[] = [];
  plans.forEach((row, index) => {
    if (!isPlanActive(row)) return;
    const m = Number(row.mPerDay);
    courses.push({
      n: Number(row.n),
      d: Number(row.d),
      m_per_day: m,
      delta_t: m > 1 ? Number(row.deltaT) : null,
      ja: Number(row.ja || '0'),
      gap_after: Number(row.gap || '0'),
    });
    planIndexes.push(index);
  });
  return { courses, planIndexes };
}

export function selectedTissues(state: SessionState): string[] {
  return [state.oar, state.target].filter((name) => name !== '');
}

export function canCalculate(state: SessionState): boolean {
  return (
    state.errors.length === 0 &&
    selectedTissues(state).length > 0 &&
    activeCourses(state.plans).courses.length > 0
  );
}

function inlineErrorFromService(error: { message: string; field_path?: string },
                                planIndexes: number[]): FieldError | null {
  // "courses.<i>.<field>" points back at one course editor.
  const match = error.field_path?.match(/^courses\.(\d+)\.(\w+)$/);
  if (!match) return null;
  const course = Number(match[1]);
  if (course >= planIndexes.length) return null;
  return { plan: planIndexes[course], field: match[2], message: error.message };
}

async function fetchTissueResults(client: ServiceClient, tissue: TissueInfo,
                                  courses: CourseDto[], dRef: number): Promise<TissueResults> {
  const body = { tissue: tissue.name, courses, config: { d_ref: dRef } };
  const equivalent = await client.post<EquivalentResult>('/equivalent', body);
  const bed = await client.post<BedResult>('/bed', { tissue: tissue.name, courses });
  if (equivalent.error) throw equivalent.error;
  if (bed.error) throw bed.error;

  let ntcp: NtcpResult | null = null;
  if (tissue.has_ntcp) {
    const reply = await client.post<NtcpResult>('/ntcp', body);
    if (reply.error) throw reply.error;
    ntcp = reply.result ?? null;
  }
  let risk: RiskResult | null = null;
  if (tissue.has_cancer) {
    const reply = await client.post<RiskResult>('/risk', body);
    if (reply.error) throw reply.error;
    risk = reply.result ?? null;
  }
  return {
    tissue: tissue.name,
    equivalent: equivalent.result as EquivalentResult,
    bed: bed.result as BedResult,
    ntcp,
    risk,
  };
}

/**
 * Validate the session and, when clean, refresh every readout from the
 * service. Responses overtaken by a newer request are discarded by
 * sequence number; demographics never leave the page.
 */
export async function recalculate(state: SessionState, client: ServiceClient,
                                  tissueList: TissueInfo[]): Promise<void> {
  state.errors = validateSession(state.plans, state.referenceDose);
  state.serviceError = null;
  if (state.errors.length > 0) return;

  const tissues = selectedTissues(state)
    .map((name) => tissueList.find((t) => t.name === name))
    .filter((t): t is TissueInfo => t !== undefined);
  if (tissues.length === 0) return;

  const { courses, planIndexes } = activeCourses(state.plans);
  if (courses.length === 0) {
    // A null fraction count or dose cancels the calculation; not an error.
    state.results = null;
    state.cancelled = true;
    return;
  }
  state.cancelled = false;

  const seq = ++state.seq;
  state.inFlight = true;
  try {
    const results: TissueResults[] = [];
    for (const tissue of tissues) {
      results.push(await fetchTissueResults(client, tissue, courses, Number(state.referenceDose)));
    }
    if (seq !== state.seq) return; // stale response, a newer request is out
    state.results = results;
    state.appliedSeq = seq;
  } catch (error) {
    if (seq !== state.seq) return;
    const apiError = error as { message?: string; field_path?: string };
    const inline = inlineErrorFromService(
      { message: apiError.message ?? String(error), field_path: apiError.field_path },
      planIndexes,
    );
    if (inline) {
      state.errors = [...state.errors, inline];
    } else {
      state.serviceError = apiError.message ?? String(error);
    }
  } finally {
    if (seq === state.seq) state.inFlight = false;
  }
}

// ---------------------------------------------------------------------------
// Rendering. Numbers pass through String() untouched so what is shown is
// exactly what the service sent.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function displayNumber(value: number): string {
  return String(value);
}

function warningItems(warnings: EngineWarning[]): string {
  return warnings
    .map((w) => `<li class="warning" data-code="${escapeHtml(w.code)}">` +
      `[${escapeHtml(w.code)}] ${escapeHtml(w.message)}</li>`)
    .join('');
}

function tissueSection(r: TissueResults): string {
  const rows: string[] = [];
  rows.push(
    `<div class="readout" data-field="eqd">equivalent dose at ` +
    `${displayNumber(r.equivalent.d_ref)} Gy/fraction: ` +
    `<strong>${displayNumber(r.equivalent.eqd)}</strong> Gy</div>`,
  );
  rows.push(
    `<div class="readout" data-field="bed">BED ${displayNumber(r.bed.bed.total_bed)} Gy ` +
    `(geometric ${displayNumber(r.bed.bed.geometric_bed)}, ` +
    `repair surcharge ${displayNumber(r.bed.bed.repair_surcharge)}, ` +
    `deficit ${displayNumber(r.bed.bed.deficit)})${r.bed.bed.clamped ? ' (clamped)' : ''}</div>`,
  );
  rows.push(
    `<div class="readout" data-field="time">overall time ` +
    `${displayNumber(r.equivalent.timeline.overall_time)} days</div>`,
  );
  if (r.ntcp) {
    rows.push(`<div class="readout" data-field="ntcp">NTCP ${displayNumber(r.ntcp.ntcp)}</div>`);
  }
  if (r.risk) {
    rows.push(
      `<div class="readout" data-field="risk">induced-cancer incidence ` +
      `${displayNumber(r.risk.k_incidence)}</div>`,
    );
  }
  const warnings = [
    ...r.equivalent.warnings,
    ...r.bed.warnings,
    ...(r.ntcp?.warnings ?? []),
    ...(r.risk?.warnings ?? []),
  ];
  const seen = new Set<string>();
  const unique = warnings.filter((w) => {
    const key = `${w.code}:${w.message}`;
    if (seen.has(key)) return false;
    seen.add(key);
    return true;
  });
  return (
    `<section class="tissue-result" data-tissue="${escapeHtml(r.tissue)}">` +
    `<h3>${escapeHtml(r.tissue)}</h3>${rows.join('')}` +
    (unique.length ? `<ul class="warnings">${warningItems(unique)}</ul>` : '') +
    `</section>`
  );
}

export function renderResults(state: SessionState): string {
  const badge = state.inFlight ? '<span class="badge stale">stale: recalculating</span>' : '';
  if (state.serviceError) {
    return `${badge}<p class="service-error">${escapeHtml(state.serviceError)}</p>`;
  }
  if (state.cancelled) {
    return `${badge}<p class="cancelled">calculation cancelled: no plan has fractions and dose</p>`;
  }
  if (!state.results) {
    return `${badge}<p class="empty">no results yet</p>`;
  }
  return badge + state.results.map(tissueSection).join('');
}
