// Client-side mirrors of the engine's course rules. The engine re-checks
// everything; these exist only for inline feedback before a request is sent.

export interface PlanRow {
  n: string;
  d: string;
  mPerDay: string;
  deltaT: string;
  ja: string;
  gap: string;
}

export interface FieldError {
  plan: number; // 0-based editor index; -1 for the reference zone
  field: string;
  message: string;
}

export const MIN_INTERVAL_HOURS = 6;
export const MAX_INTERRUPTION_DAYS = 20;

export function emptyPlan(): PlanRow {
  return { n: '0', d: '0', mPerDay: '1', deltaT: '6', ja: '0', gap: '0' };
}

function num(value: string): number | null {
  const trimmed = value.trim();
  if (trimmed === '') return null;
  const parsed = Number(trimmed);
  return Number.isFinite(parsed) ? parsed : null;
}

// A plan with zero fractions or zero dose is simply excluded from the
// calculation; blank counts as zero.
export function isPlanActive(row: PlanRow): boolean {
  const n = num(row.n) ?? 0;
  const d = num(row.d) ?? 0;
  return n > 0 && d > 0;
}

export function validatePlan(row: PlanRow, index: number): FieldError[] {
  const errors: FieldError[] = [];
  const push = (field: string, message: string) => errors.push({ plan: index, field, message });

  const n = num(row.n);
  const d = num(row.d);
  const m = num(row.mPerDay);
  const deltaT = num(row.deltaT);
  const ja = num(row.ja);
  const gap = num(row.gap);

  if (n === null || n < 0 || !Number.isInteger(n)) push('n', 'fractions: whole number, 0 to skip this plan');
  if (d === null || d < 0) push('d', 'dose per fraction: number >= 0, 0 to skip this plan');

  if (!isPlanActive(row)) return errors;

  if (m === null || ![1, 2, 3].includes(m)) push('mPerDay', 'fractions per day must be 1, 2 or 3');
  if (m !== null && m > 1) {
    if (deltaT === null || deltaT < MIN_INTERVAL_HOURS) {
      push('deltaT', `interval must be at least ${MIN_INTERVAL_HOURS} h between daily fractions`);
    }
  }
  if (ja === null || ja < 0 || !Number.isInteger(ja)) {
    push('ja', 'days off: whole number >= 0');
  } else if (ja > MAX_INTERRUPTION_DAYS) {
    push('ja', `beyond ${MAX_INTERRUPTION_DAYS} days off the model is no longer valid`);
  }
  if (gap === null || gap < 0 || !Number.isInteger(gap)) push('gap', 'gap: whole number of days >= 0');

  return errors;
}

export function validateReferenceDose(value: string): FieldError[] {
  const d = num(value);
  if (d === null || d <= 0) {
    return [{ plan: -1, field: 'reference', message: 'reference dose per fraction must be > 0' }];
  }
  return [];
}

export function validateSession(plans: PlanRow[], referenceDose: string): FieldError[] {
  const errors = plans.flatMap((row, i) => validatePlan(row, i));
  return errors.concat(validateReferenceDose(referenceDose));
}
