import { describe, expect, it } from 'vitest';

import {
  emptyPlan,
  isPlanActive,
  validatePlan,
  validateReferenceDose,
  validateSession,
} from '../src/validate.js';

const activePlan = (patch: Partial<ReturnType<typeof emptyPlan>> = {}) => ({
  ...emptyPlan(),
  n: '10',
  d: '3',
  ...patch,
});

describe('plan activity', () => {
  it('zero fractions or zero dose deactivates a plan', () => {
    expect(isPlanActive(emptyPlan())).toBe(false);
    expect(isPlanActive(activePlan({ n: '0' }))).toBe(false);
    expect(isPlanActive(activePlan({ d: '0' }))).toBe(false);
    expect(isPlanActive(activePlan())).toBe(true);
  });

  it('blank fields count as zero', () => {
    expect(isPlanActive(activePlan({ n: '' }))).toBe(false);
  });
});

describe('course rule mirrors', () => {
  it('a clean plan has no errors', () => {
    expect(validatePlan(activePlan(), 0)).toEqual([]);
  });

  it('an inactive plan is not validated further', () => {
    expect(validatePlan(activePlan({ n: '0', ja: '99' }), 0)).toEqual([]);
  });

  it('rejects more than 20 days off', () => {
    const errors = validatePlan(activePlan({ ja: '21' }), 1);
    expect(errors).toHaveLength(1);
    expect(errors[0].plan).toBe(1);
    expect(errors[0].field).toBe('ja');
    expect(errors[0].message).toContain('20');
  });

  it('accepts exactly 20 days off', () => {
    expect(validatePlan(activePlan({ ja: '20' }), 0)).toEqual([]);
  });

  it('requires a 6 hour interval for multiple daily fractions', () => {
    const errors = validatePlan(activePlan({ mPerDay: '2', deltaT: '5.9' }), 0);
    expect(errors.some((e) => e.field === 'deltaT' && e.message.includes('6'))).toBe(true);
    expect(validatePlan(activePlan({ mPerDay: '2', deltaT: '6' }), 0)).toEqual([]);
  });

  it('limits fractions per day to 1..3', () => {
    const errors = validatePlan(activePlan({ mPerDay: '4' }), 0);
    expect(errors.some((e) => e.field === 'mPerDay')).toBe(true);
  });

  it('wants whole numbers for counts and days', () => {
    expect(validatePlan(activePlan({ n: '2.5' }), 0).some((e) => e.field === 'n')).toBe(true);
    expect(validatePlan(activePlan({ ja: '1.5' }), 0).some((e) => e.field === 'ja')).toBe(true);
    expect(validatePlan(activePlan({ gap: '-1' }), 0).some((e) => e.field === 'gap')).toBe(true);
  });

  it('flags unparsable input', () => {
    expect(validatePlan(activePlan({ d: 'abc' }), 0).some((e) => e.field === 'd')).toBe(true);
  });
});

describe('reference zone', () => {
  it('needs a positive reference dose', () => {
    expect(validateReferenceDose('2')).toEqual([]);
    expect(validateReferenceDose('0')).toHaveLength(1);
    expect(validateReferenceDose('')).toHaveLength(1);
  });

  it('session validation combines plans and reference', () => {
    const errors = validateSession([activePlan({ ja: '21' }), emptyPlan()], '0');
    expect(errors).toHaveLength(2);
  });
});
